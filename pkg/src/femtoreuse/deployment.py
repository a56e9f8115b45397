"""Macrocell cluster geometry, femtocell placement and the neighbor graph."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from . import kernels

DEFAULT_TIER_BANDS = (2, 3, 2, 3, 2, 3)


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinates ({self.x}, {self.y})")

    def distance(self, other: "Point") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class MacrocellSite:
    id: int
    center: Point
    radius: float
    band_index: int

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError(f"macrocell {self.id}: radius must be positive")
        if self.band_index not in (1, 2, 3):
            raise ValueError(f"macrocell {self.id}: band_index must be 1, 2 or 3")


@dataclass(frozen=True)
class FapSite:
    id: int
    position: Point
    cell_radius: float = 10.0
    inner_radius: float = 5.0
    host_macrocell: int = 0

    def __post_init__(self):
        if not 0 < self.inner_radius <= self.cell_radius:
            raise ValueError(
                f"FAP {self.id}: need 0 < inner_radius <= cell_radius, "
                f"got {self.inner_radius} / {self.cell_radius}"
            )


@dataclass(frozen=True)
class UserEquipment:
    position: Point
    serving_fap: int


@dataclass(frozen=True)
class Deployment:
    macrocells: tuple[MacrocellSite, ...]
    faps: tuple[FapSite, ...]
    reference_ue: UserEquipment
    neighbor_edges: Mapping[int, frozenset[int]]
    neighbor_threshold: float = 60.0
    walls_between_femtocells: int = 1
    _by_id: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_by_id", {f.id: f for f in self.faps})

    def fap(self, fap_id: int) -> FapSite:
        try:
            return self._by_id[fap_id]
        except KeyError:
            raise KeyError(f"unknown FAP id {fap_id}") from None

    @property
    def reference_fap(self) -> FapSite:
        return self.fap(self.reference_ue.serving_fap)

    def neighbors(self, fap_id: int) -> list[int]:
        return sorted(self.neighbor_edges.get(fap_id, ()))

    def walls(self, a, b) -> int:
        return wall_count(a, b, self.walls_between_femtocells)

    def with_radii(self, radii: Mapping[int, float], inner_fraction: float) -> "Deployment":
        faps = tuple(
            replace(f, cell_radius=radii[f.id], inner_radius=inner_fraction * radii[f.id])
            if f.id in radii else f
            for f in self.faps
        )
        return replace(self, faps=faps)

    def without(self, fap_id: int) -> "Deployment":
        self.fap(fap_id)
        faps = tuple(f for f in self.faps if f.id != fap_id)
        edges = {k: frozenset(v - {fap_id}) for k, v in self.neighbor_edges.items() if k != fap_id}
        return replace(self, faps=faps, neighbor_edges=edges)


def build_cluster(macro_radius: float, tier_bands: Sequence[int] = DEFAULT_TIER_BANDS) -> list[MacrocellSite]:
    """Reference macrocell at the origin plus the six first-tier sites.

    First-tier centers sit at ``sqrt(3) * macro_radius`` (hexagonal grid);
    ``tier_bands`` colors them going counter-clockwise from 30 degrees.
    """
    if macro_radius <= 0:
        raise ValueError(f"macro_radius must be positive, got {macro_radius}")
    if len(tier_bands) != 6:
        raise ValueError("tier_bands needs one band index per first-tier site")
    sites = [MacrocellSite(0, Point(0.0, 0.0), macro_radius, 1)]
    spacing = math.sqrt(3.0) * macro_radius
    for k, band in enumerate(tier_bands):
        angle = math.radians(30 + 60 * k)
        center = Point(spacing * math.cos(angle), spacing * math.sin(angle))
        sites.append(MacrocellSite(k + 1, center, macro_radius, int(band)))
    return sites


def uniform_disk(n: int, radius: float, rng: np.random.Generator) -> np.ndarray:
    """``n`` points uniform over a disk centred at the origin, shape ``(n, 2)``."""
    r = radius * np.sqrt(rng.random(n))
    theta = 2.0 * np.pi * rng.random(n)
    return np.column_stack((r * np.cos(theta), r * np.sin(theta)))


def place_femtocells(
    n: int,
    macro_radius: float,
    rng: np.random.Generator,
    *,
    reference_distance: float = 200.0,
    cell_radius: float = 10.0,
    inner_fraction: float = 0.5,
) -> list[FapSite]:
    """Reference FAP (id 0) on the x axis plus ``n`` FAPs uniform in the macrocell disk."""
    if n < 0:
        raise ValueError(f"femtocell count must be nonnegative, got {n}")
    if not 0 <= reference_distance <= macro_radius:
        raise ValueError("reference FAP must lie inside the macrocell")
    inner = inner_fraction * cell_radius
    sites = [FapSite(0, Point(float(reference_distance), 0.0), cell_radius, inner, 0)]
    for k, (x, y) in enumerate(uniform_disk(n, macro_radius, rng), start=1):
        sites.append(FapSite(k, Point(float(x), float(y)), cell_radius, inner, 0))
    return sites


def sample_neighbor_count(mean: float, rng: np.random.Generator) -> int:
    if mean < 0:
        raise ValueError(f"Poisson mean must be nonnegative, got {mean}")
    return int(rng.poisson(mean))


def neighbor_graph(faps: Sequence[FapSite], threshold: float) -> dict[int, frozenset[int]]:
    """Symmetric adjacency; FAPs are neighbors iff their distance is <= ``threshold``."""
    if threshold <= 0:
        raise ValueError(f"neighbor threshold must be positive, got {threshold}")
    ids = np.array([f.id for f in faps], dtype=np.int64)
    xy = np.array([(f.position.x, f.position.y) for f in faps], dtype=np.float64).reshape(-1, 2)
    adj: dict[int, set[int]] = {int(i): set() for i in ids}
    ii, jj = kernels.pairs_within(xy[:, 0].copy(), xy[:, 1].copy(), float(threshold))
    for a, b in zip(ids[ii].tolist(), ids[jj].tolist()):
        adj[a].add(b)
        adj[b].add(a)
    return {k: frozenset(v) for k, v in adj.items()}


def wall_count(a, b, walls_between_femtocells: int = 1) -> int:
    """Walls on the link between ``a`` and ``b`` (FAPs or a UE and a FAP).

    Distinct FAPs are separated by ``walls_between_femtocells``; a UE and its
    own serving FAP share a room.
    """
    if isinstance(a, UserEquipment) and isinstance(b, UserEquipment):
        raise TypeError("wall_count is defined for FAP-FAP or UE-FAP links")
    if isinstance(b, UserEquipment):
        a, b = b, a
    if isinstance(a, UserEquipment):
        return 0 if b.id == a.serving_fap else walls_between_femtocells
    if a.id == b.id:
        raise ValueError(f"wall_count of FAP {a.id} with itself is undefined")
    return walls_between_femtocells


def build_deployment(
    n: int,
    rng: np.random.Generator,
    *,
    macro_radius: float = 1000.0,
    reference_distance: float = 200.0,
    cell_radius: float = 10.0,
    inner_fraction: float = 0.5,
    ue_distance: float = 5.0,
    neighbor_threshold: float = 60.0,
    walls_between_femtocells: int = 1,
    tier_bands: Sequence[int] = DEFAULT_TIER_BANDS,
) -> Deployment:
    macrocells = build_cluster(macro_radius, tier_bands)
    faps = place_femtocells(
        n, macro_radius, rng,
        reference_distance=reference_distance,
        cell_radius=cell_radius,
        inner_fraction=inner_fraction,
    )
    ref = faps[0].position
    # UE sits radially outward from the reference FAP.
    ue = UserEquipment(Point(ref.x + ue_distance, ref.y), serving_fap=0)
    return Deployment(
        macrocells=tuple(macrocells),
        faps=tuple(faps),
        reference_ue=ue,
        neighbor_edges=neighbor_graph(faps, neighbor_threshold),
        neighbor_threshold=neighbor_threshold,
        walls_between_femtocells=walls_between_femtocells,
    )
