"""Frequency allocation plans for the five schemes and the SON dynamic-reuse engine."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _pykernels, kernels
from .deployment import Deployment
from .spectrum import Band, BandSet, intersect, lower_slice, partition_equal, unite


class SchemeKind(enum.Enum):
    SHARED = "shared"
    DEDICATED = "dedicated"
    SUBBAND = "subband"
    STATIC = "static"
    DYNAMIC = "dynamic"

    @classmethod
    def parse(cls, name: str) -> "SchemeKind":
        try:
            return cls(name.strip().lower())
        except ValueError:
            valid = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown scheme {name!r} (expected one of {valid})") from None


ALL_SCHEMES = tuple(SchemeKind)


class EdgeLabel(enum.IntEnum):
    """Edge sub-band of a dynamic-reuse femtocell inside its host's edge third.

    ``FULL`` is the whole third, ``B4``/``B5`` its lower/upper halves and
    ``B1``..``B3`` its thirds.
    """

    FULL = 0
    B1 = 1
    B2 = 2
    B3 = 3
    B4 = 4
    B5 = 5


THIRDS = (EdgeLabel.B1, EdgeLabel.B2, EdgeLabel.B3)
HALVES = (EdgeLabel.B4, EdgeLabel.B5)

SUCCESSOR = {
    EdgeLabel.B5: EdgeLabel.B4,
    EdgeLabel.B4: EdgeLabel.B5,
    EdgeLabel.B1: EdgeLabel.B2,
    EdgeLabel.B2: EdgeLabel.B3,
    EdgeLabel.B3: EdgeLabel.B1,
}


def labels_overlap(a: EdgeLabel, b: EdgeLabel) -> bool:
    return _pykernels.overlap(int(a), int(b))


def choose_edge(foes: Sequence[EdgeLabel]) -> tuple[EdgeLabel | None, dict[int, EdgeLabel]]:
    """Edge band for a newly installed femtocell given its interferers' edge bands.

    ``foes`` are the interferers' current labels in ascending FAP id order.
    Returns ``(label, demotions)`` where ``demotions`` maps an index into
    ``foes`` to the label that interferer must move to. ``label`` is ``None``
    when no conflict-free edge band exists and the cells must shrink.

    No interferer: the whole edge third. One: the successor of its edge band
    (a full-third holder is split into halves). Two holding both halves: the
    new cell takes ``B3`` and the two step down to ``B1``/``B2``. Two or
    three holding thirds: an unused third. Combinations outside those rules
    take the first band, at the interferers' granularity, that overlaps none
    of them, demoting interferers to sub-bands of their current band if
    needed. More than three interferers always requires a resize.
    """
    label, demotions = _pykernels.choose_edge([int(f) for f in foes])
    if label < 0:
        return None, {}
    return EdgeLabel(label), {i: EdgeLabel(m) for i, m in demotions}


@dataclass(frozen=True)
class FapAssignment:
    center_band: BandSet
    edge_band: BandSet
    full_band: BandSet
    edge_label: EdgeLabel | None = None

    @classmethod
    def single(cls, band) -> "FapAssignment":
        band = BandSet([band]) if isinstance(band, Band) else band
        return cls(center_band=band, edge_band=BandSet(), full_band=band)


@dataclass
class AllocationPlan:
    scheme: SchemeKind
    total: Band
    macro_bands: dict[int, BandSet]
    femto_total: dict[int, BandSet]
    fap_assignments: dict[int, FapAssignment]
    fap_hosts: dict[int, int]
    cell_radii: dict[int, float] = field(default_factory=dict)
    inner_radii: dict[int, float] = field(default_factory=dict)
    unresolved: frozenset[int] = frozenset()

    def assignment(self, fap_id: int) -> FapAssignment:
        try:
            return self.fap_assignments[fap_id]
        except KeyError:
            raise KeyError(f"FAP {fap_id} is not in the plan") from None


def reuse_thirds(total: Band) -> dict[int, BandSet]:
    """``{1: B_m1, 2: B_m2, 3: B_m3}``, equal thirds of the total band."""
    return {k + 1: BandSet([b]) for k, b in enumerate(partition_equal(total, 3))}


def _rotate(band_index: int, steps: int) -> int:
    return (band_index - 1 + steps) % 3 + 1


def _hosts(deployment: Deployment) -> dict[int, int]:
    return {f.id: f.host_macrocell for f in deployment.faps}


def _uniform_plan(kind, total, deployment, macro_band, femto_band) -> AllocationPlan:
    macro_band, femto_band = BandSet([macro_band]), BandSet([femto_band])
    shared = FapAssignment.single(femto_band)
    return AllocationPlan(
        scheme=kind,
        total=total,
        macro_bands={m.id: macro_band for m in deployment.macrocells},
        femto_total={m.id: femto_band for m in deployment.macrocells},
        fap_assignments={f.id: shared for f in deployment.faps},
        fap_hosts=_hosts(deployment),
    )


def allocate_shared(total: Band, deployment: Deployment) -> AllocationPlan:
    if total.is_empty:
        raise ValueError("total band is empty")
    return _uniform_plan(SchemeKind.SHARED, total, deployment, total, total)


def allocate_dedicated(total: Band, femto_fraction, deployment: Deployment) -> AllocationPlan:
    femto, macro = lower_slice(total, femto_fraction)
    return _uniform_plan(SchemeKind.DEDICATED, total, deployment, macro, femto)


def allocate_subband(total: Band, sub_fraction, deployment: Deployment) -> AllocationPlan:
    femto, _ = lower_slice(total, sub_fraction)
    return _uniform_plan(SchemeKind.SUBBAND, total, deployment, total, femto)


def _reuse_macro_bands(total: Band, deployment: Deployment):
    thirds = reuse_thirds(total)
    macro_bands, femto_total = {}, {}
    for m in deployment.macrocells:
        macro_bands[m.id] = thirds[m.band_index]
        femto_total[m.id] = unite(thirds[_rotate(m.band_index, 1)], thirds[_rotate(m.band_index, 2)])
    return thirds, macro_bands, femto_total


def allocate_static_reuse(
    total: Band,
    deployment: Deployment,
    neighbor_graph: Mapping[int, Iterable[int]] | None = None,
    *,
    policy: str = "blind",
) -> AllocationPlan:
    """Each FAP takes one of the two thirds its host macrocell does not use.

    ``policy="blind"`` needs no knowledge of neighbors: FAPs are visited in id
    order and take whichever of the two thirds is less used in their host
    macrocell so far. ``policy="greedy"`` first prefers the third less used
    among already-assigned neighbors and falls back to the same balance rule.
    """
    if policy not in ("blind", "greedy"):
        raise ValueError(f"unknown static-reuse policy {policy!r}")
    if neighbor_graph is None:
        neighbor_graph = deployment.neighbor_edges
    thirds, macro_bands, femto_total = _reuse_macro_bands(total, deployment)
    band_of_macro = {m.id: m.band_index for m in deployment.macrocells}
    hosts = _hosts(deployment)

    chosen: dict[int, int] = {}
    usage: dict[int, dict[int, int]] = {}
    for fap_id in sorted(hosts):
        host = hosts[fap_id]
        home = band_of_macro[host]
        options = (_rotate(home, 1), _rotate(home, 2))
        counts = usage.setdefault(host, {o: 0 for o in options})
        if policy == "greedy":
            local = {o: 0 for o in options}
            for nb in neighbor_graph.get(fap_id, ()):
                if nb in chosen and hosts.get(nb) == host:
                    local[chosen[nb]] += 1
            pick = min(options, key=lambda o: (local[o], counts[o]))
        else:
            pick = min(options, key=lambda o: counts[o])
        chosen[fap_id] = pick
        counts[pick] += 1

    per_third = {b: FapAssignment.single(thirds[b]) for b in thirds}
    return AllocationPlan(
        scheme=SchemeKind.STATIC,
        total=total,
        macro_bands=macro_bands,
        femto_total=femto_total,
        fap_assignments={f: per_third[b] for f, b in chosen.items()},
        fap_hosts=hosts,
    )


class ResizeRequired(Exception):
    """No conflict-free edge band exists; the listed FAPs must shrink."""

    def __init__(self, conflicted: Sequence[int]):
        self.conflicted = tuple(conflicted)
        super().__init__(f"resize required for FAPs {list(self.conflicted)}")


class UnresolvableConflict(Exception):
    """Cells are at the minimum radius and an edge-band conflict remains."""

    def __init__(self, fap_id: int, conflicted: Sequence[int]):
        self.fap_id = fap_id
        self.conflicted = tuple(conflicted)
        super().__init__(f"FAP {fap_id}: conflict with {list(self.conflicted)} persists at minimum radius")


class DynamicReuseEngine:
    """Event-driven SON engine for dynamic frequency reuse.

    Center bands are fixed per host macrocell; edge bands live inside the
    host's remaining third and are chosen per FAP from the edge bands of its
    interferers. Two FAPs interfere when they are within
    ``neighbor_threshold * (r_a + r_b) / (2 * base_radius)`` of each other, so
    at the nominal radius this is the neighbor rule and shrinking a cell
    shrinks its interference reach.
    """

    def __init__(
        self,
        total: Band,
        deployment: Deployment,
        *,
        base_radius: float | None = None,
        shrink_factor: float = 0.8,
        min_radius: float = 4.0,
        inner_fraction: float = 0.5,
        settle_passes: int = 4,
        strict: bool = False,
    ):
        if not 0 < shrink_factor < 1:
            raise ValueError("shrink_factor must lie in (0, 1)")
        if min_radius <= 0:
            raise ValueError("min_radius must be positive")
        self.total = total
        self.deployment = deployment
        self.thirds, self.macro_bands, self.femto_total = _reuse_macro_bands(total, deployment)
        self.threshold = deployment.neighbor_threshold
        faps = deployment.faps
        self.base_radius = base_radius if base_radius is not None else (
            max(f.cell_radius for f in faps) if faps else 10.0)
        self.shrink_factor = shrink_factor
        self.min_radius = min_radius
        self.inner_fraction = inner_fraction
        self.settle_passes = settle_passes
        self.strict = strict

        self.hosts = _hosts(deployment)
        band_of_macro = {m.id: m.band_index for m in deployment.macrocells}
        self._center: dict[int, BandSet] = {}
        self._edge_parts: dict[int, dict[EdgeLabel, BandSet]] = {}
        for host in set(self.hosts.values()):
            home = band_of_macro[host]
            self._center[host] = self.thirds[_rotate(home, 1)]
            edge_third = self.thirds[_rotate(home, 2)][0]
            self._edge_parts[host] = _edge_bands(edge_third)

        self.radius = {f.id: f.cell_radius for f in faps}
        pos = {f.id: f.position for f in faps}
        self._near: dict[int, list[tuple[int, float]]] = {}
        for f in faps:
            near = []
            for nb in deployment.neighbor_edges.get(f.id, ()):
                if nb in pos and self.hosts[nb] == self.hosts[f.id]:
                    near.append((nb, pos[f.id].distance(pos[nb])))
            near.sort()
            self._near[f.id] = near
        self.labels: dict[int, EdgeLabel] = {}
        self.unresolved: set[int] = set()
        self._assignments: dict[tuple[int, EdgeLabel], FapAssignment] = {}

    # -- geometry ---------------------------------------------------------

    def reach(self, a: int, b: int) -> float:
        return self.threshold * (self.radius[a] + self.radius[b]) / (2.0 * self.base_radius)

    def interferers(self, fap_id: int) -> list[int]:
        """Installed FAPs that currently interfere with ``fap_id``, ascending id."""
        return [nb for nb, d in self._near[fap_id]
                if nb in self.labels and d <= self.reach(fap_id, nb)]

    def conflicts(self, fap_id: int) -> list[int]:
        own = self.labels[fap_id]
        return [nb for nb in self.interferers(fap_id) if labels_overlap(own, self.labels[nb])]

    # -- events -----------------------------------------------------------

    def install(self, fap_id: int) -> FapAssignment:
        """Select center and edge bands for ``fap_id``; may re-band its interferers.

        Raises :class:`ResizeRequired` when no conflict-free edge band exists.
        """
        if fap_id not in self.hosts:
            raise KeyError(f"unknown FAP id {fap_id}")
        self.labels.pop(fap_id, None)
        foes = self.interferers(fap_id)
        label, demotions = choose_edge([self.labels[f] for f in foes])
        if label is None:
            raise ResizeRequired([fap_id, *foes])
        for idx, new in demotions.items():
            self.labels[foes[idx]] = new
        self.labels[fap_id] = label
        self.unresolved.discard(fap_id)
        return self.assignment(fap_id)

    def place(self, fap_id: int) -> FapAssignment:
        """Install, shrinking cells as needed.

        At the size floor a strict engine raises :class:`UnresolvableConflict`;
        otherwise the FAP takes the least-conflicting third and is reported in
        ``unresolved``.
        """
        while True:
            try:
                return self.install(fap_id)
            except ResizeRequired as exc:
                if not self.resize(exc.conflicted):
                    if self.strict:
                        raise UnresolvableConflict(fap_id, exc.conflicted[1:]) from None
                    return self._best_effort(fap_id)

    def resize(self, conflicted: Iterable[int]) -> bool:
        """Shrink each conflicted cell one step; ``False`` once all are at the floor."""
        changed = False
        for fap_id in conflicted:
            r = self.radius[fap_id]
            new = max(self.min_radius, r * self.shrink_factor)
            if new < r:
                self.radius[fap_id] = new
                changed = True
        return changed

    def _best_effort(self, fap_id: int) -> FapAssignment:
        self.labels.pop(fap_id, None)
        foes = [self.labels[f] for f in self.interferers(fap_id)]
        pick = min(THIRDS, key=lambda t: sum(labels_overlap(t, f) for f in foes))
        self.labels[fap_id] = pick
        self.unresolved.add(fap_id)
        return self.assignment(fap_id)

    def remove(self, fap_id: int) -> None:
        """Drop ``fap_id``; its former interferers re-configure as if newly installed."""
        if fap_id not in self.labels:
            raise KeyError(f"FAP {fap_id} is not installed")
        affected = self.interferers(fap_id)
        del self.labels[fap_id]
        self.unresolved.discard(fap_id)
        for nb, _ in self._near.pop(fap_id):
            self._near[nb] = [(j, d) for j, d in self._near[nb] if j != fap_id]
        del self.hosts[fap_id]
        del self.radius[fap_id]
        for nb in affected:
            self.labels.pop(nb, None)
        for nb in affected:
            self.place(nb)
        self.settle()

    def settle(self) -> None:
        """Re-install FAPs whose edge band still collides with an interferer."""
        for _ in range(self.settle_passes):
            changed = False
            for fap_id in sorted(self.labels):
                if fap_id in self.unresolved or not self.conflicts(fap_id):
                    continue
                self.place(fap_id)
                changed = True
            if not changed:
                return

    def run_events(self, order: Iterable[int] | None = None) -> "DynamicReuseEngine":
        """Install FAPs one event at a time (ascending id by default), then settle."""
        for fap_id in (sorted(self.hosts) if order is None else order):
            self.place(fap_id)
        self.settle()
        return self

    def run(self, order: Iterable[int] | None = None) -> "DynamicReuseEngine":
        """Install every FAP and settle; ascending-id installs use the batch kernel."""
        if order is not None or self.labels or self.strict:
            return self.run_events(order)
        ids = sorted(self.hosts)
        index = {f: k for k, f in enumerate(ids)}
        ptr = np.zeros(len(ids) + 1, dtype=np.int64)
        nbr, dist = [], []
        for k, f in enumerate(ids):
            near = self._near[f]
            ptr[k + 1] = ptr[k] + len(near)
            nbr.extend(index[j] for j, _ in near)
            dist.extend(d for _, d in near)
        radius = np.array([self.radius[f] for f in ids], dtype=np.float64)
        labels, unresolved = kernels.run_dynamic(
            ptr, np.asarray(nbr, dtype=np.int64), np.asarray(dist, dtype=np.float64),
            radius, float(self.threshold), float(self.base_radius),
            float(self.shrink_factor), float(self.min_radius), int(self.settle_passes))
        for k, f in enumerate(ids):
            self.labels[f] = EdgeLabel(int(labels[k]))
            self.radius[f] = float(radius[k])
            if unresolved[k]:
                self.unresolved.add(f)
        return self

    # -- results ----------------------------------------------------------

    def assignment(self, fap_id: int) -> FapAssignment:
        key = (self.hosts[fap_id], self.labels[fap_id])
        cached = self._assignments.get(key)
        if cached is None:
            center = self._center[key[0]]
            edge = self._edge_parts[key[0]][key[1]]
            cached = self._assignments[key] = FapAssignment(center, edge, unite(center, edge), key[1])
        return cached

    def plan(self) -> AllocationPlan:
        return AllocationPlan(
            scheme=SchemeKind.DYNAMIC,
            total=self.total,
            macro_bands=dict(self.macro_bands),
            femto_total=dict(self.femto_total),
            fap_assignments={f: self.assignment(f) for f in sorted(self.labels)},
            fap_hosts={f: self.hosts[f] for f in sorted(self.labels)},
            cell_radii={f: self.radius[f] for f in sorted(self.labels)},
            inner_radii={f: self.inner_fraction * self.radius[f] for f in sorted(self.labels)},
            unresolved=frozenset(self.unresolved),
        )


def _edge_bands(edge_third: Band) -> dict[EdgeLabel, BandSet]:
    b1, b2, b3 = partition_equal(edge_third, 3)
    b4, b5 = partition_equal(edge_third, 2)
    return {
        EdgeLabel.FULL: BandSet([edge_third]),
        EdgeLabel.B1: BandSet([b1]),
        EdgeLabel.B2: BandSet([b2]),
        EdgeLabel.B3: BandSet([b3]),
        EdgeLabel.B4: BandSet([b4]),
        EdgeLabel.B5: BandSet([b5]),
    }


def allocate_dynamic_reuse(total: Band, deployment: Deployment, **engine_kw) -> AllocationPlan:
    return DynamicReuseEngine(total, deployment, **engine_kw).run().plan()


def allocate(kind: SchemeKind, total: Band, deployment: Deployment, *,
             dedicated_fraction=Fraction(1, 3), subband_fraction=Fraction(1, 3),
             static_policy: str = "blind", **engine_kw) -> AllocationPlan:
    if kind is SchemeKind.SHARED:
        return allocate_shared(total, deployment)
    if kind is SchemeKind.DEDICATED:
        return allocate_dedicated(total, dedicated_fraction, deployment)
    if kind is SchemeKind.SUBBAND:
        return allocate_subband(total, subband_fraction, deployment)
    if kind is SchemeKind.STATIC:
        return allocate_static_reuse(total, deployment, policy=static_policy)
    return allocate_dynamic_reuse(total, deployment, **engine_kw)


# -- indicators -------------------------------------------------------------

def serving_band(plan: AllocationPlan, fap_id: int, ue_distance: float | None = None) -> BandSet:
    """Band carrying a UE of ``fap_id``; dynamic cells use the center band strictly inside the inner radius."""
    a = plan.assignment(fap_id)
    if plan.scheme is not SchemeKind.DYNAMIC:
        return a.full_band
    inner = plan.inner_radii.get(fap_id)
    if ue_distance is not None and inner is not None and ue_distance < inner:
        return a.center_band
    return a.edge_band


def indicator_x(plan: AllocationPlan, fap_i: int, reference_fap: int, ue_distance: float | None = None) -> int:
    victim = serving_band(plan, reference_fap, ue_distance)
    return int(bool(intersect(plan.assignment(fap_i).full_band, victim)))


def indicator_y(plan: AllocationPlan, macrocell_j: int, reference_fap: int, ue_distance: float | None = None) -> int:
    victim = serving_band(plan, reference_fap, ue_distance)
    return int(bool(intersect(plan.macro_bands[macrocell_j], victim)))


def same_band_fraction(plan: AllocationPlan, neighbor_graph: Mapping[int, Iterable[int]]) -> float:
    """Fraction of neighbor pairs whose cell-edge users share spectrum.

    Static and other single-band schemes compare full bands; dynamic plans
    compare edge bands (center bands sit in a separate third).
    """
    pairs = conflicts = 0
    for a, nbs in neighbor_graph.items():
        for b in nbs:
            if b <= a or a not in plan.fap_assignments or b not in plan.fap_assignments:
                continue
            pairs += 1
            if plan.scheme is SchemeKind.DYNAMIC:
                ba, bb = plan.assignment(a).edge_band, plan.assignment(b).edge_band
            else:
                ba, bb = plan.assignment(a).full_band, plan.assignment(b).full_band
            conflicts += bool(intersect(ba, bb))
    return conflicts / pairs if pairs else 0.0


def dump_plan(plan: AllocationPlan) -> str:
    """One record per FAP: ``id host center edge`` with bands as kHz intervals."""
    lines = []
    for fap_id in sorted(plan.fap_assignments):
        a = plan.fap_assignments[fap_id]
        lines.append(f"{fap_id} {plan.fap_hosts[fap_id]} {a.center_band} {a.edge_band}")
    return "\n".join(lines) + ("\n" if lines else "")
