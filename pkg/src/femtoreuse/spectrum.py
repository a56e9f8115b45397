"""Exact band algebra on integer-kHz frequency intervals.

Every band endpoint is an ``int`` number of kilohertz, so unions,
intersections and widths are exact and the disjointness/coverage identities
of the allocation schemes can be checked with ``==``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence


def khz(mhz: float | Fraction | int) -> int:
    """Convert MHz to the nearest integer kHz."""
    return int(round(Fraction(mhz) * 1000))


@dataclass(frozen=True, order=True)
class Band:
    """Half-open interval ``[lo, hi)`` in kHz. ``Band(0, 0)`` is the empty band."""

    lo: int
    hi: int

    def __post_init__(self):
        if not isinstance(self.lo, int) or not isinstance(self.hi, int):
            raise TypeError(f"band endpoints must be integer kHz, got {self.lo!r}, {self.hi!r}")
        if self.hi < self.lo:
            raise ValueError(f"band runs backwards: [{self.lo}, {self.hi}]")

    @classmethod
    def from_mhz(cls, lo: float, hi: float) -> "Band":
        return cls(khz(lo), khz(hi))

    @property
    def width(self) -> int:
        return self.hi - self.lo

    @property
    def is_empty(self) -> bool:
        return self.hi == self.lo

    def __str__(self) -> str:
        return f"{self.lo}-{self.hi}"


EMPTY = Band(0, 0)


class BandSet(Sequence[Band]):
    """Immutable, normalized set of disjoint, non-touching bands sorted by ``lo``."""

    __slots__ = ("_bands",)

    def __init__(self, bands: Iterable[Band] = ()):
        self._bands = _normalize(bands)

    @classmethod
    def of(cls, *pairs: tuple[int, int]) -> "BandSet":
        return cls(Band(lo, hi) for lo, hi in pairs)

    def __getitem__(self, i):
        return self._bands[i]

    def __len__(self) -> int:
        return len(self._bands)

    def __iter__(self) -> Iterator[Band]:
        return iter(self._bands)

    def __eq__(self, other) -> bool:
        if isinstance(other, Band):
            other = BandSet([other])
        if not isinstance(other, BandSet):
            return NotImplemented
        return self._bands == other._bands

    def __hash__(self) -> int:
        return hash(self._bands)

    def __repr__(self) -> str:
        inner = ", ".join(f"[{b.lo}, {b.hi}]" for b in self._bands)
        return f"BandSet({inner})"

    def __str__(self) -> str:
        return ",".join(str(b) for b in self._bands) if self._bands else "-"

    def __and__(self, other) -> "BandSet":
        return intersect(self, other)

    def __or__(self, other) -> "BandSet":
        return unite(self, other)

    def __bool__(self) -> bool:
        return bool(self._bands)

    @property
    def width(self) -> int:
        return sum(b.width for b in self._bands)

    def contains_point(self, f: float) -> bool:
        return any(b.lo <= f < b.hi for b in self._bands)

    def issubset(self, other: "BandSet") -> bool:
        return intersect(self, other) == self

    def isdisjoint(self, other: "BandSet") -> bool:
        return not intersect(self, other)

    def hull(self) -> Band:
        if not self._bands:
            return EMPTY
        return Band(self._bands[0].lo, self._bands[-1].hi)


def _normalize(bands: Iterable[Band]) -> tuple[Band, ...]:
    items = sorted(b for b in bands if not b.is_empty)
    merged: list[Band] = []
    for b in items:
        if merged and b.lo <= merged[-1].hi:
            if b.hi > merged[-1].hi:
                merged[-1] = Band(merged[-1].lo, b.hi)
        else:
            merged.append(b)
    return tuple(merged)


def as_bandset(x: Band | BandSet | Iterable[Band]) -> BandSet:
    if isinstance(x, BandSet):
        return x
    if isinstance(x, Band):
        return BandSet([x])
    return BandSet(x)


def intersect(a, b) -> BandSet:
    a, b = as_bandset(a), as_bandset(b)
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        lo = max(a[i].lo, b[j].lo)
        hi = min(a[i].hi, b[j].hi)
        if lo < hi:
            out.append(Band(lo, hi))
        if a[i].hi < b[j].hi:
            i += 1
        else:
            j += 1
    return BandSet(out)


def unite(a, b) -> BandSet:
    a, b = as_bandset(a), as_bandset(b)
    return BandSet([*a, *b])


def subtract(a, b) -> BandSet:
    """Set difference ``a \\ b``."""
    a, b = as_bandset(a), as_bandset(b)
    out = []
    for band in a:
        lo = band.lo
        for cut in b:
            if cut.hi <= lo or cut.lo >= band.hi:
                continue
            if cut.lo > lo:
                out.append(Band(lo, cut.lo))
            lo = max(lo, cut.hi)
        if lo < band.hi:
            out.append(Band(lo, band.hi))
    return BandSet(out)


def width(x) -> int:
    return as_bandset(x).width


def partition_equal(band: Band, n: int) -> list[Band]:
    """Split ``band`` into ``n`` contiguous sub-bands of equal width.

    When the width is not divisible by ``n`` the last sub-band absorbs the
    remainder (at most ``n - 1`` kHz).
    """
    if n < 1:
        raise ValueError(f"cannot partition into {n} sub-bands")
    if band.is_empty:
        raise ValueError("cannot partition an empty band")
    step = band.width // n
    if step == 0:
        raise ValueError(f"band of {band.width} kHz is too narrow for {n} parts")
    edges = [band.lo + k * step for k in range(n)] + [band.hi]
    return [Band(edges[k], edges[k + 1]) for k in range(n)]


def lower_slice(band: Band, fraction: float | Fraction) -> tuple[Band, Band]:
    """Cut ``band`` at ``fraction`` of its width; returns ``(lower, upper)``."""
    frac = Fraction(fraction).limit_denominator(10**6)
    if not 0 < frac < 1:
        raise ValueError(f"fraction must lie in (0, 1), got {fraction}")
    cut = band.lo + int(round(frac * band.width))
    if cut in (band.lo, band.hi):
        raise ValueError(f"fraction {fraction} leaves an empty slice of {band}")
    return Band(band.lo, cut), Band(cut, band.hi)
