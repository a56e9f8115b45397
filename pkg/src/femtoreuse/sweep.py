"""Density sweeps: placement + allocation + fading Monte Carlo per (scheme, count).

Every trial redraws the femtocell placement. Only FAPs within
``window_factor * neighbor_threshold`` of the reference FAP are materialized;
FAPs farther out neither interfere with the reference UE nor, beyond a couple
of neighbor hops, influence the bands its neighbors pick.

All schemes of one count share the same trial streams (common random
numbers), so scheme differences are not masked by sampling noise. Trial ``t``
of count ``c`` depends only on ``(seed, c, t)``.

Throughput columns: ``mean_throughput_bps`` is the reference UE's Shannon
rate on its serving band. ``aggregate_throughput_bps`` is ``count`` times the
mean rate of one femtocell; with ``aggregate_metric = cell`` a dynamic-reuse
femtocell contributes its center-band and edge-band rates (one user in each
area), with ``aggregate_metric = ue`` only the reference UE's rate counts.
"""

from __future__ import annotations

import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import analysis
from .channel import ChannelParams, free_space_gain
from .config import ScenarioConfig
from .deployment import (
    Deployment, FapSite, Point, UserEquipment, build_cluster, neighbor_graph,
    sample_neighbor_count, uniform_disk,
)
from .schemes import ALL_SCHEMES, SchemeKind, allocate, serving_band
from .spectrum import Band, BandSet, intersect

CSV_HEADER = (
    "scheme,femtocell_count,outage_probability,ci_half_width,"
    "mean_throughput_bps,aggregate_throughput_bps,same_band_neighbor_fraction,seed"
)


@dataclass(frozen=True)
class SweepRow:
    scheme: SchemeKind
    femtocell_count: int
    outage_probability: float
    ci_half_width: float
    mean_throughput: float
    aggregate_throughput: float
    same_band_neighbor_fraction: float
    seed: int
    trials: int = 0
    conditional_outage: float = 0.0
    throughput_half_width: float = 0.0
    aggregate_half_width: float = 0.0

    def csv_line(self) -> str:
        return ",".join([
            self.scheme.value,
            str(self.femtocell_count),
            _fmt(self.outage_probability),
            _fmt(self.ci_half_width),
            _fmt(self.mean_throughput),
            _fmt(self.aggregate_throughput),
            _fmt(self.same_band_neighbor_fraction),
            str(self.seed),
        ])


@dataclass
class SweepResult:
    rows: list[SweepRow]
    config: ScenarioConfig | None = None

    def row(self, scheme: SchemeKind, count: int) -> SweepRow:
        for r in self.rows:
            if r.scheme is scheme and r.femtocell_count == count:
                return r
        raise KeyError(f"no row for ({scheme.value}, {count})")


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def channel_params(cfg: ScenarioConfig) -> ChannelParams:
    p0 = free_space_gain(cfg.carrier)
    return ChannelParams(
        carrier=cfg.carrier, eta1=cfg.eta1, eta2=cfg.eta2, eta3=cfg.eta3,
        shadow_sigma_femto=cfg.shadow_sigma_femto, shadow_sigma_macro=cfg.shadow_sigma_macro,
        wall_loss=cfg.wall_loss, bs_height=cfg.bs_height, fap_height=cfg.fap_height,
        p0_femto=p0, p0_macro=p0 * 10.0 ** (cfg.macro_antenna_gain / 10.0),
    )


def total_band(cfg: ScenarioConfig) -> Band:
    half = Fraction(cfg.total_bandwidth).limit_denominator(10**6) / 2
    carrier = Fraction(cfg.carrier).limit_denominator(10**6)
    return Band.from_mhz(carrier - half, carrier + half)


def cell_seed(base_seed: int, count: int) -> int:
    return int(np.random.SeedSequence([base_seed, count]).generate_state(1, np.uint64)[0] >> 1)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(trial,))))


def local_deployment(cfg: ScenarioConfig, n: int, rng: np.random.Generator, macrocells) -> Deployment:
    """Reference FAP, its UE, and the FAPs inside the simulation window."""
    xy = uniform_disk(n, cfg.macro_radius, rng)
    ref = Point(float(cfg.reference_fap_distance), 0.0)
    window = cfg.window_factor * cfg.neighbor_threshold
    d2 = (xy[:, 0] - ref.x) ** 2 + (xy[:, 1] - ref.y) ** 2
    inner = cfg.inner_radius_fraction * cfg.femto_radius
    faps = [FapSite(0, ref, cfg.femto_radius, inner, 0)]
    for idx in np.flatnonzero(d2 <= window * window):
        faps.append(FapSite(int(idx) + 1, Point(float(xy[idx, 0]), float(xy[idx, 1])),
                            cfg.femto_radius, inner, 0))
    ue = UserEquipment(Point(ref.x + cfg.ue_distance, ref.y), serving_fap=0)
    return Deployment(
        macrocells=macrocells,
        faps=tuple(faps),
        reference_ue=ue,
        neighbor_edges=neighbor_graph(faps, cfg.neighbor_threshold),
        neighbor_threshold=cfg.neighbor_threshold,
        walls_between_femtocells=cfg.walls_between_femtocells,
    )


def _band_indicators(plan, budget, band: BandSet):
    x = np.array([bool(intersect(plan.assignment(i).full_band, band)) for i in budget.femto_ids],
                 dtype=np.float64)
    y = np.array([bool(intersect(plan.macro_bands[j], band)) for j in budget.macro_ids],
                 dtype=np.float64)
    return x, y


def _femtocell_bands(plan, fap_id: int) -> list[BandSet]:
    a = plan.assignment(fap_id)
    if plan.scheme is SchemeKind.DYNAMIC:
        return [a.center_band, a.edge_band]
    return [a.full_band]


@dataclass
class _Accumulator:
    hits: int = 0
    conditional: float = 0.0
    active_neighbors: float = 0.0
    neighbors: int = 0
    ue_rates: list = field(default_factory=list)
    cell_rates: list = field(default_factory=list)


def _sir(s_bar, z0, interference):
    return analysis.NO_OUTAGE if interference == 0 else s_bar * z0 / interference


def run_cell(cfg: ScenarioConfig, count: int) -> list[SweepRow]:
    """All schemes of ``cfg`` at one femtocell count."""
    params = channel_params(cfg)
    total = total_band(cfg)
    macrocells = tuple(build_cluster(cfg.macro_radius, cfg.first_tier_bands))
    gamma = analysis.linear_from_db(cfg.gamma_db)
    seed = cell_seed(cfg.seed, count)
    engine_kw = dict(shrink_factor=cfg.resize_factor, min_radius=cfg.min_radius,
                     inner_fraction=cfg.inner_radius_fraction, base_radius=cfg.femto_radius)
    acc = {kind: _Accumulator() for kind in cfg.schemes}

    for t in range(cfg.trials):
        rng = trial_rng(seed, t)
        n = count if cfg.count_mode == "fixed" else sample_neighbor_count(count, rng)
        dep = local_deployment(cfg, n, rng, macrocells)
        budget = analysis.link_budget(dep, params, fap_tx_power=cfg.fap_tx_power_max,
                                      macro_tx_power=cfg.macro_tx_power)
        real = analysis.draw_realizations(budget, rng)
        z0 = float(rng.exponential())
        femto_p = budget.femto_mean * real.femto_xi * real.femto_z
        macro_p = budget.macro_mean * real.macro_xi * real.macro_z

        for kind in cfg.schemes:
            plan = allocate(kind, total, dep,
                            dedicated_fraction=cfg.dedicated_femto_fraction,
                            subband_fraction=cfg.subband_fraction,
                            static_policy=cfg.static_policy, **engine_kw)
            a = acc[kind]
            served = serving_band(plan, 0, budget.ue_distance)
            cell_rate = 0.0
            for band in _femtocell_bands(plan, 0):
                x, y = _band_indicators(plan, budget, band)
                interference = float(femto_p @ x + macro_p @ y)
                s = _sir(budget.s_bar, z0, interference)
                rate = band.width * 1e3 * float(analysis.spectral_efficiency(s, cfg.se_cap))
                cell_rate += rate
                if band == served:
                    a.hits += s < gamma
                    a.conditional += float(analysis.conditional_outage_array(
                        budget.s_bar, interference, gamma))
                    a.active_neighbors += float(x.sum())
                    a.neighbors += len(x)
                    a.ue_rates.append(rate)
            a.cell_rates.append(cell_rate)

    rows = []
    for kind in cfg.schemes:
        a = acc[kind]
        n = cfg.trials
        p = a.hits / n
        ue_rates = np.asarray(a.ue_rates)
        cell_rates = np.asarray(a.cell_rates if cfg.aggregate_metric == "cell" else a.ue_rates)
        rows.append(SweepRow(
            scheme=kind,
            femtocell_count=count,
            outage_probability=p,
            ci_half_width=analysis.wald_half_width(p, n),
            mean_throughput=float(ue_rates.mean()),
            aggregate_throughput=count * float(cell_rates.mean()),
            same_band_neighbor_fraction=a.active_neighbors / a.neighbors if a.neighbors else 0.0,
            seed=seed,
            trials=n,
            conditional_outage=a.conditional / n,
            throughput_half_width=_half_width(ue_rates),
            aggregate_half_width=count * _half_width(cell_rates),
        ))
    return rows


def _half_width(samples: np.ndarray) -> float:
    if samples.size < 2:
        return 0.0
    return analysis.Z95 * float(samples.std(ddof=1)) / math.sqrt(samples.size)


def _scheme_order(kind: SchemeKind) -> int:
    return ALL_SCHEMES.index(kind)


def run_sweep(cfg: ScenarioConfig, workers: int | None = None) -> SweepResult:
    """Every ``(scheme, count)`` cell of ``cfg``; rows sorted by scheme then count."""
    workers = cfg.workers if workers is None else workers
    counts = list(dict.fromkeys(cfg.counts))
    rows: list[SweepRow] = []
    if workers > 1 and len(counts) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for cell_rows in pool.map(_run_cell_star, [(cfg, c) for c in counts]):
                rows.extend(cell_rows)
    else:
        for c in counts:
            try:
                rows.extend(run_cell(cfg, c))
            except Exception as exc:
                raise RuntimeError(f"sweep cell femtocell_count={c} failed: {exc}") from exc
    rows.sort(key=lambda r: (_scheme_order(r.scheme), r.femtocell_count))
    return SweepResult(rows, cfg)


def _run_cell_star(args):
    cfg, count = args
    try:
        return run_cell(cfg, count)
    except Exception as exc:
        raise RuntimeError(f"sweep cell femtocell_count={count} failed: {exc}") from exc


def format_csv(result: SweepResult) -> str:
    if not result.rows:
        raise ValueError("empty sweep result")
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for row in result.rows:
        buf.write(row.csv_line() + "\n")
    return buf.getvalue()


def emit_csv(result: SweepResult, path) -> None:
    text = format_csv(result)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def recommend(dense: bool, available) -> SchemeKind | None:
    """Dense deployments favour dynamic reuse; otherwise static reuse, which needs no SON."""
    preferred = SchemeKind.DYNAMIC if dense else SchemeKind.STATIC
    return preferred if preferred in available else None


def emit_summary(result: SweepResult, dense_threshold: int | None = None) -> str:
    if not result.rows:
        raise ValueError("empty sweep result")
    if dense_threshold is None:
        dense_threshold = result.config.dense_threshold if result.config else 1000
    out = []
    schemes = sorted({r.scheme for r in result.rows}, key=_scheme_order)
    for dense in (False, True):
        rows = [r for r in result.rows if (r.femtocell_count > dense_threshold) == dense]
        if not rows:
            continue
        label = f"dense (> {dense_threshold} femtocells)" if dense else f"non-dense (<= {dense_threshold} femtocells)"
        counts = sorted({r.femtocell_count for r in rows})
        out.append(f"{label}: counts {', '.join(map(str, counts))}")
        for c in counts:
            cell = [r for r in rows if r.femtocell_count == c]
            best_out = min(cell, key=lambda r: r.outage_probability)
            best_thr = max(cell, key=lambda r: r.aggregate_throughput)
            out.append(f"  {c:>6}: lowest outage {best_out.scheme.value} "
                       f"({_fmt(best_out.outage_probability)}), highest aggregate throughput "
                       f"{best_thr.scheme.value} ({_fmt(best_thr.aggregate_throughput)} bit/s)")
        rec = recommend(dense, schemes)
        out.append(f"  recommended scheme: {rec.value if rec else 'n/a (scheme not simulated)'}")
    return "\n".join(out) + "\n"
