"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

Criteria 5, 6 and 8 share the 10^4-trial density sweep, which is run once per
session (sequentially, then again with a worker pool for the determinism
check).
"""

import dataclasses
import time

import numpy as np
import pytest

from femtoreuse import analysis as A
from femtoreuse.channel import ChannelParams
from femtoreuse.config import ScenarioConfig
from femtoreuse.deployment import build_deployment
from femtoreuse.schemes import (
    ALL_SCHEMES, DynamicReuseEngine, EdgeLabel, SchemeKind, allocate, allocate_dynamic_reuse,
    allocate_static_reuse, choose_edge, same_band_fraction,
)
from femtoreuse.spectrum import Band, BandSet, intersect, unite
from femtoreuse.sweep import format_csv, run_sweep
from conftest import make_deployment

SWEEP_COUNTS = (100, 500, 1000, 2000)
SWEEP_TRIALS = 10_000
DENSE = 1000


# -- 1. closed form versus fading-only Monte Carlo ---------------------------------

def test_criterion_1_closed_form_oracle(report):
    rng = np.random.default_rng(20240601)
    gamma = A.SirThreshold(9.0)
    start = time.perf_counter()
    within = 0
    worst = 0.0
    for case in range(100):
        s_bar = 10.0 ** rng.uniform(-12, -3)
        # total interference spread so outage covers roughly 0.001 .. 0.999
        total = s_bar * 10.0 ** rng.uniform(-3.5, 0.0)
        share = rng.uniform()
        b = A.InterferenceBreakdown(s_bar, share * total, (1 - share) * total)
        est = A.outage_z0_monte_carlo(b, gamma, 100_000, np.random.default_rng([20240601, case]))
        err = abs(est.probability - A.outage_conditional(b, gamma))
        worst = max(worst, err)
        within += err <= 0.005
    elapsed = time.perf_counter() - start
    ok = within >= 99 and elapsed < 10.0
    report(1, ok, f"{within}/100 within 0.005 (worst {worst:.4f}), {elapsed:.2f} s")
    assert ok


# -- 2. band-algebra invariants --------------------------------------------------

def _random_setup(rng):
    lo = int(rng.integers(0, 3_000_000))
    total = Band(lo, lo + int(rng.integers(3_000, 100_000)))
    macro_radius = float(rng.uniform(100.0, 1000.0))
    dep = build_deployment(
        int(rng.integers(0, 40)), rng,
        macro_radius=macro_radius,
        reference_distance=min(200.0, macro_radius / 2),
        tier_bands=tuple(int(b) for b in rng.permutation([2, 3, 2, 3, 2, 3])),
    )
    frac = float(rng.uniform(0.05, 0.95))
    return total, dep, frac


def _check_plan(plan, total, dep) -> list[str]:
    bt = BandSet([total])
    errs = []
    kind = plan.scheme
    for m in dep.macrocells:
        mb, fb = plan.macro_bands[m.id], plan.femto_total[m.id]
        if kind is SchemeKind.SHARED:
            if not (mb == bt and fb == bt):
                errs.append("shared bands differ from total")
        elif kind is SchemeKind.SUBBAND:
            if not (mb == bt and intersect(mb, fb) == fb and unite(mb, fb) == bt and fb):
                errs.append("sub-band nesting")
        else:
            if intersect(mb, fb) or unite(mb, fb) != bt:
                errs.append(f"macrocell {m.id} disjointness/coverage")
    if kind in (SchemeKind.STATIC, SchemeKind.DYNAMIC):
        thirds = [plan.macro_bands[m.id] for m in dep.macrocells]
        distinct = {t for t in thirds}
        if len(distinct) != 3 or unite(unite(*list(distinct)[:2]), list(distinct)[2]) != bt:
            errs.append("reuse thirds do not tile the total band")
    for f in dep.faps:
        a = plan.assignment(f.id)
        host_total = plan.femto_total[f.host_macrocell]
        if not unite(a.center_band, a.edge_band).issubset(host_total) or not a.full_band.issubset(host_total):
            errs.append(f"FAP {f.id} outside its femtocell band")
        if kind is SchemeKind.DYNAMIC:
            if intersect(a.center_band, a.edge_band) or not a.edge_band:
                errs.append(f"FAP {f.id} center/edge overlap")
            if unite(a.center_band, a.edge_band) != a.full_band:
                errs.append(f"FAP {f.id} full band")
        else:
            if a.edge_band or a.center_band != a.full_band:
                errs.append(f"FAP {f.id} single-band shape")
        if kind is SchemeKind.STATIC:
            host_band = plan.macro_bands[f.host_macrocell]
            if a.full_band == host_band or len(a.full_band) != 1 or a.full_band.width * 3 < total.width - 2:
                errs.append(f"FAP {f.id} static third")
    return errs


def test_criterion_2_band_invariants(report):
    rng = np.random.default_rng(7)
    failures = {k: 0 for k in ALL_SCHEMES}
    first = None
    for _ in range(1000):
        total, dep, frac = _random_setup(rng)
        for kind in ALL_SCHEMES:
            plan = allocate(kind, total, dep, dedicated_fraction=frac, subband_fraction=frac)
            errs = _check_plan(plan, total, dep)
            if errs:
                failures[kind] += 1
                first = first or (kind.value, errs[0])
    ok = not any(failures.values())
    detail = ", ".join(f"{k.value} {1000 - n}/1000" for k, n in failures.items())
    report(2, ok, detail + ("" if ok else f"; first failure {first}"))
    assert ok


# -- 3. new-FAP procedure branches ---------------------------------------------

F, B1, B2, B3, B4, B5 = (EdgeLabel.FULL, EdgeLabel.B1, EdgeLabel.B2, EdgeLabel.B3,
                         EdgeLabel.B4, EdgeLabel.B5)

BRANCHES = [
    ("0 interferers", [], F, {}),
    ("1 interferer on whole third", [F], B5, {0: B4}),
    ("1 interferer B5 -> B4", [B5], B4, {}),
    ("1 interferer B4 -> B5", [B4], B5, {}),
    ("1 interferer B1 -> B2", [B1], B2, {}),
    ("1 interferer B2 -> B3", [B2], B3, {}),
    ("1 interferer B3 -> B1", [B3], B1, {}),
    ("2 interferers B4,B5 demote", [B4, B5], B3, {0: B1, 1: B2}),
    ("2 interferers B1,B2", [B1, B2], B3, {}),
    ("2 interferers B1,B3", [B1, B3], B2, {}),
    ("2 interferers B2,B3", [B2, B3], B1, {}),
    ("3 interferers unused third", [B1, B3, B3], B2, {}),
    ("3 interferers all thirds -> resize", [B1, B2, B3], None, {}),
    ("4 interferers -> resize", [B1, B2, B3, B1], None, {}),
]


def test_criterion_3_branch_coverage(report, small_total):
    bad = [name for name, foes, label, dem in BRANCHES if choose_edge(foes) != (label, dem)]
    # The same branches driven through the engine by geometry.
    dep = make_deployment([(230.0, 0.0), (215.0, 25.0), (245.0, 25.0)])
    eng = DynamicReuseEngine(small_total, dep)
    seen = []
    for i in range(3):
        eng.install(i)
        seen.append(dict(eng.labels))
    engine_bad = []
    if seen != [{0: F}, {0: B4, 1: B5}, {0: B1, 1: B2, 2: B3}]:
        engine_bad.append("install sequence")
    eng.place(3)
    if 3 in eng.unresolved or eng.conflicts(3) or eng.radius[3] >= 10.0:
        engine_bad.append("resize on fourth interferer")
    ok = not bad and not engine_bad
    report(3, ok, f"{len(BRANCHES) - len(bad)}/{len(BRANCHES)} procedure branches match; "
                  f"engine install/resize {'ok' if not engine_bad else engine_bad}"
                  + (f"; mismatched {bad}" if bad else ""))
    assert ok


# -- 4. indicator fractions at 500 femtocells -------------------------------------

def test_criterion_4_indicator_fractions(report, total):
    start = time.perf_counter()
    static, dynamic = [], []
    for seed in range(20):
        dep = build_deployment(500, np.random.default_rng(seed))
        static.append(same_band_fraction(allocate_static_reuse(total, dep), dep.neighbor_edges))
        dynamic.append(same_band_fraction(allocate_dynamic_reuse(total, dep), dep.neighbor_edges))
    elapsed = time.perf_counter() - start
    s, d = float(np.mean(static)), float(np.mean(dynamic))
    ok = 0.40 <= s <= 0.60 and d <= 0.34 and elapsed < 30.0
    report(4, ok, f"static same-band {s:.3f} (need 0.40-0.60), dynamic conflict {d:.3f} "
                  f"(need <= 0.34), {elapsed:.2f} s")
    assert ok


# -- 5, 6, 8. the density sweep ---------------------------------------------------

@pytest.fixture(scope="module")
def sweep():
    cfg = ScenarioConfig(counts=SWEEP_COUNTS, trials=SWEEP_TRIALS, workers=1)
    start = time.perf_counter()
    result = run_sweep(cfg)
    return result, time.perf_counter() - start


def _gap(a, b, ha, hb):
    return a - b, ha + hb


def test_criterion_5_outage_ordering(report, sweep):
    result, elapsed = sweep
    problems = []
    for c in SWEEP_COUNTS:
        dyn = result.row(SchemeKind.DYNAMIC, c)
        sta = result.row(SchemeKind.STATIC, c)
        sha = result.row(SchemeKind.SHARED, c)
        if not dyn.outage_probability <= sta.outage_probability <= sha.outage_probability:
            problems.append(f"order at {c}")
        if c >= 1000:
            for lo, hi in ((dyn, sta), (sta, sha)):
                gap, hw = _gap(hi.outage_probability, lo.outage_probability,
                               hi.ci_half_width, lo.ci_half_width)
                if not gap > hw:
                    problems.append(f"{lo.scheme.value}/{hi.scheme.value} gap {gap:.4f} <= {hw:.4f} at {c}")
    ok = not problems and elapsed < 300.0
    table = "; ".join(
        f"{c}: " + "/".join(f"{result.row(k, c).outage_probability:.4f}"
                             for k in (SchemeKind.DYNAMIC, SchemeKind.STATIC, SchemeKind.SHARED))
        for c in SWEEP_COUNTS)
    report(5, ok, f"outage dyn/static/shared {table}; sweep {elapsed:.0f} s"
                  + ("" if ok else f"; {problems}"))
    assert ok


def test_criterion_6_throughput_ordering(report, sweep):
    result, _ = sweep
    problems = []

    def beats(a, b, c):
        ra, rb = result.row(a, c), result.row(b, c)
        gap, hw = _gap(ra.aggregate_throughput, rb.aggregate_throughput,
                       ra.aggregate_half_width, rb.aggregate_half_width)
        if not gap > hw:
            problems.append(f"{a.value}>{b.value} at {c}: gap {gap:.3g} vs CI {hw:.3g}")

    for c in SWEEP_COUNTS:
        if c > DENSE:
            beats(SchemeKind.DYNAMIC, SchemeKind.STATIC, c)
        elif c >= 100:
            beats(SchemeKind.STATIC, SchemeKind.DEDICATED, c)
            beats(SchemeKind.DEDICATED, SchemeKind.SHARED, c)
    ok = not problems
    report(6, ok, "aggregate throughput orderings hold" if ok else "; ".join(problems))
    assert ok


def test_criterion_8_determinism(report, sweep):
    result, _ = sweep
    cfg = ScenarioConfig(counts=SWEEP_COUNTS, trials=SWEEP_TRIALS, workers=4)
    concurrent = run_sweep(cfg)
    a, b = format_csv(result), format_csv(concurrent)
    ok = a == b
    report(8, ok, f"sequential vs 4-worker sweep CSVs {'byte-identical' if ok else 'differ'} "
                  f"({len(a)} bytes)")
    assert ok


# -- 7. degenerate exactness and monotonicity ---------------------------------------

def _random_scenario(rng):
    k = int(rng.integers(1, 8))
    ang = rng.uniform(0, 2 * np.pi, k)
    rad = rng.uniform(8.0, 60.0, k)
    positions = [(200.0 + r * np.cos(a), r * np.sin(a)) for r, a in zip(rad, ang)]
    return make_deployment(positions)


def test_criterion_7_degenerate_and_monotone(report, total):
    params = ChannelParams()
    gamma = A.SirThreshold(9.0)
    # zero interference: lone FAP under a dedicated band, and an explicit breakdown
    lone = make_deployment([])
    plan = allocate(SchemeKind.DEDICATED, total, lone)
    zero = [
        A.outage_monte_carlo(lone, plan, params, gamma, 10_000, np.random.default_rng(1)).probability,
        A.outage_conditional(A.InterferenceBreakdown(1e-6, 0.0, 0.0), gamma),
        A.outage_z0_monte_carlo(A.InterferenceBreakdown(1e-6, 0.0, 0.0), gamma, 1000,
                                np.random.default_rng(2)).probability,
    ]
    exact_zero = all(z == 0.0 for z in zero)

    rng = np.random.default_rng(77)
    violations = 0
    for case in range(200):
        dep = _random_scenario(rng)
        kind = ALL_SCHEMES[case % len(ALL_SCHEMES)]
        plan = allocate(kind, total, dep)
        budget = A.link_budget(dep, params)
        x, y = A.indicator_vectors(plan, budget)
        n_f, n_m = len(budget.femto_ids), len(budget.macro_ids)
        pick = int(rng.integers(0, n_f + n_m))
        femto, macro = budget.femto_mean.copy(), budget.macro_mean.copy()
        if pick < n_f:
            femto[pick] *= 2.0
        else:
            macro[pick - n_f] *= 2.0
        louder = dataclasses.replace(budget, femto_mean=femto, macro_mean=macro)
        seed = [77, case]
        base = A.outage_from_budget(budget, x, y, gamma, 2000, np.random.default_rng(seed))
        more = A.outage_from_budget(louder, x, y, gamma, 2000, np.random.default_rng(seed))
        violations += more.probability < base.probability or more.conditional_mean < base.conditional_mean
    ok = exact_zero and violations == 0
    report(7, ok, f"zero-interference outage {zero}; {200 - violations}/200 doublings nondecreasing")
    assert ok
