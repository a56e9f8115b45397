"""SIR, outage probability and Shannon throughput for the reference femto UE.

The victim is the downlink of the reference UE. Its desired power is
``s_bar * Z0`` with ``Z0 ~ Exp(1)``; conditioned on the interferers' fading,
outage has the closed form ``1 - exp(-gamma * (I_f + I_m) / s_bar)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelParams, LinkClass, mean_path_gain, sample_fast_fading, sample_shadowing
from .deployment import Deployment
from .schemes import AllocationPlan, indicator_x, indicator_y, serving_band

Z95 = 1.959963984540054

# SIR of an interference-free sample.
NO_OUTAGE = math.inf


def db_from_linear(x) -> float:
    x = np.asarray(x, dtype=np.float64)
    if np.any(x <= 0):
        raise ValueError(f"cannot take dB of non-positive value {x}")
    out = 10.0 * np.log10(x)
    return float(out) if out.ndim == 0 else out


def linear_from_db(x):
    out = 10.0 ** (np.asarray(x, dtype=np.float64) / 10.0)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class SirThreshold:
    gamma_db: float

    @property
    def gamma_linear(self) -> float:
        return linear_from_db(self.gamma_db)


def _gamma_linear(gamma) -> float:
    return gamma.gamma_linear if isinstance(gamma, SirThreshold) else float(gamma)


@dataclass(frozen=True)
class InterferenceBreakdown:
    s_bar: float
    i_f: float
    i_m: float
    k_active: int = 0
    n_active: int = 0

    def __post_init__(self):
        if min(self.s_bar, self.i_f, self.i_m) < 0:
            raise ValueError("powers must be nonnegative")

    @property
    def total(self) -> float:
        return self.i_f + self.i_m


@dataclass(frozen=True)
class OutageEstimate:
    probability: float
    trials: int
    half_width_95: float
    conditional_mean: float | None = None


@dataclass(frozen=True)
class ThroughputEstimate:
    mean_bps: float
    bandwidth_hz: float
    samples: int
    half_width_95: float = 0.0


def wald_half_width(p: float, n: int) -> float:
    return Z95 * math.sqrt(max(p * (1.0 - p), 0.0) / n) if n else math.inf


# -- geometry of the reference UE ------------------------------------------

@dataclass(frozen=True)
class LinkBudget:
    """Scheme-independent mean powers at the reference UE.

    ``femto_mean[i]`` is the fading-free interference from neighbor
    ``femto_ids[i]``; ``macro_mean[j]`` likewise for ``macro_ids[j]``.
    """

    s_bar: float
    ue_distance: float
    femto_ids: tuple[int, ...]
    femto_mean: np.ndarray
    macro_ids: tuple[int, ...]
    macro_mean: np.ndarray
    params: ChannelParams


def link_budget(deployment: Deployment, params: ChannelParams, *,
                fap_tx_power: float = 0.01, macro_tx_power: float = 1500.0) -> LinkBudget:
    ue = deployment.reference_ue
    ref = deployment.reference_fap
    d0 = ue.position.distance(ref.position)
    s_bar = fap_tx_power * mean_path_gain(LinkClass.FEMTO_OWN, d0, 0, params)

    femto_ids = tuple(deployment.neighbors(ref.id))
    femto_mean = np.empty(len(femto_ids))
    for k, fid in enumerate(femto_ids):
        fap = deployment.fap(fid)
        d = ue.position.distance(fap.position)
        femto_mean[k] = fap_tx_power * mean_path_gain(
            LinkClass.FEMTO_CROSS, d, deployment.walls(ue, fap), params)

    macro_ids = tuple(m.id for m in deployment.macrocells)
    ground = np.array([ue.position.distance(m.center) for m in deployment.macrocells])
    macro_mean = macro_tx_power * mean_path_gain(
        LinkClass.MACRO_DOWN, params.macro_distance(ground), 0, params)
    return LinkBudget(s_bar, d0, femto_ids, femto_mean, macro_ids,
                      np.atleast_1d(macro_mean), params)


def indicator_vectors(plan: AllocationPlan, budget: LinkBudget, reference_fap: int = 0):
    """``(X, Y)`` as 0/1 float arrays aligned with the budget's interferers."""
    x = np.array([indicator_x(plan, i, reference_fap, budget.ue_distance)
                  for i in budget.femto_ids], dtype=np.float64)
    y = np.array([indicator_y(plan, j, reference_fap, budget.ue_distance)
                  for j in budget.macro_ids], dtype=np.float64)
    return x, y


@dataclass(frozen=True)
class RealizationSet:
    """Shadowing and fast fading for every interfering link (one draw)."""

    femto_xi: np.ndarray
    femto_z: np.ndarray
    macro_xi: np.ndarray
    macro_z: np.ndarray

    @classmethod
    def unit(cls, k: int, n: int) -> "RealizationSet":
        return cls(np.ones(k), np.ones(k), np.ones(n), np.ones(n))


def draw_realizations(budget: LinkBudget, rng: np.random.Generator, trials: int | None = None) -> RealizationSet:
    k, n = len(budget.femto_ids), len(budget.macro_ids)
    shape_f = (k,) if trials is None else (trials, k)
    shape_m = (n,) if trials is None else (trials, n)
    p = budget.params
    return RealizationSet(
        femto_xi=np.asarray(sample_shadowing(p.shadow_sigma_femto, rng, shape_f), dtype=np.float64),
        femto_z=sample_fast_fading(rng, shape_f),
        macro_xi=np.asarray(sample_shadowing(p.shadow_sigma_macro, rng, shape_m), dtype=np.float64),
        macro_z=sample_fast_fading(rng, shape_m),
    )


def breakdown_from(budget: LinkBudget, x, y, realization: RealizationSet) -> InterferenceBreakdown:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    i_f = float(np.sum(budget.femto_mean * realization.femto_xi * realization.femto_z * x))
    i_m = float(np.sum(budget.macro_mean * realization.macro_xi * realization.macro_z * y))
    return InterferenceBreakdown(budget.s_bar, i_f, i_m, int(x.sum()), int(y.sum()))


def interference_breakdown(
    deployment: Deployment,
    plan: AllocationPlan,
    params: ChannelParams,
    realization: RealizationSet | None = None,
    *,
    fap_tx_power: float = 0.01,
    macro_tx_power: float = 1500.0,
) -> InterferenceBreakdown:
    """Mean signal and indicator-weighted interference sums at the reference UE.

    Without ``realization`` all shadowing and fading factors are 1.
    """
    budget = link_budget(deployment, params, fap_tx_power=fap_tx_power, macro_tx_power=macro_tx_power)
    x, y = indicator_vectors(plan, budget, deployment.reference_fap.id)
    if realization is None:
        realization = RealizationSet.unit(len(x), len(y))
    return breakdown_from(budget, x, y, realization)


# -- SIR and outage ---------------------------------------------------------

def sir(breakdown: InterferenceBreakdown, z0: float) -> float:
    """``s_bar * z0 / (I_f + I_m)``; :data:`NO_OUTAGE` when there is no interference."""
    total = breakdown.total
    if total == 0:
        return NO_OUTAGE
    return breakdown.s_bar * z0 / total


def outage_conditional(breakdown: InterferenceBreakdown, gamma) -> float:
    """Outage over the serving link's fading, interferer fading held fixed."""
    if breakdown.s_bar <= 0:
        raise ValueError("mean signal power must be positive")
    return -math.expm1(-_gamma_linear(gamma) * breakdown.total / breakdown.s_bar)


def conditional_outage_array(s_bar, interference, gamma_linear: float) -> np.ndarray:
    return -np.expm1(-gamma_linear * np.asarray(interference) / s_bar)


def outage_z0_monte_carlo(breakdown: InterferenceBreakdown, gamma, trials: int,
                          rng: np.random.Generator) -> OutageEstimate:
    """Direct count of ``SIR < gamma`` over ``trials`` draws of the serving-link fading."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    g = _gamma_linear(gamma)
    if breakdown.total == 0:
        return OutageEstimate(0.0, trials, 0.0, 0.0)
    z0 = sample_fast_fading(rng, trials)
    hits = int(np.count_nonzero(breakdown.s_bar * z0 < g * breakdown.total))
    p = hits / trials
    return OutageEstimate(p, trials, wald_half_width(p, trials), outage_conditional(breakdown, g))


def outage_monte_carlo(
    deployment: Deployment,
    plan: AllocationPlan,
    params: ChannelParams,
    gamma,
    trials: int,
    rng: np.random.Generator,
    *,
    fap_tx_power: float = 0.01,
    macro_tx_power: float = 1500.0,
) -> OutageEstimate:
    """Fading-only Monte Carlo: placement fixed, shadowing and all fading redrawn.

    ``conditional_mean`` averages the closed form over the interferer draws
    and estimates the same probability as the direct count.
    """
    budget = link_budget(deployment, params, fap_tx_power=fap_tx_power, macro_tx_power=macro_tx_power)
    x, y = indicator_vectors(plan, budget, deployment.reference_fap.id)
    return outage_from_budget(budget, x, y, gamma, trials, rng)


def outage_from_budget(budget: LinkBudget, x, y, gamma, trials: int,
                       rng: np.random.Generator) -> OutageEstimate:
    """Fading-only outage for precomputed mean powers and indicator vectors."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    g = _gamma_linear(gamma)
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    real = draw_realizations(budget, rng, trials)
    z0 = sample_fast_fading(rng, trials)
    interference = (real.femto_xi * real.femto_z) @ (budget.femto_mean * x) \
        + (real.macro_xi * real.macro_z) @ (budget.macro_mean * y)
    hits = int(np.count_nonzero(budget.s_bar * z0 < g * interference))
    p = hits / trials
    cond = float(np.mean(conditional_outage_array(budget.s_bar, interference, g)))
    return OutageEstimate(p, trials, wald_half_width(p, trials), cond)


# -- throughput -------------------------------------------------------------

def spectral_efficiency(sir_samples, se_cap: float = 10.0) -> np.ndarray:
    """``log2(1 + SIR)`` capped at ``se_cap`` bit/s/Hz (interference-free samples hit the cap)."""
    s = np.asarray(sir_samples, dtype=np.float64)
    with np.errstate(over="ignore"):
        se = np.log2(1.0 + s)
    return np.minimum(se, se_cap)


def throughput(sir_samples, bandwidth_hz: float, se_cap: float = 10.0) -> ThroughputEstimate:
    """Mean Shannon rate ``W log2(1 + SIR)`` treating interference as noise."""
    if bandwidth_hz <= 0:
        raise ValueError("bandwidth must be positive")
    rates = bandwidth_hz * spectral_efficiency(sir_samples, se_cap)
    n = rates.size
    if n == 0:
        raise ValueError("no SIR samples")
    sd = float(rates.std(ddof=1)) if n > 1 else 0.0
    return ThroughputEstimate(float(rates.mean()), float(bandwidth_hz), n, Z95 * sd / math.sqrt(n))


def serving_bandwidth_hz(plan: AllocationPlan, fap_id: int, ue_distance: float | None = None) -> float:
    return serving_band(plan, fap_id, ue_distance).width * 1e3
