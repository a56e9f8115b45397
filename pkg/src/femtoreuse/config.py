"""Flat ``key = value`` scenario configuration.

Lines starting with ``#`` are comments; inline ``#`` also starts a comment.
List values are comma separated. Unknown keys are errors.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, fields
from pathlib import Path

from .schemes import ALL_SCHEMES, SchemeKind


class ConfigError(ValueError):
    def __init__(self, key: str | None, message: str):
        self.key = key
        super().__init__(f"{key}: {message}" if key else message)


@dataclass(frozen=True)
class ScenarioConfig:
    seed: int = 1
    schemes: tuple[SchemeKind, ...] = ALL_SCHEMES
    counts: tuple[int, ...] = (10, 100, 1000)
    count_mode: str = "fixed"
    trials: int = 1000
    workers: int = 1

    macro_radius: float = 1000.0
    femto_radius: float = 10.0
    reference_fap_distance: float = 200.0
    ue_distance: float = 5.0
    carrier: float = 900.0
    total_bandwidth: float = 30.0
    macro_tx_power: float = 1500.0
    fap_tx_power_max: float = 0.01
    bs_height: float = 50.0
    fap_height: float = 2.0
    gamma_db: float = 9.0
    neighbor_threshold: float = 60.0
    walls_between_femtocells: int = 1
    first_tier_bands: tuple[int, ...] = (2, 3, 2, 3, 2, 3)

    dedicated_femto_fraction: float = 0.333
    subband_fraction: float = 0.333
    static_policy: str = "blind"
    inner_radius_fraction: float = 0.5
    resize_factor: float = 0.8
    min_radius: float = 4.0
    window_factor: float = 3.0

    eta1: float = 2.0
    eta2: float = 3.0
    eta3: float = 3.5
    shadow_sigma_femto: float = 4.0
    shadow_sigma_macro: float = 8.0
    wall_loss: float = 10.0
    macro_antenna_gain: float = 0.0

    dense_threshold: int = 1000
    se_cap: float = 10.0
    aggregate_metric: str = "cell"

    def __post_init__(self):
        _validate(self)

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)


_POSITIVE = (
    "macro_radius", "femto_radius", "carrier", "total_bandwidth", "bs_height",
    "neighbor_threshold", "trials", "workers", "se_cap", "min_radius", "window_factor",
)
_NONNEGATIVE = (
    "reference_fap_distance", "macro_tx_power", "fap_tx_power_max", "fap_height",
    "walls_between_femtocells", "shadow_sigma_femto", "shadow_sigma_macro",
    "wall_loss", "dense_threshold",
)


def _validate(cfg: ScenarioConfig) -> None:
    for key in _POSITIVE:
        if not getattr(cfg, key) > 0:
            raise ConfigError(key, f"must be positive, got {getattr(cfg, key)}")
    for key in _NONNEGATIVE:
        if getattr(cfg, key) < 0:
            raise ConfigError(key, f"must be nonnegative, got {getattr(cfg, key)}")
    if not 0 < cfg.ue_distance:
        raise ConfigError("ue_distance", "must be positive")
    if cfg.reference_fap_distance > cfg.macro_radius:
        raise ConfigError("reference_fap_distance", "must not exceed macro_radius")
    for key in ("dedicated_femto_fraction", "subband_fraction", "resize_factor"):
        if not 0 < getattr(cfg, key) < 1:
            raise ConfigError(key, f"must lie in (0, 1), got {getattr(cfg, key)}")
    if not 0 < cfg.inner_radius_fraction <= 1:
        raise ConfigError("inner_radius_fraction", "must lie in (0, 1]")
    if cfg.min_radius > cfg.femto_radius:
        raise ConfigError("min_radius", "must not exceed femto_radius")
    for key in ("eta1", "eta2", "eta3"):
        if getattr(cfg, key) < 2:
            raise ConfigError(key, f"path-loss exponent must be >= 2, got {getattr(cfg, key)}")
    if cfg.bs_height < cfg.fap_height:
        raise ConfigError("bs_height", "must not be below fap_height")
    if not cfg.schemes:
        raise ConfigError("schemes", "at least one scheme is required")
    if not cfg.counts:
        raise ConfigError("counts", "at least one femtocell count is required")
    if any(c < 0 for c in cfg.counts):
        raise ConfigError("counts", "femtocell counts must be nonnegative")
    if len(cfg.first_tier_bands) != 6 or any(b not in (1, 2, 3) for b in cfg.first_tier_bands):
        raise ConfigError("first_tier_bands", "needs six band indices from {1, 2, 3}")
    if cfg.count_mode not in ("fixed", "poisson"):
        raise ConfigError("count_mode", "must be 'fixed' or 'poisson'")
    if cfg.aggregate_metric not in ("cell", "ue"):
        raise ConfigError("aggregate_metric", "must be 'cell' or 'ue'")
    if cfg.static_policy not in ("blind", "greedy"):
        raise ConfigError("static_policy", "must be 'blind' or 'greedy'")


def _field_types() -> dict[str, str]:
    return {f.name: str(f.type) for f in fields(ScenarioConfig)}


def _parse_value(key: str, raw: str, ftype: str):
    raw = raw.strip()
    try:
        if key == "schemes":
            return tuple(SchemeKind.parse(s) for s in raw.split(",") if s.strip())
        if ftype.startswith("tuple[int"):
            return tuple(int(s) for s in raw.split(",") if s.strip())
        if ftype == "int":
            return int(raw)
        if ftype == "float":
            return float(raw)
        if ftype == "str":
            return raw
    except ValueError as exc:
        raise ConfigError(key, f"cannot parse {raw!r}: {exc}") from None
    raise ConfigError(key, f"unsupported field type {ftype}")


def parse_config(text: str, base: ScenarioConfig | None = None) -> ScenarioConfig:
    types = _field_types()
    values: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(None, f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in types:
            raise ConfigError(key, f"unknown key (line {lineno})")
        if key in values:
            raise ConfigError(key, f"duplicate key (line {lineno})")
        values[key] = _parse_value(key, raw, types[key])
    return apply_overrides(base or ScenarioConfig(), values)


def apply_overrides(cfg: ScenarioConfig, values: dict) -> ScenarioConfig:
    types = _field_types()
    for key in values:
        if key not in types:
            raise ConfigError(key, "unknown key")
    try:
        return dataclasses.replace(cfg, **values)
    except TypeError as exc:
        raise ConfigError(None, str(exc)) from None


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigError(None, f"config file not found: {path}") from None
    except OSError as exc:
        raise ConfigError(None, f"cannot read {path}: {exc}") from None
    return parse_config(text)


def _format_value(value) -> str:
    if isinstance(value, tuple):
        return ",".join(v.value if isinstance(v, SchemeKind) else str(v) for v in value)
    return repr(value) if isinstance(value, float) else str(value)


def dump_config(cfg: ScenarioConfig) -> str:
    lines = ["# femtoreuse scenario configuration"]
    for f in fields(ScenarioConfig):
        lines.append(f"{f.name} = {_format_value(getattr(cfg, f.name))}")
    return "\n".join(lines) + "\n"
