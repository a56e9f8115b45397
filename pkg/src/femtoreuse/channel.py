"""Log-distance propagation with wall loss, lognormal shadowing and Rayleigh fading.

Received power on a link is ``P_T * P_0 * d**-eta * xi * Z``: ``P_0`` and
``eta`` depend on the link class, ``xi`` is lognormal shadowing and ``Z`` the
unit-mean exponential power gain of a Rayleigh envelope. All powers are
linear watts.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0


class LinkClass(enum.Enum):
    FEMTO_OWN = "femto_own"      # UE <-> serving FAP, same room
    FEMTO_CROSS = "femto_cross"  # UE <-> neighbor FAP, through walls
    MACRO_DOWN = "macro_down"    # UE <-> macrocell BS


def free_space_gain(carrier_mhz: float, reference_m: float = 1.0) -> float:
    """Friis gain ``(lambda / (4 pi d0))**2`` at the reference distance."""
    wavelength = SPEED_OF_LIGHT / (carrier_mhz * 1e6)
    return (wavelength / (4.0 * math.pi * reference_m)) ** 2


@dataclass(frozen=True)
class ChannelParams:
    carrier: float = 900.0
    eta1: float = 2.0
    eta2: float = 3.0
    eta3: float = 3.5
    shadow_sigma_femto: float = 4.0
    shadow_sigma_macro: float = 8.0
    wall_loss: float = 10.0
    bs_height: float = 50.0
    fap_height: float = 2.0
    p0_femto: float | None = None
    p0_macro: float | None = None

    def __post_init__(self):
        for name in ("eta1", "eta2", "eta3"):
            if getattr(self, name) < 2:
                raise ValueError(f"{name} must be >= 2, got {getattr(self, name)}")
        for name in ("shadow_sigma_femto", "shadow_sigma_macro", "wall_loss"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        if self.carrier <= 0:
            raise ValueError("carrier must be positive")
        if self.p0_femto is None:
            object.__setattr__(self, "p0_femto", free_space_gain(self.carrier))
        if self.p0_macro is None:
            object.__setattr__(self, "p0_macro", free_space_gain(self.carrier))

    def constants(self, link: LinkClass) -> tuple[float, float]:
        """``(P_0, eta)`` for a link class."""
        if link is LinkClass.FEMTO_OWN:
            return self.p0_femto, self.eta1
        if link is LinkClass.FEMTO_CROSS:
            return self.p0_femto, self.eta2
        return self.p0_macro, self.eta3

    def shadow_sigma(self, link: LinkClass) -> float:
        if link is LinkClass.FEMTO_OWN:
            return 0.0
        if link is LinkClass.FEMTO_CROSS:
            return self.shadow_sigma_femto
        return self.shadow_sigma_macro

    def macro_distance(self, ground_distance):
        """Slant range from a macro BS antenna to an indoor UE at FAP height."""
        dh = self.bs_height - self.fap_height
        return np.sqrt(np.square(ground_distance) + dh * dh)


@dataclass(frozen=True)
class LinkRealization:
    xi: float = 1.0
    z: float = 1.0

    def __post_init__(self):
        if self.xi <= 0:
            raise ValueError("shadowing factor must be positive")
        if self.z < 0:
            raise ValueError("fast-fading factor must be nonnegative")


def mean_path_gain(link: LinkClass, d, walls: int, params: ChannelParams):
    """Deterministic gain ``P_0 * d**-eta * 10**(-walls * wall_loss / 10)``.

    Accepts scalar or array distances.
    """
    d_arr = np.asarray(d, dtype=np.float64)
    if np.any(d_arr <= 0):
        raise ValueError(f"link distance must be positive, got {d}")
    p0, eta = params.constants(link)
    gain = p0 * d_arr ** (-eta) * 10.0 ** (-walls * params.wall_loss / 10.0)
    return float(gain) if gain.ndim == 0 else gain


def sample_shadowing(sigma_db: float, rng: np.random.Generator, size=None):
    if sigma_db < 0:
        raise ValueError(f"shadowing sigma must be nonnegative, got {sigma_db}")
    if sigma_db == 0:
        return 1.0 if size is None else np.ones(size)
    return 10.0 ** (rng.normal(0.0, sigma_db, size) / 10.0)


def sample_fast_fading(rng: np.random.Generator, size=None):
    return rng.exponential(1.0, size)


def received_power(p_tx: float, link: LinkClass, d, walls: int,
                   params: ChannelParams, realization: LinkRealization = LinkRealization()):
    if p_tx < 0:
        raise ValueError("transmit power must be nonnegative")
    # Shadowing is neglected on the serving indoor link.
    xi = 1.0 if link is LinkClass.FEMTO_OWN else realization.xi
    return p_tx * mean_path_gain(link, d, walls, params) * xi * realization.z
