"""Rectenna-array harvesting and the 1-bit feedback activity test.

Only the second-order (DC) term of the diode expansion is kept, so harvested
power is proportional to the received RF power: the sum of per-element powers
for the DC combiner and the power of the coherent sum for the RF combiner.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .channel import complex_gaussian


class Combiner(str, Enum):
    DC = "dc"
    RF = "rf"


@dataclass(frozen=True)
class HarvestParams:
    i_s: float = 1e-3
    mu: float = 2.0
    v_t: float = 28.85e-3
    zeta_d: float = 0.9
    zeta_r: float = 0.9
    e_d: float = 1.0
    e_r: float = 1.0
    p_h: float = 1.0
    L: int = 4

    def __post_init__(self):
        if not 1.0 <= self.mu <= 2.0:
            raise ValueError(f"ideality factor mu must lie in [1, 2], got {self.mu}")
        for name in ("zeta_d", "zeta_r", "e_d", "e_r"):
            v = getattr(self, name)
            if not 0 < v <= 1:
                raise ValueError(f"{name} must lie in (0, 1], got {v}")
        for name in ("i_s", "v_t", "p_h"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.L < 1:
            raise ValueError(f"L must be >= 1, got {self.L}")

    @property
    def diode_scale(self) -> float:
        """I_s * P_h / (mu V_T)^2, shared by both topologies."""
        return self.i_s * self.p_h / (self.mu * self.v_t) ** 2


@dataclass(frozen=True)
class DerivedConstants:
    G: float
    Y: float

    def for_combiner(self, combiner: Combiner) -> float:
        return self.G if Combiner(combiner) is Combiner.DC else self.Y


def derived_constants(p: HarvestParams, sigma2: float) -> DerivedConstants:
    num = (p.mu * p.v_t) ** 2 * sigma2
    return DerivedConstants(
        G=num / (p.zeta_d * p.e_d * p.i_s * p.p_h),
        Y=num / (p.zeta_r * p.e_r * p.i_s * p.p_h),
    )


def draw_wpt(L: int, rng: np.random.Generator, size=None) -> np.ndarray:
    """Power-beacon channels to the ``L`` rectenna elements, shape ``size + (L,)``."""
    shape = () if size is None else tuple(np.atleast_1d(size))
    return complex_gaussian(rng, shape + (L,))


def harvest_dc(g, d, p: HarvestParams, alpha: float):
    g = np.asarray(g, dtype=complex)
    z = np.einsum("...i,...i->...", g.real, g.real) + np.einsum("...i,...i->...", g.imag, g.imag)
    return p.zeta_d * p.e_d * p.diode_scale * np.asarray(d, dtype=float) ** -alpha * z


def harvest_rf(g, d, p: HarvestParams, alpha: float):
    c = np.asarray(g, dtype=complex).sum(axis=-1)
    z1 = c.real**2 + c.imag**2
    return p.zeta_r * p.e_r * p.diode_scale * np.asarray(d, dtype=float) ** -alpha * z1


def harvest(g, d, p: HarvestParams, alpha: float, combiner: Combiner):
    if Combiner(combiner) is Combiner.DC:
        return harvest_dc(g, d, p, alpha)
    return harvest_rf(g, d, p, alpha)


def is_active(p_harvest, d, sigma2: float, alpha: float):
    """True where the harvested power supports one bit per channel use uplink."""
    return np.asarray(p_harvest) >= np.asarray(d, dtype=float) ** alpha * sigma2
