"""Homogeneous Poisson field of terminals on an annulus around the access point.

Only radial distances are kept; nothing downstream depends on the angle.
"""
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class AnnulusRegion:
    xi: float
    rho: float

    def __post_init__(self):
        if not (0 <= self.xi < self.rho):
            raise ValueError(f"need 0 <= xi < rho, got xi={self.xi}, rho={self.rho}")

    def area(self) -> float:
        return np.pi * (self.rho**2 - self.xi**2)

    def radial_cdf(self, r):
        r = np.clip(np.asarray(r, dtype=float), self.xi, self.rho)
        return (r**2 - self.xi**2) / (self.rho**2 - self.xi**2)

    def radial_pdf(self, r):
        r = np.asarray(r, dtype=float)
        inside = (r >= self.xi) & (r <= self.rho)
        return np.where(inside, 2.0 * r / (self.rho**2 - self.xi**2), 0.0)


def annulus_area(region: AnnulusRegion) -> float:
    return region.area()


@dataclass
class TerminalField:
    distances: np.ndarray

    @property
    def count(self) -> int:
        return len(self.distances)


def sample_radii(region: AnnulusRegion, size, rng: np.random.Generator) -> np.ndarray:
    """Distances of points uniform on the annulus (inverse radial CDF)."""
    u = rng.random(size)
    return np.sqrt(region.xi**2 + u * (region.rho**2 - region.xi**2))


def sample_ppp(region: AnnulusRegion, lam: float, rng: np.random.Generator) -> TerminalField:
    if lam < 0:
        raise ValueError(f"intensity must be non-negative, got {lam}")
    n = rng.poisson(lam * region.area()) if lam > 0 else 0
    return TerminalField(sample_radii(region, n, rng))


def thin(field: TerminalField, keep, rng: np.random.Generator | None = None):
    """Split a field into (kept, dropped).

    ``keep`` is a boolean mask, a retention probability applied independently
    per terminal, or a callable ``keep(distances, rng) -> mask``.
    """
    d = np.asarray(field.distances)
    if callable(keep):
        mask = np.asarray(keep(d, rng), dtype=bool)
    elif np.ndim(keep) == 0 and not isinstance(keep, (bool, np.bool_)):
        if rng is None:
            raise ValueError("probabilistic thinning needs a random generator")
        mask = rng.random(d.shape) < float(keep)
    else:
        mask = np.broadcast_to(np.asarray(keep, dtype=bool), d.shape)
    return TerminalField(d[mask]), TerminalField(d[~mask])
