"""Closed-form outage analysis of 1-bit opportunistic beamforming.

Covers the idle probability of a wirelessly powered terminal, the intensity
of terminals able to feed back on a beam, the distance-averaged beam SINR
CDF, the beam outage probability and its high-power limit.
"""
import math
from dataclasses import dataclass

from scipy import integrate
from scipy.special import comb

from .energy import Combiner
from .geometry import AnnulusRegion
from .specfun import incomplete_gamma_diff

# excursions of a probability outside [0, 1] tolerated as rounding
_PROB_SLACK = 1e-12
# alternating-sum condition number above which the SINR CDF is integrated instead
_MAX_CONDITION = 1e8
_MIN_CLOSED_FORM_X = 1e-3


class ConsistencyError(ArithmeticError):
    """A computed probability left [0, 1] by more than rounding error."""


def _probability(p: float, what: str) -> float:
    if -_PROB_SLACK <= p <= 1.0 + _PROB_SLACK:
        return min(1.0, max(0.0, p))
    raise ConsistencyError(f"{what} = {p!r} is outside [0, 1]")


@dataclass(frozen=True)
class AnalyticInputs:
    region: AnnulusRegion
    M: int
    N: int
    L: int
    alpha: float
    lam: float
    delta: float
    p_t: float
    G: float
    Y: float

    def __post_init__(self):
        if not self.alpha > 2:
            raise ValueError(f"path-loss exponent must exceed 2, got {self.alpha}")
        if not self.delta > 0:
            raise ValueError(f"SINR threshold must be positive, got {self.delta}")
        if self.lam < 0:
            raise ValueError(f"intensity must be non-negative, got {self.lam}")
        if min(self.M, self.N, self.L) < 1:
            raise ValueError("M, N and L must all be >= 1")


def _dc_active_fraction(inp: AnalyticInputs) -> float:
    if not inp.G > 0:
        raise ValueError(f"G must be positive, got {inp.G}")
    a, xi, rho = inp.alpha, inp.region.xi, inp.region.rho
    lo, hi = inp.G * xi ** (2 * a), inp.G * rho ** (2 * a)
    total = math.fsum(
        incomplete_gamma_diff(m + 1.0 / a, lo, hi) / math.gamma(m + 1.0) for m in range(inp.L)
    )
    return total / (a * (rho**2 - xi**2) * inp.G ** (1.0 / a))


def _rf_active_fraction(inp: AnalyticInputs) -> float:
    if not inp.Y > 0:
        raise ValueError(f"Y must be positive, got {inp.Y}")
    a, xi, rho, L = inp.alpha, inp.region.xi, inp.region.rho, inp.L
    scale = inp.Y / L
    diff = incomplete_gamma_diff(1.0 / a, scale * xi ** (2 * a), scale * rho ** (2 * a))
    return L ** (1.0 / a) * diff / (a * (rho**2 - xi**2) * inp.Y ** (1.0 / a))


def idle_prob_dc(inp: AnalyticInputs) -> float:
    return _probability(1.0 - _dc_active_fraction(inp), "DC idle probability")


def idle_prob_rf(inp: AnalyticInputs) -> float:
    return _probability(1.0 - _rf_active_fraction(inp), "RF idle probability")


def idle_prob(inp: AnalyticInputs, combiner: Combiner) -> float:
    if Combiner(combiner) is Combiner.DC:
        return idle_prob_dc(inp)
    return idle_prob_rf(inp)


def feedback_prob(inp: AnalyticInputs, combiner: Combiner) -> float:
    """Complement of :func:`idle_prob`, computed without the subtraction.

    Keeps full relative accuracy when almost every terminal is idle.
    """
    if Combiner(combiner) is Combiner.DC:
        return _probability(_dc_active_fraction(inp), "DC feedback probability")
    return _probability(_rf_active_fraction(inp), "RF feedback probability")


def active_intensity(inp: AnalyticInputs, combiner: Combiner) -> float:
    """Intensity of terminals on one beam that can afford their feedback bit."""
    return inp.lam / inp.M * feedback_prob(inp, combiner)


def active_intensity_closed_form(inp: AnalyticInputs, combiner: Combiner) -> float:
    """Same quantity as :func:`active_intensity`, evaluated in one expression.

    Kept as a separate code path so the two can be checked against each other.
    """
    a, xi, rho, L = inp.alpha, inp.region.xi, inp.region.rho, inp.L
    if Combiner(combiner) is Combiner.DC:
        G = inp.G
        s = math.fsum(
            incomplete_gamma_diff(m + 1.0 / a, G * xi ** (2 * a), G * rho ** (2 * a))
            / (a * G ** (1.0 / a) * math.gamma(m + 1.0))
            for m in range(L)
        )
        return inp.lam / (inp.M * (rho**2 - xi**2)) * s
    Y = inp.Y
    diff = incomplete_gamma_diff(1.0 / a, Y / L * xi ** (2 * a), Y / L * rho ** (2 * a))
    return inp.lam * L ** (1.0 / a) * diff / (inp.M * a * (rho**2 - xi**2) * Y ** (1.0 / a))


def sinr_cdf_conditional(x: float, d: float, inp: AnalyticInputs) -> float:
    """CDF of the selection-combined beam SINR at distance ``d``."""
    if x <= 0:
        return 0.0
    inner = 1.0 - math.exp(-x * d**inp.alpha / inp.p_t) / (x + 1.0) ** (inp.M - 1)
    return inner**inp.N


def sinr_cdf_quad(x: float, inp: AnalyticInputs) -> float:
    """Distance-averaged SINR CDF by adaptive radial quadrature."""
    if x <= 0:
        return 0.0
    xi, rho = inp.region.xi, inp.region.rho
    norm = rho**2 - xi**2
    val, _ = integrate.quad(
        lambda r: sinr_cdf_conditional(x, r, inp) * 2.0 * r / norm,
        xi, rho, epsabs=1e-14, epsrel=1e-12, limit=200,
    )
    return _probability(val, "SINR CDF")


def _sinr_cdf_terms(x: float, inp: AnalyticInputs):
    a, xi, rho, M, N = inp.alpha, inp.region.xi, inp.region.rho, inp.M, inp.N
    pref = 2.0 / (a * (rho**2 - xi**2)) * (inp.p_t / x) ** (2.0 / a)
    terms = []
    for m in range(1, N + 1):
        c = x * m / inp.p_t
        diff = incomplete_gamma_diff(2.0 / a, c * xi**a, c * rho**a)
        log_mag = math.log(comb(N, m, exact=True)) - (2.0 / a) * math.log(m) \
            - m * (M - 1) * math.log1p(x)
        terms.append((-1) ** m * pref * math.exp(log_mag) * diff)
    return terms


def sinr_cdf(x: float, inp: AnalyticInputs) -> float:
    """Distance-averaged CDF of the selection-combined beam SINR.

    Uses the binomial closed form unless the alternating sum is badly
    conditioned, in which case the defining radial integral is evaluated.
    """
    if x <= 0:
        return 0.0
    if x < _MIN_CLOSED_FORM_X:
        return sinr_cdf_quad(x, inp)
    terms = _sinr_cdf_terms(x, inp)
    value = 1.0 + math.fsum(terms)
    scale = 1.0 + math.fsum(abs(t) for t in terms)
    if not math.isfinite(value) or value <= 0 or scale / value > _MAX_CONDITION:
        return sinr_cdf_quad(x, inp)
    return _probability(value, "SINR CDF")


def sinr_cdf_asymptotic(x: float, M: int, N: int) -> float:
    """Interference-limited SINR CDF reached as transmit power grows without bound."""
    if x <= 0:
        return 0.0
    return (1.0 - (x + 1.0) ** -(M - 1)) ** N


def beam_outage(inp: AnalyticInputs, combiner: Combiner) -> float:
    area = inp.region.area()
    per_beam = inp.lam / inp.M
    active = active_intensity(inp, combiner)
    F = sinr_cdf(inp.delta, inp)
    no_silent = math.exp(-(per_beam - active) * area)
    out = math.exp(-active * area * (1.0 - F)) * (no_silent + (1.0 - no_silent) * F)
    return _probability(out, "beam outage")


def beam_outage_asymptotic(inp: AnalyticInputs) -> float:
    F = sinr_cdf_asymptotic(inp.delta, inp.M, inp.N)
    return math.exp(-inp.lam / inp.M * inp.region.area() * (1.0 - F))
