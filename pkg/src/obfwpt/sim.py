"""Monte-Carlo engine for one slot of the 1-bit feedback protocol.

Trials are simulated in fixed-size blocks with vectorized numpy draws. Each
block owns a random stream derived from ``(seed, block index)``, so an
estimate depends only on ``(params, mode, trials, seed)`` and not on how the
blocks are spread over workers.
"""
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .channel import constructive_powers, complex_gaussian, direct_powers, draw_beams, \
    sinr_from_powers
from .energy import Combiner, draw_wpt, harvest, is_active
from .geometry import sample_radii

BLOCK_TRIALS = 4096
Z_99 = 2.576


class Scheme(str, Enum):
    ONE_BIT = "one_bit"
    RANDOM_ASSIGNMENT = "random_assignment"
    FULL_FEEDBACK = "full_feedback"


class Coupling(str, Enum):
    COUPLED = "coupled"
    DECOUPLED = "decoupled"


@dataclass(frozen=True)
class SimMode:
    scheme: Scheme = Scheme.ONE_BIT
    combiner: Combiner = Combiner.DC
    coupling: Coupling = Coupling.COUPLED

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        object.__setattr__(self, "combiner", Combiner(self.combiner))
        object.__setattr__(self, "coupling", Coupling(self.coupling))

    @classmethod
    def parse(cls, text: str) -> "SimMode":
        """Parse ``one_bit/dc/decoupled``, ``random_assignment`` or ``full_feedback``."""
        parts = [p.strip().lower() for p in text.split("/")]
        scheme = Scheme(parts[0])
        if scheme is not Scheme.ONE_BIT:
            if len(parts) > 1:
                raise ValueError(f"mode {text!r}: {scheme.value} takes no combiner or coupling")
            return cls(scheme)
        if len(parts) > 3:
            raise ValueError(f"mode {text!r} has too many fields")
        combiner = Combiner(parts[1]) if len(parts) > 1 else Combiner.DC
        coupling = Coupling(parts[2]) if len(parts) > 2 else Coupling.COUPLED
        return cls(scheme, combiner, coupling)

    def __str__(self):
        if self.scheme is Scheme.ONE_BIT:
            return f"{self.scheme.value}/{self.combiner.value}/{self.coupling.value}"
        return self.scheme.value


@dataclass
class TrialRecord:
    """Per-beam outcome of one slot.

    ``feedback`` counts terminals able to send their bit (all of them under
    full feedback, none under random assignment); ``silent`` the rest.
    """
    beam_outage: np.ndarray
    feedback: np.ndarray
    silent: np.ndarray
    total: np.ndarray


@dataclass(frozen=True)
class OutageEstimate:
    outages: int
    trials: int
    seed: int

    @property
    def p_hat(self) -> float:
        return self.outages / self.trials

    @property
    def se(self) -> float:
        p = self.p_hat
        return math.sqrt(p * (1.0 - p) / self.trials)

    @property
    def ci_halfwidth(self) -> float:
        return Z_99 * self.se

    @property
    def rare_event(self) -> bool:
        return self.outages < 10


def _simulate(params, mode: SimMode, n: int, rng: np.random.Generator):
    M, N = params.M, params.N
    region = params.region
    counts = rng.poisson(params.lambda_per_m2 * region.area(), size=n)
    owner = np.repeat(np.arange(n), counts)
    n_term = owner.size
    d = sample_radii(region, n_term, rng)
    beam = rng.integers(0, M, size=n_term)

    if mode.scheme is Scheme.ONE_BIT:
        g = draw_wpt(params.L, rng, n_term)
        p_h = harvest(g, d, params.harvest_params(), params.alpha, mode.combiner)
        active = is_active(p_h, d, params.sigma2, params.alpha)
    elif mode.scheme is Scheme.FULL_FEEDBACK:
        active = np.ones(n_term, dtype=bool)
    else:
        active = np.zeros(n_term, dtype=bool)

    d_sinr = d
    if mode.scheme is Scheme.ONE_BIT and mode.coupling is Coupling.DECOUPLED:
        d_sinr = sample_radii(region, n_term, rng)
    noise = d_sinr**params.alpha / params.p_t

    if params.sinr_sampler == "constructive":
        beams = draw_beams(M, rng, size=n)
        h = complex_gaussian(rng, (n_term, N, M))
        power = constructive_powers(h, beams[owner])
    else:
        power = direct_powers(rng, n_term, N, M)
    sinr = sinr_from_powers(power, noise)
    u = rng.random(n * M)
    return decide_beams(mode.scheme, owner, beam, active, sinr >= params.delta, n, M, u)


def decide_beams(scheme: Scheme, owner, beam, active, good, n: int, M: int, u):
    """Per-trial, per-beam outage flags from terminal-level outcomes.

    ``owner`` and ``beam`` give each terminal's trial and assigned beam,
    ``active`` whether it can send its feedback bit, and ``good[t, l]``
    whether its SINR on beam ``l`` reaches the threshold. ``u`` holds one
    uniform per (trial, beam) for the random pick. Returns
    ``(outage, feedback, silent, total)``, each of shape ``(n, M)``.
    """
    n_term = owner.size
    key = owner * M + beam
    size = n * M
    total = np.bincount(key, minlength=size)
    feedback = np.bincount(key, weights=active, minlength=size).astype(np.int64)
    silent = total - feedback

    if scheme is Scheme.FULL_FEEDBACK:
        # every terminal reports every beam; the best one anywhere serves it
        served = np.zeros((n, M), dtype=bool)
        for l in range(M):
            served[:, l] = np.bincount(owner, weights=good[:, l], minlength=n) > 0
        outage = ~served
    else:
        own_good = good[np.arange(n_term), beam]
        if scheme is Scheme.ONE_BIT:
            positive = np.bincount(key, weights=active & own_good, minlength=size) > 0
            silent_bad = np.bincount(key, weights=~active & ~own_good, minlength=size)
            # uniform pick among silent terminals, ordered bad-first
            pick_bad = np.floor(u * silent) < silent_bad
            outage = ~positive & ((silent == 0) | pick_bad)
        else:
            bad = np.bincount(key, weights=~own_good, minlength=size)
            outage = (total == 0) | (np.floor(u * total) < bad)
        outage = outage.reshape(n, M)
    return outage, feedback.reshape(n, M), silent.reshape(n, M), total.reshape(n, M)


def run_trial(params, mode: SimMode, rng: np.random.Generator) -> TrialRecord:
    outage, feedback, silent, total = _simulate(params, mode, 1, rng)
    return TrialRecord(outage[0], feedback[0], silent[0], total[0])


def block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.default_rng([seed, block])


def _count_block(params, mode, trials, seed, block, beam):
    start = block * BLOCK_TRIALS
    n = min(BLOCK_TRIALS, trials - start)
    outage = _simulate(params, mode, n, block_rng(seed, block))[0]
    return int(outage[:, beam].sum())


def _count_block_star(args):
    return _count_block(*args)


def block_tasks(params, mode, trials, seed, beam=0):
    n_blocks = -(-trials // BLOCK_TRIALS)
    return [(params, mode, trials, seed, b, beam) for b in range(n_blocks)]


def map_tasks(tasks, workers: int = 1):
    """Evaluate block tasks, in order, serially or on a process pool."""
    if workers <= 1 or len(tasks) <= 1:
        return [_count_block_star(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_count_block_star, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


def estimate_outage(params, mode: SimMode, trials: int, seed: int, beam: int = 0,
                    workers: int = 1) -> OutageEstimate:
    """Outage frequency of one beam (beam 0 by default; beams are exchangeable)."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if not 0 <= beam < params.M:
        raise ValueError(f"beam index {beam} out of range for M={params.M}")
    counts = map_tasks(block_tasks(params, mode, trials, seed, beam), workers)
    return OutageEstimate(sum(counts), trials, seed)
