"""Downlink physical layer for opportunistic beamforming.

Beams are the columns of an ``(M, M)`` unitary matrix. Beam indices are
zero-based. The SINR noise term is ``d**alpha / p_t`` (noise-normalized
transmit power).
"""
import numpy as np


def complex_gaussian(rng: np.random.Generator, size) -> np.ndarray:
    """Circularly-symmetric complex normals with unit total variance."""
    shape = tuple(np.atleast_1d(size)) if size is not None else ()
    z = rng.standard_normal(shape + (2,))
    z *= np.sqrt(0.5)
    return z.view(np.complex128)[..., 0]


def draw_beams(M: int, rng: np.random.Generator, size=None) -> np.ndarray:
    """Haar-distributed random unitary matrices; column ``m`` is beam ``m``.

    ``size`` adds leading batch dimensions.
    """
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    shape = (M, M) if size is None else tuple(np.atleast_1d(size)) + (M, M)
    q, r = np.linalg.qr(complex_gaussian(rng, shape))
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    # rotate columns so that R has a positive real diagonal; plain QR is not Haar
    phase = diag / np.abs(diag)
    return q * phase[..., None, :]


def beam_sinr(h_row, beams, l: int, d: float, alpha: float, p_t: float) -> float:
    proj = np.abs(np.asarray(h_row) @ beams) ** 2
    interference = proj.sum() - proj[l]
    return proj[l] / (d**alpha / p_t + interference)


def sc_sinr(h, beams, l: int, d: float, alpha: float, p_t: float) -> float:
    """Selection combining: best antenna row of ``h`` (shape ``(N, M)``)."""
    return max(beam_sinr(row, beams, l, d, alpha, p_t) for row in np.atleast_2d(h))


def sinr_from_powers(power: np.ndarray, noise) -> np.ndarray:
    """Selection-combined SINR for every beam.

    ``power[..., j, m]`` is the projected power of antenna ``j`` onto beam
    ``m``; ``noise`` broadcasts against the leading dimensions. Returns an
    array of shape ``power.shape[:-2] + (M,)``.
    """
    noise = np.asarray(noise, dtype=float)[..., None]
    # explicit loops over the short antenna and beam axes beat numpy's axis reductions
    total = power[..., 0]
    for m in range(1, power.shape[-1]):
        total = total + power[..., m]
    best = None
    for j in range(power.shape[-2]):
        row = power[..., j, :]
        sinr = row / (noise + (total[..., j, None] - row))
        best = sinr if best is None else np.maximum(best, sinr)
    return best


def constructive_powers(h: np.ndarray, beams: np.ndarray) -> np.ndarray:
    """``|h_j^T u_m|^2`` for channel rows ``h`` (..., N, M) and beams (..., M, M)."""
    return np.abs(h @ beams) ** 2


def direct_powers(rng: np.random.Generator, size, N: int, M: int) -> np.ndarray:
    # projections of an isotropic Gaussian row on an orthonormal basis are i.i.d. Exp(1)
    return rng.standard_exponential(tuple(np.atleast_1d(size)) + (N, M))


def sinr_direct_sample(M: int, N: int, d, alpha: float, p_t: float,
                       rng: np.random.Generator, size=None):
    """Selection-combined beam SINR sampled without building beams.

    Each antenna contributes ``X / (d**alpha / p_t + S)`` with ``X ~ Exp(1)``
    and ``S`` the sum of ``M - 1`` unit exponentials; the maximum over the
    ``N`` antennas is returned.
    """
    shape = () if size is None else tuple(np.atleast_1d(size))
    x = rng.standard_exponential(shape + (N,))
    s = rng.standard_gamma(M - 1, shape + (N,)) if M > 1 else np.zeros(shape + (N,))
    noise = np.asarray(d, dtype=float) ** alpha / p_t
    out = (x / (np.expand_dims(noise, -1) + s)).max(axis=-1)
    return float(out) if size is None and np.ndim(out) == 0 else out
