"""Exit criteria, run at their stated tolerances on the Fig. 2 setting."""
import dataclasses
import io
import math
from pathlib import Path

import mpmath as mp
import numpy as np
import pytest
from scipy import stats

from conftest import ks_distance
from obfwpt import analytic
from obfwpt.channel import complex_gaussian, constructive_powers, draw_beams, \
    sinr_direct_sample, sinr_from_powers
from obfwpt.config import SystemParams, parse_config
from obfwpt.energy import HarvestParams, derived_constants, draw_wpt
from obfwpt.geometry import AnnulusRegion, sample_radii
from obfwpt.sim import SimMode, estimate_outage
from obfwpt.specfun import gamma_fn, lower_incomplete_gamma, regularized_gamma_p_integer, \
    upper_incomplete_gamma
from obfwpt.sweep import emit_csv, run_sweep

GRID = tuple(float(p) for p in range(10, 51, 5))
KS_MAX = 0.003
N_KS = 1_000_000


@pytest.fixture(scope="module")
def fig2_rows():
    params = SystemParams(pt_dbm=GRID, trials=100_000, seed=2015)
    return run_sweep(params)


def pick(rows, scheme, combiner="", coupling=""):
    out = [r for r in rows if (r.scheme, r.combiner, r.coupling) == (scheme, combiner, coupling)]
    assert [r.pt_dbm for r in out] == list(GRID)
    return out


def test_1_decoupled_simulation_matches_theorem(fig2_rows, criterion):
    worst = 0.0
    for combiner in ("dc", "rf"):
        for r in pick(fig2_rows, "one_bit", combiner, "decoupled"):
            tol = max(0.01, 3 * r.se)
            worst = max(worst, abs(r.outage_sim - r.outage_analytic) / tol)
    assert criterion(1, worst <= 1.0, f"max |sim - analytic| / tolerance = {worst:.3f} "
                     f"(tolerance max(0.01, 3 SE), 1e5 trials, DC and RF, 10..50 dBm)")


def test_2_high_power_asymptote(criterion):
    p = SystemParams(pt_dbm=100.0)
    inp = p.analytic_inputs()
    floor = math.exp(-inp.lam / inp.M * inp.region.area()
                     * (1 - analytic.sinr_cdf_asymptotic(inp.delta, inp.M, inp.N)))
    details, ok = [], abs(floor - 0.0730) < 5e-5
    for combiner in ("dc", "rf"):
        gap = abs(analytic.beam_outage(inp, combiner) - floor)
        est = estimate_outage(p, SimMode("one_bit", combiner, "decoupled"), 1_000_000, 100)
        z = abs(est.p_hat - floor) / est.se
        ok &= gap < 1e-3 and z <= 3
        details.append(f"{combiner}: analytic gap {gap:.2e}, sim {est.p_hat:.5f} ({z:.2f} SE)")
    assert criterion(2, ok, f"floor {floor:.5f}; " + "; ".join(details))


def test_3_combiner_ordering(criterion):
    base = SystemParams(pt_dbm=50.0, N=6, L=4)
    ideal = base.analytic_inputs()
    dc, rf = analytic.beam_outage(ideal, "dc"), analytic.beam_outage(ideal, "rf")
    lossy = dataclasses.replace(base, e_dc=0.5).analytic_inputs()
    dc_l, rf_l = analytic.beam_outage(lossy, "dc"), analytic.beam_outage(lossy, "rf")
    ok = dc < rf and rf_l < dc_l
    assert criterion(3, ok, f"e_d=1: DC {dc:.5f} < RF {rf:.5f}; e_d=0.5: RF {rf_l:.5f} < DC {dc_l:.5f}")


def test_4_benchmark_ordering(fig2_rows, criterion):
    full = pick(fig2_rows, "full_feedback")
    rand = pick(fig2_rows, "random_assignment")
    bad = []
    for combiner in ("dc", "rf"):
        for coupling in ("decoupled", "coupled"):
            for f, o, r in zip(full, pick(fig2_rows, "one_bit", combiner, coupling), rand):
                if f.outage_sim > o.outage_sim + 2 * math.hypot(f.se, o.se):
                    bad.append(f"full>{combiner}/{coupling}@{f.pt_dbm:g}")
                if o.outage_sim > r.outage_sim + 2 * math.hypot(o.se, r.se):
                    bad.append(f"{combiner}/{coupling}>random@{o.pt_dbm:g}")
    assert criterion(4, not bad, "full_feedback <= one_bit <= random_assignment within 2 SE "
                     f"at all points" if not bad else "violations: " + ", ".join(bad))


def test_5_closed_form_consistency(criterion):
    rng = np.random.default_rng(55)
    worst_rel = 0.0
    for _ in range(100):
        p = SystemParams(
            pt_dbm=float(rng.uniform(0, 120)),
            alpha=float(rng.choice([2.5, 3.0, 3.5, 4.0])),
            L=int(rng.choice([1, 2, 4, 8, 15])),
            e_dc=float(rng.choice([1.0, 0.5, 0.25])),
        )
        inp = p.analytic_inputs()
        for c in ("dc", "rf"):
            a = analytic.active_intensity(inp, c)
            b = analytic.active_intensity_closed_form(inp, c)
            if a or b:
                worst_rel = max(worst_rel, abs(a - b) / max(abs(a), abs(b)))

    mp.mp.dps = 30
    worst_abs = 0.0
    for pt in (10.0, 30.0, 50.0, 70.0, 100.0):
        for N in (2, 6):
            inp = SystemParams(pt_dbm=pt, N=N).analytic_inputs()
            for x in np.logspace(-1, 2, 13):
                f = lambda r: (1 - mp.e ** (-x * r**3 / inp.p_t) / mp.mpf(x + 1)) ** N * r / 48
                ref = float(mp.quad(f, mp.linspace(2, 10, 9)))
                worst_abs = max(worst_abs, abs(analytic.sinr_cdf(x, inp) - ref))
    ok = worst_rel <= 1e-12 and worst_abs <= 1e-8
    assert criterion(5, ok, f"intensity identity max rel err {worst_rel:.1e} (<=1e-12); "
                     f"SINR CDF vs quadrature max abs err {worst_abs:.1e} (<=1e-8)")


def test_6_special_functions(criterion):
    rng = np.random.default_rng(66)
    worst = 0.0
    for s, x in zip(rng.uniform(0.05, 40, 1000), rng.uniform(0, 100, 1000)):
        g = gamma_fn(s)
        worst = max(worst, abs(lower_incomplete_gamma(s, x) + upper_incomplete_gamma(s, x) - g) / g)
    sqrt_pi = abs(gamma_fn(0.5) - math.sqrt(math.pi)) / math.sqrt(math.pi)
    worst_p = 0.0
    for L in range(1, 65):
        for x in np.linspace(0, 3 * L, 25):
            cont = lower_incomplete_gamma(L, x) / gamma_fn(L)
            worst_p = max(worst_p, abs(regularized_gamma_p_integer(L, x) - cont))
    ok = worst <= 1e-10 and sqrt_pi <= 1e-12 and worst_p <= 1e-10
    assert criterion(6, ok, f"identity rel err {worst:.1e}; Gamma(1/2) rel err {sqrt_pi:.1e}; "
                     f"integer vs continuous P {worst_p:.1e}")


def test_7_distributional_oracles(criterion):
    rng = np.random.default_rng(77)
    L = 4
    g = draw_wpt(L, rng, N_KS)
    z = np.sum(np.abs(g) ** 2, axis=-1)
    ks_z = ks_distance(z, np.vectorize(lambda v: regularized_gamma_p_integer(L, v)))
    ks_z1 = ks_distance(np.abs(g.sum(axis=-1)) ** 2, lambda v: 1 - np.exp(-v / L))

    noise = 5.0**3 / 10.0
    beams = draw_beams(2, rng, size=N_KS)
    h = complex_gaussian(rng, (N_KS, 2, 2))
    sc = sinr_from_powers(constructive_powers(h, beams), noise)[:, 0]
    direct = sinr_direct_sample(2, 2, 5.0, 3.0, 10.0, rng, size=N_KS)
    ks_sinr = stats.ks_2samp(sc, direct).statistic

    region = AnnulusRegion(2, 10)
    ks_r = ks_distance(sample_radii(region, N_KS, rng), region.radial_cdf)
    vals = {"Z~Gamma(L,1)": ks_z, "Z1~Exp(L)": ks_z1, "sc vs direct": ks_sinr, "radius": ks_r}
    ok = all(v < KS_MAX for v in vals.values())
    assert criterion(7, ok, "KS " + ", ".join(f"{k} {v:.4f}" for k, v in vals.items())
                     + f" (< {KS_MAX})")


def test_8_deterministic_csv(criterion):
    params = parse_config("pt_dbm: [50, 60]\ntrials: 20000\nseed: 8\n")
    outputs = []
    for workers in (1, 4, 16):
        buf = io.StringIO()
        emit_csv(run_sweep(params, workers=workers), buf)
        outputs.append(buf.getvalue().encode("utf-8"))
    ok = outputs[0] == outputs[1] == outputs[2]
    assert criterion(8, ok, f"{len(outputs[0])} CSV bytes identical at workers 1, 4, 16")


def test_9_coupling_report(fig2_rows, tmp_path_factory, criterion):
    path = Path(tmp_path_factory.mktemp("report")) / "coupling_fig2.csv"
    rows = [r for r in fig2_rows if r.scheme == "one_bit"]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        emit_csv(rows, fh)
    written = path.read_text().splitlines()
    bad, gaps = [], []
    for combiner in ("dc", "rf"):
        curves = {c: pick(fig2_rows, "one_bit", combiner, c) for c in ("coupled", "decoupled")}
        for coupling, curve in curves.items():
            for a, b in zip(curve, curve[1:]):
                if b.outage_sim > a.outage_sim + 2 * math.hypot(a.se, b.se):
                    bad.append(f"{combiner}/{coupling}@{b.pt_dbm:g}")
        gaps.append(max(abs(c.outage_sim - d.outage_sim)
                        for c, d in zip(curves["coupled"], curves["decoupled"])))
    ok = len(written) == 1 + 4 * len(GRID) and not bad
    detail = (f"report {path.name} with {len(written) - 1} rows; monotone within 2 SE"
              if not bad else "non-monotone: " + ", ".join(bad))
    detail += f"; max coupled-decoupled gap DC {gaps[0]:.4f}, RF {gaps[1]:.4f}"
    assert criterion(9, ok, detail)
