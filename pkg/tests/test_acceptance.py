"""Acceptance criteria, one test each, at the stated tolerances.

Each test prints a ``[PASS]``/``[FAIL]`` line (collected again in the terminal
summary) and then asserts. Criteria that are known to fail at desk scale are
left as hard assertions.
"""

import math

import mpmath
import numpy as np
import pytest

from covertime import cli
from covertime.excursion_chain import (
    NB_CHAIN,
    Y_CHAIN,
    ChainParams,
    first_moment_gap,
    p_bar,
    q_bar_exact,
    second_moment_ratio,
    simulate_counts_batch,
    success_mask,
    union_second_moment_sum,
)
from covertime.green_fn import (
    AnnulusSpec,
    annulus_poisson_kernel,
    green_eval,
    grid_coords,
    harnack_ratio_check,
    hit_time_band,
    inner_exit_prob,
)
from covertime.harness import laplacian_residual
from covertime.lattice_walk import (
    cover_time_torus,
    disk_cover_z2,
    exact_small_cover,
    first_visit_times,
    radius_at_fraction,
    uncovered_radius_hitting_step,
)
from covertime.predictors import bm_cover, kr_cdf, phi_lower, torus_cover
from covertime.rng import substream_seed
from covertime.torus_bm import BmConfig, TorusPoint, cover_time_bm, hitting_time, simulate_annulus_hit

pytestmark = pytest.mark.acceptance

MASTER = 20240601
TWO_PI = 2 * math.pi
# the criterion asks for at least 20; 20 leaves the trend inside the noise
REPS_BM = 200


def test_c01_chain_oracle_exact(acceptance):
    p3 = ChainParams(3, 2.0)
    closed = 59 * math.log(1 - p_bar(2))
    err3 = abs(q_bar_exact(p3) / closed - 1)

    errs4 = []
    mpmath.mp.dps = 50
    lp2 = mpmath.log(3) / (mpmath.log(2) + mpmath.log(3))
    lp3 = mpmath.log(4) / (mpmath.log(3) + mpmath.log(4))
    for a in (2.0, 1.0, 1 / 3):
        params = ChainParams(4, a)
        lo, hi = params.window(3)
        top = params.top
        total = mpmath.fsum(
            mpmath.binomial(top - 1 + l3, l3) * lp3**l3 * (1 - lp3) ** top * (1 - lp2) ** l3
            for l3 in range(lo, hi + 1)
        )
        errs4.append(abs(q_bar_exact(params) / float(mpmath.log(total)) - 1))
    ok = err3 < 1e-12 and max(errs4) < 1e-12
    acceptance("C1 chain oracle (exact)", ok,
               f"q3 rel err {err3:.1e}, q4 brute-force rel err max {max(errs4):.1e} (a=2,1,1/3)")
    assert ok


def test_c02_chain_oracle_monte_carlo(acceptance):
    params = ChainParams(3, 1 / 3)
    assert params.top == 10
    exact = (1 - p_bar(2)) ** 10
    total, hits, chunk = 10**7, 0, 10**6
    for i in range(total // chunk):
        hits += int(success_mask(simulate_counts_batch(params, NB_CHAIN, substream_seed(MASTER, i), chunk), params).sum())
    freq = hits / total
    se = math.sqrt(exact * (1 - exact) / total)
    ok = abs(freq - exact) <= 3 * se
    acceptance("C2 chain oracle (Monte Carlo)", ok,
               f"freq {freq:.4e} vs exact {exact:.4e} (quoted 7.45e-5), |z| = {abs(freq - exact) / se:.2f}")
    assert ok


def test_c03_wald_identity(acceptance):
    worst, worst_raw, ok = 0.0, 0.0, True
    for n in (5, 6, 8):
        params = ChainParams(n, 2.0)
        for method in (Y_CHAIN, NB_CHAIN):
            batch = simulate_counts_batch(params, method, 123, 10**4)
            for k in range(2, n + 1):
                col = batch[:, k - 2]
                mean = col.mean()
                se = col.std(ddof=1) / math.sqrt(col.size)
                # the top count is rounded, so the telescoped mean carries the rounded value
                target = params.top * math.prod(math.log(j + 1) / math.log(j) for j in range(k, n))
                raw = 6 * n * n * math.log(n) ** 2 / math.log(k)
                if se == 0:
                    ok &= mean == target
                    continue
                z = abs(mean - target) / se
                worst = max(worst, z)
                worst_raw = max(worst_raw, abs(mean - raw) / se)
                ok &= z < 3
    acceptance("C3 Wald identity", ok,
               f"max |z| {worst:.2f} against the rounded-top target over n=5,6,8, both chains; "
               f"unrounded zeta n^2 (ln n)^2 / ln k gives max |z| {worst_raw:.2f}")
    assert ok


def test_c04_first_moment_law(acceptance):
    ns = (10, 20, 40, 80, 160)
    gaps = [first_moment_gap(ChainParams(n, 2.0)) for n in ns]
    decreasing = all(b < a for a, b in zip(gaps, gaps[1:]))
    small = all(g <= 1 for n, g in zip(ns, gaps) if n >= 20)
    ok = decreasing and small
    acceptance("C4 first-moment law", ok,
               "gaps " + ", ".join(f"n={n}: {g:.4f}" for n, g in zip(ns, gaps))
               + f"; decreasing={decreasing}, <=1 for n>=20: {small}")
    assert ok


def test_c05_second_moment(acceptance):
    params = ChainParams(20, 2.0)
    ratios = [second_moment_ratio(l, params) for l in range(3, 18)]
    mono = all(b <= a + 1e-9 for a, b in zip(ratios, ratios[1:]))
    sums = [union_second_moment_sum(ChainParams(n, 1.0), 0.5) for n in range(6, 31)]
    dec = all(b < a for a, b in zip(sums, sums[1:]))
    ok = mono and dec
    acceptance("C5 second-moment arithmetic", ok,
               f"pair exponent l=3..17 from {ratios[0]:.2f} to {ratios[-1]:.2f} (non-increasing={mono}); "
               f"log union sum n=6..30 from {sums[0]:.2f} to {sums[-1]:.2f} (decreasing={dec})")
    assert ok


def test_c06_green_function(acceptance, green_1024):
    res = laplacian_residual(green_1024.g_values, 1024, grid_coords(1024), 0.05)
    a00 = abs(green_1024.spectrum[0, 0])
    g = green_1024.smooth
    even = float(np.abs(g - np.roll(g[::-1, ::-1], 1, axis=(0, 1))).max())
    rng = np.random.default_rng(MASTER)
    shift_err = 0.0
    for _ in range(200):
        x, y, s = rng.uniform(-0.5, 0.5, (3, 2))
        if np.hypot(*(x - y)) < 1e-3:
            continue
        base = green_eval(green_1024, TorusPoint(*x), TorusPoint(*y))
        moved = green_eval(green_1024, TorusPoint(*(x + s)), TorusPoint(*(y + s)))
        swapped = green_eval(green_1024, TorusPoint(*y), TorusPoint(*x))
        shift_err = max(shift_err, abs(moved - base), abs(swapped - base))
    ok = res < 1e-3 and a00 < 1e-8 and even < 1e-6 and shift_err < 1e-6
    acceptance("C6 Green's function", ok,
               f"residual {res:.1e}, a00 {a00:.1e}, evenness {even:.1e}, translation/symmetry {shift_err:.1e}")
    assert ok


def test_c07_hitting_time_band(acceptance):
    R, r = 0.2, 0.02
    cfg_dt = (r / 8) ** 2
    times = np.array([
        hitting_time(TorusPoint(0, 0), r, BmConfig(cfg_dt, substream_seed(MASTER, i)), TorusPoint(R, 0.0))
        for i in range(1000)
    ])
    lo, hi = hit_time_band(R, r, 0.2)
    mean = times.mean()
    ok = lo <= mean <= hi
    acceptance("C7 hitting-time band", ok,
               f"mean {mean:.4f} +- {times.std(ddof=1) / math.sqrt(times.size):.4f} in [{lo:.4f}, {hi:.4f}]")
    assert ok


def test_c08_gamblers_ruin(acceptance):
    r, R, reps = 0.01, 0.2, 10**4
    dt = (r / 8) ** 2
    mid = simulate_annulus_hit(math.sqrt(r * R), r, R, dt, reps, substream_seed(MASTER, 0))
    off = simulate_annulus_hit(0.05, r, R, dt, reps, substream_seed(MASTER, 1))
    ok = abs(mid - 0.5) <= 0.01 and abs(off - 0.46276) <= 0.01
    acceptance("C8 gambler's ruin", ok, f"midpoint {mid:.4f} vs 0.5, rho=0.05 {off:.4f} vs 0.46276 (tol 0.01)")
    assert ok


def test_c09_poisson_kernel(acceptance):
    rng = np.random.default_rng(MASTER)
    spec = AnnulusSpec(0.1, 64)
    h = 1e-3
    harm = 0.0
    for _ in range(100):
        rho, arg, u = rng.uniform(0.25, 0.85), rng.uniform(-math.pi, math.pi), rng.uniform(0, TWO_PI)
        x, y = rho * math.cos(arg), rho * math.sin(arg)
        lap = 0.0
        for ex, ey in ((1, 0), (0, 1)):
            vals = [annulus_poisson_kernel(spec, (x + s * h * ex, y + s * h * ey), u) for s in (-2, -1, 0, 1, 2)]
            lap += (-vals[0] + 16 * vals[1] - 30 * vals[2] + 16 * vals[3] - vals[4]) / (12 * h * h)
        harm = max(harm, abs(lap))

    phi = TWO_PI * np.arange(4096) / 4096
    integ, env_ok = 0.0, True
    for r0 in (0.01, 0.05, 0.1, 0.3):
        s = AnnulusSpec(r0, 64)
        for rho in np.linspace(1.2 * r0, 0.95, 20):
            arg = rng.uniform(-math.pi, math.pi)
            xp = (rho * math.cos(arg), rho * math.sin(arg))
            k = annulus_poisson_kernel(s, xp, phi)
            c0 = inner_exit_prob(s, xp)
            integ = max(integ, abs(k.mean() - c0))
            env_ok &= bool(np.all(np.abs(k - c0) <= 2 * r0 / (rho - r0)))

    harnack_ok, worst = True, 1.0
    for r in np.geomspace(1e-5, 4.9e-3, 20):
        radii = np.geomspace(10 * r * (1 + 1e-9), 0.0499, 20)
        args = rng.uniform(-math.pi, math.pi, 20)
        ok_r, w = harnack_ratio_check(float(r), [complex(rad * math.cos(t), rad * math.sin(t)) for rad, t in zip(radii, args)])
        harnack_ok &= ok_r
        worst = max(worst, w)
    ok = harm < 1e-6 and integ < 1e-10 and harnack_ok and env_ok
    acceptance("C9 Poisson kernel", ok,
               f"harmonic residual {harm:.1e}, angular integral err {integ:.1e}, "
               f"ratio bound on 20x20 (r, z): {harnack_ok} (worst ratio {worst:.3f}), envelope M=64: {env_ok}")
    assert ok


@pytest.mark.slow
def test_c10_torus_cover_trend(acceptance):
    ratios = []
    for n in (16, 32, 64, 128):
        vals = [cover_time_torus(n, substream_seed(MASTER + n, i)).cover_steps for i in range(100)]
        ratios.append(float(np.mean(vals)) / torus_cover(n))
    band = all(0.3 < q < 1.1 for q in ratios)
    trend = all(b >= a for a, b in zip(ratios, ratios[1:]))

    small = np.array([cover_time_torus(2, substream_seed(MASTER, i)).cover_steps for i in range(10**5)])
    se = small.std(ddof=1) / math.sqrt(small.size)
    oracle_ok = abs(small.mean() - float(exact_small_cover(2))) < 3 * se
    ok = band and trend and oracle_ok
    acceptance("C10 torus cover trend", ok,
               "ratios " + ", ".join(f"n={n}: {q:.3f}" for n, q in zip((16, 32, 64, 128), ratios))
               + f"; in (0.3, 1.1): {band}; non-decreasing: {trend}; "
               f"n=2 mean {small.mean():.4f} vs 6 (3 se = {3 * se:.4f}): {oracle_ok}")
    assert ok


@pytest.mark.slow
def test_c11_uncovered_radius(acceptance):
    n = 256
    medians = {}
    for alpha in (0.25, 0.5):
        logs = [math.log(max(radius_at_fraction(n, alpha, substream_seed(MASTER, i)), 1e-300)) / math.log(n)
                for i in range(50)]
        medians[alpha] = float(np.median(logs))
    close = all(abs(m - (1 - math.sqrt(a))) <= 0.15 for a, m in medians.items())

    mono = True
    gammas = (0.2, 0.4, 0.6, 0.8)
    for i in range(1000):
        fv = first_visit_times(64, substream_seed(MASTER + 64, i))
        times = [uncovered_radius_hitting_step(fv, 64**g) for g in gammas]
        mono &= times == sorted(times, reverse=True) and times[0] <= int(fv.max())
    ok = close and mono
    acceptance("C11 uncovered radius", ok,
               ", ".join(f"alpha={a}: median {m:.3f} vs {1 - math.sqrt(a):.3f}" for a, m in medians.items())
               + f"; monotone over 1000 seeds at n=64: {mono}")
    assert ok


@pytest.mark.slow
def test_c12_disk_cover(acceptance):
    n = 5
    res = [disk_cover_z2(n, substream_seed(MASTER, i)) for i in range(200)]
    x = np.array([r.log_t_n / math.log(n) ** 2 for r in res])
    counts = np.array([r.n_excursions for r in res])
    grid = np.linspace(0, x.max(), 200)
    cdf = np.array([np.mean(x <= t) for t in grid])
    monotone = bool(np.all(np.diff(cdf) >= 0))
    c4, c8 = float(np.mean(x <= 4)), float(np.mean(x <= 8))
    ordered = (c4 < c8) == (kr_cdf(4) < kr_cdf(8))
    every = bool(np.all(counts >= 1))
    ok = monotone and ordered and every
    acceptance("C12 disc cover machinery", ok,
               f"CDF(4)={c4:.3f} < CDF(8)={c8:.3f} (limit {kr_cdf(4):.3f}, {kr_cdf(8):.3f}); "
               f"min excursions {counts.min()} ({int((counts == 0).sum())} of 200 at 0); "
               f"median excursions {np.median(counts):.0f} vs phi-lower {phi_lower(n):.4f} (reported only); "
               f"far-field replicates {sum(r.far_field for r in res)}")
    assert ok


@pytest.mark.slow
def test_c13_bm_cover_trend(acceptance):
    ratios, errs = {}, {}
    for eps in (0.05, 0.02):
        dt = (eps / 8) ** 2
        res = math.ceil(4 / eps)
        vals = np.array([cover_time_bm(eps, BmConfig(dt, substream_seed(MASTER, i)), res) / bm_cover(eps)
                         for i in range(REPS_BM)])
        ratios[eps] = float(vals.mean())
        errs[eps] = float(vals.std(ddof=1) / math.sqrt(vals.size))
    band = all(0.2 < q < 1.2 for q in ratios.values())
    trend = ratios[0.02] >= ratios[0.05]
    ok = band and trend
    acceptance("C13 BM cover trend", ok,
               f"ratio to (2/pi)(ln eps)^2 over {REPS_BM} replicates: eps=0.05 {ratios[0.05]:.3f} +- {errs[0.05]:.3f}, "
               f"eps=0.02 {ratios[0.02]:.3f} +- {errs[0.02]:.3f}; "
               f"band: {band}; non-decreasing: {trend}")
    assert ok


def test_c14_determinism(acceptance, tmp_path):
    import json

    cfgs = {
        "cover-torus": {"params": {"n": 16}, "replicates": 40},
        "chain-mc": {"params": {"n": 5, "a": 2.0, "level": 3}, "replicates": 40},
        "cover-disk": {"params": {"n": 4}, "replicates": 16},
    }
    ok = True
    for exp, body in cfgs.items():
        path = tmp_path / f"{exp}.json"
        path.write_text(json.dumps({"experiment": exp, "master_seed": MASTER, **body}))
        outs = []
        for tag, workers in (("a", 1), ("b", 1), ("c", 8)):
            out = tmp_path / f"{exp}-{tag}.csv"
            jl = tmp_path / f"{exp}-{tag}.jsonl"
            assert cli.main([exp, "--config", str(path), "--out", str(out), "--jsonl", str(jl),
                             "--workers", str(workers)]) == 0
            outs.append(out.read_bytes() + jl.read_bytes())
        ok &= outs[0] == outs[1] == outs[2]
    acceptance("C14 determinism", ok, "repeat runs and 1- vs 8-worker runs byte-identical for " + ", ".join(cfgs))
    assert ok
