"""Acceptance criteria, each checked at its stated tolerance.

Every test records one PASS/FAIL line; the lines are repeated in the
"acceptance criteria" section at the end of the pytest run.  Seeds are fixed
in advance.
"""

import csv
import itertools
import math
import time

import numpy as np
import pytest
from scipy.stats import kstest, skew

import conftest
from test_plancherel import ACCEPTED_11
from levelstat.cli import main
from levelstat.decomposable import (
    PermutationDistribution,
    all_permutations,
    divergences,
    double_proper_dimension,
    proper_projection,
)
from levelstat.models import MCMCConfig, ModelSpec, checkerboard_chain, draw_shape, exp_family_chain
from levelstat.parallel import map_replicas, replica_rng
from levelstat.plancherel import (
    acceptance_set,
    exact_moments,
    min_h_search,
    plancherel_record,
    sample_shape,
)
from levelstat.rsk import inverse_rsk, level_process, rsk, rsk_shape, y_process
from levelstat.testing import calibrate_h, h_test, shape_set_test, simulate_h
from levelstat.young import hook_lengths, hook_log_sum, log_factorial, partitions_of, syt_count

SEED = 2026



def report(number, checks, gated=True):
    """Record one line for the criterion; fail the test if gated and any check failed.

    ``checks`` is a list of (label, ok, detail).
    """
    ok = all(c[1] for c in checks)
    status = "PASS" if ok else "FAIL"
    if not gated:
        status += " (informational)"
    detail = "; ".join(f"{label}: {detail}{'' if good else ' [miss]'}" for label, good, detail in checks)
    line = f"criterion {number}: {status} | {detail}"
    print(line)
    conftest.ACCEPTANCE_LINES.append(line)
    if gated:
        assert ok, line


def within(x, target, tol):
    return abs(x - target) <= tol


def _lp_stats(n, replicas):
    h = simulate_h(n, replicas, SEED)
    lp = 2 * h - log_factorial(n)
    return lp.mean() / math.sqrt(n), lp.std(ddof=1)


def test_criterion_01_exact_n11():
    t0 = time.perf_counter()
    shapes = list(partitions_of(11))
    p = plancherel_record((5, 3, 2, 1)).prob
    acc = acceptance_set(11, 0.05)
    mass = sum(r.prob for r in acc)
    hooks = hook_lengths((4, 3, 2, 1, 1))
    f = syt_count((4, 3, 2, 1, 1))
    elapsed = time.perf_counter() - t0
    report(1, [
        ("shapes", len(shapes) == 56, f"{len(shapes)}"),
        ("p(5,3,2,1)", within(p, 0.1337, 5e-5), f"{p:.6f}"),
        ("set", {tuple(r.shape) for r in acc} == set(ACCEPTED_11), f"{len(acc)} shapes"),
        ("mass", within(mass, 0.951, 5e-4), f"{mass:.6f}"),
        ("hooks", hooks == ((8, 5, 3, 1), (6, 3, 1), (4, 1), (2,), (1,)), "table"),
        ("f", f == 2310, f"{f}"),
        ("time", elapsed < 1.0, f"{elapsed:.3f}s"),
    ])


@pytest.mark.slow
def test_criterion_02_exact_n121():
    m = exact_moments(121)
    report(2, [
        ("ave", within(m.ave, 1.46, 0.01), f"{m.ave:.6f} vs 1.46"),
        ("sd", within(m.sd, 1.8468, 0.001), f"{m.sd:.6f} vs 1.8468"),
        ("total", within(m.total_prob, 1.0, 1e-9), f"{m.total_prob:.15f} over {m.count} shapes"),
    ])


@pytest.mark.slow
def test_criterion_03_monte_carlo_lp():
    a1331, s1331 = _lp_stats(1331, 10_000)
    a14641, s14641 = _lp_stats(14641, 1_000)
    sd11, sd121 = exact_moments(11).sd, exact_moments(121).sd
    scale = {n: 0.57 * n**0.25 for n in (11, 121, 1331)}
    report(3, [
        ("1331 ave", within(a1331, 1.72, 0.01), f"{a1331:.4f}"),
        ("1331 sd", within(s1331, 3.7652, 0.02 * 3.7652), f"{s1331:.4f}"),
        ("14641 ave", within(a14641, 1.82, 0.01), f"{a14641:.4f}"),
        ("14641 sd", within(s14641, 6.7102, 0.05 * 6.7102), f"{s14641:.4f}"),
        ("scaling 11", within(sd11 / scale[11], 1, 0.15), f"{sd11 / scale[11]:.3f}"),
        ("scaling 121", within(sd121 / scale[121], 1, 0.15), f"{sd121 / scale[121]:.3f}"),
        ("scaling 1331", within(s1331 / scale[1331], 1, 0.15), f"{s1331 / scale[1331]:.3f}"),
    ])


def _ar1_h(spec, rng):
    return hook_log_sum(draw_shape(spec, rng))


@pytest.mark.slow
def test_criterion_04_ar1_table():
    targets = {0.5: (63008, 1, 3.00), 0.95: (63017, 3, 9.23), 0.995: (63129, 30, 101.35)}
    checks = []
    for rho, (mean, tol, sd) in targets.items():
        spec = ModelSpec("ar1", 11**4, rho=rho)
        h = np.array(map_replicas(lambda rng: _ar1_h(spec, rng), 100, SEED, stream=1))
        m, s = h.mean(), h.std(ddof=1)
        checks.append((f"rho {rho} mean", within(m, mean, tol), f"{m:.2f}"))
        checks.append((f"rho {rho} sd", within(s, sd, 0.3 * sd), f"{s:.2f}"))
    report(4, checks)


def test_criterion_05_worked_example():
    perm = (5, 2, 11, 9, 8, 1, 3, 10, 4, 7, 6)
    pair = rsk(perm)
    kappa = level_process(perm)
    report(5, [
        ("kappa", kappa == (1, 2, 1, 1, 3, 1, 2, 3, 4, 2, 5), " ".join(map(str, kappa))),
        ("P rows", pair.p.rows == ((1, 3, 4, 6), (2, 7, 10), (5, 8), (9,), (11,)), str(pair.p.rows)),
    ])


def test_criterion_06_bijection_and_counting():
    round_trip = all(
        inverse_rsk(rsk(p)) == p for n in range(1, 8) for p in itertools.permutations(range(1, n + 1))
    )
    squares = all(sum(syt_count(l) ** 2 for l in partitions_of(n)) == math.factorial(n) for n in range(1, 31))
    extremes = True
    for n in range(2, 31):
        dims = [syt_count(l) for l in partitions_of(n)]
        extremes &= dims.count(1) == 2 and max(dims) ** 2 <= math.factorial(n)
    report(6, [
        ("inverse o rsk = id (n<=7)", round_trip, str(round_trip)),
        ("sum f^2 = n! (n<=30)", squares, str(squares)),
        ("two f=1 and max f <= sqrt(n!)", bool(extremes), str(bool(extremes))),
    ])


def _first_entry(n, rng):
    return y_process(rng.random(n)).rows[0][0]


def test_criterion_07_rescaled_first_entry():
    n = 1000
    z = n * np.array(map_replicas(lambda rng: _first_entry(n, rng), 10_000, SEED, stream=7))
    p = kstest(z, "expon").pvalue
    report(7, [("KS vs Exp(1)", p > 0.01, f"p = {p:.4f}")])


@pytest.mark.slow
def test_criterion_08_test_size():
    reps, alpha = 10_000, 0.05
    se = math.sqrt(alpha * (1 - alpha) / reps)
    checks = []
    for n in (11, 121):
        cal = calibrate_h(n)
        shapes = map_replicas(lambda rng: sample_shape(n, rng), reps, SEED, stream=8)
        rate_set = np.mean([not shape_set_test(l, n, alpha).accept for l in shapes])
        rate_h = np.mean([not h_test(l, cal, alpha).accept for l in shapes])
        checks.append((f"shape_set n={n}", within(rate_set, alpha, 3 * se), f"{rate_set:.4f}"))
        checks.append((f"h_test n={n}", within(rate_h, alpha, 3 * se), f"{rate_h:.4f}"))
    report(8, checks)


def _max_z(out, weights):
    n = out.shape[1]
    codes = (out - 1) @ (n ** np.arange(n))
    ref = (all_permutations(n) - 1) @ (n ** np.arange(n))
    freq = np.array([np.mean(codes == c) for c in ref])
    return float(np.max(np.abs(freq - weights) / np.sqrt(weights * (1 - weights) / len(out))))


@pytest.mark.slow
def test_criterion_09_mcmc_oracle():
    draws = 1_000_000
    rng = np.random.default_rng(SEED)
    checks = []
    for n in (3, 4):
        perms = all_permutations(n)
        a = rng.normal(size=(n, n))
        w = np.exp([sum(a[i, p[i] - 1] for i in range(n)) for p in perms])
        out, _ = checkerboard_chain(a, draws, MCMCConfig(), rng)
        z = _max_z(out, w / w.sum())
        checks.append((f"checkerboard S{n}", z <= 3, f"max |z| {z:.2f}"))
        t = 1.0
        lp = np.array([plancherel_record(rsk_shape(p)).lp for p in perms])
        w = np.exp(t * lp)
        out, _ = exp_family_chain(n, t, draws, MCMCConfig(), rng)
        z = _max_z(out, w / w.sum())
        checks.append((f"exp family S{n}", z <= 3, f"max |z| {z:.2f}"))
    report(9, checks)


@pytest.mark.slow
def test_criterion_10_min_h():
    small = all(
        abs(min_h_search(n)[1] - min(hook_log_sum(l) for l in partitions_of(n))) < 1e-12 for n in range(1, 9)
    )
    n = 11**6
    lam, h = min_h_search(n, restarts=1, rng=replica_rng(SEED, 0, 10))
    cal = calibrate_h(n, replicas=3, seed=SEED)
    d = h_test(lam, cal)
    report(10, [
        ("exhaustive n<=8", small, str(small)),
        ("H_min", h <= 11_859_260, f"{h:.2f}"),
        ("h_test", not d.accept and abs(d.z) > 10, f"z = {d.z:.1f} (MC mean {cal.mean:.1f}, sd {cal.sd:.2f})"),
    ])


def test_criterion_11_decomposability(capsys):
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for n in (2, 3, 4, 5):
        perms = all_permutations(n)
        for _ in range(5):
            d = rng.dirichlet(np.ones(len(perms)))
            proj = proper_projection(PermutationDistribution.explicit(perms, d))
            ps = proj.prob(perms)
            gap = np.sum(d * np.log(d * len(perms))) - np.sum(d * np.log(d / ps)) - proj.kl_to_uniform()
            worst = max(worst, abs(gap))
    code = main(["decompose", "--shape", "5,3,2,1"])
    csv_out = capsys.readouterr().out
    header, row = csv_out.strip().splitlines()
    fields = dict(zip(header.split(","), next(csv.reader([row]))))
    emitted = all(fields.get(k) for k in ("kl_to_uniform", "d_to_uniform", "d_to_proper")) and fields["reference_value"] == "7.5"
    dim = double_proper_dimension(4)
    report(11, [
        ("Pythagorean", worst < 1e-8, f"max gap {worst:.1e}"),
        ("n=11 run", code == 0 and emitted,
         f"D(P*||U) {float(fields['kl_to_uniform']):.4f}, D(d||U) {float(fields['d_to_uniform']):.4f}, "
         f"D(d||P*) {float(fields['d_to_proper']):.4f}, reference 7.5"),
        ("dim(4)", dim == 14, f"{dim}"),
    ])


@pytest.mark.slow
def test_criterion_12_h_skewness():
    h = simulate_h(11**4, 20_000, SEED, stream=12)
    g = skew(h)
    report(12, [("|skew|", abs(g) < 0.15, f"{g:.4f}")], gated=False)


def test_criterion_13_determinism(tmp_path, capsys):
    outs = []
    for w in ("1", "2"):
        d = tmp_path / f"w{w}"
        main(["simulate", "--model", "iid_uniform", "--n", "300", "--replicas", "40", "--seed", "99", "--workers", w, "--out", str(d)])
        main(["power", "--model", "ar1", "--rho", "0.6", "--n", "60", "--replicas", "40", "--seed", "99",
              "--workers", w, "--calibration-replicas", "50", "--out", str(d)])
        main(["figures", "--figure", "h-hist", "--n", "80", "--replicas", "40", "--seed", "99", "--workers", w, "--out", str(d)])
        outs.append({p.name: p.read_bytes() for p in sorted(d.iterdir())})
    capsys.readouterr()
    same = outs[0] == outs[1] and len(outs[0]) == 4
    report(13, [("byte-identical", same, f"{len(outs[0])} files")])
