"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line with the measured numbers; the lines are
printed as they happen and again in the pytest terminal summary. Run
standalone with ``python3 tests/test_acceptance.py`` for just the table.
"""

import math
import time

import numpy as np
import pytest

from paritylab import experiments as ex
from paritylab.decomposition import decompose, reconstruct
from paritylab.graph import planted_instance, sample_gnp_half
from paritylab.maximizer import maximize, top_eigenvector
from paritylab.oracle import check_partition_identity, check_u_approx, concentration_tail
from paritylab.recovery import RecoveryConfig, prefix_density_diagnostic, overlap_diagnostic, recover
from paritylab.tensor import dense_materialize, evaluate, evaluate_block, evaluate_symmetric, gradient

RESULTS = []


def record(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def _contract(D, xs):
    for x in xs:
        D = np.tensordot(x, D, axes=(0, 0))
    return float(D)


def _rel(a, b):
    return abs(a - b) / max(1.0, abs(b))


def test_01_oracle_equivalence():
    start = time.perf_counter()
    rng = np.random.default_rng(1)
    worst, bad = 0.0, 0
    for n in range(1, 11):
        for r in (2, 3, 4):
            g = sample_gnp_half(n, 100 * n + r)
            D = dense_materialize(g, r).astype(np.float64)
            if n >= r:
                blocks = np.array_split(rng.permutation(n), r)
                mask = np.zeros(D.shape)
                mask[np.ix_(*blocks)] = 1.0
            for _ in range(100):
                xs = [rng.standard_normal(n) for _ in range(r)]
                err = _rel(evaluate(g, xs), _contract(D, xs))
                if n >= r:
                    err = max(err, _rel(evaluate_block(g, [b.tolist() for b in blocks], xs), _contract(D * mask, xs)))
                worst = max(worst, err)
                bad += err > 1e-9
    secs = time.perf_counter() - start
    record(1, "evaluate/evaluate_block vs dense", bad == 0 and secs < 60,
           f"violations={bad} worst_rel={worst:.2e} (tol 1e-9) time={secs:.1f}s (limit 60s)")


def test_02_indicator_decomposition():
    rng = np.random.default_rng(2)
    bad, worst_ratio = 0, 0.0
    for n in (8, 64, 256):
        for r in (2, 3, 4):
            N = math.ceil(r * math.log2(n))
            bound = math.sqrt(n) * 2.0**-N
            for _ in range(10_000):
                x = rng.standard_normal(n)
                x *= rng.random() ** (1.0 / n) / np.linalg.norm(x)
                comps = decompose(x, N)
                err = np.linalg.norm(x - reconstruct(comps, n))
                worst_ratio = max(worst_ratio, err / bound)
                bad += err > bound or any(c.norm > 1.0 for c in comps)
    record(2, "indicator decomposition bounds", bad == 0,
           f"violations={bad} over 90000 vectors, worst residual/bound={worst_ratio:.3f}")


def test_03_gradient():
    rng = np.random.default_rng(3)
    bad, worst = 0, 0.0
    h = 1e-4
    for r in (2, 3, 4):
        for trial in range(100):
            g = sample_gnp_half(8, 1000 * r + trial)
            x = rng.standard_normal(8)
            grad = gradient(g, r, x)
            fd = np.array([
                (evaluate_symmetric(g, r, x + h * e) - evaluate_symmetric(g, r, x - h * e)) / (2 * h) for e in np.eye(8)
            ])
            err = np.max(np.abs(grad - fd)) / max(1.0, np.max(np.abs(fd)))
            worst = max(worst, err)
            bad += err > 1e-6
    record(3, "gradient vs central differences", bad == 0, f"violations={bad}/300 worst_rel={worst:.2e} (tol 1e-6)")


def test_04_r2_pipeline():
    start = time.perf_counter()
    wins = 0
    for trial in range(20):
        inst = planted_instance(1024, 320, ex.derive_seed(4, "acceptance", 0, trial))
        res = maximize(inst.graph, 2, seed=trial)
        rep = recover(inst.graph, 320, res.x, RecoveryConfig(r=2, trial_budget_per_ell=50, seed=trial))
        wins += rep.found and np.array_equal(rep.clique, inst.clique)
    secs = time.perf_counter() - start
    record(4, "r=2 pipeline n=1024 p=320", wins >= 18 and secs < 120,
           f"exact recoveries {wins}/20 (need 18) time={secs:.1f}s (limit 120s)")


def test_05_r3_oracle_vector():
    start = time.perf_counter()
    inst = planted_instance(256, 16, 5)
    x = np.zeros(256)
    x[inst.clique] = 1 / 4
    runs = [recover(inst.graph, 16, x, RecoveryConfig(r=3)) for _ in range(2)]
    secs = time.perf_counter() - start
    ok = all(r.found and np.array_equal(r.clique, inst.clique) for r in runs)
    ok = ok and runs[0].found_level == runs[1].found_level == 3 and secs < 10
    record(5, "r=3 recovery from clique indicator", ok,
           f"found={[r.found for r in runs]} level={runs[0].found_level} (expect 3) time={secs:.1f}s (limit 10s)")


def test_06_r3_maximizer_pipeline():
    p, n = 64, 512
    value_ok = wins = 0
    worst = math.inf
    for trial in range(20):
        inst = planted_instance(n, p, ex.derive_seed(6, "acceptance", 0, trial))
        warm = np.zeros(n)
        warm[inst.clique] = 1.0
        res = maximize(inst.graph, 3, restarts=4, iters_per_restart=30, seed=trial, warm_start=warm)
        ratio = res.value / p**1.5
        worst = min(worst, ratio)
        value_ok += ratio >= 0.9
        rep = recover(inst.graph, p, res.x, RecoveryConfig(r=3, trial_budget_per_ell=200, seed=trial))
        wins += rep.found and np.array_equal(rep.clique, inst.clique)
    record(6, "r=3 maximizer + recovery n=512 p=64", value_ok == 20 and wins >= 18,
           f"value>=0.9 p^1.5 in {value_ok}/20 (min ratio {worst:.4f}), recoveries {wins}/20 (need 18)")


def test_07_norm_scaling():
    grid = (64, 128, 256, 512)
    worst = 0.0
    bad = 0
    for seed in range(5):
        vals = [maximize(sample_gnp_half(n, 7000 + 10 * seed + i), 3, restarts=8, iters_per_restart=40, seed=seed).value
                for i, n in enumerate(grid)]
        ratios = [b / a for a, b in zip(vals, vals[1:])]
        worst = max(worst, max(ratios))
        bad += sum(r > 1.6 for r in ratios)
    record(7, "r=3 norm growth value(2n)/value(n)", bad == 0, f"violations={bad}/15 worst ratio={worst:.3f} (limit 1.6)")


def test_08_overlap_claim():
    n, p, size = 1024, 64, 256
    passes = dense = 0
    for trial in range(100):
        inst = planted_instance(n, p, ex.derive_seed(8, "acceptance", 0, trial))
        rng = np.random.default_rng(trial)
        others = np.setdiff1d(np.arange(n), inst.clique)
        S = np.union1d(inst.clique, rng.choice(others, size=size - p, replace=False))
        eig = top_eigenvector(inst.graph, S, seed=trial)
        stat, ok = overlap_diagnostic(eig.vector, S, inst.clique)
        if ok:
            passes += 1
            sign = 1.0 if eig.vector[np.isin(S, inst.clique)].sum() >= 0 else -1.0
            ordered = S[np.argsort(-sign * eig.vector, kind="stable")]
            dense += prefix_density_diagnostic(ordered, inst.clique)[0]
    record(8, "eigenvector overlap and prefix density", passes >= 95 and dense == passes,
           f"overlap passes {passes}/100 (need 95), prefix dense in {dense}/{passes} passing trials")


def test_09_concentration():
    est = concentration_tail(64, 64, 64.0, 10_000, 9)
    small = concentration_tail(16, 16, 8 * 16.0, 10_000, 9)
    informative = small.paper_bound < 1
    tail_ok = (not informative) or small.empirical_rate <= small.paper_bound
    ok = 0.9 * 64 <= est.mean <= 1.1 * 64 and est.max <= 3 * 64 and tail_ok
    record(9, "concentration sampler", ok,
           f"mean={est.mean:.2f} in [57.6, 70.4], max={est.max:.1f} <= 192; N=16 t=128 rate={small.empirical_rate} "
           f"bound={small.paper_bound:.3g} ({'checked' if informative else 'bound >= 1, vacuous'})")


def test_10_small_lemmas():
    g = sample_gnp_half(6, 10)
    u = check_u_approx(g, 3, 10_000, 10)
    ineq, ident = check_partition_identity(g, 3, 100, 10)
    record(10, "exact small-n checks at n=6 r=3", u.passed and ineq.passed and ident.passed,
           f"u_approx violations={u.violations} (max lhs {u.lhs:.3f} <= rhs {u.rhs:.1f}); partition "
           f"inequality violations={ineq.violations}, identity violations={ident.violations} over 90 partitions")


def test_11_determinism(tmp_path):
    configs = {
        "norm-scaling": dict(n_grid=[16, 32], trials=2, restarts=2, iters=10, planted=True),
        "recovery-threshold": dict(n_grid=[64], p_grid=[16, 32], trials=2, restarts=2, iters=10, trial_budget=20),
        "concentration": dict(n_grid=[16, 64], samples=1000),
        "oracle-suite": dict(n_grid=[6], samples=500, tuples=20),
    }
    same = []
    for kind, extra in configs.items():
        a, b = tmp_path / f"{kind}-a.csv", tmp_path / f"{kind}-b.csv"
        ex.write_experiment(ex.ExperimentSpec(kind=kind, seed=11, **extra), output=str(a))
        ex.write_experiment(ex.ExperimentSpec(kind=kind, seed=11, **extra), output=str(b))
        same.append(a.read_bytes() == b.read_bytes())
    record(11, "byte-identical experiment reruns", all(same), f"{sum(same)}/{len(same)} kinds identical")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s", "-p", "no:cacheprovider"]))
