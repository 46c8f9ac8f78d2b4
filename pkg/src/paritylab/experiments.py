"""Seeded experiment grids that write deterministic CSV files.

An experiment is described by a flat ``key = value`` config file::

    kind = norm-scaling
    n_grid = 64, 128, 256
    r = 3
    trials = 5
    seed = 1

Every (cell, trial) pair gets its own seed, derived from the master seed,
the experiment kind, the cell index and the trial index through numpy's
SeedSequence hash (``derive_seed``). Rows are written in (cell, trial) order
after all work finishes, and floats are written with ``repr`` so a rerun
reproduces the file byte for byte.
"""

from __future__ import annotations

import csv
import io
import math
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from .decomposition import decompose, default_depth, reconstruct
from .errors import InvalidArgument, ResourceLimitError
from .graph import planted_instance, sample_gnp_half
from .maximizer import maximize
from .oracle import (
    check_partition_identity,
    check_u_approx,
    concentration_vectors,
    sample_quadratic_sums,
    summarize_tail,
    tail_bound,
)
from .recovery import RecoveryConfig, recover
from .tensor import dense_materialize, evaluate, evaluate_block, evaluate_symmetric, gradient

KINDS = ("norm-scaling", "recovery-threshold", "concentration", "oracle-suite")
# largest n^r a single gradient evaluation may cost
EVAL_COST_GUARD = 10**11

SCHEMAS = {
    "norm-scaling": ["n", "r", "trial", "seed", "value", "value_per_sqrt_n", "value_per_bound_shape"],
    "recovery-threshold": ["n", "r", "p", "trial", "seed", "success", "maximizer_value", "trials_used", "ms"],
    "concentration": ["N", "Nprime", "t", "samples", "exceed", "rate", "paper_bound"],
    "oracle-suite": ["check", "n", "r", "samples", "violations", "lhs", "rhs", "passed"],
}
PLANTED_COLUMNS = ["p", "planted_value", "planted_per_clique_scale"]


class UsageError(InvalidArgument):
    """The experiment config is incomplete or inconsistent."""


@dataclass
class ExperimentSpec:
    kind: str
    n_grid: List[int] = field(default_factory=list)
    r: int = 3
    p_grid: List[int] = field(default_factory=list)
    trials: int = 1
    alpha: float = 1.0
    seed: int = 0
    output: Optional[str] = None
    restarts: int = 8
    iters: int = 50
    warm_start: bool = False
    planted: bool = False
    trial_budget: int = 200
    t_grid: List[float] = field(default_factory=lambda: [1.0, 2.0, 3.0])
    nprime: Optional[int] = None
    samples: int = 10000
    v_source: str = "unit-random"
    tuples: int = 100
    timing: bool = False
    workers: int = 1

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise UsageError(f"unknown experiment kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        if not self.n_grid:
            raise UsageError("n_grid must be nonempty")
        if self.kind == "recovery-threshold" and not self.p_grid:
            raise UsageError("p_grid must be nonempty for recovery-threshold")
        for name in ("n_grid", "p_grid", "t_grid"):
            grid = getattr(self, name)
            if list(grid) != sorted(grid) or len(set(grid)) != len(grid):
                raise UsageError(f"{name} must be strictly ascending")
        if self.trials < 1:
            raise UsageError("trials must be >= 1")
        if self.r < 2:
            raise UsageError("r must be >= 2")
        if not 0 < self.alpha <= 1:
            raise UsageError("alpha must lie in (0, 1]")


_LIST_KEYS = {"n_grid": int, "p_grid": int, "t_grid": float}
_BOOL_KEYS = {"warm_start", "planted", "timing"}


def parse_config(text: str, kind: Optional[str] = None) -> ExperimentSpec:
    """Parse ``key = value`` lines; '#' starts a comment, lists are comma-separated."""
    types = {f.name: f.type for f in fields(ExperimentSpec)}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {lineno}: expected key = value")
        key, val = (part.strip() for part in line.split("=", 1))
        if key not in types:
            raise UsageError(f"config line {lineno}: unknown key {key!r}")
        try:
            if key in _LIST_KEYS:
                values[key] = [_LIST_KEYS[key](tok) for tok in val.split(",") if tok.strip()]
            elif key in _BOOL_KEYS:
                if val.lower() not in ("true", "false", "1", "0", "yes", "no"):
                    raise ValueError(val)
                values[key] = val.lower() in ("true", "1", "yes")
            elif key in ("kind", "output", "v_source"):
                values[key] = val
            elif key == "alpha":
                values[key] = float(val)
            else:
                values[key] = int(val)
        except ValueError:
            raise UsageError(f"config line {lineno}: bad value {val!r} for {key}") from None
    if kind is not None:
        if "kind" in values and values["kind"] != kind:
            raise UsageError(f"config kind {values['kind']!r} does not match {kind!r}")
        values["kind"] = kind
    if "kind" not in values:
        raise UsageError("config must name a kind")
    spec = ExperimentSpec(**values)
    spec.validate()
    return spec


def derive_seed(master: int, kind: str, cell: int, trial: int) -> int:
    """64-bit seed from SeedSequence([master, crc32(kind), cell, trial])."""
    ss = np.random.SeedSequence([master, zlib.crc32(kind.encode()), cell, trial])
    return int(ss.generate_state(1, np.uint64)[0])


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def to_csv(columns: Sequence[str], rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in columns])
    return buf.getvalue()


def _map(fn, tasks, workers: int):
    if workers <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


def _check_cost(n: int, r: int) -> None:
    if n**r > EVAL_COST_GUARD:
        raise ResourceLimitError(f"cell n={n}, r={r}: n^r = {n**r} exceeds evaluation guard {EVAL_COST_GUARD}")


def bound_shape(n: int, r: int) -> float:
    """sqrt(n) * ln(n)^((3r - 1) / 2), the n-dependence of the norm bound."""
    return math.sqrt(n) * math.log(n) ** ((3 * r - 1) / 2)


# -- norm scaling -----------------------------------------------------------


def _norm_task(task):
    spec, cell, n, trial = task
    seed = derive_seed(spec.seed, spec.kind, cell, trial)
    g = sample_gnp_half(n, seed)
    res = maximize(g, spec.r, restarts=spec.restarts, iters_per_restart=spec.iters, seed=seed)
    row = {
        "n": n,
        "r": spec.r,
        "trial": trial,
        "seed": seed,
        "value": res.value,
        "value_per_sqrt_n": res.value / math.sqrt(n),
        "value_per_bound_shape": res.value / bound_shape(n, spec.r),
    }
    if spec.planted:
        p = min(n, math.ceil(4 * n ** (1.0 / spec.r)))
        inst = planted_instance(n, p, seed)
        warm = np.zeros(n)
        warm[inst.clique] = 1.0
        pres = maximize(
            inst.graph, spec.r, restarts=spec.restarts, iters_per_restart=spec.iters, seed=seed, warm_start=warm
        )
        row.update(p=p, planted_value=pres.value, planted_per_clique_scale=pres.value / p ** (spec.r / 2))
    return row


def run_norm_scaling(spec: ExperimentSpec) -> str:
    for n in spec.n_grid:
        _check_cost(n, spec.r)
    tasks = [(spec, cell, n, trial) for cell, n in enumerate(spec.n_grid) for trial in range(spec.trials)]
    rows = _map(_norm_task, tasks, spec.workers)
    columns = SCHEMAS["norm-scaling"] + (PLANTED_COLUMNS if spec.planted else [])
    return to_csv(columns, rows)


# -- recovery threshold -----------------------------------------------------


def _recovery_task(task):
    spec, cell, n, p, trial = task
    seed = derive_seed(spec.seed, spec.kind, cell, trial)
    start = time.perf_counter()
    inst = planted_instance(n, p, seed)
    warm = None
    if spec.warm_start:
        warm = np.zeros(n)
        warm[inst.clique] = 1.0
    restarts = math.ceil(spec.restarts / spec.alpha)
    res = maximize(inst.graph, spec.r, restarts=restarts, iters_per_restart=spec.iters, seed=seed, warm_start=warm)
    cfg = RecoveryConfig(r=spec.r, trial_budget_per_ell=spec.trial_budget, seed=seed)
    rep = recover(inst.graph, p, res.x, cfg)
    success = rep.found and np.array_equal(rep.clique, inst.clique)
    elapsed = int(round((time.perf_counter() - start) * 1000)) if spec.timing else 0
    return {
        "n": n,
        "r": spec.r,
        "p": p,
        "trial": trial,
        "seed": seed,
        "success": success,
        "maximizer_value": res.value,
        "trials_used": rep.trials_used,
        "ms": elapsed,
    }


def run_recovery_threshold(spec: ExperimentSpec) -> str:
    cells = [(n, p) for n in spec.n_grid for p in spec.p_grid]
    for n, p in cells:
        _check_cost(n, spec.r)
        if p > n:
            raise UsageError(f"cell n={n}, p={p}: clique larger than graph")
    tasks = [(spec, cell, n, p, trial) for cell, (n, p) in enumerate(cells) for trial in range(spec.trials)]
    return to_csv(SCHEMAS["recovery-threshold"], _map(_recovery_task, tasks, spec.workers))


# -- concentration ----------------------------------------------------------


def _concentration_task(task):
    spec, cell, N, trial = task
    seed = derive_seed(spec.seed, spec.kind, cell, trial)
    nprime = spec.nprime or N
    v = concentration_vectors(N, nprime, spec.v_source, seed)
    sums = sample_quadratic_sums(v, spec.samples, seed)
    rows = []
    for mult in spec.t_grid:
        est = summarize_tail(N, nprime, mult * N, sums)
        rows.append(
            {
                "N": N,
                "Nprime": nprime,
                "t": est.t,
                "samples": est.samples,
                "exceed": est.exceed_count,
                "rate": est.empirical_rate,
                "paper_bound": est.paper_bound,
            }
        )
    return rows


def run_concentration(spec: ExperimentSpec) -> str:
    tasks = [(spec, cell, N, trial) for cell, N in enumerate(spec.n_grid) for trial in range(spec.trials)]
    rows = [row for batch in _map(_concentration_task, tasks, spec.workers) for row in batch]
    return to_csv(SCHEMAS["concentration"], rows)


# -- oracle suite -----------------------------------------------------------


def oracle_suite_rows(n: int, r: int, seed: int, samples: int = 10000, tuples: int = 100) -> List[dict]:
    """Exact small-instance checks on one seeded G(n, 1/2)."""
    g = sample_gnp_half(n, seed)
    rng = np.random.default_rng(seed)
    rows = []

    def add(name, count, violations, lhs, rhs):
        rows.append(
            {"check": name, "n": n, "r": r, "samples": count, "violations": violations,
             "lhs": float(lhs), "rhs": float(rhs), "passed": violations == 0}
        )

    D = dense_materialize(g, r).astype(np.float64)
    worst = 0.0
    bad = 0
    for _ in range(tuples):
        xs = [rng.standard_normal(n) for _ in range(r)]
        ref = D
        for x in xs:
            ref = np.tensordot(x, ref, axes=(0, 0))
        got = evaluate(g, xs)
        err = abs(got - float(ref)) / max(1.0, abs(float(ref)))
        worst = max(worst, err)
        bad += err > 1e-9
    add("evaluate_vs_dense", tuples, bad, worst, 1e-9)

    if n >= r:
        blocks = np.array_split(rng.permutation(n), r)
        mask = np.zeros(D.shape)
        mask[np.ix_(*blocks)] = 1.0
        worst = 0.0
        bad = 0
        for _ in range(tuples):
            xs = [rng.standard_normal(n) for _ in range(r)]
            ref = D * mask
            for x in xs:
                ref = np.tensordot(x, ref, axes=(0, 0))
            got = evaluate_block(g, [b.tolist() for b in blocks], xs)
            err = abs(got - float(ref)) / max(1.0, abs(float(ref)))
            worst = max(worst, err)
            bad += err > 1e-9
        add("block_vs_dense", tuples, bad, worst, 1e-9)

    worst = 0.0
    bad = 0
    h = 1e-4
    for _ in range(tuples):
        x = rng.standard_normal(n)
        d = rng.standard_normal(n)
        fd = (evaluate_symmetric(g, r, x + h * d) - evaluate_symmetric(g, r, x - h * d)) / (2 * h)
        an = float(gradient(g, r, x) @ d)
        err = abs(an - fd) / max(1.0, abs(fd))
        worst = max(worst, err)
        bad += err > 1e-6
    add("gradient_fd", tuples, bad, worst, 1e-6)

    depth = default_depth(n, r)
    bound = math.sqrt(n) * 2.0**-depth
    worst = 0.0
    bad = 0
    for _ in range(samples):
        x = rng.standard_normal(n)
        x *= rng.random() ** (1.0 / n) / np.linalg.norm(x)
        comps = decompose(x, depth)
        err = np.linalg.norm(x - reconstruct(comps, n))
        worst = max(worst, err)
        bad += err > bound or any(c.norm > 1.0 for c in comps)
    add("decomposition_bound", samples, bad, worst, bound)

    if n <= 8:
        chk = check_u_approx(g, r, samples, seed)
        add("u_approx", chk.samples, chk.violations, chk.lhs, chk.rhs)
    if n % r == 0 and n <= 9:
        ineq, ident = check_partition_identity(g, r, tuples, seed)
        add("partition_inequality", ineq.samples, ineq.violations, ineq.lhs, ineq.rhs)
        add("partition_identity", ident.samples, ident.violations, ident.lhs, ident.rhs)
    return rows


def _oracle_task(task):
    spec, cell, n, trial = task
    seed = derive_seed(spec.seed, spec.kind, cell, trial)
    return oracle_suite_rows(n, spec.r, seed, spec.samples, spec.tuples)


def run_oracle_suite(spec: ExperimentSpec) -> str:
    tasks = [(spec, cell, n, trial) for cell, n in enumerate(spec.n_grid) for trial in range(spec.trials)]
    rows = [row for batch in _map(_oracle_task, tasks, spec.workers) for row in batch]
    return to_csv(SCHEMAS["oracle-suite"], rows)


RUNNERS = {
    "norm-scaling": run_norm_scaling,
    "recovery-threshold": run_recovery_threshold,
    "concentration": run_concentration,
    "oracle-suite": run_oracle_suite,
}


def run_experiment(spec: ExperimentSpec) -> str:
    spec.validate()
    return RUNNERS[spec.kind](spec)


def gnuplot_script(kind: str, csv_path: str) -> str:
    """A gnuplot script plotting the main column of an experiment CSV."""
    x, y = {
        "norm-scaling": ("n", "value_per_sqrt_n"),
        "recovery-threshold": ("p", "success"),
        "concentration": ("t", "rate"),
        "oracle-suite": ("n", "violations"),
    }[kind]
    cols = SCHEMAS[kind]
    return (
        "set datafile separator ','\n"
        "set key autotitle columnhead\n"
        f"set xlabel '{x}'\nset ylabel '{y}'\n"
        f"plot '{csv_path}' using {cols.index(x) + 1}:{cols.index(y) + 1} with points\n"
    )


# -- recomputation checker --------------------------------------------------


def check_csv(text: str, tol: float = 1e-12) -> List[str]:
    """Recompute derived columns from primary ones; returns mismatch messages."""
    reader = csv.DictReader(io.StringIO(text))
    problems = []
    cols = reader.fieldnames or []
    for i, row in enumerate(reader, start=2):
        vals = {k: float(v) for k, v in row.items() if k != "check"}
        for k, v in vals.items():
            if not math.isfinite(v) and k != "paper_bound":
                problems.append(f"row {i}: {k} is not finite")
        if "value_per_sqrt_n" in cols:
            n, r, value = vals["n"], int(vals["r"]), vals["value"]
            _close(problems, i, "value_per_sqrt_n", vals["value_per_sqrt_n"], value / math.sqrt(n), tol)
            _close(problems, i, "value_per_bound_shape", vals["value_per_bound_shape"], value / bound_shape(int(n), r), tol)
        if "rate" in cols:
            _close(problems, i, "rate", vals["rate"], vals["exceed"] / vals["samples"], tol)
            _close(problems, i, "paper_bound", vals["paper_bound"], tail_bound(int(vals["N"]), vals["t"]), tol)
    return problems


def _close(problems, row, name, got, want, tol):
    if math.isinf(got) and got == want:
        return
    if abs(got - want) > tol * max(1.0, abs(want)):
        problems.append(f"row {row}: {name}={got!r} but recomputes to {want!r}")


def write_experiment(spec: ExperimentSpec, output: Optional[str] = None, plot: bool = False) -> str:
    """Run and write the CSV (and optional gnuplot script); returns the path."""
    spec.validate()
    path = output or spec.output
    if not path:
        raise UsageError("no output path given")
    text = run_experiment(spec)
    Path(path).write_text(text, encoding="ascii")
    if plot:
        Path(str(path) + ".gp").write_text(gnuplot_script(spec.kind, str(path)), encoding="ascii")
    return path
