"""Command-line driver: ``paritylab <command> ...``.

Exit codes: 0 success, 1 usage, 2 resource guard, 3 verification failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import experiments
from .errors import InvalidArgument, ParseError, ResourceLimitError
from .graph import PlantedInstance, plant_clique, read_instance, sample_gnp_half, write_instance
from .maximizer import maximize
from .recovery import RecoveryConfig, recover
from .tensor import evaluate

EXIT_OK, EXIT_USAGE, EXIT_RESOURCE, EXIT_VERIFY = 0, 1, 2, 3


def read_vector(path) -> np.ndarray:
    values = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise ParseError(f"not a number: {line!r}", line=lineno) from None
    return np.asarray(values)


def write_vector(path, x) -> None:
    Path(path).write_text("".join(repr(float(v)) + "\n" for v in x))


def _graph(path):
    obj = read_instance(path)
    return obj.graph if isinstance(obj, PlantedInstance) else obj


def cmd_gen(args):
    write_instance(args.out, sample_gnp_half(args.n, args.seed))


def cmd_plant(args):
    g = _graph(args.graph) if args.graph else sample_gnp_half(args.n, args.seed)
    write_instance(args.out, plant_clique(g, args.p, args.seed))


def cmd_eval(args):
    g = _graph(args.graph)
    xs = [read_vector(p) for p in args.vectors]
    if len(xs) == 1:
        xs = xs * args.r
    elif len(xs) != args.r:
        raise InvalidArgument(f"give 1 or {args.r} vector files")
    print(repr(evaluate(g, xs)))


def cmd_maximize(args):
    g = _graph(args.graph)
    warm = read_vector(args.warm) if args.warm else None
    res = maximize(g, args.r, restarts=args.restarts, iters_per_restart=args.iters, seed=args.seed, warm_start=warm)
    if args.out:
        write_vector(args.out, res.x)
    print(f"value={res.value!r} init={res.init_label} restarts={res.restarts_used} iterations={res.iterations}")


def cmd_recover(args):
    obj = read_instance(args.graph)
    g = obj.graph if isinstance(obj, PlantedInstance) else obj
    truth = obj.clique if isinstance(obj, PlantedInstance) and args.diagnostics else None
    cfg = RecoveryConfig(r=args.r, seed=args.seed, trial_budget_per_ell=args.budget)
    rep = recover(g, args.p, read_vector(args.vector), cfg, planted=truth)
    if args.diagnostics:
        for c in rep.components:
            print(
                f"level={c.level} size={c.size} eigenvalue={c.eigenvalue:.6g} trials={c.trials}"
                + (f" overlap={c.overlap:.6g} passes={c.overlap_passes} prefix_dense={c.prefix_dense}"
                   if c.overlap is not None else ""),
                file=sys.stderr,
            )
    if rep.found:
        print(",".join(str(int(v)) for v in rep.clique))
    else:
        print("FAILURE")


def cmd_experiment(args):
    spec = experiments.parse_config(Path(args.config).read_text(), kind=args.kind)
    if args.workers:
        spec.workers = args.workers
    path = experiments.write_experiment(spec, output=args.out, plot=args.plot)
    print(path)


def cmd_verify(args):
    if args.config:
        spec = experiments.parse_config(Path(args.config).read_text(), kind="oracle-suite")
    else:
        spec = experiments.ExperimentSpec(kind="oracle-suite", n_grid=[6], r=3, seed=args.seed)
    text = experiments.run_experiment(spec)
    if args.out:
        Path(args.out).write_text(text)
    sys.stdout.write(text)
    failed = [line for line in text.splitlines()[1:] if line.endswith(",0")]
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_check(args):
    problems = experiments.check_csv(Path(args.csv).read_text())
    for msg in problems:
        print(msg)
    return EXIT_VERIFY if problems else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="paritylab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="sample G(n, 1/2) into an instance file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("plant", help="plant a p-clique into a graph file (or a fresh G(n, 1/2))")
    p.add_argument("--graph")
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plant)

    p = sub.add_parser("eval", help="evaluate A(x1, ..., xr)")
    p.add_argument("--graph", required=True)
    p.add_argument("--r", type=int, default=3)
    p.add_argument("vectors", nargs="+")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("maximize", help="heuristically maximize A(x, ..., x)")
    p.add_argument("--graph", required=True)
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--iters", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--warm")
    p.add_argument("--out")
    p.set_defaults(func=cmd_maximize)

    p = sub.add_parser("recover", help="recover a p-clique from a vector")
    p.add_argument("--graph", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--vector", required=True)
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int)
    p.add_argument("--diagnostics", action="store_true", help="print per-support diagnostics (uses P= if present)")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("experiment", help="run an experiment grid into a CSV")
    p.add_argument("kind", choices=experiments.KINDS)
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--workers", type=int)
    p.add_argument("--plot", action="store_true", help="also write a gnuplot script next to the CSV")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("verify", help="run the oracle suite; exit 3 on any failure")
    p.add_argument("--config")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("check", help="recompute derived CSV columns; exit 3 on mismatch")
    p.add_argument("csv")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        code = args.func(args)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (InvalidArgument, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return code or EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
