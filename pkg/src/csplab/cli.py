"""Command-line interface.

Subcommands: gen, solve, decide, enumerate, geometry, bounds, sweep,
threshold, plot-data. Completed experiments exit 0 whatever the SAT/UNSAT or
solver outcome; only usage and IO problems exit nonzero. All outputs are
deterministic functions of the flags.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import exact, harness, moments
from .core import (ConfigurationError, ConstraintModel, GeneratorConfig,
                   ParseError, ProblemKind, gen_instance, parse_dimacs,
                   write_dimacs)

_KINDS = {"ksat": ProblemKind.KSAT, "knae": ProblemKind.KNAE, "kcol": ProblemKind.KCOLORING}
_MODELS = {"iid": ConstraintModel.IID, "distinct": ConstraintModel.DISTINCT_SET}


def _write_out(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as f:
            f.write(text)


def _instance_args(p: argparse.ArgumentParser, with_file: bool = True) -> None:
    if with_file:
        p.add_argument("--in", dest="infile", help="read a DIMACS instance instead of generating")
    p.add_argument("--problem", choices=sorted(_KINDS), help="instance kind")
    p.add_argument("--k", type=int, help="clause width / palette size")
    p.add_argument("--n", type=int, help="number of variables / vertices")
    p.add_argument("--r", type=float, help="constraint density m/n")
    p.add_argument("--m", type=int, help="number of constraints")
    p.add_argument("--seed", type=int, default=0, help="generation seed")
    p.add_argument("--model", choices=sorted(_MODELS), default="iid")


def _load_instance(args) -> "object":
    if getattr(args, "infile", None):
        with open(args.infile) as f:
            return parse_dimacs(f.read())
    for flag in ("problem", "k", "n"):
        if getattr(args, flag) is None:
            raise ConfigurationError(f"--{flag} is required when no --in file is given")
    if args.r is None and args.m is None:
        raise ConfigurationError("one of --r / --m is required")
    return gen_instance(GeneratorConfig(_KINDS[args.problem], args.n, args.k,
                                        m=args.m, r=args.r,
                                        model=_MODELS[args.model], seed=args.seed))


def _cmd_gen(args) -> int:
    _write_out(write_dimacs(_load_instance(args)), args.out)
    return 0


def _cmd_solve(args) -> int:
    inst = _load_instance(args)
    out = harness.run_solver(args.solver, inst, args.solver_seed, args.omega,
                             args.cap, args.damping, args.max_sweeps)
    record = {
        "solver": args.solver, "success": out.success,
        "assignment": list(out.assignment) if out.assignment else None,
        "steps": out.trace.steps, "reason": out.trace.reason,
    }
    _write_out(json.dumps(record, indent=2) + "\n", args.out)
    return 0


def _cmd_decide(args) -> int:
    inst = _load_instance(args)
    res = exact.decide(inst, args.budget)
    record = {"status": res.status.value,
              "witness": list(res.witness) if res.witness else None,
              "nodes": res.nodes}
    _write_out(json.dumps(record, indent=2) + "\n", args.out)
    return 0


def _cmd_enumerate(args) -> int:
    inst = _load_instance(args)
    sols = exact.enumerate_solutions(inst, args.cap)
    buf = io.StringIO()
    exact.write_solutions(sols, buf)
    _write_out(buf.getvalue(), args.out)
    return 0


def _cmd_bounds(args) -> int:
    records = []
    for k in args.k:
        for kind in ProblemKind:
            records.append({
                "kind": kind.value, "k": k,
                "first_moment_bound": moments.first_moment_density_bound(kind, k),
                "algorithmic_density": moments.algorithmic_density(kind, k),
            })
    if args.format == "json":
        _write_out(json.dumps(records, indent=2) + "\n", args.out)
    else:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(records[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(records)
        _write_out(buf.getvalue(), args.out)
    return 0


def _cmd_sweep(args) -> int:
    if args.problem is None or args.k is None or not args.n:
        raise ConfigurationError("--problem, --k and --n are required")
    cfg = harness.ExperimentConfig(
        kind=_KINDS[args.problem], k=args.k, ns=tuple(args.n),
        rs=tuple(args.r or ()), ms=tuple(args.m or ()),
        trials=args.trials, master_seed=args.seed,
        solvers=tuple(args.solver or ["oracle"]), model=_MODELS[args.model],
        omega=args.omega, cap=args.cap, damping=args.damping,
        max_sweeps=args.max_sweeps, node_budget=args.budget, timings=args.timings)
    rows = harness.sweep(cfg)
    text = harness.rows_to_json(rows) if args.format == "json" else harness.rows_to_csv(rows)
    _write_out(text, args.out)
    return 0


def _cmd_threshold(args) -> int:
    if args.problem is None or args.k is None or args.n is None:
        raise ConfigurationError("--problem, --k and --n are required")
    res = harness.threshold_bisect(
        _KINDS[args.problem], args.k, args.n, args.trials, args.seed,
        target=args.target, tol=args.tol, r_lo=args.r_min, r_hi=args.r_max,
        node_budget=args.budget, model=_MODELS[args.model])
    _write_out(json.dumps(res.as_record(), indent=2) + "\n", args.out)
    return 0


def _cmd_geometry(args) -> int:
    if args.problem is None or args.k is None or args.n is None or not args.r:
        raise ConfigurationError("--problem, --k, --n and --r are required")
    cfg = harness.GeometryConfig(
        kind=_KINDS[args.problem], k=args.k, n=args.n, rs=tuple(args.r),
        instances=args.trials, master_seed=args.seed,
        deltas=tuple(args.delta or [0.1, 0.2, 0.5]),
        solution_cap=args.cap, model=_MODELS[args.model])
    result = harness.geometry_experiment(cfg)
    if args.out is None:
        sys.stdout.write(json.dumps(result, indent=2) + "\n")
    else:
        with open(args.out + ".json", "w") as f:
            json.dump(result, f, indent=2)
            f.write("\n")
        with open(args.out + ".csv", "w") as f:
            f.write(harness.geometry_csv(result))
    return 0


def _cmd_plot_data(args) -> int:
    with open(args.infile, newline="") as f:
        rows = list(csv.DictReader(f))
    if not rows:
        raise ConfigurationError(f"{args.infile} has no data rows")
    for row in rows:
        trials = int(row["trials"])
        for count_col, rate_col in (("sat_count", "sat_rate"),
                                    ("success_count", "success_rate")):
            count = row.get(count_col, "")
            if count == "" or count is None:
                row[f"{rate_col}_low"] = row[f"{rate_col}_high"] = ""
            else:
                lo, hi = harness.wilson_interval(int(count), trials)
                row[f"{rate_col}_low"], row[f"{rate_col}_high"] = lo, hi
    if args.format == "json":
        _write_out(json.dumps(rows, indent=2) + "\n", args.out)
    else:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        _write_out(buf.getvalue(), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="csplab",
                                 description="random constraint satisfaction workbench")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random instance as DIMACS")
    _instance_args(p, with_file=False)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_gen)

    p = sub.add_parser("solve", help="run a local solver on one instance")
    _instance_args(p)
    p.add_argument("--solver", choices=[s for s in harness.SOLVER_NAMES if s != "oracle"],
                   default="unit-clause")
    p.add_argument("--solver-seed", type=int, default=0)
    p.add_argument("--omega", type=int, default=2)
    p.add_argument("--cap", type=int, default=25)
    p.add_argument("--damping", type=float, default=0.5)
    p.add_argument("--max-sweeps", type=int, default=100)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_solve)

    p = sub.add_parser("decide", help="complete SAT/UNSAT decision")
    _instance_args(p)
    p.add_argument("--budget", type=int, default=5_000_000)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_decide)

    p = sub.add_parser("enumerate", help="list all solutions")
    _instance_args(p)
    p.add_argument("--cap", type=int, default=exact.DEFAULT_CAP)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_enumerate)

    p = sub.add_parser("bounds", help="moment-method density bounds table")
    p.add_argument("--k", type=int, action="append", required=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_bounds)

    p = sub.add_parser("sweep", help="density sweep with oracle and/or solvers")
    p.add_argument("--problem", choices=sorted(_KINDS))
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int, action="append")
    p.add_argument("--r", type=float, action="append")
    p.add_argument("--m", type=int, action="append")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--solver", action="append", choices=list(harness.SOLVER_NAMES))
    p.add_argument("--model", choices=sorted(_MODELS), default="iid")
    p.add_argument("--omega", type=int, default=2)
    p.add_argument("--cap", type=int, default=25)
    p.add_argument("--damping", type=float, default=0.5)
    p.add_argument("--max-sweeps", type=int, default=100)
    p.add_argument("--budget", type=int, default=5_000_000)
    p.add_argument("--timings", action="store_true",
                   help="record wall time (breaks byte-identical reruns)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("threshold", help="bisect for the sat-rate crossing density")
    p.add_argument("--problem", choices=sorted(_KINDS))
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--target", type=float, default=0.5)
    p.add_argument("--tol", type=float, default=0.1)
    p.add_argument("--r-min", type=float, default=0.0)
    p.add_argument("--r-max", type=float, default=None)
    p.add_argument("--budget", type=int, default=5_000_000)
    p.add_argument("--model", choices=sorted(_MODELS), default="iid")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_threshold)

    p = sub.add_parser("geometry", help="solution-space geometry experiment")
    p.add_argument("--problem", choices=sorted(_KINDS))
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--r", type=float, action="append")
    p.add_argument("--trials", type=int, default=30,
                   help="solvable instances per density point")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--delta", type=float, action="append")
    p.add_argument("--cap", type=int, default=100_000)
    p.add_argument("--model", choices=sorted(_MODELS), default="iid")
    p.add_argument("--out", help="prefix; writes <out>.json and <out>.csv")
    p.set_defaults(fn=_cmd_geometry)

    p = sub.add_parser("plot-data", help="sweep CSV with Wilson interval columns")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_plot_data)

    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigurationError, ParseError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"io error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
