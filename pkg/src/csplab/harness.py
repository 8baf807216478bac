"""Experiment driver: density sweeps, threshold bisection, geometry runs.

Every trial's randomness derives from (master_seed, point_index, trial_index,
stream) through a public 64-bit mixing function, so outputs are pure
functions of the experiment configuration and independent of scheduling.
"""

from __future__ import annotations

import csv
import io
import json
import statistics
import time
from dataclasses import dataclass

from .core import (ConstraintModel, GeneratorConfig, Instance, ProblemKind,
                   gen_instance)
from .exact import DecideStatus, decide, enumerate_solutions
from .geometry import geometry_report
from .moments import first_moment_density_bound
from .solvers import SolverOutcome, bp_decimation, greedy_color, unit_clause_solve

_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """One SplitMix64 step; the documented constants make seed streams
    reproducible by independent implementations."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def mix_seed(master: int, *parts: int) -> int:
    """Fold parts into the master seed: h = splitmix64(h XOR part), left to right."""
    h = master & _MASK64
    for p in parts:
        h = splitmix64(h ^ (p & _MASK64))
    return h


_Z95 = 1.959963984540054


def wilson_interval(successes: int, trials: int, z: float = _Z95) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("need at least one trial")
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = (z / denom) * ((p * (1 - p) / trials + z * z / (4 * trials * trials)) ** 0.5)
    return center - half, center + half


# --- solvers by name --------------------------------------------------------

SOLVER_NAMES = ("oracle", "unit-clause", "greedy-color", "bp-decimation")


def run_solver(name: str, inst: Instance, seed: int, omega: int = 2,
               cap: int = 25, damping: float = 0.5, max_sweeps: int = 100) -> SolverOutcome:
    if name == "unit-clause":
        return unit_clause_solve(inst, seed)
    if name == "greedy-color":
        return greedy_color(inst, seed)
    if name == "bp-decimation":
        return bp_decimation(inst, omega, seed, cap=cap, damping=damping,
                             max_sweeps=max_sweeps)
    raise ValueError(f"unknown solver {name!r}")


# --- density sweep ----------------------------------------------------------

SWEEP_COLUMNS = ("kind", "k", "n", "m", "r", "trials", "master_seed",
                 "sat_count", "sat_rate", "solver", "success_count",
                 "success_rate", "budget_exceeded_count", "wall_ms")


@dataclass(frozen=True)
class ExperimentConfig:
    kind: ProblemKind
    k: int
    ns: tuple[int, ...]
    rs: tuple[float, ...] = ()
    ms: tuple[int, ...] = ()        # alternative to rs; both grids may not mix
    trials: int = 100
    master_seed: int = 0
    solvers: tuple[str, ...] = ("oracle",)
    model: ConstraintModel = ConstraintModel.IID
    omega: int = 2
    cap: int = 25
    damping: float = 0.5
    max_sweeps: int = 100
    node_budget: int | None = 5_000_000
    timings: bool = False           # wall_ms stays 0 unless explicitly enabled

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("need trials >= 1")
        if bool(self.rs) == bool(self.ms):
            raise ValueError("exactly one of rs / ms must be given")
        if not self.ns:
            raise ValueError("empty n grid")
        for s in self.solvers:
            if s not in SOLVER_NAMES:
                raise ValueError(f"unknown solver {s!r}")

    def grid(self) -> list[tuple[int, int]]:
        points = []
        for n in self.ns:
            for x in (self.rs or self.ms):
                m = round(x * n) if self.rs else int(x)
                if m < 0:
                    raise ValueError(f"negative m at (n={n}, {x})")
                points.append((n, m))
        return points


@dataclass(frozen=True)
class SweepRow:
    kind: str
    k: int
    n: int
    m: int
    r: float
    trials: int
    master_seed: int
    sat_count: int | None
    sat_rate: float | None
    solver: str
    success_count: int
    success_rate: float
    budget_exceeded_count: int
    wall_ms: int

    def as_record(self) -> dict:
        return {c: getattr(self, c) for c in SWEEP_COLUMNS}


def sweep(cfg: ExperimentConfig) -> list[SweepRow]:
    """One row per (grid point, solver); per-trial seeds come from
    mix_seed(master, point, trial, stream) so reruns are byte-identical."""
    rows: list[SweepRow] = []
    for point, (n, m) in enumerate(cfg.grid()):
        oracle_stats = None
        per_solver: list[tuple[str, int, int, int, int]] = []
        for slot, name in enumerate(cfg.solvers):
            succ = budget = 0
            t0 = time.perf_counter()
            for t in range(cfg.trials):
                inst = gen_instance(GeneratorConfig(
                    cfg.kind, n, cfg.k, m=m, model=cfg.model,
                    seed=mix_seed(cfg.master_seed, point, t, 0)))
                if name == "oracle":
                    res = decide(inst, cfg.node_budget)
                    succ += res.status is DecideStatus.SAT
                    budget += res.status is DecideStatus.BUDGET
                else:
                    out = run_solver(name, inst,
                                     mix_seed(cfg.master_seed, point, t, 1 + slot),
                                     cfg.omega, cfg.cap, cfg.damping, cfg.max_sweeps)
                    succ += out.success
            wall = int((time.perf_counter() - t0) * 1000) if cfg.timings else 0
            per_solver.append((name, succ, budget, wall, slot))
            if name == "oracle":
                oracle_stats = (succ, budget)
        for name, succ, budget, wall, slot in per_solver:
            sat_count = oracle_stats[0] if oracle_stats else None
            rows.append(SweepRow(
                cfg.kind.value, cfg.k, n, m, m / n, cfg.trials, cfg.master_seed,
                sat_count,
                None if sat_count is None else sat_count / cfg.trials,
                name, succ, succ / cfg.trials, budget, wall))
    return rows


def rows_to_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        rec = {k: ("" if v is None else v) for k, v in row.as_record().items()}
        w.writerow(rec)
    return buf.getvalue()


def rows_to_json(rows: list[SweepRow]) -> str:
    return json.dumps([row.as_record() for row in rows], indent=2) + "\n"


def monotonicity_flags(rows: list[SweepRow], z: float = 3.0) -> list[tuple[SweepRow, SweepRow]]:
    """Adjacent same-n grid points whose sat_rate rises by more than z
    standard errors as the density grows; diagnostics, not failures."""
    flagged = []
    by_n: dict[tuple, list[SweepRow]] = {}
    for row in rows:
        if row.sat_rate is not None:
            by_n.setdefault((row.kind, row.k, row.n, row.solver), []).append(row)
    for group in by_n.values():
        group.sort(key=lambda r: r.m)
        for a, b in zip(group, group[1:]):
            se = ((a.sat_rate * (1 - a.sat_rate) + b.sat_rate * (1 - b.sat_rate))
                  / a.trials) ** 0.5
            if b.sat_rate > a.sat_rate + z * max(se, 1e-9):
                flagged.append((a, b))
    return flagged


# --- threshold bisection ----------------------------------------------------

@dataclass(frozen=True)
class ThresholdResult:
    found: bool
    r_hat: float | None
    half_width: float | None           # Wilson half-width at the final point
    evaluations: tuple[tuple[float, float], ...]
    kind: str
    k: int
    n: int
    trials: int
    target: float
    tol: float

    def as_record(self) -> dict:
        return {
            "found": self.found, "r_hat": self.r_hat, "half_width": self.half_width,
            "kind": self.kind, "k": self.k, "n": self.n, "trials": self.trials,
            "target": self.target, "tol": self.tol,
            "evaluations": [list(e) for e in self.evaluations],
        }


def threshold_bisect(kind: ProblemKind, k: int, n: int, trials: int, seed: int,
                     target: float = 0.5, tol: float = 0.1,
                     r_lo: float = 0.0, r_hi: float | None = None,
                     node_budget: int | None = 5_000_000,
                     model: ConstraintModel = ConstraintModel.IID) -> ThresholdResult:
    """Bisect the density axis for the point where the empirical
    sat rate crosses ``target``; per-n estimate, never extrapolated."""
    if r_hi is None:
        r_hi = 2.0 * first_moment_density_bound(kind, k)
    evals: list[tuple[float, float]] = []
    point = 0
    last = (0, trials)

    def rate_at(r: float) -> float:
        nonlocal point, last
        m = round(r * n)
        sat = 0
        for t in range(trials):
            inst = gen_instance(GeneratorConfig(kind, n, k, m=m, model=model,
                                                seed=mix_seed(seed, point, t, 0)))
            sat += decide(inst, node_budget).status is DecideStatus.SAT
        point += 1
        last = (sat, trials)
        rate = sat / trials
        evals.append((r, rate))
        return rate

    lo_rate = rate_at(r_lo)
    hi_rate = rate_at(r_hi)
    if not (lo_rate >= target >= hi_rate) or lo_rate == hi_rate:
        return ThresholdResult(False, None, None, tuple(evals),
                               kind.value, k, n, trials, target, tol)
    lo, hi = r_lo, r_hi
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        if rate_at(mid) >= target:
            lo = mid
        else:
            hi = mid
    w_lo, w_hi = wilson_interval(last[0], last[1])
    return ThresholdResult(True, (lo + hi) / 2.0, (w_hi - w_lo) / 2.0,
                           tuple(evals), kind.value, k, n, trials, target, tol)


# --- geometry experiment ----------------------------------------------------

@dataclass(frozen=True)
class GeometryConfig:
    kind: ProblemKind
    k: int
    n: int
    rs: tuple[float, ...]
    instances: int = 30               # solvable instances per density point
    master_seed: int = 0
    deltas: tuple[float, ...] = (0.1, 0.2, 0.5)
    solution_cap: int = 100_000
    separation_limit: int = 4000
    sample_limit: int = 1000
    attempt_factor: int = 50
    model: ConstraintModel = ConstraintModel.IID

    def __post_init__(self):
        if self.kind is ProblemKind.KCOLORING:
            cube = self.k ** self.n
        else:
            cube = 2 ** self.n
        if cube > 2 ** 26:
            raise ValueError(f"n={self.n} too large for exhaustive enumeration")


def geometry_experiment(cfg: GeometryConfig) -> dict:
    """Per density point, enumerate solvable instances and aggregate medians
    of the cluster and freezing statistics. Returns a JSON-ready dict."""
    points = []
    for point, r in enumerate(cfg.rs):
        m = round(r * cfg.n)
        per_instance = []
        unsat = overflow = attempts = 0
        t = 0
        while len(per_instance) < cfg.instances and attempts < cfg.instances * cfg.attempt_factor:
            attempts += 1
            seed = mix_seed(cfg.master_seed, point, t, 0)
            t += 1
            inst = gen_instance(GeneratorConfig(cfg.kind, cfg.n, cfg.k, m=m,
                                                model=cfg.model, seed=seed))
            sols = enumerate_solutions(inst, cfg.solution_cap)
            if not sols.exhaustive:
                overflow += 1
                continue
            if len(sols) == 0:
                unsat += 1
                continue
            report, profiles = geometry_report(
                sols, cfg.deltas, cfg.separation_limit, cfg.sample_limit,
                seed=mix_seed(seed, 1))
            per_instance.append({
                "seed": seed,
                "num_solutions": len(sols),
                "num_components": report.num_components,
                "dominant_fraction": report.dominant_fraction,
                "separation": report.separation,
                "frozen_fractions": {str(d): profiles[d].fraction for d in cfg.deltas},
            })
        solved = len(per_instance)
        summary = {
            "kind": cfg.kind.value, "k": cfg.k, "n": cfg.n, "m": m, "r": m / cfg.n,
            "requested": cfg.instances, "solved": solved,
            "unsat_count": unsat, "overflow_count": overflow, "attempts": attempts,
        }
        if solved:
            summary["median_num_solutions"] = statistics.median(
                d["num_solutions"] for d in per_instance)
            summary["median_num_components"] = statistics.median(
                d["num_components"] for d in per_instance)
            summary["median_dominant_fraction"] = statistics.median(
                d["dominant_fraction"] for d in per_instance)
            seps = [d["separation"] for d in per_instance if d["separation"] is not None]
            summary["median_separation"] = statistics.median(seps) if seps else None
            for d in cfg.deltas:
                summary[f"median_frozen_frac_delta_{d}"] = statistics.median(
                    inst["frozen_fractions"][str(d)] for inst in per_instance)
        points.append({"summary": summary, "instances": per_instance})
    return {
        "config": {
            "kind": cfg.kind.value, "k": cfg.k, "n": cfg.n,
            "rs": list(cfg.rs), "instances": cfg.instances,
            "master_seed": cfg.master_seed, "deltas": list(cfg.deltas),
            "solution_cap": cfg.solution_cap, "model": cfg.model.value,
        },
        "points": points,
    }


def geometry_csv(result: dict) -> str:
    deltas = result["config"]["deltas"]
    cols = ["kind", "k", "n", "m", "r", "requested", "solved", "unsat_count",
            "overflow_count", "attempts", "median_num_solutions",
            "median_num_components", "median_dominant_fraction",
            "median_separation"] + [f"median_frozen_frac_delta_{d}" for d in deltas]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for p in result["points"]:
        rec = {c: p["summary"].get(c) for c in cols}
        w.writerow({k: ("" if v is None else v) for k, v in rec.items()})
    return buf.getvalue()
