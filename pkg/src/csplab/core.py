"""Instances of random constraint satisfaction problems.

Three problem families share one instance type: k-SAT and k-NAE formulas
(clauses are tuples of signed DIMACS-style literals) and k-coloring
(constraints are edges of a simple undirected graph, colored with a palette
of k colors). Variables are 1-indexed throughout to match DIMACS.

Total assignments are tuples indexed by variable-1; Boolean values are 0/1,
colors are 1..k. Partial assignments are dicts mapping variable -> value.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence


class ProblemKind(str, Enum):
    KSAT = "ksat"
    KNAE = "knae"
    KCOLORING = "kcol"

    @property
    def is_formula(self) -> bool:
        return self in (ProblemKind.KSAT, ProblemKind.KNAE)


class ConstraintModel(str, Enum):
    IID = "iid"
    DISTINCT_SET = "distinct"


class Status(str, Enum):
    SATISFIED = "satisfied"
    VIOLATED = "violated"
    UNDETERMINED = "undetermined"


class ConfigurationError(ValueError):
    """Generator configuration that cannot produce a valid instance."""


class ParseError(ValueError):
    """Malformed DIMACS input; carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


# A clause is a tuple of k signed literals (+v / -v); an edge is a pair (u, v)
# with u < v. Both live in Instance.constraints.
Constraint = tuple[int, ...]


@dataclass(frozen=True)
class Instance:
    """One random-CSP instance: a formula or a graph plus palette size.

    For formulas ``k`` is the clause width; for coloring it is the palette
    size. Immutable after construction and safe to share across workers.
    """

    kind: ProblemKind
    n: int
    k: int
    constraints: tuple[Constraint, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need n >= 1, got {self.n}")
        if self.k < 2:
            raise ValueError(f"need k >= 2, got {self.k}")
        for c in self.constraints:
            if self.kind.is_formula:
                if len(c) != self.k:
                    raise ValueError(f"clause {c} does not have width {self.k}")
                vs = [abs(l) for l in c]
                if len(set(vs)) != len(vs):
                    raise ValueError(f"clause {c} repeats a variable")
                if any(v < 1 or v > self.n or l == 0 for v, l in zip(vs, c)):
                    raise ValueError(f"clause {c} out of range for n={self.n}")
            else:
                u, v = c
                if u == v:
                    raise ValueError(f"self-loop at vertex {u}")
                if not (1 <= u <= self.n and 1 <= v <= self.n):
                    raise ValueError(f"edge {c} out of range for n={self.n}")

    @property
    def m(self) -> int:
        return len(self.constraints)

    @property
    def r(self) -> float:
        """Constraint density m/n."""
        return self.m / self.n

    @property
    def clauses(self) -> tuple[Constraint, ...]:
        assert self.kind.is_formula
        return self.constraints

    @property
    def edges(self) -> tuple[Constraint, ...]:
        assert self.kind is ProblemKind.KCOLORING
        return self.constraints

    def domain_size(self) -> int:
        """Values per variable: 2 for formulas, k colors for coloring."""
        return 2 if self.kind.is_formula else self.k

    def constraint_vars(self, c: Constraint) -> tuple[int, ...]:
        return tuple(abs(l) for l in c) if self.kind.is_formula else c


@dataclass(frozen=True)
class GeneratorConfig:
    kind: ProblemKind
    n: int
    k: int
    m: int | None = None
    r: float | None = None
    model: ConstraintModel = ConstraintModel.IID
    seed: int = 0

    def resolved_m(self) -> int:
        if self.m is not None:
            return self.m
        if self.r is None:
            raise ConfigurationError("need either m or density r")
        return round(self.r * self.n)


def constraint_space_size(kind: ProblemKind, n: int, k: int) -> int:
    """Number of distinct constraints: C(n,k)*2^k clauses or C(n,2) edges."""
    if kind.is_formula:
        return math.comb(n, k) * 2**k
    return math.comb(n, 2)


def gen_instance(cfg: GeneratorConfig) -> Instance:
    """Draw a random instance. Deterministic given cfg (including seed).

    Under IID each constraint is an independent uniform draw (duplicates
    possible); under DISTINCT_SET the result is a uniform random set of m
    distinct constraints.
    """
    n, k, m = cfg.n, cfg.k, cfg.resolved_m()
    if n < 1 or k < 2 or m < 0:
        raise ConfigurationError(f"invalid (n={n}, k={k}, m={m})")
    if cfg.kind.is_formula and k > n:
        raise ConfigurationError(f"no clause has {k} distinct variables among {n}")
    if cfg.kind is ProblemKind.KCOLORING and m > 0 and n < 2:
        raise ConfigurationError("graphs with edges need n >= 2")
    space = constraint_space_size(cfg.kind, n, k)
    if cfg.model is ConstraintModel.DISTINCT_SET and m > space:
        raise ConfigurationError(f"m={m} exceeds the {space} distinct constraints")

    rng = random.Random(cfg.seed)
    draw = _draw_clause if cfg.kind.is_formula else _draw_edge

    if cfg.model is ConstraintModel.IID:
        constraints = tuple(draw(rng, n, k) for _ in range(m))
    else:
        constraints = _draw_distinct(rng, cfg.kind, n, k, m, space)
    return Instance(cfg.kind, n, k, constraints)


def _draw_clause(rng: random.Random, n: int, k: int) -> Constraint:
    vs = sorted(rng.sample(range(1, n + 1), k))
    return tuple(v if rng.random() < 0.5 else -v for v in vs)


def _draw_edge(rng: random.Random, n: int, k: int) -> Constraint:
    u, v = rng.sample(range(1, n + 1), 2)
    return (u, v) if u < v else (v, u)


def _draw_distinct(rng, kind, n, k, m, space) -> tuple[Constraint, ...]:
    # Rejection sampling is uniform over m-subsets; fall back to sampling the
    # enumerated space when m is a large fraction of it.
    if space <= 10**6 and m > space // 2:
        return tuple(rng.sample(_enumerate_space(kind, n, k), m))
    draw = _draw_clause if kind.is_formula else _draw_edge
    seen: set[Constraint] = set()
    out: list[Constraint] = []
    while len(out) < m:
        c = draw(rng, n, k)
        if c not in seen:
            seen.add(c)
            out.append(c)
    return tuple(out)


def _enumerate_space(kind: ProblemKind, n: int, k: int) -> list[Constraint]:
    from itertools import combinations, product

    if not kind.is_formula:
        return [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    out = []
    for vs in combinations(range(1, n + 1), k):
        for signs in product((1, -1), repeat=k):
            out.append(tuple(v * s for v, s in zip(vs, signs)))
    return out


# --- assignments ------------------------------------------------------------

Assignment = Sequence[int] | Mapping[int, int]


def value_of(a: Assignment, var: int) -> int | None:
    if isinstance(a, Mapping):
        return a.get(var)
    return a[var - 1]


def total_assignment(a: Assignment, n: int) -> tuple[int, ...]:
    """Normalize to a tuple indexed by variable-1; reject partial input."""
    if isinstance(a, Mapping):
        if len(a) != n or any(v not in a for v in range(1, n + 1)):
            raise ValueError("assignment is partial; evaluation needs all variables")
        return tuple(a[v] for v in range(1, n + 1))
    if len(a) != n:
        raise ValueError(f"assignment covers {len(a)} of {n} variables")
    return tuple(a)


def complement(values: Sequence[int]) -> tuple[int, ...]:
    """Flip a total Boolean assignment (0 <-> 1)."""
    return tuple(1 - v for v in values)


def hamming(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x != y for x, y in zip(a, b))


def literal_value(lit: int, a: Assignment) -> bool | None:
    v = value_of(a, abs(lit))
    if v is None:
        return None
    return bool(v) if lit > 0 else not v


def constraint_status(c: Constraint, a: Assignment, kind: ProblemKind) -> Status:
    """Three-valued status of one constraint under a possibly partial assignment.

    VIOLATED means no completion can satisfy the constraint, SATISFIED means
    every completion does.
    """
    if kind is ProblemKind.KSAT:
        vals = [literal_value(l, a) for l in c]
        if any(v is True for v in vals):
            return Status.SATISFIED
        return Status.VIOLATED if all(v is False for v in vals) else Status.UNDETERMINED
    if kind is ProblemKind.KNAE:
        vals = [literal_value(l, a) for l in c]
        if any(v is True for v in vals) and any(v is False for v in vals):
            return Status.SATISFIED
        if None not in vals:
            return Status.VIOLATED  # all assigned equal
        return Status.UNDETERMINED
    u, v = (value_of(a, x) for x in c)
    if u is None or v is None:
        return Status.UNDETERMINED
    return Status.VIOLATED if u == v else Status.SATISFIED


def evaluate(inst: Instance, a: Assignment) -> Status:
    """SATISFIED iff every constraint holds under the total assignment a."""
    vals = total_assignment(a, inst.n)
    lo = 0 if inst.kind.is_formula else 1
    if any(v < lo or v >= lo + inst.domain_size() for v in vals):
        raise ValueError("assignment value outside the instance's domain")
    for c in inst.constraints:
        if constraint_status(c, vals, inst.kind) is not Status.SATISFIED:
            return Status.VIOLATED
    return Status.SATISFIED


# --- DIMACS serialization ---------------------------------------------------

_KIND_TAGS = {k.value: k for k in ProblemKind}


def write_dimacs(inst: Instance) -> str:
    """Serialize to DIMACS: `p cnf` for formulas, `p edge` for graphs.

    A comment line `c kind=<tag> k=<k>` carries the semantics tag so that
    parse_dimacs(write_dimacs(inst)) == inst.
    """
    lines = [f"c kind={inst.kind.value} k={inst.k}"]
    if inst.kind.is_formula:
        lines.append(f"p cnf {inst.n} {inst.m}")
        for c in inst.constraints:
            lines.append(" ".join(str(l) for l in c) + " 0")
    else:
        lines.append(f"p edge {inst.n} {inst.m}")
        for u, v in inst.constraints:
            lines.append(f"e {u} {v}")
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> Instance:
    kind: ProblemKind | None = None
    k: int | None = None
    n = m = None
    fmt = None
    constraints: list[Constraint] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            for tok in line[1:].split():
                key, _, val = tok.partition("=")
                if key == "kind":
                    if val not in _KIND_TAGS:
                        raise ParseError(f"unknown kind tag {val!r}", lineno)
                    kind = _KIND_TAGS[val]
                elif key == "k":
                    k = int(val)
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] not in ("cnf", "edge"):
                raise ParseError(f"malformed problem line {line!r}", lineno)
            fmt = parts[1]
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"non-integer header counts in {line!r}", lineno)
            continue
        if fmt is None:
            raise ParseError("constraint line before problem line", lineno)
        if fmt == "cnf":
            try:
                lits = [int(t) for t in line.split()]
            except ValueError:
                raise ParseError(f"non-integer literal in {line!r}", lineno)
            if not lits or lits[-1] != 0:
                raise ParseError("clause line not 0-terminated", lineno)
            lits = lits[:-1]
            if k is None:
                k = len(lits)
            if len(lits) != k:
                raise ParseError(f"clause has width {len(lits)}, expected {k}", lineno)
            if any(l == 0 or abs(l) > n for l in lits):
                raise ParseError("literal out of range", lineno)
            constraints.append(tuple(lits))
        else:
            parts = line.split()
            if len(parts) != 3 or parts[0] != "e":
                raise ParseError(f"malformed edge line {line!r}", lineno)
            u, v = int(parts[1]), int(parts[2])
            if u == v or not (1 <= u <= n and 1 <= v <= n):
                raise ParseError(f"bad edge ({u},{v})", lineno)
            constraints.append((u, v) if u < v else (v, u))

    if fmt is None:
        raise ParseError("missing problem line", 1)
    if kind is None:
        kind = ProblemKind.KSAT if fmt == "cnf" else ProblemKind.KCOLORING
    if fmt == "cnf" and not kind.is_formula:
        raise ParseError("cnf body with a coloring kind tag", 1)
    if fmt == "edge" and kind is not ProblemKind.KCOLORING:
        raise ParseError("edge body with a formula kind tag", 1)
    if len(constraints) != m:
        raise ParseError(f"header promises {m} constraints, found {len(constraints)}", 1)
    if k is None:
        raise ParseError("cannot infer k: no comment tag and no constraints", 1)
    try:
        return Instance(kind, n, k, tuple(constraints))
    except ValueError as e:
        raise ParseError(str(e), 1)
