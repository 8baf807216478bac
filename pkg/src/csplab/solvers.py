"""Local, non-backtracking solvers and the marginal computations behind them.

A variable, once assigned, is never reassigned. UnitClause and the greedy
colorer look one constraint deep; decimation ranks unassigned variables by
the bias of their value distribution over random solutions of their
radius-omega neighborhood, conditioned on everything assigned so far, and
fixes the most biased variable each round.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .core import (Instance, ProblemKind, Status, constraint_status, evaluate,
                   literal_value)
from .factor import SubInstance, build, is_tree, neighborhood


class InconsistentError(ValueError):
    """The pinned sub-instance has no solution."""


class CapacityError(ValueError):
    """Enumeration size limit exceeded."""


@dataclass(frozen=True)
class SolverTrace:
    steps: int
    forced_steps: int = 0
    reason: str | None = None
    order: tuple[tuple[int, int], ...] | None = None  # (variable, value) per step


@dataclass(frozen=True)
class SolverOutcome:
    success: bool
    assignment: tuple[int, ...] | None
    trace: SolverTrace


@dataclass(frozen=True)
class Marginal:
    """Distribution of one variable over uniform random solutions.

    Index 0/1 for Boolean values, index c-1 for color c.
    """

    probs: tuple[float, ...]
    converged: bool = True

    def __post_init__(self):
        if any(p < 0.0 for p in self.probs) or abs(sum(self.probs) - 1.0) > 1e-12:
            raise ValueError(f"not a distribution: {self.probs}")

    @property
    def bias(self) -> float:
        return max(self.probs) - 1.0 / len(self.probs)


@dataclass(frozen=True)
class MarginalQuery:
    sub: SubInstance
    pinned: dict[int, int] = field(default_factory=dict)  # original var -> value
    target: int = 1  # original var id

    def __post_init__(self):
        vs = set(self.sub.variables)
        if self.target not in vs:
            raise ValueError(f"target {self.target} not in the sub-instance")
        if self.target in self.pinned:
            raise ValueError(f"target {self.target} is pinned")
        missing = set(self.pinned) - vs
        if missing:
            raise ValueError(f"pinned variables {sorted(missing)} not in the sub-instance")


def _as_rng(rng: random.Random | int | None) -> random.Random:
    if isinstance(rng, random.Random):
        return rng
    return random.Random(rng)


# --- UnitClause -------------------------------------------------------------

def unit_clause_solve(f: Instance, rng: random.Random | int | None = None) -> SolverOutcome:
    """Classic UnitClause on a SAT formula.

    Each step satisfies a unit clause when one exists (variable chosen
    uniformly among variables occurring in unit clauses, then a uniform unit
    clause containing it), otherwise assigns a uniform random value to a
    uniform random unassigned variable. Fails the moment a clause is violated.
    """
    if f.kind is not ProblemKind.KSAT:
        raise ValueError("unit_clause_solve needs SAT semantics")
    rng = _as_rng(rng)
    n, clauses = f.n, f.constraints
    occ: list[list[int]] = [[] for _ in range(n + 1)]
    for ci, c in enumerate(clauses):
        for l in c:
            occ[abs(l)].append(ci)
    val: list[int | None] = [None] * (n + 1)
    satisfied = [False] * f.m
    free = [len(c) for c in clauses]
    units: set[int] = set()
    unassigned = list(range(1, n + 1))
    pos = {v: i for i, v in enumerate(unassigned)}
    forced = 0
    order: list[tuple[int, int]] = []

    def remove_unassigned(v: int) -> None:
        i, last = pos.pop(v), unassigned[-1]
        unassigned[i] = last
        unassigned.pop()
        if last != v:
            pos[last] = i

    def assign(v: int, value: int) -> bool:
        val[v] = value
        remove_unassigned(v)
        for ci in occ[v]:
            if satisfied[ci]:
                continue
            lit = next(l for l in clauses[ci] if abs(l) == v)
            free[ci] -= 1
            if (lit > 0) == bool(value):
                satisfied[ci] = True
                units.discard(ci)
            elif free[ci] == 0:
                return False
            elif free[ci] == 1:
                units.add(ci)
        return True

    for step in range(n):
        if units:
            by_var: dict[int, list[int]] = {}
            for ci in sorted(units):
                u = next(l for l in clauses[ci] if val[abs(l)] is None)
                by_var.setdefault(abs(u), []).append(ci)
            v = rng.choice(sorted(by_var))
            ci = rng.choice(by_var[v])
            lit = next(l for l in clauses[ci] if abs(l) == v)
            value = 1 if lit > 0 else 0
            forced += 1
        else:
            v = unassigned[rng.randrange(len(unassigned))]
            value = rng.randrange(2)
        order.append((v, value))
        if not assign(v, value):
            return SolverOutcome(False, None,
                                 SolverTrace(step + 1, forced, "violated clause",
                                             tuple(order)))
    return SolverOutcome(True, tuple(val[1:]), SolverTrace(n, forced, None, tuple(order)))


# --- greedy coloring --------------------------------------------------------

def greedy_color(g: Instance, rng: random.Random | int | None = None,
                 k: int | None = None) -> SolverOutcome:
    """Color vertices in uniform random order with a uniform available color.

    ``k`` overrides the instance palette (k >= 1 allowed). Fails at the first
    vertex with no color left; never backtracks.
    """
    if g.kind is not ProblemKind.KCOLORING:
        raise ValueError("greedy_color needs a coloring instance")
    k = g.k if k is None else k
    if k < 1:
        raise ValueError("need at least one color")
    rng = _as_rng(rng)
    adj: list[list[int]] = [[] for _ in range(g.n + 1)]
    for u, v in g.constraints:
        adj[u].append(v)
        adj[v].append(u)
    color: list[int | None] = [None] * (g.n + 1)
    order = rng.sample(range(1, g.n + 1), g.n)
    for step, v in enumerate(order):
        used = {color[w] for w in adj[v] if color[w] is not None}
        avail = [c for c in range(1, k + 1) if c not in used]
        if not avail:
            return SolverOutcome(False, None,
                                 SolverTrace(step + 1, 0, "no available color",
                                             tuple((u, color[u]) for u in order[:step])))
        color[v] = rng.choice(avail)
    return SolverOutcome(True, tuple(color[1:]),
                         SolverTrace(g.n, 0, None, tuple((u, color[u]) for u in order)))


# --- exact marginals --------------------------------------------------------

ENUMERATION_CAP = 25


_VECTOR_CELLS = 2**25  # full-cube counting stays interactive up to here


def exact_marginal(q: MarginalQuery, cap: int = ENUMERATION_CAP) -> Marginal:
    """Distribution of the target over uniform solutions consistent with the pins.

    Counts completions by brute-force enumeration over the unpinned value
    cube (vectorized while the cube is small, backtracking beyond); refuses
    more than ``cap`` unpinned variables.
    """
    inst = q.sub.instance
    unpinned = len(q.sub.variables) - len(q.pinned)
    if unpinned > cap:
        raise CapacityError(f"{unpinned} unpinned variables exceed the cap {cap}")
    local_pins = {q.sub.local_var(v): value for v, value in q.pinned.items()}
    target = q.sub.local_var(q.target)
    d = inst.domain_size()
    lo = 0 if inst.kind.is_formula else 1
    if d**unpinned <= _VECTOR_CELLS:
        counts = _count_by_value_vectorized(inst, local_pins, target)
    else:
        counts = [_count_completions(inst, {**local_pins, target: value})
                  for value in range(lo, lo + d)]
    total = sum(counts)
    if total == 0:
        raise InconsistentError("no solution consistent with the pinned values")
    return Marginal(tuple(c / total for c in counts))


_BLOCK_CELLS = 2**20  # value-cube chunk size; keeps memory flat


def _count_by_value_vectorized(inst: Instance, pins: dict[int, int],
                               target: int) -> list[int]:
    """Consistent-completion counts per target value, over the full cube of
    unpinned variables with the pinned values substituted into constraints.

    The cube is walked in blocks with digit arrays extracted lazily per
    block, so memory stays bounded whatever the variable count."""
    d = inst.domain_size()
    free = [v for v in range(1, inst.n + 1) if v not in pins]
    place = {v: len(free) - i - 1 for i, v in enumerate(free)}
    size = d ** len(free)
    counts = [0] * d

    # resolve pinned parts of each constraint once
    active = []
    for c in inst.constraints:
        if inst.kind.is_formula:
            consts = [literal_value(l, pins) for l in c if abs(l) in pins]
            free_lits = [l for l in c if abs(l) not in pins]
            if inst.kind is ProblemKind.KSAT:
                if any(consts):
                    continue
                if not free_lits:
                    return counts
            else:
                if True in consts and False in consts:
                    continue
                if not free_lits:
                    return counts
            active.append((free_lits, consts))
        else:
            u, v = c
            pu, pv = pins.get(u), pins.get(v)
            if pu is not None and pv is not None:
                if pu == pv:
                    return counts
                continue
            active.append(((u, v), (pu, pv)))

    for start in range(0, size, _BLOCK_CELLS):
        idx = np.arange(start, min(size, start + _BLOCK_CELLS), dtype=np.int64)
        digit: dict[int, np.ndarray] = {}

        def dig(v: int) -> np.ndarray:
            if v not in digit:
                if inst.kind.is_formula:
                    digit[v] = ((idx >> place[v]) & 1).astype(np.int8)
                else:
                    digit[v] = ((idx // d ** place[v]) % d).astype(np.int8)
            return digit[v]

        ok = np.ones(len(idx), dtype=bool)
        for spec_c, aux in active:
            if inst.kind is ProblemKind.KSAT:
                sat = np.zeros(len(idx), dtype=bool)
                for l in spec_c:
                    sat |= (dig(abs(l)) == 1) if l > 0 else (dig(abs(l)) == 0)
                ok &= sat
            elif inst.kind is ProblemKind.KNAE:
                lit_true = [(dig(abs(l)) == 1) if l > 0 else (dig(abs(l)) == 0)
                            for l in spec_c]
                bad = np.zeros(len(idx), dtype=bool)
                if False not in aux:  # an all-true configuration is possible
                    all_t = np.ones(len(idx), dtype=bool)
                    for lt in lit_true:
                        all_t &= lt
                    bad |= all_t
                if True not in aux:
                    all_f = np.ones(len(idx), dtype=bool)
                    for lt in lit_true:
                        all_f &= ~lt
                    bad |= all_f
                ok &= ~bad
            else:
                (u, v), (pu, pv) = spec_c, aux
                if pu is not None:
                    ok &= dig(v) != pu - 1
                elif pv is not None:
                    ok &= dig(u) != pv - 1
                else:
                    ok &= dig(u) != dig(v)

        tdig = dig(target)
        for value in range(d):
            counts[value] += int((ok & (tdig == value)).sum())

    return counts


def _count_completions(inst: Instance, pins: dict[int, int]) -> int:
    """Solutions of inst agreeing with pins; free variables off every
    constraint are skipped (they scale all counts equally)."""
    occupied = sorted({v for c in inst.constraints for v in inst.constraint_vars(c)})
    order = [v for v in occupied if v not in pins]
    rank = {v: i for i, v in enumerate(order)}
    ready: list[list[int]] = [[] for _ in range(len(order) + 1)]
    for ci, c in enumerate(inst.constraints):
        free = [rank[v] for v in inst.constraint_vars(c) if v in rank]
        ready[max(free) + 1 if free else 0].append(ci)
    current: dict[int, int] = dict(pins)

    for ci in ready[0]:  # fully pinned constraints
        if constraint_status(inst.constraints[ci], current, inst.kind) is Status.VIOLATED:
            return 0

    values = (0, 1) if inst.kind.is_formula else tuple(range(1, inst.k + 1))

    def ok(depth: int) -> bool:
        for ci in ready[depth]:
            if constraint_status(inst.constraints[ci], current, inst.kind) is Status.VIOLATED:
                return False
        return True

    def rec(depth: int) -> int:
        if depth == len(order):
            return 1
        v = order[depth]
        total = 0
        for value in values:
            current[v] = value
            if ok(depth + 1):
                total += rec(depth + 1)
            del current[v]
        return total

    return rec(0)


# --- belief propagation -----------------------------------------------------

def bp_marginal(q: MarginalQuery, damping: float = 0.5, tol: float = 1e-7,
                max_sweeps: int = 100) -> Marginal:
    """Sum-product marginal on the sub-instance's factor graph, pins clamped.

    Exact on acyclic sub-instances (run undamped to the message fixed point);
    on cyclic ones, damped synchronous sweeps until the largest message
    change drops below ``tol`` or ``max_sweeps`` is hit, with the outcome
    flagged converged / not converged.
    """
    inst = q.sub.instance
    tree = is_tree(q.sub)
    if tree:
        damping, tol = 0.0, 0.0
        max_sweeps = max(max_sweeps, inst.n + inst.m + 2)
    d = inst.domain_size()
    lo = 0 if inst.kind.is_formula else 1
    prior = [[1.0] * d for _ in range(inst.n + 1)]
    for v, value in q.pinned.items():
        lv = q.sub.local_var(v)
        prior[lv] = [0.0] * d
        prior[lv][value - lo] = 1.0

    factors = [inst.constraint_vars(c) for c in inst.constraints]
    incident: list[list[tuple[int, int]]] = [[] for _ in range(inst.n + 1)]
    for ci, vs in enumerate(factors):
        for slot, v in enumerate(vs):
            incident[v].append((ci, slot))
    uniform = [1.0 / d] * d
    f2v = [[list(uniform) for _ in vs] for vs in factors]
    v2f = [[list(uniform) for _ in vs] for vs in factors]

    def truthy(ci: int, slot: int) -> int:
        # value index making the literal in this slot true
        return 1 if inst.constraints[ci][slot] > 0 else 0

    converged = False
    for _ in range(max_sweeps):
        change = 0.0
        for ci, vs in enumerate(factors):
            for slot, v in enumerate(vs):
                msg = prior[v][:]
                for cj, slot2 in incident[v]:
                    if cj == ci and slot2 == slot:
                        continue
                    old = f2v[cj][slot2]
                    for i in range(d):
                        msg[i] *= old[i]
                s = sum(msg)
                if s <= 0.0:
                    raise InconsistentError("contradictory messages at a variable")
                msg = [x / s for x in msg]
                change = max(change, max(abs(a - b) for a, b in zip(msg, v2f[ci][slot])))
                v2f[ci][slot] = msg
        for ci, vs in enumerate(factors):
            arity = len(vs)
            for slot in range(arity):
                if inst.kind is ProblemKind.KSAT:
                    pf = 1.0
                    for j in range(arity):
                        if j != slot:
                            pf *= v2f[ci][j][1 - truthy(ci, j)]
                    msg = [1.0, 1.0]
                    msg[1 - truthy(ci, slot)] -= pf
                elif inst.kind is ProblemKind.KNAE:
                    pt = pf = 1.0
                    for j in range(arity):
                        if j != slot:
                            pt *= v2f[ci][j][truthy(ci, j)]
                            pf *= v2f[ci][j][1 - truthy(ci, j)]
                    msg = [1.0, 1.0]
                    msg[truthy(ci, slot)] -= pt
                    msg[1 - truthy(ci, slot)] -= pf
                else:
                    other = v2f[ci][1 - slot]
                    msg = [1.0 - other[i] for i in range(d)]
                s = sum(msg)
                if s <= 0.0:
                    raise InconsistentError("contradictory messages at a constraint")
                msg = [x / s for x in msg]
                old = f2v[ci][slot]
                msg = [(1 - damping) * a + damping * b for a, b in zip(msg, old)]
                change = max(change, max(abs(a - b) for a, b in zip(msg, old)))
                f2v[ci][slot] = msg
        if change <= tol:
            converged = True
            break

    target = q.sub.local_var(q.target)
    belief = prior[target][:]
    for ci, slot in incident[target]:
        for i in range(d):
            belief[i] *= f2v[ci][slot][i]
    s = sum(belief)
    if s <= 0.0:
        raise InconsistentError("all-zero belief at the target variable")
    return Marginal(tuple(b / s for b in belief), converged)


# --- decimation -------------------------------------------------------------

def bp_decimation(inst: Instance, omega: int = 2,
                  rng: random.Random | int | None = None,
                  cap: int = ENUMERATION_CAP, damping: float = 0.5,
                  tol: float = 1e-7, max_sweeps: int = 100,
                  on_cyclic: str = "loopy") -> SolverOutcome:
    """Marginal-guided decimation.

    Per round, every unassigned variable gets the marginal of its
    radius-omega neighborhood in the input factor graph, with previously
    assigned variables inside the neighborhood pinned (exact enumeration
    under ``cap`` unpinned variables, belief propagation above it). The most
    biased variable is fixed to its majority value, bias and value ties
    broken uniformly. Satisfied constraints are retired as bookkeeping and
    any violated constraint ends the run as a failure.

    ``on_cyclic``: "loopy" runs damped BP on cyclic over-cap neighborhoods,
    "fail" gives up on them.
    """
    if inst.kind.is_formula and omega < 2:
        raise ValueError("omega >= 2 required so neighborhoods hold whole clauses")
    if on_cyclic not in ("loopy", "fail"):
        raise ValueError(f"unknown on_cyclic mode {on_cyclic!r}")
    rng = _as_rng(rng)
    fg = build(inst)
    assigned: dict[int, int] = {}
    cache: dict[int, Marginal] = {}
    order: list[tuple[int, int]] = []
    active = list(range(inst.m))  # not yet satisfied

    def marginal_of(x: int) -> Marginal:
        sub = neighborhood(fg, x, omega)
        pins = {v: assigned[v] for v in sub.variables if v in assigned}
        query = MarginalQuery(sub, pins, x)
        if len(sub.variables) - len(pins) <= cap:
            return exact_marginal(query, cap)
        if on_cyclic == "fail" and not is_tree(sub):
            raise CapacityError("cyclic neighborhood over the enumeration cap")
        return bp_marginal(query, damping, tol, max_sweeps)

    lo = 0 if inst.kind.is_formula else 1
    step = 0
    while len(assigned) < inst.n:
        step += 1
        for x in range(1, inst.n + 1):
            if x in assigned or x in cache:
                continue
            try:
                cache[x] = marginal_of(x)
            except InconsistentError:
                return SolverOutcome(False, None,
                                     SolverTrace(step, 0, "inconsistent neighborhood",
                                                 tuple(order)))
            except CapacityError:
                return SolverOutcome(False, None,
                                     SolverTrace(step, 0, "cyclic neighborhood",
                                                 tuple(order)))
        best = max(m.bias for m in cache.values())
        tied = sorted(x for x, m in cache.items() if m.bias == best)
        x = tied[0] if len(tied) == 1 else rng.choice(tied)
        probs = cache[x].probs
        top = max(probs)
        vals = [i + lo for i, p in enumerate(probs) if p == top]
        value = vals[0] if len(vals) == 1 else rng.choice(vals)

        assigned[x] = value
        order.append((x, value))
        still = []
        for ci in active:
            st = constraint_status(inst.constraints[ci], assigned, inst.kind)
            if st is Status.VIOLATED:
                return SolverOutcome(False, None,
                                     SolverTrace(step, 0, "violated constraint",
                                                 tuple(order)))
            if st is Status.UNDETERMINED:
                still.append(ci)
        active = still
        del cache[x]
        for y in neighborhood(fg, x, omega).variables:
            cache.pop(y, None)

    result = tuple(assigned[v] for v in range(1, inst.n + 1))
    assert evaluate(inst, result) is Status.SATISFIED
    return SolverOutcome(True, result, SolverTrace(step, 0, None, tuple(order)))
