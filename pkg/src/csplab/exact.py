"""Complete search oracles: decision, counting, and exhaustive enumeration.

These are the ground truth against which the local solvers and the moment
formulas are checked. Decision uses backtracking search (unit propagation and
pure literals for SAT, not-all-equal propagation for NAE, forward checking
for coloring). Enumeration is vectorized over the full value cube for small
instances and falls back to lexicographic depth-first search otherwise.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import Instance, ProblemKind, Status, evaluate


class DecideStatus(str, Enum):
    SAT = "sat"
    UNSAT = "unsat"
    BUDGET = "budget"


@dataclass(frozen=True)
class DecideResult:
    status: DecideStatus
    witness: tuple[int, ...] | None
    nodes: int


@dataclass(frozen=True)
class SolutionSet:
    instance: Instance
    solutions: tuple[tuple[int, ...], ...]
    exhaustive: bool
    cap: int | None = None

    def __len__(self) -> int:
        return len(self.solutions)

    def as_array(self) -> np.ndarray:
        if not self.solutions:
            return np.empty((0, self.instance.n), dtype=np.int16)
        return np.asarray(self.solutions, dtype=np.int16)


DEFAULT_CAP = 10**6
_VECTOR_LIMIT = 2**22  # full-cube vectorization cutoff


class BudgetExceeded(Exception):
    pass


def decide(inst: Instance, node_budget: int | None = None) -> DecideResult:
    """Complete backtracking decision; the witness satisfies the instance.

    A configurable node budget turns long searches into a BUDGET result
    instead of an answer.
    """
    if inst.kind is ProblemKind.KSAT:
        search = _SatSearch(inst, node_budget)
    elif inst.kind is ProblemKind.KNAE:
        search = _NaeSearch(inst, node_budget)
    else:
        search = _ColorSearch(inst, node_budget)
    try:
        witness = search.run()
    except BudgetExceeded:
        return DecideResult(DecideStatus.BUDGET, None, search.nodes)
    if witness is None:
        return DecideResult(DecideStatus.UNSAT, None, search.nodes)
    assert evaluate(inst, witness) is Status.SATISFIED
    return DecideResult(DecideStatus.SAT, witness, search.nodes)


class _SatSearch:
    """DPLL with queue-driven unit propagation and pure-literal elimination."""

    def __init__(self, inst: Instance, budget: int | None):
        self.n, self.budget, self.nodes = inst.n, budget, 0
        self.clauses = inst.constraints
        self.pos = [[] for _ in range(inst.n + 1)]
        self.neg = [[] for _ in range(inst.n + 1)]
        for ci, c in enumerate(self.clauses):
            for l in c:
                (self.pos if l > 0 else self.neg)[abs(l)].append(ci)
        self.val: list[int | None] = [None] * (inst.n + 1)
        self.true_lits = [0] * inst.m
        self.free = [len(c) for c in self.clauses]
        # active (not-yet-satisfied) occurrence counts drive the pure rule
        self.act_pos = [len(self.pos[v]) for v in range(inst.n + 1)]
        self.act_neg = [len(self.neg[v]) for v in range(inst.n + 1)]
        self.trail: list[int] = []
        self.unassigned = inst.n
        self.unit_q: list[int] = []
        self.pure_q: list[int] = list(range(1, inst.n + 1))

    def run(self) -> tuple[int, ...] | None:
        if not self._propagate():
            return None
        if not self._search():
            return None
        return tuple(self.val[v] for v in range(1, self.n + 1))

    def _bump(self):
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise BudgetExceeded

    def _assign(self, v: int, value: int) -> bool:
        self._bump()
        self.val[v] = value
        self.trail.append(v)
        self.unassigned -= 1
        sat_occ, other = (self.pos[v], self.neg[v]) if value else (self.neg[v], self.pos[v])
        for ci in sat_occ:
            self.true_lits[ci] += 1
            self.free[ci] -= 1
            if self.true_lits[ci] == 1:
                for l in self.clauses[ci]:
                    if l > 0:
                        self.act_pos[l] -= 1
                        if self.act_pos[l] == 0 and self.val[l] is None:
                            self.pure_q.append(l)
                    else:
                        self.act_neg[-l] -= 1
                        if self.act_neg[-l] == 0 and self.val[-l] is None:
                            self.pure_q.append(-l)
        ok = True
        for ci in other:
            self.free[ci] -= 1
            if self.true_lits[ci] == 0:
                if self.free[ci] == 0:
                    ok = False
                elif self.free[ci] == 1:
                    self.unit_q.append(ci)
        return ok

    def _undo(self, mark: int):
        self.unit_q.clear()
        self.pure_q.clear()
        while len(self.trail) > mark:
            v = self.trail.pop()
            value = self.val[v]
            self.val[v] = None
            self.unassigned += 1
            sat_occ, other = (self.pos[v], self.neg[v]) if value else (self.neg[v], self.pos[v])
            for ci in sat_occ:
                self.true_lits[ci] -= 1
                self.free[ci] += 1
                if self.true_lits[ci] == 0:
                    for l in self.clauses[ci]:
                        if l > 0:
                            self.act_pos[l] += 1
                        else:
                            self.act_neg[-l] += 1
            for ci in other:
                self.free[ci] += 1

    def _propagate(self) -> bool:
        while self.unit_q or self.pure_q:
            while self.unit_q:
                ci = self.unit_q.pop()
                if self.true_lits[ci] == 0 and self.free[ci] == 1:
                    lit = next(l for l in self.clauses[ci] if self.val[abs(l)] is None)
                    if not self._assign(abs(lit), 1 if lit > 0 else 0):
                        return False
            if self.pure_q:
                v = self.pure_q.pop()
                if self.val[v] is None and (self.act_pos[v] == 0 or self.act_neg[v] == 0):
                    if not self._assign(v, 1 if self.act_pos[v] > 0 else 0):
                        return False
        return True

    def _search(self) -> bool:
        if self.unassigned == 0:
            return True
        v = max((u for u in range(1, self.n + 1) if self.val[u] is None),
                key=lambda u: (self.act_pos[u] + self.act_neg[u], -u))
        first = 1 if self.act_pos[v] >= self.act_neg[v] else 0
        for value in (first, 1 - first):
            mark = len(self.trail)
            if self._assign(v, value) and self._propagate() and self._search():
                return True
            self._undo(mark)
        return False


class _NaeSearch:
    """Backtracking with not-all-equal propagation.

    Solution sets are closed under complement, so variable 1 is pinned to 0
    without loss of generality.
    """

    def __init__(self, inst: Instance, budget: int | None):
        self.n, self.k, self.budget, self.nodes = inst.n, inst.k, budget, 0
        self.clauses = inst.constraints
        self.occ = [[] for _ in range(inst.n + 1)]
        for ci, c in enumerate(self.clauses):
            for l in c:
                self.occ[abs(l)].append(ci)
        self.val: list[int | None] = [None] * (inst.n + 1)
        self.cnt_true = [0] * inst.m
        self.cnt_false = [0] * inst.m
        self.trail: list[int] = []
        self.unassigned = inst.n
        self.force_q: list[int] = []

    def run(self) -> tuple[int, ...] | None:
        if not (self._assign(1, 0) and self._propagate()):
            return None
        if not self._search():
            return None
        return tuple(self.val[v] for v in range(1, self.n + 1))

    def _bump(self):
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise BudgetExceeded

    def _assign(self, v: int, value: int) -> bool:
        self._bump()
        self.val[v] = value
        self.trail.append(v)
        self.unassigned -= 1
        ok = True
        for ci in self.occ[v]:
            for l in self.clauses[ci]:
                if abs(l) == v:
                    if (l > 0) == bool(value):
                        self.cnt_true[ci] += 1
                    else:
                        self.cnt_false[ci] += 1
            t, f = self.cnt_true[ci], self.cnt_false[ci]
            if t == self.k or f == self.k:
                ok = False
            elif t + f == self.k - 1 and (t == 0 or f == 0):
                self.force_q.append(ci)
        return ok

    def _undo(self, mark: int):
        self.force_q.clear()
        while len(self.trail) > mark:
            v = self.trail.pop()
            value = self.val[v]
            self.val[v] = None
            self.unassigned += 1
            for ci in self.occ[v]:
                for l in self.clauses[ci]:
                    if abs(l) == v:
                        if (l > 0) == bool(value):
                            self.cnt_true[ci] -= 1
                        else:
                            self.cnt_false[ci] -= 1

    def _propagate(self) -> bool:
        while self.force_q:
            ci = self.force_q.pop()
            t, f = self.cnt_true[ci], self.cnt_false[ci]
            if t + f != self.k - 1 or (t > 0 and f > 0):
                continue
            lit = next(l for l in self.clauses[ci] if self.val[abs(l)] is None)
            if f == 0:  # assigned block all true: the free literal must be false
                value = 0 if lit > 0 else 1
            else:       # all false: the free literal must be true
                value = 1 if lit > 0 else 0
            if not self._assign(abs(lit), value):
                return False
        return True

    def _search(self) -> bool:
        if self.unassigned == 0:
            return True
        v = max((u for u in range(1, self.n + 1) if self.val[u] is None),
                key=lambda u: (len(self.occ[u]), -u))
        for value in (0, 1):
            mark = len(self.trail)
            if self._assign(v, value) and self._propagate() and self._search():
                return True
            self._undo(mark)
        return False


class _ColorSearch:
    """Vertex backtracking with forward checking and first-use color order."""

    def __init__(self, inst: Instance, budget: int | None):
        self.n, self.k, self.budget, self.nodes = inst.n, inst.k, budget, 0
        self.adj = [[] for _ in range(inst.n + 1)]
        for u, v in inst.constraints:
            self.adj[u].append(v)
            self.adj[v].append(u)
        self.val: list[int | None] = [None] * (inst.n + 1)
        full = (1 << inst.k) - 1
        self.domain = [full] * (inst.n + 1)

    def run(self) -> tuple[int, ...] | None:
        if not self._search(0):
            return None
        return tuple(self.val[v] for v in range(1, self.n + 1))

    def _bump(self):
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise BudgetExceeded

    def _search(self, used_max: int) -> bool:
        uncolored = [v for v in range(1, self.n + 1) if self.val[v] is None]
        if not uncolored:
            return True
        v = min(uncolored, key=lambda u: (bin(self.domain[u]).count("1"), u))
        cap = min(self.k, used_max + 1)
        for color in range(1, cap + 1):
            if not (self.domain[v] >> (color - 1)) & 1:
                continue
            self._bump()
            self.val[v] = color
            removed = []
            dead = False
            for w in self.adj[v]:
                if self.val[w] is None and (self.domain[w] >> (color - 1)) & 1:
                    self.domain[w] &= ~(1 << (color - 1))
                    removed.append(w)
                    if self.domain[w] == 0:
                        dead = True
            if not dead and self._search(max(used_max, color)):
                return True
            for w in removed:
                self.domain[w] |= 1 << (color - 1)
            self.val[v] = None
        return False


# --- enumeration ------------------------------------------------------------

def enumerate_solutions(inst: Instance, cap: int = DEFAULT_CAP) -> SolutionSet:
    """All solutions in lexicographic order (variable index, then value).

    exhaustive=False flags a result truncated at the cap.
    """
    if _cube_size(inst) <= _VECTOR_LIMIT:
        sols, exhaustive = _enumerate_vectorized(inst, cap)
    else:
        sols, exhaustive = _enumerate_dfs(inst, cap)
    return SolutionSet(inst, tuple(sols), exhaustive, cap)


def count_solutions(inst: Instance) -> int:
    """|S| without materializing the solutions."""
    if _cube_size(inst) <= _VECTOR_LIMIT:
        return int(_satisfaction_mask(inst).sum())
    return sum(1 for _ in _dfs_solutions(inst))


def _cube_size(inst: Instance) -> int:
    return inst.domain_size() ** inst.n


def _satisfaction_mask(inst: Instance) -> np.ndarray:
    """Boolean mask over the full value cube, index = lexicographic rank."""
    n = inst.n
    size = _cube_size(inst)
    idx = np.arange(size, dtype=np.int64)
    ok = np.ones(size, dtype=bool)
    if inst.kind.is_formula:
        bit = {v: (idx >> (n - v)) & 1 for v in range(1, n + 1)}
        for c in inst.constraints:
            lit_true = [(bit[l] == 1) if l > 0 else (bit[-l] == 0) for l in c]
            if inst.kind is ProblemKind.KSAT:
                sat = np.zeros(size, dtype=bool)
                for lt in lit_true:
                    sat |= lt
                ok &= sat
            else:
                all_t = np.ones(size, dtype=bool)
                all_f = np.ones(size, dtype=bool)
                for lt in lit_true:
                    all_t &= lt
                    all_f &= ~lt
                ok &= ~(all_t | all_f)
    else:
        k = inst.k
        digit = {v: (idx // k ** (n - v)) % k for v in range(1, n + 1)}
        for u, v in inst.constraints:
            ok &= digit[u] != digit[v]
    return ok


def _decode_ranks(inst: Instance, ranks: np.ndarray) -> list[tuple[int, ...]]:
    n = inst.n
    if inst.kind.is_formula:
        shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
        rows = (ranks[:, None] >> shifts[None, :]) & 1
    else:
        k = inst.k
        powers = k ** np.arange(n - 1, -1, -1, dtype=np.int64)
        rows = (ranks[:, None] // powers[None, :]) % k + 1
    return [tuple(int(x) for x in row) for row in rows]


def _enumerate_vectorized(inst: Instance, cap: int):
    ranks = np.nonzero(_satisfaction_mask(inst))[0]
    exhaustive = len(ranks) <= cap
    return _decode_ranks(inst, ranks[:cap]), exhaustive


def _dfs_solutions(inst: Instance):
    """Lexicographic DFS over assignments, pruning violated constraints."""
    n = inst.n
    values = (0, 1) if inst.kind.is_formula else tuple(range(1, inst.k + 1))
    touch = [[] for _ in range(n + 1)]  # constraints fully decided at var v
    for ci, c in enumerate(inst.constraints):
        touch[max(inst.constraint_vars(c))].append(ci)
    current: list[int | None] = [None] * (n + 1)

    def consistent(v: int) -> bool:
        for ci in touch[v]:
            c = inst.constraints[ci]
            if inst.kind is ProblemKind.KSAT:
                if not any((l > 0) == bool(current[abs(l)]) for l in c):
                    return False
            elif inst.kind is ProblemKind.KNAE:
                lits = [(l > 0) == bool(current[abs(l)]) for l in c]
                if all(lits) or not any(lits):
                    return False
            else:
                if current[c[0]] == current[c[1]]:
                    return False
        return True

    def rec(v: int):
        if v > n:
            yield tuple(current[1:])
            return
        for value in values:
            current[v] = value
            if consistent(v):
                yield from rec(v + 1)
        current[v] = None

    yield from rec(1)


def _enumerate_dfs(inst: Instance, cap: int):
    out = []
    for sol in _dfs_solutions(inst):
        if len(out) == cap:
            return out, False
        out.append(sol)
    return out, True


def write_solutions(solset: SolutionSet, out: io.TextIOBase | str) -> None:
    """One solution per line, bitstrings or color strings, with a header."""
    inst = solset.instance
    own = isinstance(out, str)
    f = open(out, "w") if own else out
    try:
        f.write(f"# n={inst.n} kind={inst.kind.value} k={inst.k} "
                f"count={len(solset)} exhaustive={str(solset.exhaustive).lower()}\n")
        wide = (not inst.kind.is_formula) and inst.k > 9
        for sol in solset.solutions:
            if wide:
                f.write(" ".join(str(v) for v in sol) + "\n")
            else:
                f.write("".join(str(v) for v in sol) + "\n")
    finally:
        if own:
            f.close()
