"""Bipartite factor graphs: constraint/variable adjacency, neighborhoods, girth.

Node distances are counted in factor-graph edges, so one variable-constraint
hop costs 1 and the smallest radius that captures a whole clause around a
variable is 2.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .core import Instance


@dataclass(frozen=True)
class FactorGraph:
    instance: Instance
    var_cons: tuple[tuple[int, ...], ...]  # var v -> constraint ids, index v-1
    con_vars: tuple[tuple[int, ...], ...]  # constraint id -> variables

    @property
    def n(self) -> int:
        return self.instance.n

    @property
    def m(self) -> int:
        return self.instance.m


@dataclass(frozen=True)
class SubInstance:
    """Induced instance on a node subset, re-indexed to 1..n'.

    Only complete constraints (all variables retained) survive, so the
    payload is a genuine instance of the same kind. ``variables[i]`` is the
    original id of local variable i+1; ``constraints`` maps back likewise.
    """

    instance: Instance
    variables: tuple[int, ...]
    constraints: tuple[int, ...]

    def local_var(self, original: int) -> int:
        return self.variables.index(original) + 1


def build(inst: Instance) -> FactorGraph:
    """Connect each constraint node to every variable occurring in it."""
    var_cons: list[list[int]] = [[] for _ in range(inst.n)]
    con_vars: list[tuple[int, ...]] = []
    for ci, c in enumerate(inst.constraints):
        vs = inst.constraint_vars(c)
        con_vars.append(vs)
        for v in vs:
            var_cons[v - 1].append(ci)
    return FactorGraph(inst, tuple(tuple(x) for x in var_cons), tuple(con_vars))


def neighborhood(fg: FactorGraph, x: int, omega: int) -> SubInstance:
    """Sub-instance spanned by all nodes at factor-graph distance <= omega from x.

    Constraints with any variable outside the ball are dropped entirely;
    omega=0 yields just x and no constraints.
    """
    if not (1 <= x <= fg.n):
        raise ValueError(f"variable {x} not in 1..{fg.n}")
    if omega < 0:
        raise ValueError("omega must be nonnegative")
    vars_in = {x}
    cons_in: set[int] = set()
    frontier_vars, frontier_cons = [x], []
    for dist in range(1, omega + 1):
        if dist % 2 == 1:  # variable level -> constraint level
            nxt = []
            for v in frontier_vars:
                for ci in fg.var_cons[v - 1]:
                    if ci not in cons_in:
                        cons_in.add(ci)
                        nxt.append(ci)
            frontier_cons = nxt
        else:
            nxt = []
            for ci in frontier_cons:
                for v in fg.con_vars[ci]:
                    if v not in vars_in:
                        vars_in.add(v)
                        nxt.append(v)
            frontier_vars = nxt
    return _induced(fg, vars_in, cons_in)


def _induced(fg: FactorGraph, vars_in: set[int], cons_in: set[int]) -> SubInstance:
    inst = fg.instance
    keep_vars = sorted(vars_in)
    keep_cons = sorted(ci for ci in cons_in if all(v in vars_in for v in fg.con_vars[ci]))
    local = {v: i + 1 for i, v in enumerate(keep_vars)}
    constraints = []
    for ci in keep_cons:
        c = inst.constraints[ci]
        if inst.kind.is_formula:
            constraints.append(tuple((1 if l > 0 else -1) * local[abs(l)] for l in c))
        else:
            u, v = local[c[0]], local[c[1]]
            constraints.append((u, v) if u < v else (v, u))
    sub = Instance(inst.kind, len(keep_vars), inst.k, tuple(constraints))
    return SubInstance(sub, tuple(keep_vars), tuple(keep_cons))


def as_subinstance(inst: Instance) -> SubInstance:
    """Wrap a whole instance as a SubInstance with identity index maps."""
    return SubInstance(inst, tuple(range(1, inst.n + 1)), tuple(range(inst.m)))


def is_tree(sub: SubInstance | Instance) -> bool:
    """True iff the factor graph is acyclic (a forest)."""
    inst = sub.instance if isinstance(sub, SubInstance) else sub
    parent = list(range(inst.n + inst.m))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for ci, c in enumerate(inst.constraints):
        for v in inst.constraint_vars(c):
            a, b = find(v - 1), find(inst.n + ci)
            if a == b:
                return False
            parent[a] = b
    return True


def girth(fg: FactorGraph) -> int | None:
    """Length in edges of the shortest factor-graph cycle; None if acyclic.

    Always even when finite (the graph is bipartite). BFS from every node,
    pruned at half the best cycle found so far.
    """
    n, m = fg.n, fg.m
    adj: list[tuple[int, ...]] = [()] * (n + m)
    for v in range(1, n + 1):
        adj[v - 1] = tuple(n + ci for ci in fg.var_cons[v - 1])
    for ci in range(m):
        adj[n + ci] = tuple(v - 1 for v in fg.con_vars[ci])

    best: int | None = None
    dist = [-1] * (n + m)
    parent = [-1] * (n + m)
    for src in range(n + m):
        if best == 4:
            break  # bipartite minimum
        limit = (best // 2) if best is not None else n + m
        stamp_nodes = [src]
        dist[src] = 0
        parent[src] = -1
        q = deque([src])
        while q:
            u = q.popleft()
            if dist[u] >= limit:
                break
            for w in adj[u]:
                if dist[w] == -1:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    stamp_nodes.append(w)
                    q.append(w)
                elif w != parent[u]:
                    cycle = dist[u] + dist[w] + 1
                    if best is None or cycle < best:
                        best = cycle
                        limit = best // 2
        for node in stamp_nodes:
            dist[node] = -1
    return best


def tree_radius(fg: FactorGraph, x: int, cap: int = 30) -> int:
    """Largest omega <= cap with an acyclic omega-neighborhood around x."""
    r = 0
    while r < cap and is_tree(neighborhood(fg, x, r + 1)):
        r += 1
    return r
