"""Random acyclic sub-instances with pins, for checking BP against enumeration."""

import random

from csplab.core import Instance, ProblemKind
from csplab.factor import as_subinstance, is_tree
from csplab.solvers import InconsistentError, MarginalQuery, exact_marginal

KINDS = (ProblemKind.KSAT, ProblemKind.KNAE, ProblemKind.KCOLORING)


def random_tree_query(rng: random.Random, max_vars: int = 20) -> MarginalQuery | None:
    """A random tree-shaped instance with consistent random pins, or None if
    the pins happened to be contradictory (caller retries)."""
    kind = rng.choice(KINDS)
    if kind is ProblemKind.KCOLORING:
        k = rng.choice((2, 3, 4))
        arity = 2
        # keep the k^n counting cube small for the wider palettes
        max_vars = min(max_vars, {2: 20, 3: 14, 4: 11}[k])
    else:
        k = rng.choice((2, 3, 4))
        arity = k
    n = 1
    constraints = []
    # each new constraint touches exactly one existing variable, so the
    # factor graph stays a tree
    while n + arity - 1 <= max_vars and rng.random() < 0.85:
        anchor = rng.randint(1, n)
        fresh = list(range(n + 1, n + arity))
        n += arity - 1
        vs = [anchor] + fresh
        rng.shuffle(vs)
        if kind.is_formula:
            constraints.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
        else:
            u, v = vs
            constraints.append((u, v) if u < v else (v, u))
    inst = Instance(kind, n, k, tuple(constraints))
    assert is_tree(inst)

    lo = 0 if kind.is_formula else 1
    pinned = {v: rng.randrange(lo, lo + inst.domain_size())
              for v in range(1, n + 1) if rng.random() < 0.25}
    free = [v for v in range(1, n + 1) if v not in pinned]
    if not free:
        return None
    query = MarginalQuery(as_subinstance(inst), pinned, rng.choice(free))
    try:
        exact_marginal(query)
    except InconsistentError:
        return None
    return query
