"""Generate random instances, serialize them, and ask the complete oracles.

Walks through the three problem families at a friendly size: draw an
instance, round-trip it through DIMACS, decide satisfiability, and count or
list all solutions.
"""

from csplab import (DecideStatus, GeneratorConfig, ProblemKind, decide,
                    enumerate_solutions, gen_instance, parse_dimacs,
                    write_dimacs)

for kind, k, n, r in ((ProblemKind.KSAT, 3, 20, 3.0),
                      (ProblemKind.KNAE, 3, 20, 1.5),
                      (ProblemKind.KCOLORING, 3, 20, 2.0)):
    inst = gen_instance(GeneratorConfig(kind, n, k, r=r, seed=42))
    print(f"--- {kind.value}: n={inst.n} m={inst.m} r={inst.r:.2f}")

    text = write_dimacs(inst)
    assert parse_dimacs(text) == inst
    print("dimacs header:", text.splitlines()[1])

    res = decide(inst)
    print("oracle:", res.status.value,
          f"(search visited {res.nodes} nodes)")
    if res.status is DecideStatus.SAT:
        sols = enumerate_solutions(inst, cap=100_000)
        tag = "exactly" if sols.exhaustive else "at least"
        print(f"solution count: {tag} {len(sols)}")
        print("first solution:", sols.solutions[0])
    print()
