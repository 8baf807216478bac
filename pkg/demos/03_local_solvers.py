"""Local solvers in action: UnitClause, greedy coloring, and decimation.

None of these ever reassigns a variable. The last section peeks inside
marginal-guided decimation: the first variable it fixes on a fresh clause is
the one whose neighborhood marginal is most biased (4/7 toward true).
"""

from csplab import (GeneratorConfig, Instance, MarginalQuery, ProblemKind,
                    as_subinstance, bp_decimation, exact_marginal,
                    gen_instance, greedy_color, unit_clause_solve)

# UnitClause success rate falls off well below the satisfiability threshold
print("UnitClause on 3-SAT, n=2000, 30 runs per density:")
for r in (1.5, 2.0, 2.5, 3.0, 3.5):
    inst_rate = sum(
        unit_clause_solve(
            gen_instance(GeneratorConfig(ProblemKind.KSAT, 2000, 3, r=r, seed=s)),
            rng=s).success
        for s in range(30)) / 30
    print(f"  r={r:.1f}: success rate {inst_rate:.2f}")

print("\nGreedy coloring, k=5, n=300 random graphs (never backtracks, so one"
      " surrounded vertex sinks the run):")
for r in (0.5, 1.0, 1.5, 2.0, 3.0):
    rate = sum(
        greedy_color(
            gen_instance(GeneratorConfig(ProblemKind.KCOLORING, 300, 5, r=r, seed=s)),
            rng=s).success
        for s in range(30)) / 30
    print(f"  r={r:.1f}: success rate {rate:.2f}")

print("\nInside decimation: marginal of x1 in a single clause (x1 v x2 v x3)")
clause = Instance(ProblemKind.KSAT, 5, 3, ((1, 2, 3),))
marg = exact_marginal(MarginalQuery(as_subinstance(clause), {}, 1))
print(f"  P(x1) = {marg.probs}, bias {marg.bias:.4f}")
out = bp_decimation(clause, omega=2, rng=0)
print(f"  decimation first fixes {out.trace.order[0]} "
      f"(a clause variable, set true), then the unconstrained rest")

print("\nDecimation on random 3-SAT, n=40 (exact marginals up to 16 free"
      " variables, loopy BP beyond):")
for r in (2.0, 3.0, 3.5):
    outs = [bp_decimation(
        gen_instance(GeneratorConfig(ProblemKind.KSAT, 40, 3, r=r, seed=s)),
        omega=2, rng=s, cap=16) for s in range(10)]
    rate = sum(o.success for o in outs) / 10
    reasons = {o.trace.reason for o in outs if not o.success}
    note = f"  (failures: {', '.join(sorted(reasons))})" if reasons else ""
    print(f"  r={r:.1f}: success rate {rate:.1f}{note}")
