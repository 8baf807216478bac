"""Moment-method arithmetic: expected counts, density bounds, Paley-Zygmund.

Closed-form expected solution counts are checked against exhaustive
enumeration on the spot, then the first-moment density ceilings and the
NAE second-moment lower bound machinery are evaluated.
"""

import statistics

from csplab import (GeneratorConfig, ProblemKind, count_solutions,
                    expected_count, first_moment_density_bound, gen_instance,
                    moment_report, nae_second_moment, paley_zygmund_bound)
from csplab.moments import algorithmic_density

print("expected |S| vs the sampled mean (n=10, k=3, m=12, 300 instances):")
for kind in ProblemKind:
    counts = [count_solutions(gen_instance(GeneratorConfig(kind, 10, 3, m=12, seed=s)))
              for s in range(300)]
    print(f"  {kind.value:5s}: formula {expected_count(kind, 10, 12, 3):9.2f}"
          f"   sampled {statistics.mean(counts):9.2f}")

print("\nfirst-moment density ceilings and local-algorithm reference densities:")
print("  kind   k   first-moment   algorithmic")
for kind in ProblemKind:
    for k in (3, 4, 5):
        print(f"  {kind.value:5s} {k}   {first_moment_density_bound(kind, k):10.3f}"
              f"   {algorithmic_density(kind, k):10.3f}")

print("\nPaley-Zygmund on 3-NAE at n=12 (bound vs 400-instance frequency):")
for m in (6, 12, 24):
    bound = paley_zygmund_bound(12, m, 3)
    hits = sum(count_solutions(gen_instance(GeneratorConfig(
        ProblemKind.KNAE, 12, 3, m=m, seed=s))) > 0 for s in range(400)) / 400
    rep = moment_report(ProblemKind.KNAE, 12, m, 3)
    print(f"  m={m:2d}: E X = {rep.expected_count:8.1f}  E X^2 = {nae_second_moment(12, m, 3):12.1f}"
          f"  bound {bound:.3f}  empirical P(sat) {hits:.3f}")
