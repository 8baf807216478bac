import math
import statistics
from itertools import combinations, product

import pytest

from csplab.core import (ConstraintModel, GeneratorConfig, Instance,
                         ProblemKind, gen_instance)
from csplab.exact import count_solutions
from csplab.moments import (UnsupportedModelError, algorithmic_density,
                            coloring_expected_count_product, expected_count,
                            first_moment_density_bound, log_expected_count,
                            log_nae_second_moment, moment_report,
                            nae_pair_prob, nae_second_moment,
                            paley_zygmund_bound)

KSAT, KNAE, KCOL = ProblemKind.KSAT, ProblemKind.KNAE, ProblemKind.KCOLORING


def all_clauses(n, k):
    return [tuple(v * s for v, s in zip(vs, signs))
            for vs in combinations(range(1, n + 1), k)
            for signs in product((1, -1), repeat=k)]


def test_expected_count_sat_single_clause():
    # every width-3 clause excludes exactly one of the 8 assignments
    assert expected_count(KSAT, 3, 1, 3) == pytest.approx(7.0)
    brute = statistics.mean(count_solutions(Instance(KSAT, 3, 3, (c,)))
                            for c in all_clauses(3, 3))
    assert brute == 7


def test_expected_count_nae_single_clause():
    assert expected_count(KNAE, 3, 1, 3) == pytest.approx(6.0)
    brute = statistics.mean(count_solutions(Instance(KNAE, 3, 3, (c,)))
                            for c in all_clauses(3, 3))
    assert brute == 6


def test_expected_count_coloring_exact():
    # brute force over all 27 colorings of 3 vertices, 3 iid uniform edges
    pairs = [(1, 2), (1, 3), (2, 3)]
    total = 0.0
    for coloring in product((1, 2, 3), repeat=3):
        mono = sum(coloring[u - 1] == coloring[v - 1] for u, v in pairs)
        total += ((3 - mono) / 3) ** 3
    assert total == pytest.approx(34 / 3)
    assert expected_count(KCOL, 3, 3, 3) == pytest.approx(34 / 3)


def test_first_moment_bounds_k3():
    assert first_moment_density_bound(KSAT, 3) == pytest.approx(8 * math.log(2))
    assert first_moment_density_bound(KNAE, 3) == pytest.approx(4 * math.log(2))
    assert first_moment_density_bound(KCOL, 3) == pytest.approx(3 * math.log(3))


def test_algorithmic_density_reference_values():
    assert algorithmic_density(KSAT, 3) == pytest.approx(8 * math.log(3) / 3)
    assert algorithmic_density(KNAE, 3) == pytest.approx(4 * math.log(3) / 3)
    assert algorithmic_density(KCOL, 3) == pytest.approx(1.5 * math.log(3))


def test_distinct_model_has_no_closed_form():
    with pytest.raises(UnsupportedModelError):
        log_expected_count(KSAT, 5, 3, 3, model=ConstraintModel.DISTINCT_SET)


def test_nae_pair_prob_boundaries():
    for n, k in ((6, 3), (9, 4), (5, 2)):
        single = 1 - 2.0 ** (1 - k)
        assert nae_pair_prob(n, k, n) == pytest.approx(single)
        assert nae_pair_prob(n, k, 0) == pytest.approx(single)


def test_nae_pair_prob_symmetry():
    for z in range(8):
        assert nae_pair_prob(7, 3, z) == pytest.approx(nae_pair_prob(7, 3, 7 - z))


def test_nae_pair_prob_brute_force_n4_z2():
    # both-satisfied frequency over all C(4,3)*2^3 = 32 clauses for a fixed
    # pair of assignments agreeing on exactly 2 variables
    sigma = (0, 0, 1, 1)
    tau = (0, 0, 0, 0)  # agrees on variables 1, 2
    hits = 0
    clauses = all_clauses(4, 3)
    for c in clauses:
        def nae(a):
            lits = [(l > 0) == bool(a[abs(l) - 1]) for l in c]
            return any(lits) and not all(lits)
        hits += nae(sigma) and nae(tau)
    assert nae_pair_prob(4, 3, 2) == pytest.approx(hits / len(clauses))


def test_nae_second_moment_single_clause():
    # each of the 8 clauses over 3 variables has exactly 6 NAE solutions
    brute = statistics.mean(count_solutions(Instance(KNAE, 3, 3, (c,))) ** 2
                            for c in all_clauses(3, 3))
    assert brute == 36
    assert nae_second_moment(3, 1, 3) == pytest.approx(36.0)


def test_nae_second_moment_m0():
    assert nae_second_moment(4, 0, 3) == pytest.approx(4.0 ** 4)
    assert paley_zygmund_bound(4, 0, 3) == pytest.approx(1.0)


@pytest.mark.slow
def test_nae_second_moment_monte_carlo():
    n, m, k, trials = 12, 12, 3, 10_000
    sq = []
    for seed in range(trials):
        inst = gen_instance(GeneratorConfig(KNAE, n, k, m=m, seed=seed))
        sq.append(count_solutions(inst) ** 2)
    mean = statistics.mean(sq)
    se = statistics.stdev(sq) / math.sqrt(trials)
    assert abs(mean - nae_second_moment(n, m, k)) <= 3 * se


def test_second_moment_dominates_squared_first():
    for n, m in ((6, 3), (10, 8), (12, 20)):
        assert log_nae_second_moment(n, m, 3) >= 2 * log_expected_count(KNAE, n, m, 3) - 1e-9


def test_pz_bound_in_unit_interval():
    for n, m in ((8, 4), (10, 12), (12, 30)):
        b = paley_zygmund_bound(n, m, 3)
        assert 0.0 <= b <= 1.0


def test_expected_count_decreases_in_m():
    for kind in (KSAT, KNAE, KCOL):
        values = [log_expected_count(kind, 10, m, 3) for m in range(0, 30, 5)]
        assert all(a > b for a, b in zip(values, values[1:]))


def test_log_domain_survives_large_n():
    val = log_nae_second_moment(10_000, 20_000, 3)
    assert math.isfinite(val)
    val2 = log_expected_count(KNAE, 10_000, 20_000, 3)
    assert math.isfinite(val2) and 2 * val2 <= val


def test_markov_consistency_sampled():
    # P(|S| > 0) <= E|S| + 3 SE on a family where E|S| < 1
    n, m, k, trials = 8, 45, 3, 300
    ex = expected_count(KSAT, n, m, k)
    assert ex < 1
    hits = sum(count_solutions(gen_instance(GeneratorConfig(KSAT, n, k, m=m, seed=s))) > 0
               for s in range(trials))
    p = hits / trials
    se = math.sqrt(max(p * (1 - p), 1e-9) / trials)
    assert p <= ex + 3 * se


def test_expected_count_matches_sampling_all_kinds():
    trials = 400
    for kind, m in ((KSAT, 12), (KNAE, 12), (KCOL, 10)):
        counts = [count_solutions(gen_instance(GeneratorConfig(kind, 8, 3, m=m, seed=s)))
                  for s in range(trials)]
        mean = statistics.mean(counts)
        se = statistics.stdev(counts) / math.sqrt(trials)
        assert abs(mean - expected_count(kind, 8, m, 3)) <= 3 * se


def test_coloring_product_estimate_close_in_log():
    exact = log_expected_count(KCOL, 40, 60, 3)
    estimate = math.log(coloring_expected_count_product(40, 60, 3))
    assert abs(exact - estimate) <= 0.05 * abs(exact)


def test_moment_report_fields():
    rep = moment_report(KNAE, 10, 12, 3)
    assert rep.pz_bound is not None and rep.second_moment is not None
    assert rep.second_moment >= rep.expected_count ** 2 - 1e-6
    rep2 = moment_report(KSAT, 10, 12, 3)
    assert rep2.pz_bound is None
    assert rep2.r == pytest.approx(1.2)
