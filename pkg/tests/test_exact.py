import io
from itertools import combinations, permutations, product

from csplab.core import (GeneratorConfig, Instance, ProblemKind, Status,
                         complement, evaluate, gen_instance)
from csplab.exact import (DecideStatus, count_solutions, decide,
                          enumerate_solutions, write_solutions,
                          _enumerate_dfs, _enumerate_vectorized)
from csplab.solvers import greedy_color, unit_clause_solve

KSAT, KNAE, KCOL = ProblemKind.KSAT, ProblemKind.KNAE, ProblemKind.KCOLORING


def all_clauses_n3():
    return [tuple(v * s for v, s in zip(vs, signs))
            for vs in combinations((1, 2, 3), 3)
            for signs in product((1, -1), repeat=3)]


def test_decide_empty_formula_sat():
    inst = gen_instance(GeneratorConfig(KSAT, 4, 3, m=0, seed=0))
    res = decide(inst)
    assert res.status is DecideStatus.SAT
    assert evaluate(inst, res.witness) is Status.SATISFIED


def test_decide_all_clauses_unsat():
    inst = Instance(KSAT, 3, 3, tuple(all_clauses_n3()))
    assert decide(inst).status is DecideStatus.UNSAT


def test_decide_k4_not_three_colorable():
    k4 = Instance(KCOL, 4, 3, ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)))
    assert decide(k4).status is DecideStatus.UNSAT
    assert decide(Instance(KCOL, 4, 4, k4.constraints)).status is DecideStatus.SAT


def test_decide_budget_result():
    inst = gen_instance(GeneratorConfig(KSAT, 40, 3, r=4.2, seed=11))
    res = decide(inst, node_budget=3)
    assert res.status is DecideStatus.BUDGET
    assert res.witness is None


def test_enumerate_single_clause():
    sols = enumerate_solutions(Instance(KSAT, 3, 3, ((1, 2, 3),)))
    assert len(sols) == 7 and sols.exhaustive
    assert (0, 0, 0) not in sols.solutions
    assert sols.solutions == tuple(sorted(sols.solutions))  # lexicographic


def test_enumerate_triangle_colorings():
    tri = Instance(KCOL, 3, 3, ((1, 2), (1, 3), (2, 3)))
    sols = enumerate_solutions(tri)
    assert len(sols) == 6
    assert set(sols.solutions) == set(permutations((1, 2, 3)))


def test_enumerate_path_two_colors():
    path = Instance(KCOL, 3, 2, ((1, 2), (2, 3)))
    sols = enumerate_solutions(path)
    assert set(sols.solutions) == {(1, 2, 1), (2, 1, 2)}


def test_enumerate_cap_flagged():
    inst = gen_instance(GeneratorConfig(KSAT, 8, 3, m=2, seed=0))
    full = enumerate_solutions(inst)
    capped = enumerate_solutions(inst, cap=10)
    assert len(full) > 10
    assert not capped.exhaustive and len(capped) == 10
    assert capped.solutions == full.solutions[:10]


def test_dfs_matches_vectorized():
    for kind, k, m in ((KSAT, 3, 10), (KNAE, 3, 8), (KCOL, 3, 9)):
        for seed in range(5):
            inst = gen_instance(GeneratorConfig(kind, 8, k, m=m, seed=seed))
            vec, vex = _enumerate_vectorized(inst, 10**6)
            dfs, dex = _enumerate_dfs(inst, 10**6)
            assert vex and dex
            assert vec == dfs


def test_decide_agrees_with_enumeration():
    for kind, k in ((KSAT, 3), (KNAE, 3), (KCOL, 3)):
        for seed in range(25):
            m = 30 if kind is KSAT else 18
            inst = gen_instance(GeneratorConfig(kind, 9, k, m=m, seed=seed))
            sols = enumerate_solutions(inst)
            assert sols.exhaustive
            assert (decide(inst).status is DecideStatus.SAT) == (len(sols) > 0)
            assert count_solutions(inst) == len(sols)


def test_nae_solution_set_closed_under_complement():
    for seed in range(10):
        inst = gen_instance(GeneratorConfig(KNAE, 9, 3, m=12, seed=seed))
        sols = set(enumerate_solutions(inst).solutions)
        assert len(sols) % 2 == 0
        for s in sols:
            assert complement(s) in sols


def test_coloring_solutions_closed_under_palette_permutation():
    for seed in range(8):
        inst = gen_instance(GeneratorConfig(KCOL, 7, 3, m=8, seed=seed))
        sols = set(enumerate_solutions(inst).solutions)
        for perm in permutations((1, 2, 3)):
            relabel = {i + 1: perm[i] for i in range(3)}
            for s in sols:
                assert tuple(relabel[c] for c in s) in sols


def test_local_solver_witnesses_in_solution_set():
    for seed in range(10):
        f = gen_instance(GeneratorConfig(KSAT, 10, 3, m=20, seed=seed))
        sols = set(enumerate_solutions(f).solutions)
        out = unit_clause_solve(f, seed)
        if out.success:
            assert out.assignment in sols
    for seed in range(10):
        g = gen_instance(GeneratorConfig(KCOL, 8, 3, m=10, seed=seed))
        sols = set(enumerate_solutions(g).solutions)
        out = greedy_color(g, seed)
        if out.success:
            assert out.assignment in sols


def test_write_solutions_format():
    sols = enumerate_solutions(Instance(KSAT, 3, 3, ((1, 2, 3),)))
    buf = io.StringIO()
    write_solutions(sols, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "# n=3 kind=ksat k=3 count=7 exhaustive=true"
    assert lines[1:] == ["001", "010", "011", "100", "101", "110", "111"]

    tri = Instance(KCOL, 3, 3, ((1, 2), (1, 3), (2, 3)))
    buf = io.StringIO()
    write_solutions(enumerate_solutions(tri), buf)
    assert "123" in buf.getvalue().splitlines()[1:]
