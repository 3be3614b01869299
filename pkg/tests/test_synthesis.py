import collections
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bilinalg.bilinear import verify
from bilinalg.bounds import TABLE, co_costs
from bilinalg.divisor import Divisor
from bilinalg.elliptic import EllipticCurve, curve_with_trace
from bilinalg.fixtures import EX42, MU2_163_CURVE, MU2_163_MULTISET
from bilinalg.p1 import ProjectiveLine
from bilinalg.rank import brute_force_rank
from bilinalg.synthesis import (FAIL_I, FAIL_II1, READY, InterpolationPlan, PreconditionError, SearchExhausted,
                                assemble, check_conditions, curve_counts, exhaustive_class_search, genus0_plan,
                                genus1_plan, genus1_select, iterative_search_asym, iterative_search_sym,
                                multiset_cost, plan_G, search_plan, select_points)


def inner_total(plan):
    return sum(TABLE._inner(plan.q, d, u, plan.symmetric).length for d, u in plan.cells)


# assembly ------------------------------------------------------------------------


def test_assemble_f4_karatsuba():
    alg = assemble(genus0_plan(2, 2, 1), TABLE._inner)
    assert alg.length == 3
    assert alg.symmetric
    assert brute_force_rank(alg.algebra, 3).rank == 3


def test_assemble_q7_mu22():
    plan = genus0_plan(7, 2, 2)
    alg = assemble(plan, TABLE._inner)
    assert alg.length == 7 == inner_total(plan)


def test_assemble_q4_elliptic_mu22():
    C = curve_with_trace(4, -3)
    plan = genus1_plan(C, 2, 2, {(1, 1): 8}, "a")
    assert check_conditions(plan).ready
    alg = assemble(plan, TABLE._inner)
    assert alg.length == 8 == inner_total(plan)
    assert verify(alg)


@pytest.mark.parametrize("q,m,l,ms", [(2, 2, 2, {(1, 2): 2, (3, 1): 1}),
                                      (3, 3, 1, {(1, 1): 3, (2, 1): 1}),
                                      (2, 3, 1, {(1, 1): 3, (2, 1): 1}),
                                      (4, 2, 2, {(1, 1): 5, (2, 1): 1})])
def test_assemble_genus0_with_multiset(q, m, l, ms):
    plan = genus0_plan(q, m, l, ms)
    assert plan.degree_G == 2 * m * l - 1
    alg = assemble(plan, TABLE._inner)
    assert alg.length == inner_total(plan)


def test_assemble_rejects_unready():
    C = curve_with_trace(4, -3)
    plan = genus1_plan(C, 2, 2, {(1, 1): 8}, "a")
    bad = replace(plan, D1=Divisor.point(C.inf, 2))
    with pytest.raises(PreconditionError):
        assemble(bad, TABLE._inner)


def test_genus0_plan_needs_points():
    with pytest.raises(PreconditionError):
        genus0_plan(2, 3, 1)


# conditions ----------------------------------------------------------------------


def test_p1_negative_degree_excess():
    plan = genus0_plan(5, 2, 1)
    assert (plan.D1 + plan.D2 - plan.G_divisor).degree < 0
    rep = check_conditions(plan)
    assert rep.l_excess == 0 and rep.injective


def test_principal_excess_fails_i():
    C = curve_with_trace(5, -2)
    Q = C.rational_points()[0]
    D = Divisor.point(C.inf, 2)
    plan = InterpolationPlan(C, 1, 1, Q, ((C.inf, 4),), D, D, symmetric=True)
    rep = check_conditions(plan)
    assert rep.status == FAIL_I
    assert rep.l_excess == 1 and not rep.injective


def test_mu2_163_divisor_fails_ii():
    C = EllipticCurve(2, MU2_163_CURVE)
    plan = genus1_plan(C, 163, 1, MU2_163_MULTISET, "d")
    D = Divisor.point(C.inf, 163)
    bad = replace(plan, D1=D, D2=D)
    assert check_conditions(bad, matrix=False).status == FAIL_II1


CURVES = [(2, -1), (3, -2), (4, -3), (5, -2), (5, -4), (2, 0)]


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(CURVES + [None]), st.integers(0, 2**32))
def test_divisor_and_matrix_conditions_agree(ct, seed):
    """check_conditions asserts (i) <=> (i') and (ii') => (ii) on every call."""
    rng = np.random.default_rng(seed)
    m, l = [(1, 1), (1, 2), (2, 1), (2, 2), (3, 1)][rng.integers(5)]
    if ct is None:
        q = int(rng.choice([2, 3, 4, 5]))
        C = ProjectiveLine(q)
        Q = C.find_point_of_degree(m)
    else:
        C = curve_with_trace(*ct)
        if C.count_closed_points(m) == 0:
            return
        Q = C.find_point_of_degree(m, int(rng.integers(5)))
    pts = [P for P in C.rational_points() + C.closed_points(2)[:4] if P != Q]
    lQ = Divisor.point(Q, l)

    def rand_D():
        D = lQ + Divisor.point(C.inf, int(rng.integers(-1, 2)))
        P = pts[rng.integers(len(pts))]
        return D + Divisor.point(P, 1) - Divisor.point(C.inf, P.degree) if rng.random() < 0.5 else D

    D1 = rand_D()
    D2 = D1 if rng.random() < 0.3 else rand_D()
    target = D1.degree + D2.degree + int(rng.integers(-2, 2))
    G, deg = [], 0
    for i in rng.permutation(len(pts)):
        if deg >= target:
            break
        u = int(rng.integers(1, 3))
        G.append((pts[i], u))
        deg += pts[i].degree * u
    if not G:
        return
    plan = InterpolationPlan(C, m, l, Q, tuple(G), D1, D2)
    rep = check_conditions(plan)
    assert rep.injective == (rep.l_excess == 0)
    if rep.i1 == 0:
        assert rep.surjective1
    if rep.i2 == 0:
        assert rep.surjective2
    if rep.ready:
        alg = assemble(plan, TABLE._inner)
        assert alg.length == inner_total(plan)


# genus-1 cases ----------------------------------------------------------------------


def test_case_d_degree_reasons(monkeypatch):
    C = curve_with_trace(3, -2)
    Q = C.find_point_of_degree(2)
    G = select_points(C, {(1, 1): 6, (2, 1): 1}, avoid=Q)
    assert sum(P.degree * u for P, u in G) == 8

    def boom(*a, **k):
        raise AssertionError("class-group query in case d")

    monkeypatch.setattr(C, "sigma", boom)
    monkeypatch.setattr(C, "is_principal", boom)
    monkeypatch.setattr(C, "l_dim", boom)
    monkeypatch.setattr(C, "index_of_speciality", boom)
    D1, D2 = genus1_select(C, Q, 1, G, "d")
    monkeypatch.undo()
    assert D1 == D2 == Divisor.point(C.inf, 3)
    plan = InterpolationPlan(C, 2, 1, Q, G, D1, D2, symmetric=True)
    assert check_conditions(plan).ready
    alg = assemble(plan, TABLE._inner)
    assert alg.symmetric and alg.length == 6 + 3


def test_case_d_too_small():
    C = curve_with_trace(3, -2)
    Q = C.find_point_of_degree(2)
    G = select_points(C, {(1, 1): 6}, avoid=Q)
    with pytest.raises(PreconditionError, match="case d"):
        genus1_select(C, Q, 1, G, "d")


def test_case_b_rejected_on_two_torsion_group():
    C = EllipticCurve(3, (0, 0, 0, 2, 0))  # y^2 = x^3 - x, group (Z/2)^2
    F_pts = C.rational_points()
    assert len(F_pts) == 4
    Q = [P for P in F_pts if not P.is_infinity][0]
    P = [P for P in F_pts if not P.is_infinity and P != Q][0]
    G = ((P, 2),)
    assert C.sigma(Divisor(G)).is_infinity
    with pytest.raises(PreconditionError, match="2-torsion"):
        genus1_select(C, Q, 1, G, "b")


@pytest.mark.parametrize("q,t,m,l,ms,case", [
    (5, -4, 2, 2, {(1, 1): 8}, "a"),
    (5, -4, 2, 2, {(1, 1): 8}, "b"),
    (4, -3, 2, 1, {(1, 1): 5}, "c"),
    (3, -2, 2, 2, {(1, 1): 6, (2, 1): 1}, "a"),
    (7, -5, 3, 1, {(1, 1): 7}, "c"),
])
def test_genus1_cases_ready(q, t, m, l, ms, case):
    C = curve_with_trace(q, t)
    plan = genus1_plan(C, m, l, ms, case)
    assert check_conditions(plan).ready
    if case != "a":
        assert plan.D1 == plan.D2
    alg = assemble(plan, TABLE._inner)
    assert alg.length == inner_total(plan)


def test_case_preconditions():
    C = curve_with_trace(2, 0)  # 3 rational points
    Q = C.find_point_of_degree(2)
    G = select_points(C, {(1, 1): 3}, avoid=Q)
    for case in "abc":
        with pytest.raises(PreconditionError):
            genus1_select(C, Q, 1, G, case)
    with pytest.raises(ValueError):
        genus1_select(C, Q, 1, G, "e")


# iterative searches -------------------------------------------------------------------


def test_iterative_asym_q4():
    C = curve_with_trace(4, -3)
    Q = C.find_point_of_degree(2)
    cost = TABLE.cost_table(4, [(1, 1), (1, 2), (2, 1)], False)
    ms = plan_G(curve_counts(C, 2, exclude=Q), cost, 9, exact=True)
    G = select_points(C, ms, avoid=Q)
    assert sum(P.degree * u for P, u in G) == 9
    D1, D2, tr = iterative_search_asym(C, Q, 2, G, C.rational_points())
    assert tr.rr_computations <= 3
    # starting divisor 3P0 - 2Q has negative degree, so the first check is free
    assert tr.log[0][0] == "Y0"
    plan = InterpolationPlan(C, 2, 2, Q, G, D1, D2)
    assert check_conditions(plan).ready
    alg = assemble(plan, TABLE._inner)
    # 8 rational points give degree 8 with unit cells, so degree 9 costs one extra cell of cost 3
    assert alg.length == multiset_cost(ms, cost) == 10


def test_iterative_sym_q7():
    C = curve_with_trace(7, -5)
    assert len(C.rational_points()) >= 6
    Q = C.find_point_of_degree(2)
    G = select_points(C, {(1, 1): 4}, avoid=Q)
    D, tr = iterative_search_sym(C, Q, 1, G, C.rational_points())
    assert tr.rr_computations <= 5
    for stage in {s for s, _, _ in tr.log}:
        assert sum(1 for s, _, v in tr.log if s == stage and not all(v)) <= 5
    plan = InterpolationPlan(C, 2, 1, Q, G, D, D, symmetric=True)
    assert check_conditions(plan).ready
    alg = assemble(plan, TABLE._inner)
    assert alg.symmetric
    assert np.array_equal(alg.Phi, alg.Psi)


def test_search_needs_points_and_degree():
    C = curve_with_trace(2, 0)
    Q = C.find_point_of_degree(2)
    G = select_points(C, {(1, 1): 3}, avoid=Q)
    with pytest.raises(PreconditionError):
        iterative_search_sym(C, Q, 1, G, C.rational_points())
    C = curve_with_trace(4, -3)
    Q = C.find_point_of_degree(2)
    G = select_points(C, {(1, 1): 3}, avoid=Q)
    with pytest.raises(PreconditionError, match="deg G"):
        iterative_search_asym(C, Q, 1, G, C.rational_points())


@pytest.mark.parametrize("q,t,m,l", [(4, -3, 2, 1), (5, -4, 2, 1), (7, -5, 2, 2), (8, -5, 3, 1), (9, -6, 2, 2)])
def test_asym_and_sym_searches_both_verify(q, t, m, l):
    C = curve_with_trace(q, t)
    Q = C.find_point_of_degree(m)
    n = 2 * m * l
    N = len([P for P in C.rational_points() if P != Q])
    G = select_points(C, {(1, 1): n} if N >= n else {(1, 1): N - 1, (1, 1 + n - N): 1}, avoid=Q)
    plans = []
    for sym in (False, True):
        plan, tr = search_plan(C, m, l, G, sym, Q=Q)
        assert tr.rr_computations <= (5 if sym else 3)
        assert check_conditions(plan).ready
        plans.append(plan)
    a_alg = assemble(plans[0], TABLE._inner)
    s_alg = assemble(plans[1], TABLE._inner)
    assert s_alg.symmetric and np.array_equal(s_alg.Phi, s_alg.Psi)
    assert a_alg.length <= s_alg.length


# exhaustive class search -------------------------------------------------------------


def test_class_search_trivial_group_exhausts():
    C = EllipticCurve(2, MU2_163_CURVE)
    assert len(C.rational_points()) == 1
    Q = C.find_point_of_degree(3)
    G = select_points(C, {(2, 1): 2, (3, 1): 3}, avoid=Q)
    with pytest.raises(SearchExhausted):
        exhaustive_class_search(C, Q, 1, G)


def test_class_search_q9():
    C = curve_with_trace(9, -6)
    assert len(C.rational_points()) == 16
    Q = C.find_point_of_degree(4)
    G = select_points(C, {(1, 1): 16}, avoid=Q)
    D1, D2 = exhaustive_class_search(C, Q, 2, G)
    plan = InterpolationPlan(C, 4, 2, Q, G, D1, D2)
    assert check_conditions(plan).ready


@pytest.mark.parametrize("q,t", [(4, -3), (5, -4), (3, -2)])
def test_class_search_success_is_ready(q, t):
    C = curve_with_trace(q, t)
    Q = C.find_point_of_degree(2)
    N = len(C.rational_points())
    G = select_points(C, {(1, 1): min(N, 4)} if N >= 4 else {(1, 1): N, (2, 1): 1}, avoid=Q)
    D1, D2 = exhaustive_class_search(C, Q, 1, G)
    assert check_conditions(InterpolationPlan(C, 2, 1, Q, G, D1, D2)).ready


# choosing G ---------------------------------------------------------------------------


def test_plan_G_mu2_163():
    C = EllipticCurve(2, MU2_163_CURVE)
    ms = plan_G(curve_counts(C, 8), co_costs(), 2 * 163 + 3)
    assert ms == MU2_163_MULTISET
    assert sum(n * d * u for (d, u), n in ms.items()) == 329
    assert multiset_cost(ms, co_costs()) == 910


def test_plan_G_ex42_q3():
    C = curve_with_trace(3, -2)
    Q = C.find_point_of_degree(4)
    cells = [(d, u) for d in (1, 2) for u in (1, 2, 3, 4) if d * u <= 4]
    cost = TABLE.cost_table(3, cells, False)
    ms = plan_G(curve_counts(C, 2, exclude=Q), cost, 16, exact=True)
    assert ms == EX42[3][1]


def test_plan_G_ex42_q2():
    C = curve_with_trace(2, -1)
    Q = C.find_point_of_degree(4)
    cells = [(d, u) for d in (1, 2, 3) for u in (1, 2, 3, 4) if d * u <= 4]
    cost = TABLE.cost_table(2, cells, False)
    ms = plan_G(curve_counts(C, 3, exclude=Q), cost, 16, exact=True)
    assert ms == EX42[2][1]


def test_plan_G_respects_counts_and_target():
    counts = {1: 3, 2: 1}
    cost = {(1, 1): 1, (1, 2): 3, (2, 1): 3}
    ms = plan_G(counts, cost, 6)
    assert sum(n * d * u for (d, u), n in ms.items()) >= 6
    per_degree = collections.Counter()
    for (d, _), n in ms.items():
        per_degree[d] += n
    assert all(per_degree[d] <= counts[d] for d in per_degree)
    # unit cells alone reach degree 5; one doubled point is the cheapest fix
    assert multiset_cost(ms, cost) == 8
    with pytest.raises(PreconditionError, match="deficit"):
        plan_G({1: 1}, {(1, 1): 1}, 5)


@settings(max_examples=80, deadline=None)
@given(st.dictionaries(st.integers(1, 3), st.integers(0, 4), min_size=1), st.integers(1, 12), st.booleans())
def test_plan_G_is_optimal(counts, target, exact):
    """Exact DP agrees with brute force over all multisets."""
    cost = {(1, 1): 1, (1, 2): 3, (1, 3): 5, (2, 1): 3, (2, 2): 9, (3, 1): 6}
    cells = [c for c in cost if counts.get(c[0], 0)]
    best = None
    options = {d: [()] for d in counts}
    for d, n in counts.items():
        us = [u for dd, u in cells if dd == d]
        combos = [()]
        for _ in range(n):
            combos = combos + [c + (u,) for c in combos for u in us if not c or u >= c[-1]]
        options[d] = sorted(set(combos))
    import itertools

    for pick in itertools.product(*options.values()):
        deg = sum(d * u for d, us in zip(options, pick) for u in us)
        if deg < target or (exact and deg != target):
            continue
        c = sum(cost[(d, u)] for d, us in zip(options, pick) for u in us)
        best = c if best is None else min(best, c)
    if best is None:
        with pytest.raises(PreconditionError):
            plan_G(counts, cost, target, exact)
        return
    ms = plan_G(counts, cost, target, exact)
    deg = sum(n * d * u for (d, u), n in ms.items())
    assert deg == target if exact else deg >= target
    assert multiset_cost(ms, cost) == best


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(4, -3), (5, -4), (7, -5), (8, -5), (9, -6), (5, -2), (7, -3)]),
       st.sampled_from([(1, 1), (2, 1), (1, 2), (3, 1), (2, 2)]), st.integers(0, 3), st.integers(0, 2**32))
def test_search_verdicts_are_sound(ct, ml, extra, seed):
    """Verdicts settled without computation agree with l(.) computed directly."""
    C = curve_with_trace(*ct)
    m, l = ml
    rng = np.random.default_rng(seed)
    Q = C.find_point_of_degree(m, int(rng.integers(3)))
    S = [C.rational_points()[i] for i in rng.permutation(len(C.rational_points()))]
    pool = [P for P in S if P != Q]
    target = 2 * m * l + extra
    G, deg = [], 0
    for P in pool:
        if deg >= target:
            break
        u = min(int(rng.integers(1, 3)), target - deg)
        G.append((P, u))
        deg += u
    if deg < 2 * m * l:
        return
    Gd, lQ = Divisor(G), Divisor.point(Q, l)
    D1, D2, tr = iterative_search_asym(C, Q, l, G, S)
    assert tr.rr_computations <= 3
    Y = Z = Divisor.point(S[0], m * l - 1)
    for stage, P, verdicts in tr.log:
        if stage == "Y0":
            assert verdicts[0] == (C.l_dim(Y + Divisor.point(P) - lQ) == 0)
        else:
            ZP = Z + Divisor.point(P)
            assert verdicts[0] == (C.l_dim(ZP - lQ) == 0)
            if verdicts[0]:
                assert verdicts[1] == (C.l_dim(D1 + ZP - Gd) == 0)
    assert check_conditions(InterpolationPlan(C, m, l, Q, tuple(G), D1, D2)).ready
    if len(S) >= 6:
        D, tr = iterative_search_sym(C, Q, l, G, S)
        assert tr.rr_computations <= 5
        for _, P, verdicts in tr.log:
            TP = Divisor.point(S[0], m * l - 1) + Divisor.point(P)
            assert verdicts[0] == (C.l_dim(TP - lQ) == 0)
            if verdicts[0]:
                assert verdicts[1] == (C.l_dim(2 * TP - Gd) == 0)
        assert check_conditions(InterpolationPlan(C, m, l, Q, tuple(G), D, D, symmetric=True)).ready
