"""Interpolation on curves: from divisors Q, G, D1, D2 to a bilinear
algorithm for A_q(m, l).

With E_k = L(D_k) evaluated at Q^[l] (onto A_q(m, l)) and L(D1 + D2)
evaluated at the thickened points of G (into the product of the
A_q(d_i, u_i)), an algorithm is

    Phi = Phi_in Ev_G S_1,   Psi = Psi_in Ev_G S_2,   W = Ev_Q rho W_in

where S_k are sections of Ev_Q on L(D_k), rho retracts Ev_G on
L(D1 + D2) and (Phi_in, Psi_in, W_in) is the direct sum of the inner
algorithms.
"""

from __future__ import annotations

import collections
import logging
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .algebra import truncated
from .bilinear import BilinearAlgorithm, direct_sum, verify
from .divisor import Divisor
from .p1 import ProjectiveLine

log = logging.getLogger(__name__)

READY = "READY"
FAIL_I = "FAIL(i')"
FAIL_II1 = "FAIL(ii'1)"
FAIL_II2 = "FAIL(ii'2)"


class PreconditionError(ValueError):
    pass


class SearchExhausted(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class InterpolationPlan:
    curve: object
    m: int
    l: int
    Q: object
    G: tuple  # ((P, u), ...)
    D1: Divisor
    D2: Divisor
    symmetric: bool = False
    meta: dict = field(default_factory=dict)

    @property
    def q(self) -> int:
        return self.curve.q

    @property
    def G_divisor(self) -> Divisor:
        return Divisor([(P, u) for P, u in self.G])

    @property
    def degree_G(self) -> int:
        return sum(P.degree * u for P, u in self.G)

    @property
    def cells(self) -> list[tuple[int, int]]:
        return [(P.degree, u) for P, u in self.G]

    def multiset(self) -> dict:
        return dict(sorted(collections.Counter(self.cells).items()))

    def describe(self) -> str:
        lines = [
            f"curve {self.curve.literal()}",
            f"target m={self.m} l={self.l}",
            f"Q {self.Q!r}",
            "G " + " + ".join(f"{u}*{P!r}" for P, u in self.G),
            f"D1 {self.D1!r}",
            f"D2 {self.D2!r}",
            f"sym {int(self.symmetric)}",
        ]
        return "\n".join(lines)


@dataclass(frozen=True)
class ConditionReport:
    status: str
    l_excess: int  # l(D1 + D2 - G)
    i1: int  # i(D1 - lQ)
    i2: int
    injective: bool | None = None
    surjective1: bool | None = None
    surjective2: bool | None = None

    @property
    def ready(self) -> bool:
        return self.status == READY


# evaluation maps ------------------------------------------------------------


def ev_Q(curve, space, Q, l, D):
    return curve.evaluation_matrix(space, [(Q, l)], [D[Q]])


def ev_G(curve, space, G, D):
    return curve.evaluation_matrix(space, list(G), [D[P] for P, _ in G])


def check_conditions(plan: InterpolationPlan, matrix: bool = True) -> ConditionReport:
    """Divisor conditions (i') and (ii'), cross-checked against injectivity
    and surjectivity of the evaluation matrices when ``matrix`` is set."""
    C, l, Q = plan.curve, plan.l, plan.Q
    lQ = Divisor.point(Q, l)
    excess = C.l_dim(plan.D1 + plan.D2 - plan.G_divisor)
    i1 = C.index_of_speciality(plan.D1 - lQ)
    i2 = i1 if plan.D2 == plan.D1 else C.index_of_speciality(plan.D2 - lQ)
    status = FAIL_I if excess else FAIL_II1 if i1 else FAIL_II2 if i2 else READY
    if not matrix:
        return ConditionReport(status, excess, i1, i2)
    K, ml = C.K, plan.m * l
    V12 = C.rr_basis(plan.D1 + plan.D2)
    EG = ev_G(C, V12, plan.G, plan.D1 + plan.D2)
    inj = linalg.rank(K, EG) == V12.dim
    surj = []
    for D in (plan.D1, plan.D2):
        V = C.rr_basis(D)
        surj.append(V.dim >= ml and linalg.rank(K, ev_Q(C, V, Q, l, D)) == ml)
    assert inj == (excess == 0), "(i) and (i') disagree"
    assert surj[0] or i1, "(ii') holds but Ev_Q is not onto"
    assert surj[1] or i2, "(ii') holds but Ev_Q is not onto"
    return ConditionReport(status, excess, i1, i2, inj, surj[0], surj[1])


def _default_inner(q, d, u, symmetric):
    from .bounds import algorithm

    return algorithm(q, d, u, symmetric)


def assemble(plan: InterpolationPlan, inner=None, check: bool = True) -> BilinearAlgorithm:
    """Build (and by default verify) the algorithm of a READY plan."""
    C, K, Q, l = plan.curve, plan.curve.K, plan.Q, plan.l
    inner = inner or _default_inner
    D1, D2 = plan.D1, plan.D2
    D12 = D1 + D2
    V1 = C.rr_basis(D1)
    V2 = V1 if D2 == D1 else C.rr_basis(D2)
    V12 = C.rr_basis(D12)
    try:
        S1 = linalg.right_inverse(K, ev_Q(C, V1, Q, l, D1))
        S2 = S1 if D2 == D1 else linalg.right_inverse(K, ev_Q(C, V2, Q, l, D2))
        rho = linalg.left_inverse(K, ev_G(C, V12, plan.G, D12))
    except linalg.RankError as exc:
        raise PreconditionError(f"interpolation conditions fail: {exc}") from None
    algs = [inner(plan.q, d, u, plan.symmetric) for d, u in plan.cells]
    prod = direct_sum(*algs)
    if prod.d != plan.degree_G:
        raise ValueError("product algebra dimension does not match deg G")
    EG1 = ev_G(C, V1, plan.G, D1)
    EG2 = EG1 if D2 == D1 else ev_G(C, V2, plan.G, D2)
    Phi = linalg.matmul(K, prod.Phi, linalg.matmul(K, EG1, S1))
    sym = plan.symmetric and prod.symmetric and D1 == D2
    Psi = Phi.copy() if sym else linalg.matmul(K, prod.Psi, linalg.matmul(K, EG2, S2))
    EQ12 = ev_Q(C, V12, Q, l, D12)
    W = linalg.matmul(K, EQ12, linalg.matmul(K, rho, prod.W))
    alg = BilinearAlgorithm(truncated(plan.q, plan.m, l), Phi, Psi, W, symmetric=sym,
                            meta={"strategy": f"genus{C.genus}", "plan": plan.describe()})
    if check:
        res = verify(alg)
        if not res:
            raise AssertionError(f"assembled algorithm fails on basis pair {res.pair}")
    return alg


# point selection ---------------------------------------------------------------


def select_points(curve, multiset, avoid=None) -> tuple:
    """G for a multiset {(d, u): n}: the first points of each degree (skipping
    ``avoid``), larger multiplicities first."""
    by_deg = collections.defaultdict(list)
    for (d, u), n in multiset.items():
        by_deg[d] += [u] * n
    G = []
    for d in sorted(by_deg):
        us = sorted(by_deg[d], reverse=True)
        need = len(us) + (1 if avoid is not None and avoid.degree == d else 0)
        pts = [P for P in _first_points(curve, d, need) if P != avoid][: len(us)]
        if len(pts) < len(us):
            raise PreconditionError(f"only {len(pts)} points of degree {d}, need {len(us)}")
        G += list(zip(pts, us))
    return tuple(G)


def _first_points(curve, d, count):
    if isinstance(curve, ProjectiveLine):
        return curve.closed_points(d, min(count, curve.count_closed_points(d)))
    return curve.closed_points(d)[:count]


# genus 0 -----------------------------------------------------------------------


def genus0_plan(q: int, m: int, l: int, multiset=None) -> InterpolationPlan:
    """D1 = D2 = (ml - 1) inf on P^1; G is the first 2ml - 1 rational points
    unless a multiset of cells is given."""
    C = ProjectiveLine(q)
    Q = C.find_point_of_degree(m)
    if multiset is None:
        if 2 * m * l - 1 > q + 1:
            raise PreconditionError(f"need 2ml-1 = {2 * m * l - 1} rational points, P^1 has {q + 1}")
        G = tuple((P, 1) for P in C.rational_points()[: 2 * m * l - 1])
    else:
        G = select_points(C, multiset, avoid=Q)
    D = Divisor.point(C.inf, m * l - 1)
    return InterpolationPlan(C, m, l, Q, G, D, D, symmetric=True)


# genus 1 -----------------------------------------------------------------------


def _nonzero_classes(curve):
    """Degree-0 classes P - P_inf for the rational points P != P_inf."""
    inf = curve.inf
    return [Divisor({P: 1, inf: -1}) for P in curve.rational_points() if P != inf]


def _all_two_torsion(curve) -> bool:
    from .extfield import field

    F = field(curve.q, 1)
    for P in curve.rational_points():
        if not P.is_infinity and curve.add(F, P.coords(), P.coords()) is not None:
            return False
    return True


def genus1_select(curve, Q, l: int, G, case: str):
    """(D1, D2) following the four cases of the elliptic construction."""
    m = Q.degree
    Gd = Divisor([(P, u) for P, u in G])
    degG = Gd.degree
    N1 = len(curve.rational_points())
    lQ = Divisor.point(Q, l)

    def ok(D1, D2):
        if curve.l_dim(D1 + D2 - Gd):
            return False
        return not curve.index_of_speciality(D1 - lQ) and not curve.index_of_speciality(D2 - lQ)

    if case == "d":
        if degG < 2 * m * l + 3:
            raise PreconditionError(f"case d needs deg G >= {2 * m * l + 3}, got {degG}")
        D = Divisor.point(curve.inf, m * l + 1)
        return D, D
    Zs = _nonzero_classes(curve)
    if case == "a":
        if degG != 2 * m * l or N1 < 3:
            raise PreconditionError(f"case a needs deg G = 2ml and >= 3 rational points (deg G={degG}, N1={N1})")
        D1 = lQ + Zs[0]
        for Z2 in Zs:
            if ok(D1, lQ + Z2):
                return D1, lQ + Z2
        raise AssertionError("case a: no branch passes")
    if case == "b":
        if degG != 2 * m * l or N1 < 2:
            raise PreconditionError(f"case b needs deg G = 2ml and >= 2 rational points (deg G={degG}, N1={N1})")
        if _all_two_torsion(curve) and curve.sigma(Gd).is_infinity:
            raise PreconditionError("case b: group is all 2-torsion and sigma(G) = P_inf")
    elif case == "c":
        if degG < 2 * m * l + 1 or N1 < 2:
            raise PreconditionError(f"case c needs deg G >= 2ml+1 and >= 2 rational points (deg G={degG}, N1={N1})")
    else:
        raise ValueError(f"unknown case {case!r}")
    for Z in Zs:
        if ok(lQ + Z, lQ + Z):
            return lQ + Z, lQ + Z
    raise AssertionError(f"case {case}: no class passes")


def genus1_plan(curve, m: int, l: int, multiset, case: str, seed: int = 0, Q=None) -> InterpolationPlan:
    Q = Q if Q is not None else curve.find_point_of_degree(m, seed)
    G = select_points(curve, multiset, avoid=Q)
    D1, D2 = genus1_select(curve, Q, l, G, case)
    return InterpolationPlan(curve, m, l, Q, G, D1, D2, symmetric=(D1 == D2), meta={"case": case})


def choose_case(curve, m: int, l: int, degG: int, symmetric: bool) -> str | None:
    """Cheapest-applicable case for a given deg G (a only when asymmetric)."""
    N1 = len(curve.rational_points())
    if degG >= 2 * m * l + 3:
        return "d"
    if degG >= 2 * m * l + 1 and N1 >= 2:
        return "c"
    if degG == 2 * m * l:
        if N1 >= 2 and not _all_two_torsion(curve):
            return "b"
        if not symmetric and N1 >= 3:
            return "a"
    return None


# iterative searches --------------------------------------------------------------


@dataclass
class SearchTrace:
    """Candidate log and the number of Riemann-Roch computations.

    A candidate costs one computation when some condition on it cannot be
    settled for free. A condition is free when degree alone decides it, or
    when it has already failed as often as the failure-count lemma allows
    (g points for l(A + P) > 0, 4g for l(A + 2P) > 0), since every further
    point then passes."""

    log: list = field(default_factory=list)
    rr_computations: int = 0

    def record(self, stage, P, verdicts, computed):
        self.log.append((stage, P, verdicts))
        if computed:
            self.rr_computations += 1


def _zero_dim(curve, D) -> tuple[bool, bool]:
    """(l(D) == 0, needed a computation)."""
    if D.degree < 0:
        return True, False
    return curve.l_dim(D) == 0, True


class _Condition:
    """l(D) == 0 with a cap on how many candidates can fail it."""

    def __init__(self, curve, cap):
        self.curve, self.cap, self.failures = curve, cap, 0

    def __call__(self, D):
        if self.failures >= self.cap:
            return True, False
        ok, comp = _zero_dim(self.curve, D)
        if not ok:
            self.failures += 1
        return ok, comp


def iterative_search_asym(curve, Q, l: int, G, S):
    g = curve.genus
    m = Q.degree
    S = list(S)
    if len(S) < 2 * g + 1:
        raise PreconditionError(f"need {2 * g + 1} rational points, got {len(S)}")
    Gd = Divisor([(P, u) for P, u in G])
    if Gd.degree < 2 * m * l + g - 1:
        raise PreconditionError("deg G < 2ml + g - 1")
    lQ = Divisor.point(Q, l)
    tr = SearchTrace()
    Y = Divisor.point(S[0], m * l - 1)
    for i in range(g):
        cond = _Condition(curve, g)
        for P in S:
            ok, comp = cond(Y + Divisor.point(P) - lQ)
            tr.record(f"Y{i}", P, (ok,), comp)
            if ok:
                Y = Y + Divisor.point(P)
                break
        else:
            raise AssertionError(f"no point extends Y at step {i}: more than g failures")
    D1 = Y
    Z = Divisor.point(S[0], m * l - 1)
    for i in range(g):
        cond1, cond2 = _Condition(curve, g), _Condition(curve, g)
        for P in S:
            ZP = Z + Divisor.point(P)
            ok1, c1 = cond1(ZP - lQ)
            ok2, c2 = cond2(D1 + ZP - Gd) if ok1 else (False, False)
            tr.record(f"Z{i}", P, (ok1, ok2), c1 or c2)
            if ok1 and ok2:
                Z = ZP
                break
        else:
            raise AssertionError(f"no point extends Z at step {i}: more than 2g failures")
    return D1, Z, tr


def iterative_search_sym(curve, Q, l: int, G, T):
    g = curve.genus
    m = Q.degree
    T = list(T)
    if len(T) < 5 * g + 1:
        raise PreconditionError(f"need {5 * g + 1} rational points, got {len(T)}")
    Gd = Divisor([(P, u) for P, u in G])
    if Gd.degree < 2 * m * l + g - 1:
        raise PreconditionError("deg G < 2ml + g - 1")
    lQ = Divisor.point(Q, l)
    tr = SearchTrace()
    Tn = Divisor.point(T[0], m * l - 1)
    for i in range(g):
        cond1, cond2 = _Condition(curve, g), _Condition(curve, 4 * g)
        for P in T:
            TP = Tn + Divisor.point(P)
            ok1, c1 = cond1(TP - lQ)
            ok2, c2 = cond2(2 * TP - Gd) if ok1 else (False, False)
            tr.record(f"T{i}", P, (ok1, ok2), c1 or c2)
            if ok1 and ok2:
                Tn = TP
                break
        else:
            raise AssertionError(f"no point extends T at step {i}: more than 5g failures")
    return Tn, tr


def search_plan(curve, m: int, l: int, G, symmetric: bool, Q=None, seed: int = 0) -> tuple:
    """READY plan from the iterative search over the rational points."""
    Q = Q if Q is not None else curve.find_point_of_degree(m, seed)
    S = curve.rational_points()
    if symmetric:
        D, tr = iterative_search_sym(curve, Q, l, G, S)
        plan = InterpolationPlan(curve, m, l, Q, tuple(G), D, D, symmetric=True)
    else:
        D1, D2, tr = iterative_search_asym(curve, Q, l, G, S)
        plan = InterpolationPlan(curve, m, l, Q, tuple(G), D1, D2, symmetric=(D1 == D2))
    return plan, tr


def exhaustive_class_search(curve, Q, l: int, G):
    """D_k = lQ + Z over degree-0 class representatives Z (0 first, then
    P - P_inf in point order)."""
    lQ = Divisor.point(Q, l)
    Gd = Divisor([(P, u) for P, u in G])
    reps = [Divisor()] + _nonzero_classes(curve)
    for Z1 in reps:
        D1 = lQ + Z1
        if curve.index_of_speciality(D1 - lQ):
            continue
        for Z2 in reps:
            D2 = lQ + Z2
            if curve.index_of_speciality(D2 - lQ):
                continue
            if curve.l_dim(D1 + D2 - Gd) == 0:
                return D1, D2
    raise SearchExhausted(f"no pair of classes satisfies (i') and (ii') ({len(reps)} classes tried)")


# choosing G ------------------------------------------------------------------------


def plan_G(counts: dict, cost: dict, target: int, exact: bool = False) -> dict:
    """Cheapest multiset {(d, u): n} with sum n d u >= target (== target when
    ``exact``) and at most counts[d] points of degree d.

    Exact dynamic program over the achieved degree. Ties go to the smaller
    sum of n u^2 (fewer high multiplicities), then the smaller degree."""
    cells = sorted((d, u) for (d, u) in cost if counts.get(d, 0) > 0)
    if not cells:
        raise PreconditionError("no usable cells")
    span = max(d * u for d, u in cells)
    top = target + span
    INF = np.iinfo(np.int64).max // 4
    BIG = 1 << 20
    best = np.full(top, INF, dtype=np.int64)
    best[0] = 0
    steps = []  # (d, choice array) per point slot
    for d in sorted({d for d, _ in cells}):
        us = [u for dd, u in cells if dd == d]
        slots = min(counts[d], -(-target // d))
        for _ in range(slots):
            new = best.copy()
            choice = np.zeros(top, dtype=np.int64)
            for u in us:
                w = d * u
                c = cost[(d, u)] * BIG + u * u
                cand = np.full(top, INF, dtype=np.int64)
                cand[w:] = best[:-w] + c
                better = cand < new
                new = np.where(better, cand, new)
                choice = np.where(better, u, choice)
            steps.append((d, choice))
            best = new
    feasible = (np.arange(top) == target) if exact else (np.arange(top) >= target)
    keys = np.where(feasible, best, INF)
    s = int(np.argmin(keys))
    if keys[s] >= INF:
        have = sum(counts.get(d, 0) * d * max(u for dd, u in cells if dd == d) for d, _ in cells)
        raise PreconditionError(f"insufficient points: deficit {target - have}")
    out = collections.Counter()
    for d, choice in reversed(steps):
        u = int(choice[s])
        if u:
            out[(d, u)] += 1
            s -= d * u
    assert s == 0
    return dict(sorted(out.items()))


def multiset_cost(multiset: dict, cost: dict) -> int:
    return sum(n * cost[c] for c, n in multiset.items())


def curve_counts(curve, max_degree: int, exclude=None) -> dict:
    out = {d: curve.count_closed_points(d) for d in range(1, max_degree + 1)}
    if exclude is not None and exclude.degree in out:
        out[exclude.degree] -= 1
    return out


# obstruction ---------------------------------------------------------------------


def obstruction(curve, Q, D) -> dict:
    """Ev_Q on L(D) at Q^[1]: dimensions, rank and kernel size."""
    V = curve.rr_basis(D)
    M = ev_Q(curve, V, Q, 1, D)
    r = linalg.rank(curve.K, M)
    return {"l(D)": V.dim, "target": Q.degree, "rank": r, "kernel": V.dim - r,
            "surjective": r == Q.degree, "l(D-Q)": curve.l_dim(D - Divisor.point(Q))}
