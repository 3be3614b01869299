"""Best-known upper bounds for mu_q(m, l) and its symmetric variant, each
backed by a certificate that rebuilds a verified algorithm.

Strategies: naive, brute force (tiny algebras), genus 0 and genus 1
interpolation, and descent mu_q(d) mu_{q^d}(e, l) for m = de (e = 1 is the
concatenation bound). Inner cells always have strictly smaller ml, so the
recursion terminates.
"""

from __future__ import annotations

import csv
import functools
import logging
import os
from dataclasses import dataclass, replace
from importlib import resources

import numpy as np

from . import synthesis
from .algebra import StructureAlgebra, truncated
from .bilinear import (BilinearAlgorithm, concatenate, identity_algorithm, naive_symmetric,
                       restrict, verify, with_meta)
from .elliptic import EllipticCurve, admissible_traces, curve_with_trace
from .extfield import canonical_modulus
from .gf import MAX_TABLE_Q, GF
from .interchange import dump
from .p1 import ProjectiveLine
from .rank import MAX_RANK_ONES, brute_force_rank, gaussian_binomial

log = logging.getLogger(__name__)

BRUTE_BUDGET = 2**14  # subspaces visited by the brute-force strategy
ENUM_DEGREE = 2**16  # largest q^d whose closed points may be enumerated
GENUS1_MAX_Q = 16  # the curve sweep is q^6 work


@dataclass(frozen=True)
class BoundCertificate:
    q: int
    m: int
    l: int
    symmetric: bool
    bound: int
    strategy: str
    detail: tuple = ()

    @property
    def key(self) -> str:
        return f"{self.q}_{self.m}_{self.l}" + ("_sym" if self.symmetric else "")

    def info(self) -> dict:
        return dict(self.detail)


def _cert(q, m, l, sym, bound, strategy, **detail):
    return BoundCertificate(q, m, l, sym, int(bound), strategy, tuple(sorted(detail.items())))


class BoundTable:
    def __init__(self):
        self.entries: dict[tuple, BoundCertificate] = {}
        self.log: list[tuple] = []
        self._algs: dict[tuple, BilinearAlgorithm] = {}

    # bounds -----------------------------------------------------------------
    def bound(self, q, m, l, sym=False) -> int:
        return self.improve(q, m, l, sym).bound

    def improve(self, q: int, m: int, l: int, sym: bool = False) -> BoundCertificate:
        key = (q, m, l, bool(sym))
        if key in self.entries:
            return self.entries[key]
        best = None
        for cand in self._candidates(q, m, l, bool(sym)):
            if best is None or cand.bound < best.bound:
                best = cand
        self._store(key, best)
        return best

    def _store(self, key, cert):
        old = self.entries.get(key)
        if old is not None and old.bound <= cert.bound:
            return
        self.log.append((key, None if old is None else old.bound, cert.bound, cert.strategy))
        self.entries[key] = cert

    def cost_table(self, q: int, cells, sym: bool) -> dict:
        return {(d, u): self.bound(q, d, u, sym) for d, u in cells}

    def _candidates(self, q, m, l, sym):
        dim = m * l
        if dim == 1:
            yield _cert(q, m, l, sym, 1, "trivial")
            return
        yield _cert(q, m, l, sym, dim * (dim + 1) // 2, "naive")
        cands = []
        if 2 * dim - 1 <= q + 1:
            cands.append(_cert(q, m, l, sym, 2 * dim - 1, "genus0"))
        else:
            c = self._genus0_cells(q, m, l, sym)
            if c is not None:
                cands.append(c)
        cands += list(self._genus1(q, m, l, sym))
        cands += list(self._descent(q, m, l, sym))
        if not sym:
            cands.append(with_strategy(self.improve(q, m, l, True), sym=False))
        yield from cands
        cur = min([dim * (dim + 1) // 2] + [c.bound for c in cands])
        b = self._brute(q, m, l, sym, cur - 1)
        if b is not None:
            yield b

    def _cells(self, q, m, l, max_degree_q=None):
        out = []
        for d in range(1, m * l):
            if max_degree_q is not None and q**d > max_degree_q:
                break
            for u in range(1, m * l):
                if d * u < m * l:
                    out.append((d, u))
        return out

    def _genus0_cells(self, q, m, l, sym):
        C = ProjectiveLine(q)
        cells = self._cells(q, m, l)
        maxd = max(d for d, _ in cells)
        counts = {d: C.count_closed_points(d) for d in range(1, maxd + 1)}
        if m in counts:
            counts[m] -= 1
        cost = self.cost_table(q, cells, sym)
        try:
            ms = synthesis.plan_G(counts, cost, 2 * m * l - 1)
        except synthesis.PreconditionError:
            return None
        return _cert(q, m, l, sym, synthesis.multiset_cost(ms, cost), "genus0", multiset=_freeze(ms))

    def _genus1(self, q, m, l, sym):
        dim = m * l
        cells = self._cells(q, m, l, ENUM_DEGREE)
        if not cells or q > GENUS1_MAX_Q:
            return
        cost = None
        for t in admissible_traces(q):
            C = curve_with_trace(q, t)
            if C.count_closed_points(m) < 1:
                continue
            cost = cost or self.cost_table(q, cells, sym)
            maxd = max(d for d, _ in cells)
            counts = synthesis.curve_counts(C, maxd)
            if m in counts:
                counts[m] -= 1
            N1 = counts[1] + (1 if m == 1 else 0)
            two_tors = synthesis._all_two_torsion(C)
            options = []
            if not sym and N1 >= 3:
                options.append(("a", 2 * dim, True))
            if N1 >= 2 and not two_tors:
                options.append(("b", 2 * dim, True))
            if N1 >= 6:
                options.append(("search", 2 * dim, False))
            if N1 >= 2:
                options.append(("c", 2 * dim + 1, False))
            options.append(("d", 2 * dim + 3, False))
            for case, target, exact in options:
                try:
                    ms = synthesis.plan_G(counts, cost, target, exact=exact)
                except synthesis.PreconditionError:
                    continue
                yield _cert(q, m, l, sym, synthesis.multiset_cost(ms, cost), "genus1",
                            curve=C.a, case=case, multiset=_freeze(ms))

    def _descent(self, q, m, l, sym):
        for d in range(2, m + 1):
            if m % d or q**d > MAX_TABLE_Q:
                continue
            e = m // d
            if e == 1 and l == 1:
                continue
            b = self.bound(q, d, 1, sym) * self.bound(q**d, e, l, sym)
            yield _cert(q, m, l, sym, b, "composite-descent" if e > 1 else "concatenation", d=d)

    def _brute(self, q, m, l, sym, cap):
        dim = m * l
        if cap < dim:
            return None
        npts = (q**dim - 1) // (q - 1)
        if (npts if sym else npts * npts) > MAX_RANK_ONES:
            return None
        Nq = dim * dim - dim
        work = sum(gaussian_binomial(Nq, n - dim, q) for n in range(dim, cap + 1))
        if work > BRUTE_BUDGET:
            return None
        res = brute_force_rank(truncated(q, m, l), cap, symmetric=sym)
        if res.rank is None:
            return None
        return _cert(q, m, l, sym, res.rank, "brute-force")

    # algorithms -------------------------------------------------------------
    def algorithm(self, q: int, m: int, l: int, sym: bool = False) -> BilinearAlgorithm:
        key = (q, m, l, bool(sym))
        if key not in self._algs:
            cert = self.improve(q, m, l, sym)
            alg = self.build(cert)
            if alg.length != cert.bound:
                raise AssertionError(f"certificate {cert.key} rebuilt with length {alg.length}")
            self._algs[key] = alg
        return self._algs[key]

    def build(self, cert: BoundCertificate, check: bool = True) -> BilinearAlgorithm:
        q, m, l, sym = cert.q, cert.m, cert.l, cert.symmetric
        A = truncated(q, m, l)
        info = cert.info()
        s = cert.strategy
        if s == "trivial":
            alg = identity_algorithm(GF(q))
            alg = BilinearAlgorithm(A, alg.Phi, alg.Psi, alg.W, symmetric=True)
        elif s == "naive":
            alg = naive_symmetric(A)
        elif s == "brute-force":
            alg = brute_force_rank(A, cert.bound, symmetric=sym).witness
        elif s == "genus0":
            ms = info.get("multiset")
            plan = synthesis.genus0_plan(q, m, l, None if ms is None else dict(ms))
            if not sym:
                plan = _asym(plan)
            alg = synthesis.assemble(plan, self._inner, check=False)
        elif s == "genus1":
            C = EllipticCurve(q, info["curve"])
            ms = dict(info["multiset"])
            if info["case"] == "search":
                Q = C.find_point_of_degree(m)
                G = synthesis.select_points(C, ms, avoid=Q)
                plan, _ = synthesis.search_plan(C, m, l, G, symmetric=True, Q=Q)
            else:
                plan = synthesis.genus1_plan(C, m, l, ms, info["case"])
            if not sym:
                plan = _asym(plan)
            alg = synthesis.assemble(plan, self._inner, check=False)
        elif s in ("composite-descent", "concatenation"):
            alg = descent_algorithm(self.algorithm(q, info["d"], 1, sym),
                                    self.algorithm(q ** info["d"], m // info["d"], l, sym), m, l)
        elif s == "via-symmetric":
            alg = self.algorithm(q, m, l, True)
        else:
            raise ValueError(f"unknown strategy {s!r}")
        if sym and not alg.symmetric:
            raise AssertionError(f"{cert.key}: strategy {s} gave a non-symmetric algorithm")
        if check and not verify(alg):
            raise AssertionError(f"{cert.key}: rebuilt algorithm does not verify")
        return with_meta(alg, strategy=s, key=cert.key)

    def _inner(self, q, d, u, sym):
        return self.algorithm(q, d, u, sym)

    # export -----------------------------------------------------------------
    def rows(self):
        for (q, m, l, sym), c in sorted(self.entries.items()):
            yield q, m, l, int(sym), c.bound, c.strategy

    def build_range(self, q: int, max_ml: int):
        for ml in range(1, max_ml + 1):
            for m in range(1, ml + 1):
                if ml % m == 0:
                    for sym in (True, False):
                        self.improve(q, m, ml // m, sym)

    def export(self, directory, q: int | None = None, plot: bool = True) -> list[str]:
        os.makedirs(directory, exist_ok=True)
        written = []
        tsv = os.path.join(directory, "bounds.tsv")
        with open(tsv, "w", newline="") as fh:
            w = csv.writer(fh, delimiter="\t", lineterminator="\n")
            w.writerow(["q", "m", "l", "sym", "bound", "strategy"])
            for row in self.rows():
                if q is None or row[0] == q:
                    w.writerow(row)
        written.append(tsv)
        cdir = os.path.join(directory, "certificates")
        os.makedirs(cdir, exist_ok=True)
        for (qq, m, l, sym), c in sorted(self.entries.items()):
            if q is not None and qq != q:
                continue
            path = os.path.join(cdir, c.key + ".bilalg")
            dump(self.algorithm(qq, m, l, sym), path)
            written.append(path)
        if plot:
            from .plotting import plot_bounds

            png = os.path.join(directory, "bounds.png")
            plot_bounds(list(self.rows()), png)
            written.append(png)
        return written


def with_strategy(cert: BoundCertificate, sym: bool) -> BoundCertificate:
    return BoundCertificate(cert.q, cert.m, cert.l, sym, cert.bound, "via-symmetric")


def _freeze(ms: dict) -> tuple:
    return tuple(sorted(ms.items()))


def _asym(plan):
    """Same divisors, asymmetric inner algorithms (costs came from the
    asymmetric table)."""
    return replace(plan, symmetric=False)


# descent ------------------------------------------------------------------------


def descent_algorithm(outer: BilinearAlgorithm, inner: BilinearAlgorithm, m: int, l: int) -> BilinearAlgorithm:
    """mu_q(d) mu_{q^d}(e, l) for m = de: concatenate, then move to the
    canonical A_q(m, l) along an explicit isomorphism."""
    alg = concatenate(outer, inner)
    q = outer.q
    M = descent_isomorphism(alg.algebra, q, outer.d, m, l)
    out = restrict(alg, truncated(q, m, l), M, "sub")
    return with_meta(out, strategy="composite-descent")


def descent_isomorphism(R: StructureAlgebra, q: int, d: int, m: int, l: int) -> np.ndarray:
    """Columns: coordinates in R = Res A_{q^d}(e, l) of alpha^i t^j, where
    alpha is the least root of the canonical degree-m modulus inside the
    t-free part (first m coordinates) and t is the inner t at index e d."""
    K = GF(q)
    e = m // d
    dim = m * l
    if q**m > 2**20:
        raise ValueError("root search space too large")
    cand = np.zeros((q**m, dim), dtype=np.int64)
    idx = np.arange(q**m)
    for i in range(m):
        cand[:, i] = (idx // q**i) % q
    f = canonical_modulus(q, m)
    acc = np.zeros_like(cand)
    one = np.zeros(dim, dtype=np.int64)
    one[0] = 1
    for c in f[::-1]:
        acc = R.mul(acc, cand)
        acc = K.add[acc, K.mul[int(c), one][None, :]]
    roots = np.flatnonzero(~acc.any(axis=1))
    if not len(roots):
        raise AssertionError("canonical modulus has no root in the t-free part")
    alpha = cand[roots[0]]
    t = np.zeros(dim, dtype=np.int64)
    if l > 1:
        t[e * d] = 1
    M = np.zeros((dim, dim), dtype=np.int64)
    tj = one
    for j in range(l):
        ai = tj
        for i in range(m):
            M[:, j * m + i] = ai
            ai = R.mul(ai, alpha)
        tj = R.mul(tj, t)
    return M


# module-level table ---------------------------------------------------------------

TABLE = BoundTable()


def improve(q: int, m: int, l: int, sym: bool = False) -> BoundCertificate:
    return TABLE.improve(q, m, l, sym)


def algorithm(q: int, m: int, l: int, sym: bool = False) -> BilinearAlgorithm:
    return TABLE.algorithm(q, m, l, sym)


@functools.cache
def co_costs() -> dict:
    """Inner costs for the mu_2(163) plan, read from the bundled fixture."""
    text = resources.files("bilinalg").joinpath("data/co_costs.tsv").read_text()
    out = {}
    for row in csv.reader(text.splitlines(), delimiter="\t"):
        if not row or row[0].startswith("#") or row[0] == "d":
            continue
        out[(int(row[0]), int(row[1]))] = int(row[2])
    return out


def reproduce_fixture(name: str, **kw):
    from .fixtures import reproduce_fixture as run

    return run(name, **kw)
