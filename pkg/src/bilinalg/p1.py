"""The projective line over F_q: closed points, Riemann-Roch spaces and
evaluation at thickened points.

A finite closed point is a monic irreducible polynomial Q, whose local
parameter is Q itself; at infinity the local parameter is 1/x. Evaluating
at Q^[u] means reducing mod Q^u and moving to A_q(deg Q, u) through the
Hensel-lifted isomorphism.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from . import poly
from .algebra import hensel_iso
from .divisor import Divisor
from .gf import GF


@dataclass(frozen=True)
class P1Point:
    q: int
    coeffs: tuple | None  # None is the point at infinity

    def __post_init__(self):
        if self.coeffs is not None:
            f = poly.P(self.coeffs)
            if len(f) < 2 or f[-1] != 1:
                raise ValueError("finite points are monic polynomials of degree >= 1")
            object.__setattr__(self, "coeffs", poly.key(f))

    @property
    def is_infinity(self) -> bool:
        return self.coeffs is None

    @property
    def degree(self) -> int:
        return 1 if self.coeffs is None else len(self.coeffs) - 1

    @property
    def poly(self) -> np.ndarray:
        return poly.P(self.coeffs)

    def sort_key(self):
        if self.coeffs is None:
            return (1, 0, 0)
        return (self.degree, 0, poly.to_int(GF(self.q), self.poly))

    def __repr__(self):
        return "inf" if self.coeffs is None else f"[{','.join(map(str, self.coeffs))}]"


def infinity(q: int) -> P1Point:
    return P1Point(q, None)


def point(q: int, coeffs) -> P1Point:
    P = P1Point(q, tuple(coeffs))
    if not poly.is_irreducible(GF(q), P.poly):
        raise ValueError(f"{list(coeffs)} is not irreducible over F_{q}")
    return P


def closed_points(q: int, d: int, count: int | None = None) -> list[P1Point]:
    """Closed points of degree d in order; at d = 1 the finite points x + c
    by c, then infinity."""
    K = GF(q)
    if d == 1:
        pts = [P1Point(q, (c, 1)) for c in range(q)] + [infinity(q)]
        return pts if count is None else pts[:count]
    return [P1Point(q, poly.key(f)) for f in poly.irreducibles(K, d, count)]


def count_closed_points(q: int, d: int) -> int:
    return q + 1 if d == 1 else poly.necklace_count(q, d)


@dataclass(frozen=True, eq=False)
class P1Function:
    """num/den with den monic and gcd(num, den) = 1."""

    q: int
    num: np.ndarray
    den: np.ndarray

    @staticmethod
    def make(q, num, den=(1,)) -> "P1Function":
        K = GF(q)
        num, den = poly.trim(num), poly.trim(den)
        if len(den) == 0:
            raise ZeroDivisionError("zero denominator")
        if len(num) == 0:
            return P1Function(q, num, poly.P([1]))
        g = poly.gcd(K, num, den)
        num, den = poly.divmod_(K, num, g)[0], poly.divmod_(K, den, g)[0]
        lc = int(K.inv[den[-1]])
        return P1Function(q, poly.scale(K, lc, num), poly.scale(K, lc, den))

    @property
    def K(self):
        return GF(self.q)

    def is_zero(self) -> bool:
        return len(self.num) == 0

    def valuation(self, P: P1Point) -> float:
        if self.is_zero():
            return float("inf")
        if P.is_infinity:
            return poly.deg(self.den) - poly.deg(self.num)
        return poly.valuation_at(self.K, self.num, P.poly) - poly.valuation_at(self.K, self.den, P.poly)

    def __mul__(self, other: "P1Function") -> "P1Function":
        K = self.K
        return P1Function.make(self.q, poly.mul(K, self.num, other.num), poly.mul(K, self.den, other.den))

    def __add__(self, other: "P1Function") -> "P1Function":
        K = self.K
        n = poly.add(K, poly.mul(K, self.num, other.den), poly.mul(K, other.num, self.den))
        return P1Function.make(self.q, n, poly.mul(K, self.den, other.den))

    def scale(self, c: int) -> "P1Function":
        return P1Function.make(self.q, poly.scale(self.K, c, self.num), self.den)

    def divisor(self) -> Divisor:
        """Zeros minus poles, factoring numerator and denominator."""
        out = {}
        for f, sign in ((self.num, 1), (self.den, -1)):
            for g, e in factor(self.K, f):
                P = P1Point(self.q, poly.key(g))
                out[P] = out.get(P, 0) + sign * e
        out[infinity(self.q)] = self.valuation(infinity(self.q))
        return Divisor(out)

    def __repr__(self):
        return f"P1Function({poly.key(self.num)}/{poly.key(self.den)})"


def factor(K, f) -> list[tuple[np.ndarray, int]]:
    """Monic irreducible factors with multiplicity (trial division by
    irreducibles of increasing degree; fine at the sizes used here)."""
    f = poly.monic(K, poly.trim(f)) if len(poly.trim(f)) else f
    out = []
    d = 1
    while poly.deg(f) > 0:
        if 2 * d > poly.deg(f):
            out.append((f, 1))
            break
        for g in poly.irreducibles(K, d):
            e = 0
            while True:
                qt, r = poly.divmod_(K, f, g)
                if len(r):
                    break
                f, e = qt, e + 1
            if e:
                out.append((g, e))
        d += 1
    return out


def rr_basis(q: int, D: Divisor) -> list[P1Function]:
    """Basis of L(D) = {f : div f + D >= 0}: x^k Z / N for k = 0..deg D, where
    N = prod P^{D(P)} over finite D(P) > 0 and Z = prod P^{-D(P)} over D(P) < 0."""
    K = GF(q)
    num, den = poly.P([1]), poly.P([1])
    for P, k in D.items():
        if P.is_infinity:
            continue
        if k > 0:
            den = poly.mul(K, den, poly.power(K, P.poly, k))
        else:
            num = poly.mul(K, num, poly.power(K, P.poly, -k))
    return [P1Function.make(q, poly.mul(K, poly.monomial(k), num), den) for k in range(D.degree + 1)]


def l_dim(D: Divisor) -> int:
    return max(D.degree + 1, 0)


def eval_thickened(f: P1Function, P: P1Point, u: int, shift: int = 0) -> np.ndarray:
    """Coordinates in A_q(deg P, u) of t_P^shift * f mod t_P^u."""
    K, q = f.K, f.q
    m = P.degree
    if f.is_zero():
        return np.zeros(m * u, dtype=np.int64)
    e = f.valuation(P) + shift
    if e < 0:
        raise ValueError(f"pole of order {-f.valuation(P)} exceeds shift {shift} at {P!r}")
    if e >= u:
        return np.zeros(m * u, dtype=np.int64)
    if P.is_infinity:
        # f = s^v rev(num)/rev(den) in s = 1/x, with v = deg den - deg num
        rn, rd = poly.reverse(f.num), poly.reverse(f.den)
        mod = poly.monomial(u - e)
        ser = poly.mulmod(K, rn, poly.invmod(K, rd, mod), mod)
        out = np.zeros(u, dtype=np.int64)
        out[e : e + len(ser)] = ser
        return out
    Q = P.poly
    H = hensel_iso(q, P.coeffs, u)
    a = poly.valuation_at(K, f.num, Q)
    b = poly.valuation_at(K, f.den, Q)
    n1 = poly.divmod_(K, f.num, poly.power(K, Q, a))[0]
    d1 = poly.divmod_(K, f.den, poly.power(K, Q, b))[0]
    M = H.modulus
    if len(d1) == 1:
        val = poly.mod(K, poly.scale(K, int(K.inv[d1[0]]), n1), M)
    else:
        val = poly.mulmod(K, n1, poly.invmod(K, d1, M), M)
    if e:
        val = poly.mulmod(K, poly.power(K, Q, e), val, M)
    return H.from_poly(val)


def evaluation_matrix(basis, points, shifts=None) -> np.ndarray:
    """Rows: concatenated A_q(d_i, u_i) coordinates at (P_i, u_i); columns: basis."""
    blocks = []
    for i, (P, u) in enumerate(points):
        s = 0 if shifts is None else shifts[i]
        cols = [eval_thickened(f, P, u, s) for f in basis]
        blocks.append(np.array(cols, dtype=np.int64).reshape(len(basis), P.degree * u).T)
    if not blocks:
        return np.zeros((0, len(basis)), dtype=np.int64)
    return np.vstack(blocks)


@functools.cache
def canonical_point(q: int, m: int) -> P1Point:
    """The closed point of degree m given by the canonical modulus."""
    from .extfield import canonical_modulus

    return P1Point(q, poly.key(canonical_modulus(q, m)))


class P1Space:
    """L(D) on P^1 with the evaluation interface shared with elliptic curves."""

    def __init__(self, D: Divisor, functions):
        self.D = D
        self.functions_ = list(functions)

    @property
    def dim(self) -> int:
        return len(self.functions_)

    def functions(self):
        return list(self.functions_)

    def evaluate(self, P: P1Point, u: int, shift: int = 0) -> np.ndarray:
        rows = [eval_thickened(f, P, u, shift) for f in self.functions_]
        return np.array(rows, dtype=np.int64).reshape(self.dim, P.degree * u)


class ProjectiveLine:
    """P^1 over F_q as a curve object (genus 0, canonical class -2 inf)."""

    genus = 0

    def __init__(self, q: int):
        self.q = q
        self.K = GF(q)
        self.inf = infinity(q)

    def __repr__(self):
        return f"ProjectiveLine(q={self.q})"

    def __eq__(self, other):
        return isinstance(other, ProjectiveLine) and other.q == self.q

    def __hash__(self):
        return hash(("P1", self.q))

    def literal(self) -> str:
        return f"P1 q={self.q}"

    def rational_points(self):
        return tuple(closed_points(self.q, 1))

    def closed_points(self, d: int, count: int | None = None):
        return tuple(closed_points(self.q, d, count))

    def count_closed_points(self, d: int) -> int:
        return count_closed_points(self.q, d)

    def find_point_of_degree(self, m: int, seed: int = 0) -> P1Point:
        return canonical_point(self.q, m)

    def l_dim(self, D: Divisor) -> int:
        return l_dim(D)

    def index_of_speciality(self, D: Divisor) -> int:
        return l_dim(Divisor.point(self.inf, -2) - D)

    def is_principal(self, D: Divisor) -> bool:
        return D.degree == 0

    def rr_basis(self, D: Divisor) -> P1Space:
        return P1Space(D, rr_basis(self.q, D))

    def evaluation_matrix(self, space: P1Space, points, shifts=None) -> np.ndarray:
        return evaluation_matrix(space.functions_, points, shifts)


def parse_divisor(q: int, text: str) -> Divisor:
    """Divisor literal: comma-separated ``<poly|inf>^<mult>`` terms with
    polynomials as coefficient lists (low degree first), e.g.
    ``inf^3,[1,1,1]^2``. A missing ``^<mult>`` means 1."""
    import re

    out = {}
    for term in re.findall(r"(inf|\[[^\]]*\])(?:\^(-?\d+))?", text.replace(" ", "")):
        name, k = term
        if name == "inf":
            P = infinity(q)
        else:
            coeffs = [int(c) for c in name[1:-1].split(",") if c]
            P = point(q, coeffs)
        out[P] = out.get(P, 0) + (int(k) if k else 1)
    rest = re.sub(r"(inf|\[[^\]]*\])(\^-?\d+)?", "", text.replace(" ", "")).replace(",", "")
    if rest:
        raise ValueError(f"bad divisor literal near {rest!r}")
    return Divisor(out)


def format_divisor(D: Divisor) -> str:
    return ",".join(f"{P!r}^{k}" for P, k in sorted(D.items(), key=lambda it: it[0].sort_key()))
