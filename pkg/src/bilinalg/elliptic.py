"""Elliptic curves y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over F_q.

Closed points are Frobenius orbits, stored by their smallest representative
(by coordinate index) in the canonical F_{q^d}. Riemann-Roch bases are
functions (a(x) + b(x) y) / c(x); local expansions use x - x_P or y - y_P as
uniformizer at finite points and x/y at the point at infinity.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import linalg, poly
from . import series as S
from .divisor import Divisor
from .extfield import ENUM_LIMIT, field
from .gf import GF
from .p1 import factor


@dataclass(frozen=True)
class ECPoint:
    """Closed point: None coordinates mean the point at infinity."""

    q: int
    a: tuple
    d: int
    x: tuple | None
    y: tuple | None

    @property
    def degree(self) -> int:
        return self.d

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def coords(self):
        return np.array(self.x, dtype=np.int64), np.array(self.y, dtype=np.int64)

    def sort_key(self):
        if self.x is None:
            return (1, -1, 0)
        F = field(self.q, self.d)
        return (self.d, F.index(self.x), F.index(self.y))

    def __repr__(self):
        if self.x is None:
            return "inf"
        if self.d == 1:
            return f"({self.x[0]},{self.y[0]})"
        return f"({':'.join(map(str, self.x))},{':'.join(map(str, self.y))})"


@dataclass(frozen=True, eq=False)
class ECFunction:
    """(a(x) + b(x) y) / c(x)."""

    curve: "EllipticCurve"
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def is_zero(self) -> bool:
        return len(self.a) == 0 and len(self.b) == 0

    def valuation(self, R: ECPoint) -> float:
        return self.curve.valuation(self, R)

    def divisor(self) -> Divisor:
        return self.curve.function_divisor(self)

    def __mul__(self, other: "ECFunction") -> "ECFunction":
        E = self.curve
        K = E.K
        a1, a2, a3, a4, a6 = E.a
        lin, cub = poly.P([a3, a1]), poly.P([a6, a4, a2, 1])
        bb = poly.mul(K, self.b, other.b)
        # y^2 = cub - lin y
        na = poly.add(K, poly.mul(K, self.a, other.a), poly.mul(K, bb, cub))
        nb = poly.add(K, poly.mul(K, self.a, other.b), poly.mul(K, self.b, other.a))
        nb = poly.sub(K, nb, poly.mul(K, bb, lin))
        return ECFunction(E, na, nb, poly.mul(K, self.c, other.c))

    def __repr__(self):
        return f"ECFunction(({poly.key(self.a)} + {poly.key(self.b)} y)/{poly.key(self.c)})"


class EllipticCurve:
    def __init__(self, q: int, a):
        a = tuple(int(v) for v in a)
        if len(a) != 5 or any(not 0 <= v < q for v in a):
            raise ValueError("need five coefficients in F_q")
        self.q, self.a = q, a
        self.K = K = GF(q)
        self.genus = 1
        if self.discriminant() == 0:
            raise ValueError(f"singular curve a={list(a)} over F_{q}")
        self.inf = ECPoint(q, a, 1, None, None)
        self._N1 = self._count_affine(1) + 1
        self.trace = q + 1 - self._N1

    def __repr__(self):
        return f"EllipticCurve(q={self.q}, a={list(self.a)})"

    def literal(self) -> str:
        return f"q={self.q} a=[{','.join(map(str, self.a))}]"

    def __eq__(self, other):
        return isinstance(other, EllipticCurve) and (self.q, self.a) == (other.q, other.a)

    def __hash__(self):
        return hash((self.q, self.a))

    # coefficients and the defining polynomial ------------------------------
    def _k(self, n: int) -> int:
        return self.K.prime_embed(n)

    def discriminant(self) -> int:
        K = self.K
        a1, a2, a3, a4, a6 = self.a
        m, ad, sb = K.mul, K.add, K.sub

        def c(n):
            return self._k(n)

        b2 = ad[m[a1, a1], m[c(4), a2]]
        b4 = ad[m[c(2), a4], m[a1, a3]]
        b6 = ad[m[a3, a3], m[c(4), a6]]
        b8 = sb[ad[ad[m[m[a1, a1], a6], m[c(4), m[a2, a6]]], m[a2, m[a3, a3]]], ad[m[a1, m[a3, a4]], m[a4, a4]]]
        t1 = m[m[b2, b2], b8]
        t2 = m[c(8), m[b4, m[b4, b4]]]
        t3 = m[c(27), m[b6, b6]]
        t4 = m[c(9), m[b2, m[b4, b6]]]
        return int(ad[sb[sb[K.neg[t1], t2], t3], t4])

    def lift(self, F):
        return [F.from_base(v) for v in self.a]

    def quadratic(self, F, X):
        """(b, c) with y^2 + b y = c at x = X."""
        a1, a2, a3, a4, a6 = self.lift(F)
        b = F.add(F.mul(a1, X), a3)
        X2 = F.mul(X, X)
        c = F.add(F.add(F.mul(X2, X), F.mul(a2, X2)), F.add(F.mul(a4, X), np.broadcast_to(a6, np.shape(X))))
        return b, c

    def on_curve(self, F, X, Y) -> np.ndarray:
        b, c = self.quadratic(F, X)
        return F.eq(F.add(F.mul(Y, Y), F.mul(b, Y)), c)

    # group law on geometric points over a field F ----------------------------
    def neg(self, F, P):
        if P is None:
            return None
        x, y = P
        a1, _, a3, _, _ = self.lift(F)
        return x, F.sub(F.neg(y), F.add(F.mul(a1, x), a3))

    def add(self, F, P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        a1, a2, a3, a4, a6 = self.lift(F)
        (x1, y1), (x2, y2) = P, Q
        if np.array_equal(x1, x2):
            s = F.add(F.add(y1, y2), F.add(F.mul(a1, x2), a3))
            if F.is_zero(s):
                return None
            den = F.add(F.add(F.scale(self._k(2), y1), F.mul(a1, x1)), a3)
            x1sq = F.mul(x1, x1)
            num = F.sub(F.add(F.add(F.scale(self._k(3), x1sq), F.scale(self._k(2), F.mul(a2, x1))), a4), F.mul(a1, y1))
            lam = F.div(num, den)
        else:
            lam = F.div(F.sub(y2, y1), F.sub(x2, x1))
        x3 = F.sub(F.sub(F.sub(F.add(F.mul(lam, lam), F.mul(a1, lam)), a2), x1), x2)
        y3 = F.sub(F.mul(lam, F.sub(x1, x3)), y1)
        return x3, F.sub(F.sub(y3, F.mul(a1, x3)), a3)

    def smul(self, F, k: int, P):
        if k < 0:
            return self.smul(F, -k, self.neg(F, P))
        out, base = None, P
        while k:
            if k & 1:
                out = self.add(F, out, base)
            k >>= 1
            if k:
                base = self.add(F, base, base)
        return out

    def point_eq(self, P, Q) -> bool:
        if P is None or Q is None:
            return P is None and Q is None
        return np.array_equal(P[0], Q[0]) and np.array_equal(P[1], Q[1])

    # point enumeration --------------------------------------------------------
    def _count_affine(self, n: int) -> int:
        X, _ = self.affine_points(n)
        return len(X)

    @functools.lru_cache(maxsize=None)
    def affine_points(self, n: int):
        """All affine points over F_{q^n}: arrays X, Y of shape (N, n)."""
        F = field(self.q, n)
        if F.order > ENUM_LIMIT:
            raise ValueError(f"F_{self.q}^{n} too large to enumerate")
        X = F.elements()
        b, c = self.quadratic(F, X)
        xs, ys = [], []
        if F.p == 2:
            b0 = F.is_zero(b)
            # b = 0: y = sqrt(c), unique
            if b0.any():
                xs.append(X[b0])
                ys.append(F.pow(c[b0], F.order // 2))
            nb = ~b0
            if nb.any():
                bb = b[nb]
                rhs = F.div(c[nb], F.mul(bb, bb))
                ok, z = _as_solve_batch(F, rhs)
                y = F.mul(bb[ok], z[ok])
                xs += [X[nb][ok], X[nb][ok]]
                ys += [y, F.add(y, bb[ok])]
        else:
            half = int(F.K.inv[2 % F.p])
            disc = F.add(F.mul(b, b), F.scale(4 % F.p, c))
            roots = _sqrt_table(F)
            di = _indices(F, disc)
            r = roots[di]
            ok = r >= 0
            rr = X[r[ok]]
            nb = F.neg(b[ok])
            y1 = F.scale(half, F.add(nb, rr))
            y2 = F.scale(half, F.sub(nb, rr))
            dz = F.is_zero(rr)
            xs += [X[ok], X[ok][~dz]]
            ys += [y1, y2[~dz]]
        if not xs:
            return np.zeros((0, n), dtype=np.int64), np.zeros((0, n), dtype=np.int64)
        return np.vstack(xs), np.vstack(ys)

    def count_points(self, n: int, exhaustive: bool = False) -> int:
        """|X(F_{q^n})|, from the trace recurrence or by enumeration."""
        if exhaustive:
            return self._count_affine(n) + 1
        return self.q**n + 1 - self.frobenius_power_trace(n)

    def frobenius_power_trace(self, n: int) -> int:
        s0, s1 = 2, self.trace
        if n == 0:
            return 2
        for _ in range(n - 1):
            s0, s1 = s1, self.trace * s1 - self.q * s0
        return s1

    def count_closed_points(self, d: int, exhaustive: bool = False) -> int:
        """B_d via Mobius inversion of |X(F_{q^n})| = sum_{e | n} e B_e."""
        if exhaustive:
            return len(self.closed_points(d))
        tot = sum(poly.mobius(d // e) * self.count_points(e) for e in range(1, d + 1) if d % e == 0)
        assert tot % d == 0
        return tot // d

    @functools.lru_cache(maxsize=None)
    def closed_points(self, d: int) -> tuple:
        """All closed points of degree d, sorted (infinity first at d = 1)."""
        F = field(self.q, d)
        X, Y = self.affine_points(d)
        if len(X) == 0:
            return (self.inf,) if d == 1 else ()
        exact = np.ones(len(X), dtype=bool)
        for p in poly._prime_divisors(d):
            fx, fy = F.frob(X, d // p), F.frob(Y, d // p)
            exact &= ~(F.eq(fx, X) & F.eq(fy, Y))
        X, Y = X[exact], Y[exact]
        pw = self.q ** np.arange(d, dtype=np.int64)
        best = (X @ pw) * F.order + (Y @ pw)
        bx, by = X.copy(), Y.copy()
        cx, cy = X, Y
        for _ in range(d - 1):
            cx, cy = F.frob(cx), F.frob(cy)
            k = (cx @ pw) * F.order + (cy @ pw)
            better = k < best
            best = np.where(better, k, best)
            bx[better], by[better] = cx[better], cy[better]
        _, first = np.unique(best, return_index=True)
        pts = [self.make_point(d, bx[i], by[i], canonical=True) for i in first]
        if d == 1:
            pts = [self.inf] + pts
        return tuple(pts)

    def rational_points(self) -> tuple:
        return self.closed_points(1)

    def make_point(self, d: int, x, y, canonical: bool = False) -> ECPoint:
        """Closed point through the geometric point (x, y) of F_{q^d}."""
        F = field(self.q, d)
        x, y = np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64)
        if not canonical:
            if not self.on_curve(F, x, y):
                raise ValueError("point is not on the curve")
            conj = self.conjugates_xy(F, x, y)
            if len(conj) != d:
                raise ValueError(f"orbit has size {len(conj)}, not {d}")
            x, y = min(conj, key=lambda P: (F.index(P[0]), F.index(P[1])))
        return ECPoint(self.q, self.a, d, tuple(int(v) for v in x), tuple(int(v) for v in y))

    def conjugates_xy(self, F, x, y):
        out = [(x, y)]
        cx, cy = F.frob(x), F.frob(y)
        while not (np.array_equal(cx, x) and np.array_equal(cy, y)):
            out.append((cx, cy))
            cx, cy = F.frob(cx), F.frob(cy)
        return out

    def negate_point(self, P: ECPoint) -> ECPoint:
        if P.is_infinity:
            return P
        F = field(self.q, P.d)
        x, y = self.neg(F, P.coords())
        return self.make_point(P.d, x, y)

    def find_point_of_degree(self, m: int, seed: int = 0, budget: int = 10000) -> ECPoint:
        if m == 1:
            return self.rational_points()[0]
        if self.count_closed_points(m) == 0:
            raise ValueError(f"no closed point of degree {m}")
        F = field(self.q, m)
        if F.order <= ENUM_LIMIT:
            return self.closed_points(m)[0]
        rng = np.random.default_rng(seed)
        primes = poly._prime_divisors(m)
        for _ in range(budget):
            x = F.random(rng)
            b, c = self.quadratic(F, x)
            for y in F.solve_quadratic(b, c):
                if all(not (np.array_equal(F.frob(x, m // p), x) and np.array_equal(F.frob(y, m // p), y))
                       for p in primes):
                    return self.make_point(m, x, y)
        raise RuntimeError(f"no point of degree {m} found in {budget} samples (seed {seed})")

    # class group --------------------------------------------------------------
    def trace_push(self, P: ECPoint):
        """Sum of the conjugates of P: a rational geometric point or None."""
        if P.is_infinity:
            return None
        if self._N1 == 1:
            return None
        F = field(self.q, P.d)
        acc = None
        for c in self.conjugates_xy(F, *P.coords()):
            acc = self.add(F, acc, c)
        if acc is None:
            return None
        return np.array([acc[0][0]]), np.array([acc[1][0]])

    def sigma(self, D: Divisor) -> ECPoint:
        """The rational point R with D ~ R + (deg D - 1) P_inf."""
        F1 = field(self.q, 1)
        acc = None
        for P in D:
            acc = self.add(F1, acc, self.smul(F1, D[P], self.trace_push(P)))
        if acc is None:
            return self.inf
        return self.make_point(1, acc[0], acc[1], canonical=True)

    def l_dim(self, D: Divisor) -> int:
        deg = D.degree
        if deg >= 1:
            return deg
        if deg == 0:
            return 1 if self.sigma(D).is_infinity else 0
        return 0

    def is_principal(self, D: Divisor) -> bool:
        return D.degree == 0 and self.sigma(D).is_infinity

    def index_of_speciality(self, D: Divisor) -> int:
        """i(D) = l(K - D) with K = 0."""
        return self.l_dim(-D)

    def is_nonspecial_shifted(self, D: Divisor, Q: ECPoint, l: int) -> bool:
        return self.index_of_speciality(D - l * Divisor.point(Q)) == 0

    # local expansions ---------------------------------------------------------
    def _F(self, R: ECPoint):
        return field(self.q, R.d)

    def uses_y_parameter(self, R: ECPoint) -> bool:
        F = self._F(R)
        x0, y0 = R.coords()
        a1, _, a3, _, _ = self.lift(F)
        fy = F.add(F.add(F.scale(self._k(2), y0), F.mul(a1, x0)), a3)
        return bool(F.is_zero(fy))

    def _F_series(self, F, xs, ys):
        """Series of y^2 + a1 xy + a3 y - (x^3 + a2 x^2 + a4 x + a6)."""
        a1, a2, a3, a4, a6 = self.lift(F)
        x2 = S.mul(F, xs, xs)
        x3 = S.mul(F, x2, xs)
        lhs = S.add(F, S.add(F, S.mul(F, ys, ys), S.scale(F, a1, S.mul(F, xs, ys))), S.scale(F, a3, ys))
        rhs = S.add(F, S.add(F, x3, S.scale(F, a2, x2)), S.scale(F, a4, xs))
        rhs = rhs.copy()
        rhs[0] = F.add(rhs[0], a6)
        return S.sub(F, lhs, rhs)

    @functools.lru_cache(maxsize=None)
    def local_xy(self, R: ECPoint, P: int):
        """Series of x and y at a finite point in its uniformizer, precision P."""
        F = self._F(R)
        x0, y0 = R.coords()
        a1, a2, a3, a4, a6 = self.lift(F)
        use_y = self.uses_y_parameter(R)
        if use_y:
            ys, xs = S.var(F, y0, P), S.const(F, x0, P)
        else:
            xs, ys = S.var(F, x0, P), S.const(F, y0, P)
        prec = 1
        while prec < P:
            prec = min(2 * prec, P)
            xp, yp = S.truncate(xs, prec), S.truncate(ys, prec)
            val = self._F_series(F, xp, yp)
            if use_y:
                # F_X = a1 y - 3x^2 - 2 a2 x - a4
                dx = S.sub(F, S.scale(F, a1, yp), S.add(F, S.scale(F, F.from_base(self._k(3)), S.mul(F, xp, xp)),
                                                        S.scale(F, F.from_base(self._k(2)), S.scale(F, a2, xp))))
                dx = dx.copy()
                dx[0] = F.sub(dx[0], a4)
                xs = S.sub(F, xp, S.mul(F, val, S.inv(F, dx)))
                ys = yp
            else:
                dy = S.add(F, S.scale(F, F.from_base(self._k(2)), yp), S.scale(F, a1, xp))
                dy = dy.copy()
                dy[0] = F.add(dy[0], a3)
                ys = S.sub(F, yp, S.mul(F, val, S.inv(F, dy)))
                xs = xp
        xs, ys = S.truncate(xs, P), S.truncate(ys, P)
        assert not self._F_series(F, xs, ys).any(), "local parametrization failed"
        return xs, ys

    @functools.lru_cache(maxsize=None)
    def local_h_inf(self, P: int):
        """h = 1/w-hat with w = z^3 w-hat, z = -x/y: z^2 x = h and z^3 y = -h."""
        F = field(self.q, 1)
        a1, a2, a3, a4, a6 = self.lift(F)
        one = S.const(F, F.one(), P)
        wh = one
        for _ in range(P):
            w2 = S.mul(F, wh, wh)
            w3 = S.mul(F, w2, wh)
            nxt = one.copy()
            nxt = S.add(F, nxt, S.shift(F, S.scale(F, a1, wh), 1))
            nxt = S.add(F, nxt, S.shift(F, S.scale(F, a2, wh), 2))
            nxt = S.add(F, nxt, S.shift(F, S.scale(F, a3, w2), 3))
            nxt = S.add(F, nxt, S.shift(F, S.scale(F, a4, w2), 4))
            nxt = S.add(F, nxt, S.shift(F, S.scale(F, a6, w3), 6))
            if np.array_equal(nxt, wh):
                break
            wh = nxt
        return S.inv(F, wh)

    def monomial_series(self, R: ECPoint, mons, P: int, B: int = 0):
        """Series of the monomials x^i y^j (pairs in ``mons``) at R.

        At infinity the series is that of z^B x^i y^j in z = -x/y, which is a
        power series when 2i + 3j <= B."""
        if R.is_infinity:
            F = field(self.q, 1)
            h = self.local_h_inf(P)
            top = max((i + j for i, j in mons), default=0)
            hp = [S.const(F, F.one(), P)]
            for _ in range(top):
                hp.append(S.mul(F, hp[-1], h))
            out = []
            for i, j in mons:
                s = S.shift(F, hp[i + j], B - 2 * i - 3 * j)
                out.append(F.neg(s) if j % 2 else s)
            return np.array(out).reshape(len(mons), P, 1)
        F = self._F(R)
        xs, ys = self.local_xy(R, P)
        top = max((i for i, _ in mons), default=0)
        xp = [S.const(F, F.one(), P)]
        for _ in range(top):
            xp.append(S.mul(F, xp[-1], xs))
        out = []
        ycache = {}
        for i, j in mons:
            if j == 0:
                out.append(xp[i])
            else:
                if j not in ycache:
                    ycache[j] = S.power(F, ys, j)
                out.append(S.mul(F, xp[i], ycache[j]))
        return np.array(out).reshape(len(mons), P, F.m)

    def poly_x_series(self, R: ECPoint, f, P: int):
        """Series of the polynomial f(x) at R (scaled by z^(2 deg f) at infinity)."""
        f = poly.trim(f)
        mons = [(i, 0) for i in range(len(f))]
        Ms = self.monomial_series(R, mons, P, B=2 * max(len(f) - 1, 0))
        F = field(self.q, R.d)
        return linalg.matmul(self.K, f.reshape(1, -1), Ms.reshape(len(mons), -1)).reshape(P, F.m)

    def valuation_x_poly(self, R: ECPoint, f) -> int:
        """v_R(f(x)) for a nonzero polynomial f."""
        if R.is_infinity:
            return -2 * poly.deg(f)
        P = 4
        while True:
            v = S.valuation(field(self.q, R.d), self.poly_x_series(R, f, P))
            if v is not None:
                return v
            P *= 2

    def eval_series(self, mons, coeffs, c, R: ECPoint, u: int, shift: int) -> np.ndarray:
        """A_q(deg R, u) coordinates of t_R^shift f for the functions
        f = (sum_k coeffs[:, k] mon_k) / c; one row per function."""
        K = self.K
        F = field(self.q, R.d)
        nb = coeffs.shape[0]
        c = poly.trim(c)
        if nb == 0:
            return np.zeros((0, R.d * u), dtype=np.int64)
        if R.is_infinity:
            B = max((2 * i + 3 * j for i, j in mons), default=0)
            o = shift + 2 * poly.deg(c) - B
            P = max(u - o, u, 1)
            A = linalg.matmul(K, coeffs, self.monomial_series(R, mons, P, B).reshape(len(mons), -1))
            A = A.reshape(nb, P, F.m)
            Cz = self.poly_x_series(R, c, P)
            g = S.mul(F, A, S.inv(F, Cz)[None])
            res = _shift_window(g, o, u, R)
            res = S.negate_variable(F, res)
            if shift % 2:
                res = F.neg(res)
            return res.reshape(nb, u * F.m)
        e = self.valuation_x_poly(R, c) if poly.deg(c) > 0 else 0
        P = max(u + 2 * e - shift, e + 1, u)
        A = linalg.matmul(K, coeffs, self.monomial_series(R, mons, P).reshape(len(mons), -1)).reshape(nb, P, F.m)
        cs = self.poly_x_series(R, c, P)
        ct = cs[e:]
        g = S.mul(F, A[:, : P - e], S.inv(F, ct)[None])
        return _shift_window(g, shift - e, u, R).reshape(nb, u * F.m)

    # Riemann-Roch -------------------------------------------------------------
    def rr_basis(self, D: Divisor) -> "RRSpace":
        K = self.K
        c = poly.P([1])
        minpolys = {}
        for P, k in D.items():
            if P.is_infinity or k <= 0:
                continue
            F = self._F(P)
            g = F.minpoly(P.coords()[0])
            minpolys[P] = g
            c = poly.mul(K, c, poly.power(K, g, k))
        B = 2 * poly.deg(c) + D[self.inf]
        mons = [(i, 0) for i in range(B // 2 + 1)] + [(j, 1) for j in range((B - 3) // 2 + 1)] if B >= 0 else []
        if not mons:
            return RRSpace(self, D, c, [], np.zeros((0, 0), dtype=np.int64))
        # closed points where v_R(c) - D(R) may be positive
        cand = {P for P in D if not P.is_infinity}
        for P in minpolys:
            cand.add(self.negate_point(P))
        rows = []
        for R in sorted(cand, key=lambda P: P.sort_key()):
            k = (self.valuation_x_poly(R, c) if poly.deg(c) > 0 else 0) - D[R]
            if k <= 0:
                continue
            Ms = self.monomial_series(R, mons, k)  # (nmon, k, d)
            rows.append(Ms.reshape(len(mons), -1).T)
        if rows:
            coeffs = linalg.kernel(K, np.vstack(rows))
        else:
            coeffs = np.eye(len(mons), dtype=np.int64)
        return RRSpace(self, D, c, mons, coeffs)

    def evaluation_matrix(self, space: "RRSpace", points, shifts=None) -> np.ndarray:
        blocks = []
        for i, (R, u) in enumerate(points):
            s = 0 if shifts is None else shifts[i]
            blocks.append(space.evaluate(R, u, s).T)
        if not blocks:
            return np.zeros((0, space.dim), dtype=np.int64)
        return np.vstack(blocks)

    # valuations and divisors of functions -----------------------------------
    def valuation(self, f: ECFunction, R: ECPoint) -> float:
        if f.is_zero():
            return float("inf")
        mons, coeffs = _monomial_form(f)
        if R.is_infinity:
            B = max(2 * i + 3 * j for i, j in mons)
            P = 8
            while True:
                A = linalg.matmul(self.K, coeffs[None], self.monomial_series(R, mons, P, B).reshape(len(mons), -1))
                v = S.valuation(field(self.q, 1), A.reshape(P, 1))
                if v is not None:
                    return v - B + 2 * poly.deg(f.c)
                P *= 2
        F = self._F(R)
        P = 8
        while True:
            A = linalg.matmul(self.K, coeffs[None], self.monomial_series(R, mons, P).reshape(len(mons), -1))
            v = S.valuation(F, A.reshape(P, F.m))
            if v is not None:
                return v - self.valuation_x_poly(R, f.c)
            P *= 2

    def points_above(self, g) -> list:
        """Closed points whose x-coordinate has minimal polynomial g."""
        e = poly.deg(g)
        out = set()
        for d in (e, 2 * e):
            F = field(self.q, d)
            for x in F.roots(g):
                if F.degree_over_base(x) != e:
                    continue
                b, c = self.quadratic(F, x)
                for y in F.solve_quadratic(b, c):
                    conj = self.conjugates_xy(F, x, y)
                    if len(conj) == d:
                        out.add(self.make_point(d, x, y))
        return sorted(out, key=lambda P: P.sort_key())

    def function_divisor(self, f: ECFunction) -> Divisor:
        K = self.K
        a1, a2, a3, a4, a6 = self.a
        lin = poly.P([a3, a1])
        cub = poly.P([a6, a4, a2, 1])
        norm = poly.sub(K, poly.mul(K, f.a, f.a), poly.mul(K, poly.mul(K, f.a, f.b), lin))
        norm = poly.sub(K, norm, poly.mul(K, poly.mul(K, f.b, f.b), cub))
        pts = set()
        for h in (norm, f.c):
            if poly.deg(h) > 0:
                for g, _ in factor(K, h):
                    pts.update(self.points_above(g))
        out = {R: self.valuation(f, R) for R in pts}
        out[self.inf] = self.valuation(f, self.inf)
        return Divisor(out)


def _shift_window(g, o: int, u: int, R) -> np.ndarray:
    """Coefficients 0..u-1 of t^o g, checking no pole appears."""
    nb, P, m = g.shape
    out = np.zeros((nb, u, m), dtype=np.int64)
    if o >= 0:
        k = min(u - o, P)
        if k > 0:
            out[:, o : o + k] = g[:, :k]
        return out
    if g[:, :-o].any():
        raise ValueError(f"pole order exceeds the shift at {R!r}")
    out[:, : min(u, P + o)] = g[:, -o : -o + u]
    return out


def _monomial_form(f: ECFunction):
    mons = [(i, 0) for i in range(len(f.a))] + [(j, 1) for j in range(len(f.b))]
    coeffs = np.concatenate([f.a, f.b]).astype(np.int64)
    return mons, coeffs


class RRSpace:
    """L(D) with basis (sum_k coeffs[r, k] mons[k]) / c."""

    def __init__(self, curve, D, c, mons, coeffs):
        self.curve, self.D, self.c = curve, D, poly.trim(c)
        self.mons = list(mons)
        coeffs = np.asarray(coeffs, dtype=np.int64)
        self.coeffs = coeffs.reshape(-1, len(self.mons)) if self.mons else np.zeros((0, 0), dtype=np.int64)

    @property
    def dim(self) -> int:
        return self.coeffs.shape[0]

    def __len__(self):
        return self.dim

    def functions(self) -> list[ECFunction]:
        out = []
        na = sum(1 for _, j in self.mons if j == 0)
        for row in self.coeffs:
            out.append(ECFunction(self.curve, poly.trim(row[:na]), poly.trim(row[na:]), self.c))
        return out

    def evaluate(self, R: ECPoint, u: int, shift: int = 0) -> np.ndarray:
        """Rows: A_q(deg R, u) coordinates of t^shift f for each basis f."""
        return self.curve.eval_series(self.mons, self.coeffs, self.c, R, u, shift)


def local_expand(f: ECFunction, R: ECPoint, u: int, shift: int = 0) -> np.ndarray:
    mons, coeffs = _monomial_form(f)
    return f.curve.eval_series(mons, coeffs[None], f.c, R, u, shift)[0]


# search helpers ----------------------------------------------------------------


def _indices(F, a) -> np.ndarray:
    return np.asarray(a) @ (F.q ** np.arange(F.m, dtype=np.int64))


@functools.lru_cache(maxsize=None)
def _sqrt_table_cached(q, m):
    F = field(q, m)
    X = F.elements()
    sq = _indices(F, F.mul(X, X))
    roots = -np.ones(F.order, dtype=np.int64)
    roots[sq[::-1]] = np.arange(F.order)[::-1]
    return roots


def _sqrt_table(F):
    return _sqrt_table_cached(F.q, F.m)


@functools.lru_cache(maxsize=None)
def _as_matrix(q, m):
    """For characteristic 2: (L, pivots) with y = sum over pivots of (L c)
    solving y^2 + y = c whenever c has absolute trace 0."""
    F = field(q, m)
    K = F.K
    n = K.r * m
    basis = np.eye(n, dtype=np.int64)
    elems = K.from_digits(basis.reshape(n, m, K.r))
    img = F.add(F.mul(elems, elems), elems)
    A = K.digits[img].reshape(n, n).T  # column i = image of basis i
    F2 = GF(2)
    _, piv = linalg.rref(F2, A)
    L = linalg.left_inverse(F2, A[:, piv])
    return L, piv, n


def _as_solve_batch(F, c):
    """Batch solve of z^2 + z = c: (ok mask, z)."""
    K = F.K
    L, piv, n = _as_matrix(F.q, F.m)
    bits = K.digits[c].reshape(len(c), n)
    zb = np.zeros((len(c), n), dtype=np.int64)
    zb[:, piv] = (bits @ L.T) % 2
    z = K.from_digits(zb.reshape(len(c), F.m, K.r))
    ok = F.eq(F.add(F.mul(z, z), z), c)
    return ok, z


def curves_in_order(q: int):
    """Weierstrass tuples (a1, a2, a3, a4, a6) in lexicographic order."""
    return itertools.product(range(q), repeat=5)


@functools.lru_cache(maxsize=None)
def _first_curves(q: int) -> dict:
    """trace -> first nonsingular tuple in lexicographic order, one sweep.

    Point counts are vectorized over (a4, a6) for each (a1, a2, a3)."""
    K = GF(q)
    bound = math.isqrt(4 * q)
    wanted = set(range(-bound, bound + 1))
    xs = np.arange(q)
    X2 = K.mul[xs, xs]
    X3 = K.mul[X2, xs]
    a4 = np.repeat(xs, q)
    a6 = np.tile(xs, q)
    lin = K.add[K.mul[a4[:, None], xs[None, :]], a6[:, None]]  # (q^2, x)
    found = {}
    for a1, a2, a3 in itertools.product(range(q), repeat=3):
        # cnt[x, v] = #{y : y^2 + (a1 x + a3) y = v}
        bx = K.add[K.mul[a1, xs], a3]
        lhs = K.add[K.mul[xs, xs][None, :], K.mul[bx[:, None], xs[None, :]]]
        cnt = np.zeros((q, q), dtype=np.int64)
        np.add.at(cnt, (np.repeat(xs, q), lhs.ravel()), 1)
        rhs = K.add[K.add[X3, K.mul[a2, X2]][None, :], lin]  # (q^2, x)
        N = 1 + cnt[xs[None, :], rhs].sum(axis=1)
        T = q + 1 - N
        for t in sorted(set(T.tolist()) & (wanted - set(found))):
            for i in np.flatnonzero(T == t):
                try:
                    found[t] = EllipticCurve(q, (a1, a2, a3, int(a4[i]), int(a6[i])))
                    break
                except ValueError:
                    continue
        if len(found) == len(wanted):
            break
    return found


def curve_with_trace(q: int, t: int) -> EllipticCurve:
    """First nonsingular curve (lexicographic in the coefficients) with
    exactly q + 1 - t rational points."""
    if t * t > 4 * q:
        raise LookupError(f"|t| exceeds the Hasse bound for q={q}")
    found = _first_curves(q)
    if t not in found:
        raise LookupError(f"no elliptic curve over F_{q} with trace {t}")
    C = found[t]
    assert C.count_points(1, exhaustive=True) == q + 1 - t
    return C


def admissible_traces(q: int) -> list[int]:
    return sorted(_first_curves(q))


def parse_curve(text: str) -> EllipticCurve:
    """Curve literal ``q=<q> a=[a1,a2,a3,a4,a6]``."""
    try:
        parts = dict(p.split("=", 1) for p in text.split())
        q = int(parts["q"])
        a = [int(v) for v in parts["a"].strip("[]").split(",")]
    except (KeyError, ValueError) as exc:
        raise ValueError(f"bad curve literal {text!r}") from exc
    if len(a) != 5:
        raise ValueError(f"curve literal needs five coefficients: {text!r}")
    return EllipticCurve(q, a)
