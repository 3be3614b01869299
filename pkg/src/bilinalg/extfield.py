"""Extension fields F_{q^m} = K[x]/(M) over a table field K = F_q.

Elements are int64 arrays whose last axis has length ``m`` (coefficients of
1, a, ..., a^{m-1} over K, where ``a`` is the class of x). Leading axes
broadcast, so one call can multiply a whole batch of elements. The default
modulus is the canonical one from :func:`bilinalg.poly.irreducibles`.
"""

from __future__ import annotations

import functools

import numpy as np

from . import linalg, poly
from .gf import GF

# brute-force root finding / enumeration limit on the field order
ENUM_LIMIT = 2**20


class ExtField:
    def __init__(self, K, m: int, modulus=None):
        self.K, self.m = K, m
        self.p, self.q = K.p, K.q
        self.order = K.q**m
        if modulus is None:
            modulus = canonical_modulus(K.q, m)
        modulus = poly.trim(modulus)
        if poly.deg(modulus) != m or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree m")
        if m > 1 and not poly.is_irreducible(K, modulus):
            raise ValueError("modulus is reducible")
        self.modulus = modulus
        R = np.zeros((max(m - 1, 0), m), dtype=np.int64)
        for j in range(m - 1):
            rem = poly.mod(K, poly.monomial(m + j), modulus)
            R[j, : len(rem)] = rem
        self.R = R

    def __repr__(self):
        return f"ExtField(q={self.q}, m={self.m})"

    def __reduce__(self):
        return (ExtField, (self.K, self.m, self.modulus))

    # construction ---------------------------------------------------------
    def zero(self, shape=()) -> np.ndarray:
        return np.zeros(tuple(shape) + (self.m,), dtype=np.int64)

    def one(self) -> np.ndarray:
        return self.from_base(1)

    def gen(self) -> np.ndarray:
        if self.m == 1:
            return self.from_base(int(poly.neg(self.K, self.modulus)[0]) if len(self.modulus) else 0)
        out = self.zero()
        out[1] = 1
        return out

    def from_base(self, c) -> np.ndarray:
        c = np.asarray(c, dtype=np.int64)
        out = np.zeros(c.shape + (self.m,), dtype=np.int64)
        out[..., 0] = c
        return out

    def from_poly(self, f) -> np.ndarray:
        """Class of the K-polynomial ``f`` (in the generator)."""
        r = poly.mod(self.K, poly.trim(f), self.modulus)
        out = self.zero()
        out[: len(r)] = r
        return out

    def from_index(self, n) -> np.ndarray:
        """Element whose base-q digits (low first) are the coordinates."""
        n = np.asarray(n, dtype=object if self.order > 2**62 else np.int64)
        out = np.zeros(n.shape + (self.m,), dtype=np.int64)
        for i in range(self.m):
            out[..., i] = np.asarray(n % self.q, dtype=np.int64)
            n = n // self.q
        return out

    def index(self, a) -> int:
        a = np.asarray(a)
        return sum(int(c) * self.q**i for i, c in enumerate(a))

    def elements(self) -> np.ndarray:
        if self.order > ENUM_LIMIT:
            raise ValueError(f"field too large to enumerate: {self.order}")
        return self.from_index(np.arange(self.order, dtype=np.int64))

    def random(self, rng, shape=()) -> np.ndarray:
        return rng.integers(0, self.q, size=tuple(shape) + (self.m,)).astype(np.int64)

    def base_value(self, a):
        """K-element if ``a`` lies in K, else None."""
        a = np.asarray(a)
        return int(a[0]) if not a[1:].any() else None

    # arithmetic -----------------------------------------------------------
    def add(self, a, b):
        return self.K.add[np.asarray(a), np.asarray(b)]

    def sub(self, a, b):
        return self.K.sub[np.asarray(a), np.asarray(b)]

    def neg(self, a):
        return self.K.neg[np.asarray(a)]

    def scale(self, c, a):
        """Multiply by K-scalars ``c`` (broadcast against leading axes)."""
        c = np.asarray(c, dtype=np.int64)
        return self.K.mul[c[..., None], np.asarray(a)]

    def mul(self, a, b):
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        m, K, p = self.m, self.K, self.p
        if m == 1:
            return K.mul[a, b]
        shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1])
        if K.r == 1:
            if a.ndim == 1 and b.ndim == 1:
                full = np.convolve(a, b) % p
            else:
                full = np.zeros(shape + (2 * m - 1,), dtype=np.int64)
                for i in range(m):
                    full[..., i : i + m] += a[..., i : i + 1] * b
                full %= p
            return (full[..., :m] + full[..., m:] @ self.R) % p
        fd = np.zeros(shape + (2 * m - 1, K.r), dtype=np.int64)
        for i in range(m):
            fd[..., i : i + m, :] += K.digits[K.mul[a[..., i : i + 1], b]]
        full = K.from_digits(fd % p)
        hi = K.mul[full[..., m:, None], self.R]
        return K.add[full[..., :m], K.sum(hi, axis=-2)]

    def sqr(self, a):
        return self.mul(a, a)

    def pow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        if e < 0:
            a, e = self.inv(a), -e
        out = np.broadcast_to(self.one(), a.shape).copy()
        while e:
            if e & 1:
                out = self.mul(out, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return out

    def inv(self, a):
        """Inverse (0 maps to 0)."""
        if self.m == 1:
            return self.K.inv[np.asarray(a)]
        return self.pow(a, self.order - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    @functools.cached_property
    def frob_matrix(self) -> np.ndarray:
        """Rows are (a^i)^q: x -> x^q is K-linear."""
        g = self.pow(self.gen(), self.q)
        rows = [self.one()]
        for _ in range(self.m - 1):
            rows.append(self.mul(rows[-1], g))
        return np.array(rows)

    def frob(self, a, k: int = 1):
        """a^(q^k)."""
        a = np.asarray(a, dtype=np.int64)
        for _ in range(k % self.m):
            flat = a.reshape(-1, self.m)
            a = linalg.matmul(self.K, flat, self.frob_matrix).reshape(a.shape)
        return a

    def trace(self, a):
        """Trace to K, as a K-element array."""
        a = np.asarray(a, dtype=np.int64)
        s, c = a.copy(), a
        for _ in range(self.m - 1):
            c = self.frob(c)
            s = self.add(s, c)
        return s[..., 0]

    def abs_trace(self, a):
        """Trace to the prime field."""
        t = np.asarray(self.trace(a))
        K = self.K
        s, c = t.copy(), t
        for _ in range(K.r - 1):
            c = _kpow(K, c, K.p)
            s = K.add[s, c]
        return s

    def is_zero(self, a):
        return ~np.asarray(a).any(axis=-1)

    def eq(self, a, b):
        return ~(np.asarray(a) != np.asarray(b)).any(axis=-1)

    def evaluate(self, f, x):
        """Evaluate the K-polynomial ``f`` at field elements ``x`` (Horner)."""
        x = np.asarray(x, dtype=np.int64)
        acc = np.zeros(x.shape, dtype=np.int64)
        for c in poly.trim(f)[::-1]:
            acc = self.mul(acc, x)
            acc[..., 0] = self.K.add[acc[..., 0], c]
        return acc

    def conjugates(self, a) -> list[np.ndarray]:
        """Distinct conjugates a, a^q, a^(q^2), ... over K."""
        out = [np.asarray(a)]
        c = self.frob(a)
        while not np.array_equal(c, out[0]):
            out.append(c)
            c = self.frob(c)
        return out

    def degree_over_base(self, a) -> int:
        return len(self.conjugates(a))

    def minpoly(self, a) -> np.ndarray:
        """Minimal polynomial of ``a`` over K."""
        coeffs = [self.one()]
        for c in self.conjugates(a):
            nc = self.neg(c)
            new = [self.mul(coeffs[0], nc)]
            for i in range(1, len(coeffs)):
                new.append(self.add(coeffs[i - 1], self.mul(coeffs[i], nc)))
            new.append(coeffs[-1])
            coeffs = new
        vals = [self.base_value(c) for c in coeffs]
        assert all(v is not None for v in vals)
        return poly.P(vals)

    def roots(self, f) -> np.ndarray:
        """All roots in this field of the K-polynomial ``f``, by index order."""
        if self.order > 1024:
            return self._split_roots(f)
        X = self.elements()
        return X[self.is_zero(self.evaluate(f, X))]

    # polynomials over this field, rows lowest degree first -----------------
    def _ptrim(self, a):
        nz = np.flatnonzero(a.any(axis=1))
        return a[: nz[-1] + 1] if len(nz) else a[:0]

    def _pmul(self, a, b):
        if not len(a) or not len(b):
            return a[:0]
        prod = self.mul(a[:, None], b[None, :])
        out = np.zeros((len(a) + len(b) - 1, self.m), dtype=np.int64)
        for i in range(len(a)):
            out[i : i + len(b)] = self.add(out[i : i + len(b)], prod[i])
        return out

    def _pmod(self, a, b):
        """Remainder modulo the monic ``b``."""
        a = self._ptrim(a).copy()
        n = len(b) - 1
        while len(a) > n:
            lead = a[-1]
            a[len(a) - 1 - n :] = self.sub(a[len(a) - 1 - n :], self.mul(lead, b))
            a = self._ptrim(a)
        return a

    def _pmonic(self, a):
        return self.mul(a, self.inv(a[-1]))

    def _pgcd(self, a, b):
        a, b = self._ptrim(a), self._ptrim(b)
        while len(b):
            a, b = b, self._pmod(a, self._pmonic(b))
        return self._pmonic(a) if len(a) else a

    def _ppowmod(self, a, e: int, f):
        out = self.one()[None]
        a = self._pmod(a, f)
        while e:
            if e & 1:
                out = self._pmod(self._pmul(out, a), f)
            e >>= 1
            if e:
                a = self._pmod(self._pmul(a, a), f)
        return out

    def _split_roots(self, f, seed: int = 0) -> np.ndarray:
        """Roots by equal-degree splitting of gcd(f, X^Q - X)."""
        f = poly.trim(f)
        g = np.zeros((len(f), self.m), dtype=np.int64)
        g[:, 0] = f
        g = self._pmonic(self._ptrim(g))
        X = np.zeros((2, self.m), dtype=np.int64)
        X[1, 0] = 1
        xq = self._ppowmod(X, self.order, g)
        diff = np.zeros((max(len(xq), 2), self.m), dtype=np.int64)
        diff[: len(xq)] = xq
        diff[:2] = self.sub(diff[:2], X)
        h = self._pgcd(g, diff)
        rng = np.random.default_rng(seed)
        roots, todo = [], [h] if len(h) > 1 else []
        while todo:
            h = todo.pop()
            if len(h) == 2:
                roots.append(self.neg(h[0]))
                continue
            # a random linear c1 X + c0: with c1 = 1 the trace cannot separate conjugate roots
            r = self.random(rng, (2,))
            if self.p == 2:
                acc, t = r[:0], self._pmod(r, h)
                for _ in range(self.order.bit_length() - 1):
                    acc = self._ptrim(np.concatenate([acc, np.zeros((max(len(t) - len(acc), 0), self.m), dtype=np.int64)]))
                    acc = self._padd(acc, t)
                    t = self._pmod(self._pmul(t, t), h)
                w = acc
            else:
                w = self._ppowmod(r, (self.order - 1) // 2, h)
                w = self._padd(w, self.neg(self.one())[None])
            d = self._pgcd(h, w)
            if 1 < len(d) < len(h):
                todo += [d, self._pquo(h, d)]
            else:
                todo.append(h)
        roots.sort(key=self.index)
        return np.array(roots, dtype=np.int64).reshape(-1, self.m)

    def _padd(self, a, b):
        n = max(len(a), len(b))
        out = np.zeros((n, self.m), dtype=np.int64)
        out[: len(a)] = a
        out[: len(b)] = self.add(out[: len(b)], b)
        return self._ptrim(out)

    def _pquo(self, a, b):
        """Exact quotient by the monic ``b``."""
        a = a.copy()
        n = len(b) - 1
        out = np.zeros((len(a) - n, self.m), dtype=np.int64)
        for i in range(len(a) - 1, n - 1, -1):
            c = a[i]
            out[i - n] = c
            a[i - n : i + 1] = self.sub(a[i - n : i + 1], self.mul(c, b))
        return out

    # square roots and quadratics -----------------------------------------
    def sqrt(self, a):
        """A square root of ``a`` or None."""
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return self.pow(a, self.order // 2)
        if not a.any():
            return a.copy()
        if not np.array_equal(self.pow(a, (self.order - 1) // 2), self.one()):
            return None
        s, Q = 0, self.order - 1
        while Q % 2 == 0:
            s, Q = s + 1, Q // 2
        z = self._nonresidue()
        M, c = s, self.pow(z, Q)
        t, R = self.pow(a, Q), self.pow(a, (Q + 1) // 2)
        one = self.one()
        while not np.array_equal(t, one):
            i, tt = 0, t
            while not np.array_equal(tt, one):
                tt, i = self.sqr(tt), i + 1
            b = c
            for _ in range(M - i - 1):
                b = self.sqr(b)
            M, c = i, self.sqr(b)
            t, R = self.mul(t, c), self.mul(R, b)
        return R

    @functools.cached_property
    def _nr(self):
        e = (self.order - 1) // 2
        n = 2
        while True:
            z = self.from_index(n)
            if not np.array_equal(self.pow(z, e), self.one()):
                return z
            n += 1

    def _nonresidue(self):
        return self._nr

    def artin_schreier_solve(self, c):
        """y with y^2 + y = c, or None (characteristic 2)."""
        if self.p != 2:
            raise ValueError("Artin-Schreier solving needs characteristic 2")
        c = np.asarray(c, dtype=np.int64)
        if int(self.abs_trace(c)) != 0:
            return None
        n = self.K.r * self.m
        if n % 2 == 1:
            h, s = c.copy(), c
            for _ in range((n - 1) // 2):
                s = self.sqr(self.sqr(s))
                h = self.add(h, s)
            return h
        # even absolute degree: solve the F_2-linear system directly
        return self._linear_as_solve(c)

    def _linear_as_solve(self, c):
        K, n = self.K, self.K.r * self.m
        F2 = GF(2)
        basis = np.eye(n, dtype=np.int64)
        elems = K.from_digits(basis.reshape(n, self.m, K.r))
        img = self.add(self.sqr(elems), elems)
        A = K.digits[img].reshape(n, n).T
        rhs = K.digits[c].reshape(n)
        sol = linalg.solve(F2, A, rhs)
        if sol is None:
            return None
        return K.from_digits(sol.reshape(self.m, K.r))

    def solve_quadratic(self, b, c):
        """Roots y of y^2 + b y = c, as a list (0, 1 or 2 elements)."""
        b, c = np.asarray(b, dtype=np.int64), np.asarray(c, dtype=np.int64)
        if self.p == 2:
            if not b.any():
                return [self.sqrt(c)]
            b2 = self.sqr(b)
            z = self.artin_schreier_solve(self.div(c, b2))
            if z is None:
                return []
            y = self.mul(b, z)
            return _dedup([y, self.add(y, b)])
        disc = self.add(self.sqr(b), self.scale(4 % self.p, c))
        r = self.sqrt(disc)
        if r is None:
            return []
        half = int(self.K.inv[2 % self.p])
        nb = self.neg(b)
        return _dedup([self.scale(half, self.add(nb, r)), self.scale(half, self.sub(nb, r))])


def _dedup(items):
    out = []
    for it in items:
        if not any(np.array_equal(it, o) for o in out):
            out.append(it)
    return out


def _kpow(K, c, e):
    out = np.ones_like(c)
    for _ in range(e):
        out = K.mul[out, c]
    return out


@functools.cache
def canonical_modulus(q: int, m: int) -> np.ndarray:
    K = GF(q)
    if m == 1:
        return poly.P([0, 1])
    return poly.irreducibles(K, m, 1)[0]


@functools.cache
def field(q: int, m: int) -> ExtField:
    """Canonical F_{q^m} over F_q."""
    return ExtField(GF(q), m)


def embedding(q: int, d: int, n: int) -> np.ndarray:
    """Images in canonical F_{q^n} of 1, a, ..., a^{d-1} for the canonical
    generator a of F_{q^d}: rows of a d x n matrix over F_q.

    The chosen root of the degree-d canonical modulus is the smallest by
    index, so the embedding is deterministic."""
    if n % d:
        raise ValueError(f"F_{{q^{d}}} does not embed in F_{{q^{n}}}")
    return _embedding(q, d, n)


@functools.cache
def _embedding(q, d, n):
    F = field(q, n)
    if d == n:
        return np.eye(n, dtype=np.int64)
    if d == 1:
        return F.one()[None, :]
    beta = F.roots(canonical_modulus(q, d))[0]
    rows = [F.one()]
    for _ in range(d - 1):
        rows.append(F.mul(rows[-1], beta))
    return np.array(rows)


def gf_embed(x, q: int, d: int, n: int) -> np.ndarray:
    """Ring embedding of ``x`` in canonical F_{q^d} into canonical F_{q^n}."""
    E = embedding(q, d, n)
    return linalg.matmul(GF(q), np.asarray(x).reshape(1, -1), E)[0]
