"""Finite-dimensional algebras over F_q given by structure constants.

``C[a, b, k]`` is the coefficient of e_k in e_a e_b. The truncated algebras
A_q(m, l) = F_{q^m}[t]/(t^l) use the basis t^j a^i at index ``j*m + i``
where ``a`` generates the canonical F_{q^m}.
"""

from __future__ import annotations

import functools

import numpy as np

from . import linalg, poly
from .extfield import ExtField, canonical_modulus, field
from .gf import GF

# exhaustive zero-divisor scan limit on q^d
FIELD_SCAN_LIMIT = 2**16


class StructureAlgebra:
    def __init__(self, K, C, unity=None, is_field: bool | None = None, name: str = ""):
        C = np.asarray(C, dtype=np.int64)
        d = C.shape[0]
        if C.shape != (d, d, d):
            raise ValueError(f"structure constants must be d x d x d, got {C.shape}")
        if C.size and (C.min() < 0 or C.max() >= K.q):
            raise ValueError("structure constant out of range")
        self.K, self.d, self.C = K, d, C
        self.q = K.q
        self.unity = None if unity is None else np.asarray(unity, dtype=np.int64)
        self.commutative = bool(np.array_equal(C, C.transpose(1, 0, 2)))
        self._is_field = is_field
        self.name = name
        if self.unity is not None:
            E = np.eye(d, dtype=np.int64)
            if not np.array_equal(self.mul(np.broadcast_to(self.unity, (d, d)), E), E):
                raise ValueError("unity vector is not a unit")

    def __repr__(self):
        return self.name or f"StructureAlgebra(q={self.q}, d={self.d})"

    def mul(self, x, y):
        """Product of (batches of) coordinate vectors."""
        K, d = self.K, self.d
        x, y = np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64)
        if d == 0:
            return np.zeros(np.broadcast_shapes(x.shape, y.shape), dtype=np.int64)
        shape = np.broadcast_shapes(x.shape[:-1], y.shape[:-1])
        xf = np.broadcast_to(x, shape + (d,)).reshape(-1, d)
        yf = np.broadcast_to(y, shape + (d,)).reshape(-1, d)
        # xy[n, k] = sum_a x[n, a] * (sum_b y[n, b] C[a, b, k])
        Yc = linalg.matmul(K, yf, self.C.transpose(1, 0, 2).reshape(d, d * d)).reshape(-1, d, d)
        out = K.sum(K.mul[xf[:, :, None], Yc], axis=1)
        return out.reshape(shape + (d,))

    def mult_matrix(self, x):
        """Matrix of y -> x y (columns indexed by basis e_b)."""
        x = np.asarray(x, dtype=np.int64)
        d = self.d
        M = linalg.matmul(self.K, x.reshape(1, d), self.C.reshape(d, d * d)).reshape(d, d)
        return M.T

    @property
    def has_unity(self) -> bool:
        return self.unity is not None

    def is_field(self) -> bool:
        """No zero divisors. Exhaustive when small, else the constructor flag."""
        if self._is_field is not None and self.q**self.d > FIELD_SCAN_LIMIT:
            return self._is_field
        if self.q**self.d > FIELD_SCAN_LIMIT:
            raise ValueError("algebra too large for a zero-divisor scan and no field flag given")
        return self._scan_field()

    @functools.cached_property
    def _scan(self) -> bool:
        K, d = self.K, self.d
        if d == 0:
            return False
        N = self.q**d
        X = (np.arange(1, N)[:, None] // (self.q ** np.arange(d))[None, :]) % self.q
        Ms = linalg.matmul(K, X, self.C.reshape(d, d * d)).reshape(-1, d, d)
        return bool(linalg.batch_nonsingular(K, Ms).all())

    def _scan_field(self) -> bool:
        return self._scan

    def elements(self) -> np.ndarray:
        N = self.q**self.d
        return (np.arange(N)[:, None] // (self.q ** np.arange(self.d))[None, :]) % self.q


class TruncatedAlgebra(StructureAlgebra):
    """A_q(m, l) = F_{q^m}[t]/(t^l) over F_q."""

    def __init__(self, q: int, m: int, l: int):
        if m < 1 or l < 1:
            raise ValueError("need m >= 1 and l >= 1")
        K = GF(q)
        F = field(q, m)
        self.F, self.m, self.l = F, m, l
        d = m * l
        apow = np.zeros((2 * m - 1, m), dtype=np.int64)
        g = F.one()
        for s in range(2 * m - 1):
            apow[s] = g
            g = F.mul(g, F.gen())
        C = np.zeros((d, d, d), dtype=np.int64)
        for j1 in range(l):
            for j2 in range(l - j1):
                j = j1 + j2
                for i1 in range(m):
                    for i2 in range(m):
                        C[j1 * m + i1, j2 * m + i2, j * m : (j + 1) * m] = apow[i1 + i2]
        unity = np.zeros(d, dtype=np.int64)
        unity[0] = 1
        super().__init__(K, C, unity=unity, is_field=(l == 1), name=f"A_{q}({m},{l})")

    def to_series(self, v) -> np.ndarray:
        """Coordinates -> (l, m) array of F_{q^m} coefficients of t^j."""
        return np.asarray(v).reshape(np.shape(v)[:-1] + (self.l, self.m))

    def from_series(self, s) -> np.ndarray:
        s = np.asarray(s)
        return s.reshape(s.shape[:-2] + (self.l * self.m,))


@functools.cache
def truncated(q: int, m: int, l: int = 1) -> TruncatedAlgebra:
    return TruncatedAlgebra(q, m, l)


def product_algebra(algs) -> StructureAlgebra:
    """Direct product A_1 x ... x A_k (block-diagonal constants)."""
    algs = list(algs)
    if not algs:
        raise ValueError("empty product needs a base field")
    K = algs[0].K
    if any(a.K is not K for a in algs):
        raise ValueError("base field mismatch")
    d = sum(a.d for a in algs)
    C = np.zeros((d, d, d), dtype=np.int64)
    unity = np.zeros(d, dtype=np.int64) if all(a.has_unity for a in algs) else None
    o = 0
    for a in algs:
        C[o : o + a.d, o : o + a.d, o : o + a.d] = a.C
        if unity is not None:
            unity[o : o + a.d] = a.unity
        o += a.d
    fld = False if len(algs) > 1 else algs[0]._is_field
    return StructureAlgebra(K, C, unity=unity, is_field=fld, name=" x ".join(map(repr, algs)))


def tensor_algebra(A: StructureAlgebra, B: StructureAlgebra) -> StructureAlgebra:
    """A (x)_K B with basis e_a (x) f_a' at index a * dB + a'."""
    if A.K is not B.K:
        raise ValueError("base field mismatch")
    K = A.K
    C = K.mul[A.C[:, None, :, None, :, None], B.C[None, :, None, :, None, :]]
    d = A.d * B.d
    C = C.reshape(d, d, d)
    unity = None
    if A.has_unity and B.has_unity:
        unity = K.mul[A.unity[:, None], B.unity[None, :]].reshape(d)
    return StructureAlgebra(K, C, unity=unity, name=f"{A!r} (x) {B!r}")


def zero_algebra(K) -> StructureAlgebra:
    return StructureAlgebra(K, np.zeros((0, 0, 0), dtype=np.int64), name="0")


def base_field_algebra(K) -> StructureAlgebra:
    return StructureAlgebra(K, np.ones((1, 1, 1), dtype=np.int64), unity=[1], is_field=True, name=f"F_{K.q}")


def remark_algebra() -> StructureAlgebra:
    """The 2-dim non-unital F_2-algebra with e1 e2 = e2 e1 = e1, e1^2 = e2^2 = 0."""
    C = np.zeros((2, 2, 2), dtype=np.int64)
    C[0, 1, 0] = C[1, 0, 0] = 1
    return StructureAlgebra(GF(2), C, name="remark algebra")


# Hensel lifting -------------------------------------------------------------


class HenselIso:
    """The isomorphism F_{q^m}[t]/(t^l) -> F_q[x]/(Q^l) sending the canonical
    generator a to a lifted root of its minimal polynomial and t to Q.

    ``matrix`` maps A_q(m, l) coordinates to coefficient vectors of
    polynomials of degree < ml; ``inverse`` goes back.
    """

    def __init__(self, K, Q, l: int):
        Q = poly.trim(Q)
        m = poly.deg(Q)
        if m < 1 or Q[-1] != 1 or not poly.is_irreducible(K, Q):
            raise ValueError("Q must be monic irreducible")
        self.K, self.Q, self.m, self.l = K, Q, m, l
        self.modulus = poly.power(K, Q, l)
        self.alpha = hensel_lift(K, Q, l)
        d = m * l
        cols = np.zeros((d, d), dtype=np.int64)
        Qj = poly.P([1])
        for j in range(l):
            ai = poly.P([1])
            for i in range(m):
                v = poly.mulmod(K, ai, Qj, self.modulus)
                cols[: len(v), j * m + i] = v
                ai = poly.mulmod(K, ai, self.alpha, self.modulus)
            Qj = poly.mulmod(K, Qj, Q, self.modulus)
        self.matrix = cols
        self.inverse = linalg.inverse(K, cols)

    def to_poly(self, v) -> np.ndarray:
        return poly.trim(linalg.matvec(self.K, self.matrix, v))

    def from_poly(self, f) -> np.ndarray:
        """A_q(m, l) coordinates of the class of ``f`` mod Q^l."""
        r = poly.mod(self.K, poly.trim(f), self.modulus)
        v = np.zeros(self.m * self.l, dtype=np.int64)
        v[: len(r)] = r
        return linalg.matvec(self.K, self.inverse, v)


def residue_root(K, Q) -> np.ndarray:
    """A root of the canonical degree-m modulus in K[x]/(Q), as a polynomial."""
    m = poly.deg(Q)
    M = canonical_modulus(K.q, m)
    if np.array_equal(poly.trim(Q), M):
        return poly.P([0, 1])
    if m == 1:
        return poly.P([])
    F = ExtField(K, m, modulus=Q)
    return poly.trim(F.roots(M)[0])


def hensel_lift(K, Q, l: int) -> np.ndarray:
    """Lift of the canonical generator: a polynomial a~ with M(a~) = 0 mod Q^l,
    M the canonical modulus of degree deg Q. Newton iteration with doubling
    precision."""
    Q = poly.trim(Q)
    m = poly.deg(Q)
    if not poly.is_irreducible(K, Q):
        raise ValueError("Q is reducible")
    M = canonical_modulus(K.q, m)
    dM = poly.derivative(K, M)
    a = residue_root(K, Q)
    prec = 1
    while prec < l:
        prec = min(2 * prec, l)
        mod = poly.power(K, Q, prec)
        fa = poly.compose_mod(K, M, a, mod)
        da = poly.compose_mod(K, dM, a, mod)
        assert len(da) > 0, "derivative vanishes at the root"
        step = poly.mulmod(K, fa, poly.invmod(K, da, mod), mod)
        a = poly.mod(K, poly.sub(K, a, step), mod)
    return poly.mod(K, a, poly.power(K, Q, l))


@functools.cache
def hensel_iso(q: int, Q: tuple, l: int) -> HenselIso:
    return HenselIso(GF(q), poly.P(Q), l)


def find_unity(A: StructureAlgebra):
    """The two-sided unit of A if one exists, else None."""
    K, d = A.K, A.d
    if d == 0:
        return None
    # u e_b = e_b: sum_a u_a C[a, b, k] = delta(b, k); same for e_b u
    M1 = A.C.transpose(1, 2, 0).reshape(d * d, d)
    M2 = A.C.transpose(0, 2, 1).reshape(d * d, d)
    rhs = np.eye(d, dtype=np.int64).reshape(d * d)
    u = linalg.solve(K, np.vstack([M1, M2]), np.concatenate([rhs, rhs]))
    return u
