"""Bilinear multiplication algorithms xy = sum_i phi_i(x) psi_i(y) w_i.

An algorithm stores ``Phi`` and ``Psi`` (n x d, rows are the linear forms)
and ``W`` (d x n, columns are the w_i) over the base field of its target
algebra. Verification is exhaustive over the d^2 basis pairs, which by
bilinearity covers every input pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import linalg
from .algebra import StructureAlgebra, product_algebra, tensor_algebra, truncated
from .gf import GF
from .tower import table_basis


@dataclass(frozen=True, eq=False)
class BilinearAlgorithm:
    algebra: StructureAlgebra
    Phi: np.ndarray
    Psi: np.ndarray
    W: np.ndarray
    symmetric: bool = False
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        d = self.algebra.d
        Phi, Psi, W = (np.asarray(M, dtype=np.int64) for M in (self.Phi, self.Psi, self.W))
        n = Phi.shape[0] if Phi.ndim == 2 else 0
        if Phi.size != n * d or Psi.size != n * d or W.size != d * n:
            raise ValueError(f"dimension mismatch: Phi {Phi.shape}, Psi {Psi.shape}, W {W.shape}")
        if n * d and (Phi.shape != (n, d) or Psi.shape != (n, d) or W.shape != (d, n)):
            raise ValueError(f"dimension mismatch: Phi {Phi.shape}, Psi {Psi.shape}, W {W.shape}")
        Phi, Psi, W = Phi.reshape(n, d), Psi.reshape(n, d), W.reshape(d, n)
        for M in (Phi, Psi, W):
            if M.size and (M.min() < 0 or M.max() >= self.K.q):
                raise ValueError("matrix entry outside the base field")
        if self.symmetric and not np.array_equal(Phi, Psi):
            raise ValueError("symmetric algorithm needs Phi == Psi")
        object.__setattr__(self, "Phi", Phi)
        object.__setattr__(self, "Psi", Psi)
        object.__setattr__(self, "W", W)

    @property
    def K(self):
        return self.algebra.K

    @property
    def q(self) -> int:
        return self.algebra.q

    @property
    def d(self) -> int:
        return self.algebra.d

    @property
    def length(self) -> int:
        return self.Phi.shape[0]

    def __repr__(self):
        s = " sym" if self.symmetric else ""
        return f"BilinearAlgorithm({self.algebra!r}, n={self.length}{s})"

    def evaluate(self, x, y):
        """Run the algorithm on coordinate vectors."""
        K = self.K
        a = linalg.matvec(K, self.Phi, x)
        b = linalg.matvec(K, self.Psi, y)
        return linalg.matvec(K, self.W, K.mul[a, b])


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    # 1-based basis labels (e_a, e_b) of the first failing product
    pair: tuple[int, int] | None = None

    def __bool__(self):
        return self.ok


def product_tensor(alg: BilinearAlgorithm, a_slice=slice(None)) -> np.ndarray:
    """T[a, b, k] = sum_i W[k, i] Phi[i, a] Psi[i, b] for a in ``a_slice``."""
    K, n, d = alg.K, alg.length, alg.d
    Phi = alg.Phi[:, a_slice]
    da = Phi.shape[1]
    if n == 0:
        return np.zeros((da, d, d), dtype=np.int64)
    P = K.mul[Phi[:, :, None], alg.Psi[:, None, :]].reshape(n, da * d)
    T = linalg.matmul(K, alg.W, P).reshape(d, da, d)
    return T.transpose(1, 2, 0)


def verify(alg: BilinearAlgorithm, chunk_elems: int = 2**24) -> VerifyResult:
    d, n = alg.d, alg.length
    C = alg.algebra.C
    step = max(1, chunk_elems // max(1, n * d))
    for a0 in range(0, d, step):
        sl = slice(a0, min(d, a0 + step))
        T = product_tensor(alg, sl)
        bad = np.argwhere((T != C[sl]).any(axis=2))
        if len(bad):
            a, b = bad[0]
            return VerifyResult(False, (int(a0 + a) + 1, int(b) + 1))
    return VerifyResult(True)


def _require_verified(*algs):
    for a in algs:
        if not verify(a):
            raise ValueError(f"input algorithm {a!r} does not verify")


# constructions -------------------------------------------------------------


def naive_symmetric(A: StructureAlgebra) -> BilinearAlgorithm:
    """Symmetric algorithm of length d(d+1)/2 for a commutative algebra:
    x_i y_i (e_i^2 - sum_{j != i} e_i e_j) plus (x_i + x_j)(y_i + y_j) e_i e_j."""
    if not A.commutative:
        raise ValueError("naive symmetric construction needs a commutative algebra")
    K, d, C = A.K, A.d, A.C
    rows, cols = [], []
    for i in range(d):
        r = np.zeros(d, dtype=np.int64)
        r[i] = 1
        w = C[i, i].copy()
        for j in range(d):
            if j != i:
                w = K.sub[w, C[i, j]]
        rows.append(r)
        cols.append(w)
    for i in range(d):
        for j in range(i + 1, d):
            r = np.zeros(d, dtype=np.int64)
            r[i] = r[j] = 1
            rows.append(r)
            cols.append(C[i, j].copy())
    Phi = np.array(rows, dtype=np.int64).reshape(-1, d)
    W = np.array(cols, dtype=np.int64).reshape(-1, d).T
    return BilinearAlgorithm(A, Phi, Phi.copy(), W, symmetric=True, meta={"strategy": "naive"})


def symmetrize(alg: BilinearAlgorithm) -> BilinearAlgorithm:
    """phi(x)psi(y) + phi(y)psi(x) = ((phi+psi)(x)(phi+psi)(y) - (phi-psi)(x)(phi-psi)(y)) / 2,
    so xy = sum 1/4 (phi+psi)^2 w - 1/4 (phi-psi)^2 w. Vanishing forms are dropped."""
    K = alg.K
    if K.p == 2:
        raise ValueError("symmetrization needs characteristic != 2")
    if not alg.algebra.commutative:
        raise ValueError("symmetrization needs a commutative algebra")
    if alg.symmetric:
        return alg
    quarter = int(K.inv[4 % K.p])
    plus = K.add[alg.Phi, alg.Psi]
    minus = K.sub[alg.Phi, alg.Psi]
    wp = K.mul[quarter, alg.W]
    wm = K.neg[wp]
    keep_p = plus.any(axis=1)
    keep_m = minus.any(axis=1)
    Phi = np.vstack([plus[keep_p], minus[keep_m]])
    W = np.hstack([wp[:, keep_p], wm[:, keep_m]])
    return BilinearAlgorithm(alg.algebra, Phi, Phi.copy(), W, symmetric=True,
                             meta={"strategy": "symmetrize"})


def direct_sum(*algs: BilinearAlgorithm) -> BilinearAlgorithm:
    """Algorithm for the product algebra, acting coordinatewise."""
    if not algs:
        raise ValueError("need at least one algorithm")
    K = algs[0].K
    if any(a.K is not K for a in algs):
        raise ValueError("base field mismatch")
    nonzero = [a for a in algs if a.d > 0]
    if len(nonzero) == 1 and all(a.length == 0 for a in algs if a.d == 0):
        return nonzero[0]
    A = product_algebra([a.algebra for a in algs])
    n = sum(a.length for a in algs)
    Phi = np.zeros((n, A.d), dtype=np.int64)
    Psi = np.zeros((n, A.d), dtype=np.int64)
    W = np.zeros((A.d, n), dtype=np.int64)
    i = o = 0
    for a in algs:
        Phi[i : i + a.length, o : o + a.d] = a.Phi
        Psi[i : i + a.length, o : o + a.d] = a.Psi
        W[o : o + a.d, i : i + a.length] = a.W
        i += a.length
        o += a.d
    sym = all(a.symmetric for a in algs)
    return BilinearAlgorithm(A, Phi, Psi, W, symmetric=sym, meta={"strategy": "direct-sum"})


def tensor_product(a: BilinearAlgorithm, b: BilinearAlgorithm) -> BilinearAlgorithm:
    """Algorithm for A (x) B; forms and elements are Kronecker products."""
    if a.K is not b.K:
        raise ValueError("base field mismatch")
    K = a.K
    A = tensor_algebra(a.algebra, b.algebra)
    n = a.length * b.length

    def kron(X, Y):
        return K.mul[X[:, None, :, None], Y[None, :, None, :]].reshape(
            X.shape[0] * Y.shape[0], X.shape[1] * Y.shape[1])

    Phi = kron(a.Phi, b.Phi)
    Psi = kron(a.Psi, b.Psi)
    W = kron(a.W, b.W)
    assert Phi.shape == (n, A.d)
    return BilinearAlgorithm(A, Phi, Psi, W, symmetric=a.symmetric and b.symmetric,
                             meta={"strategy": "tensor"})


def restriction_of_scalars(A: StructureAlgebra, q: int) -> StructureAlgebra:
    """An algebra over GF(q^e) viewed over GF(q), basis g^s f_b at index b*e + s."""
    L = A.K
    e = L.r // GF(q).r
    tb = table_basis(q, e)
    d = A.d
    # (g^s f_a)(g^t f_b) = g^(s+t) sum_k C[a, b, k] f_k
    gst = L.mul[tb.powers[:, None], tb.powers[None, :]]
    prod = L.mul[gst[None, None, :, :, None], A.C[:, :, None, None, :]]
    coords = tb.to_coords(prod)  # (a, b, s, t, k, r)
    C = coords.transpose(0, 2, 1, 3, 4, 5).reshape(d * e, d * e, d * e)
    unity = None
    if A.has_unity:
        unity = tb.to_coords(A.unity).reshape(d * e)
    return StructureAlgebra(tb.K, C, unity=unity, is_field=A._is_field,
                            name=f"Res({A!r})")


def concatenate(outer: BilinearAlgorithm, inner: BilinearAlgorithm) -> BilinearAlgorithm:
    """Compose an algorithm for L = F_{q^e} over F_q (target the canonical
    A_q(e, 1)) with an algorithm for an algebra over L = GF(q^e).

    With uv = sum_i a_i(u) b_i(v) l_i and xy = sum_j la_j(x) rho_j(y) c_j,
    xy = sum_{i,j} a_i(la_j(x)) b_i(rho_j(y)) l_i c_j."""
    K, L = outer.K, inner.K
    if L.p != K.p or L.r % K.r:
        raise ValueError("inner base field is not an extension of the outer base field")
    e = L.r // K.r
    target = truncated(K.q, e, 1)
    if outer.algebra.d != e or not np.array_equal(outer.algebra.C, target.C):
        raise ValueError(f"outer algorithm must be for the canonical F_{K.q}^{e}")
    tb = table_basis(K.q, e)
    A = restriction_of_scalars(inner.algebra, K.q)
    d, n1, n2 = inner.d, outer.length, inner.length

    def compose_forms(Fo, Fi):
        # form la_j as an F_q-linear map K^(d e) -> K^e, then apply the outer form
        # la_j(g^s f_b) = g^s * la_j[b]
        img = L.mul[Fi[:, :, None], tb.powers[None, None, :]]  # (j, b, s)
        M = tb.to_coords(img)  # (j, b, s, r)
        M = M.reshape(n2, d * e, e)
        out = linalg.matmul(K, Fo, M.transpose(2, 0, 1).reshape(e, n2 * d * e))
        return out.reshape(n1, n2, d * e).reshape(n1 * n2, d * e)

    Phi = compose_forms(outer.Phi, inner.Phi)
    Psi = Phi.copy() if (outer.symmetric and inner.symmetric) else compose_forms(outer.Psi, inner.Psi)
    lv = tb.from_coords(outer.W.T)  # l_i in L, shape (n1,)
    cw = L.mul[lv[:, None, None], inner.W.T[None, :, :]]  # (i, j, k)
    Wc = tb.to_coords(cw)  # (i, j, k, r)
    W = Wc.reshape(n1 * n2, d * e).T
    sym = outer.symmetric and inner.symmetric
    return BilinearAlgorithm(A, Phi, Psi, W, symmetric=sym, meta={"strategy": "concatenation"})


def _check_morphism(K, A_src: StructureAlgebra, A_dst: StructureAlgebra, M) -> None:
    """M maps A_src coordinates to A_dst coordinates; raise unless multiplicative."""
    d = A_src.d
    E = np.eye(d, dtype=np.int64)
    img = linalg.matmul(K, M, E).T  # images of basis vectors, (d, d_dst)
    lhs = A_dst.mul(img[:, None, :], img[None, :, :])
    rhs = linalg.matmul(K, A_src.C.reshape(d * d, d), M.T).reshape(d, d, -1)
    bad = np.argwhere((lhs != rhs).any(axis=2))
    if len(bad):
        a, b = bad[0]
        raise ValueError(f"not an algebra morphism on basis pair ({a + 1}, {b + 1})")


def restrict(alg: BilinearAlgorithm, A_new: StructureAlgebra, M, kind: str) -> BilinearAlgorithm:
    """Transfer ``alg`` along an algebra morphism.

    kind="sub": M (d x d') is an injective morphism A_new -> A.
    kind="quotient": M (d' x d) is a surjective morphism A -> A_new."""
    K = alg.K
    M = np.asarray(M, dtype=np.int64)
    if kind == "sub":
        if M.shape != (alg.d, A_new.d):
            raise ValueError("sub map has the wrong shape")
        _check_morphism(K, A_new, alg.algebra, M)
        pi = linalg.left_inverse(K, M)
        Phi = linalg.matmul(K, alg.Phi, M)
        Psi = linalg.matmul(K, alg.Psi, M)
        W = linalg.matmul(K, pi, alg.W)
    elif kind == "quotient":
        if M.shape != (A_new.d, alg.d):
            raise ValueError("quotient map has the wrong shape")
        _check_morphism(K, alg.algebra, A_new, M)
        s = linalg.right_inverse(K, M)
        Phi = linalg.matmul(K, alg.Phi, s)
        Psi = linalg.matmul(K, alg.Psi, s)
        W = linalg.matmul(K, M, alg.W)
    else:
        raise ValueError(f"unknown restriction kind {kind!r}")
    meta = dict(alg.meta)
    return BilinearAlgorithm(A_new, Phi, Psi, W, symmetric=alg.symmetric, meta=meta)


def identity_algorithm(K) -> BilinearAlgorithm:
    from .algebra import base_field_algebra

    one = np.ones((1, 1), dtype=np.int64)
    return BilinearAlgorithm(base_field_algebra(K), one, one, one, symmetric=True,
                             meta={"strategy": "trivial"})


def with_meta(alg: BilinearAlgorithm, **kw) -> BilinearAlgorithm:
    return replace(alg, meta={**alg.meta, **kw})


# lower bounds and codes ----------------------------------------------------


def lower_bounds(A: StructureAlgebra) -> int:
    """2d - 1 for a field, d for other unital algebras, 0 otherwise."""
    if not A.has_unity:
        return 0
    if A.is_field():
        return 2 * A.d - 1
    return A.d


def codes(alg: BilinearAlgorithm) -> tuple[np.ndarray, np.ndarray]:
    """Generator matrices (d x n) of C_phi and C_psi: images of x -> (phi_i(x))_i."""
    return alg.Phi.T.copy(), alg.Psi.T.copy()


CODE_ENUM_LIMIT = 2**16


def _codewords(K, G) -> np.ndarray:
    k = G.shape[0]
    if K.q**k > CODE_ENUM_LIMIT:
        raise ValueError(f"code enumeration guard exceeded: q^k = {K.q ** k}")
    X = (np.arange(K.q**k)[:, None] // (K.q ** np.arange(k))[None, :]) % K.q
    return linalg.matmul(K, X, G) if k else np.zeros((1, G.shape[1]), dtype=np.int64)


def mutually_intersecting(K, G1, G2) -> bool:
    """Every nonzero word of C1 shares a support position with every nonzero
    word of C2. For each support S of C1, no nonzero word of C2 may vanish on
    S, i.e. the columns of G2 on S must have full rank."""
    G1, G2 = np.asarray(G1, dtype=np.int64), np.asarray(G2, dtype=np.int64)
    words = _codewords(K, G1)
    supports = {tuple(np.flatnonzero(w)) for w in words if w.any()}
    r2 = linalg.rank(K, G2)
    if r2 == 0:
        return True
    for S in supports:
        if linalg.rank(K, G2[:, list(S)]) < r2:
            return False
    return True


def s3_counterexample_witness(q: int = 2) -> tuple[int, int]:
    """First (x, y) in F_{q^2} (table order) with x^2 y != x y^2."""
    L = GF(q * q)
    for x in range(L.q):
        for y in range(L.q):
            if x == y:
                continue
            if L.mul[L.mul[x, x], y] != L.mul[x, L.mul[y, y]]:
                return x, y
    raise AssertionError("no witness found")
