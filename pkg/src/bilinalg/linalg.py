"""Exact linear algebra over a table field ``K``.

Matrices are 2-D int64 numpy arrays of field elements. Nothing here is
approximate: ranks, kernels and inverses are computed by Gaussian
elimination with the field tables.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class RankError(ValueError):
    """A linear map lacks the injectivity/surjectivity a caller needs."""

    def __init__(self, message: str, deficit: int):
        super().__init__(f"{message} (rank deficit {deficit})")
        self.deficit = deficit


def as_matrix(a) -> np.ndarray:
    return np.asarray(a, dtype=np.int64)


def matmul(K, A, B) -> np.ndarray:
    A, B = as_matrix(A), as_matrix(B)
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    if A.shape[1] == 0:
        return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    p, r = K.p, K.r
    if r == 1:
        # float64 BLAS is exact while k*(p-1)^2 < 2^53
        if A.shape[1] * (p - 1) ** 2 < 2**52:
            return np.rint(A.astype(np.float64) @ B.astype(np.float64)).astype(np.int64) % p
        return (A @ B) % p
    Ad, Bd = K.digits[A], K.digits[B]
    acc = np.zeros((2 * r - 1, A.shape[0], B.shape[1]), dtype=np.int64)
    for s in range(r):
        As = Ad[:, :, s].astype(np.float64)
        for t in range(r):
            acc[s + t] += np.rint(As @ Bd[:, :, t].astype(np.float64)).astype(np.int64)
    acc %= p
    digits = np.einsum("jab,jk->abk", acc, K.alpha_pow_digits) % p
    return K.from_digits(digits)


def matvec(K, A, x) -> np.ndarray:
    return matmul(K, A, as_matrix(x).reshape(-1, 1))[:, 0]


def add(K, A, B):
    return K.add[as_matrix(A), as_matrix(B)]


def sub(K, A, B):
    return K.sub[as_matrix(A), as_matrix(B)]


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def rref(K, M) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and the pivot columns."""
    M = as_matrix(M).copy()
    rows, cols = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c])
        if len(nz) == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        M[r] = K.mul[K.inv[M[r, c]], M[r]]
        f = M[:, c].copy()
        f[r] = 0
        nzr = np.flatnonzero(f)
        if len(nzr):
            M[nzr] = K.sub[M[nzr], K.mul[f[nzr, None], M[r][None, :]]]
        pivots.append(c)
        r += 1
    return M, pivots


def rank(K, M) -> int:
    M = as_matrix(M)
    if M.size == 0:
        return 0
    return len(rref(K, M)[1])


def kernel(K, M) -> np.ndarray:
    """Basis of {x : M x = 0} as the rows of the returned matrix."""
    M = as_matrix(M)
    rows, cols = M.shape
    if rows == 0:
        return identity(cols)
    R, piv = rref(K, M)
    free = [c for c in range(cols) if c not in set(piv)]
    out = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        out[i, f] = 1
        for r, pc in enumerate(piv):
            out[i, pc] = K.neg[R[r, f]]
    return out


def solve(K, M, b) -> np.ndarray | None:
    """One solution x of M x = b, or None."""
    M = as_matrix(M)
    b = as_matrix(b).reshape(-1, 1)
    R, piv = rref(K, np.hstack([M, b]))
    n = M.shape[1]
    if piv and piv[-1] == n:
        return None
    x = np.zeros(n, dtype=np.int64)
    for r, pc in enumerate(piv):
        x[pc] = R[r, n]
    return x


def inverse(K, M) -> np.ndarray:
    M = as_matrix(M)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError("inverse needs a square matrix")
    R, piv = rref(K, np.hstack([M, identity(n)]))
    if piv[:n] != list(range(n)) or len(piv) < n or piv[n - 1] >= n:
        raise RankError("matrix is singular", n - rank(K, M))
    return R[:, n:]


def right_inverse(K, M) -> np.ndarray:
    """R with M R = I, for M of full row rank."""
    M = as_matrix(M)
    a, b = M.shape
    if a == 0:
        return np.zeros((b, 0), dtype=np.int64)
    _, piv = rref(K, M)
    if len(piv) < a:
        raise RankError("map is not surjective", a - len(piv))
    R = np.zeros((b, a), dtype=np.int64)
    R[piv, :] = inverse(K, M[:, piv])
    return R


def left_inverse(K, M) -> np.ndarray:
    """L with L M = I, for M of full column rank."""
    M = as_matrix(M)
    try:
        return right_inverse(K, M.T).T
    except RankError as e:
        raise RankError("map is not injective", e.deficit) from None


@dataclass(frozen=True, eq=False)
class LinearMap:
    """Matrix of a K-linear map (target x source)."""

    K: object
    matrix: np.ndarray

    @property
    def source_dim(self) -> int:
        return self.matrix.shape[1]

    @property
    def target_dim(self) -> int:
        return self.matrix.shape[0]

    def __call__(self, x):
        return matvec(self.K, self.matrix, x)

    def rank(self) -> int:
        return rank(self.K, self.matrix)

    def kernel_basis(self) -> np.ndarray:
        return kernel(self.K, self.matrix)

    def right_inverse(self) -> "LinearMap":
        return LinearMap(self.K, right_inverse(self.K, self.matrix))

    def left_inverse(self) -> "LinearMap":
        return LinearMap(self.K, left_inverse(self.K, self.matrix))

    def compose(self, other: "LinearMap") -> "LinearMap":
        """self after other."""
        return LinearMap(self.K, matmul(self.K, self.matrix, other.matrix))


def batch_nonsingular(K, Ms) -> np.ndarray:
    """For a stack of square matrices (N, d, d), which are invertible."""
    M = as_matrix(Ms).copy()
    N, d, _ = M.shape
    ok = np.ones(N, dtype=bool)
    rows = np.arange(N)
    for c in range(d):
        sub_ = M[:, c:, c] != 0
        has = sub_.any(axis=1)
        ok &= has
        piv = c + np.argmax(sub_, axis=1)
        top, prow = M[rows, c].copy(), M[rows, piv].copy()
        M[rows, c], M[rows, piv] = prow, top
        inv = K.inv[M[:, c, c]]
        M[:, c] = K.mul[inv[:, None], M[:, c]]
        f = M[:, :, c].copy()
        f[:, c] = 0
        M = K.sub[M, K.mul[f[:, :, None], M[:, c][:, None, :]]]
    return ok
