"""Exact (symmetric) tensor rank of a small multiplication tensor.

The rank of the tensor is the least n such that the span S of its slices
C[:, :, k] lies in the span of n rank-one matrices phi psi^T. We search over
subspaces V containing S, by increasing dimension n, and accept the first V
that is spanned by the rank-one matrices it contains. Rank-one matrices are
taken up to scalars (first nonzero coordinate of phi and psi equal to 1).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import linalg
from .algebra import StructureAlgebra
from .bilinear import BilinearAlgorithm, verify

# guards on the enumeration sizes
MAX_RANK_ONES = 2**16
MAX_SUBSPACES = 2**22


@dataclass(frozen=True)
class RankResult:
    rank: int | None  # None when the search hit the cap
    symmetric: bool
    cap: int
    witness: BilinearAlgorithm | None = None

    @property
    def exceeds_cap(self) -> bool:
        return self.rank is None


def _projective_vectors(K, d) -> np.ndarray:
    """Nonzero vectors of K^d with first nonzero coordinate 1."""
    out = []
    for lead in range(d):
        tail = d - lead - 1
        rest = (np.arange(K.q**tail)[:, None] // (K.q ** np.arange(tail))[None, :]) % K.q
        block = np.zeros((K.q**tail, d), dtype=np.int64)
        block[:, lead] = 1
        block[:, lead + 1 :] = rest
        out.append(block)
    return np.vstack(out) if out else np.zeros((0, d), dtype=np.int64)


def _rank_ones(K, d, symmetric):
    P = _projective_vectors(K, d)
    if symmetric:
        pairs = [(i, i) for i in range(len(P))]
    else:
        pairs = list(itertools.product(range(len(P)), repeat=2))
    if len(pairs) > MAX_RANK_ONES:
        raise ValueError(f"search-space guard exceeded: {len(pairs)} rank-one terms")
    ia = np.array([a for a, _ in pairs], dtype=np.int64)
    ib = np.array([b for _, b in pairs], dtype=np.int64)
    M = K.mul[P[ia][:, :, None], P[ib][:, None, :]].reshape(len(pairs), d * d)
    return P[ia], P[ib], M


def gaussian_binomial(N: int, k: int, q: int) -> int:
    if k < 0 or k > N:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (N - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def _subspaces(K, N, k):
    """RREF generator matrices of all k-dim subspaces of K^N."""
    for piv in itertools.combinations(range(N), k):
        free = [(i, j) for i in range(k) for j in range(piv[i] + 1, N) if j not in piv]
        base = np.zeros((k, N), dtype=np.int64)
        for i, c in enumerate(piv):
            base[i, c] = 1
        for vals in itertools.product(range(K.q), repeat=len(free)):
            G = base.copy()
            for (i, j), v in zip(free, vals):
                G[i, j] = v
            yield list(piv), G


def _complement(K, S, N):
    """Rows completing the rows of S (independent) to a basis of K^N, and the
    matrix sending a vector to its coordinates on the completion (mod S)."""
    _, piv = linalg.rref(K, S) if len(S) else (None, [])
    extra = [c for c in range(N) if c not in set(piv)]
    E = np.zeros((len(extra), N), dtype=np.int64)
    E[np.arange(len(extra)), extra] = 1
    B = np.vstack([S, E]) if len(S) else E
    Binv = linalg.inverse(K, B.T)  # coordinates in basis B
    return E, Binv[len(S) :]


def brute_force_rank(A: StructureAlgebra, cap: int, symmetric: bool = False) -> RankResult:
    K, d = A.K, A.d
    slices = A.C.transpose(2, 0, 1).reshape(d, d * d)
    R, piv = linalg.rref(K, slices) if d else (np.zeros((0, 0)), [])
    S = R[: len(piv)]
    s = len(piv)
    if s == 0:
        w = BilinearAlgorithm(A, np.zeros((0, d)), np.zeros((0, d)), np.zeros((d, 0)), symmetric=symmetric)
        return RankResult(0, symmetric, cap, w)
    N = d * d
    phis, psis, ones = _rank_ones(K, d, symmetric)
    # quotient coordinates of every rank-one matrix modulo S
    E, to_quot = _complement(K, S, N)
    rq = linalg.matmul(K, ones, to_quot.T)  # (Nr, N - s)
    Nq = N - s
    for n in range(s, cap + 1):
        k = n - s
        if k > Nq:
            break
        if gaussian_binomial(Nq, k, K.q) > MAX_SUBSPACES:
            raise ValueError(f"search-space guard exceeded at n={n}")
        for pv, G in _subspaces(K, Nq, k):
            if k:
                resid = K.sub[rq, linalg.matmul(K, rq[:, pv], G)]
            else:
                resid = rq
            inside = np.flatnonzero(~resid.any(axis=1))
            if len(inside) < n:
                continue
            sub = ones[inside]
            Rr, pr = linalg.rref(K, sub.T)
            if len(pr) < n:
                continue
            chosen = inside[pr]
            return RankResult(n, symmetric, cap, _witness(A, phis[chosen], psis[chosen], ones[chosen], symmetric))
    return RankResult(None, symmetric, cap)


def _witness(A, phis, psis, ones, symmetric) -> BilinearAlgorithm:
    K, d = A.K, A.d
    slices = A.C.transpose(2, 0, 1).reshape(d, d * d)
    W = np.zeros((d, len(ones)), dtype=np.int64)
    for k in range(d):
        c = linalg.solve(K, ones.T, slices[k])
        assert c is not None
        W[k] = c
    alg = BilinearAlgorithm(A, phis, psis, W, symmetric=symmetric, meta={"strategy": "brute-force"})
    assert verify(alg)
    return alg
