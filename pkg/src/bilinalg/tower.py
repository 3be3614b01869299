"""Explicit bridges between F_q, the canonical F_{q^e} = F_q[x]/(M_e), and
the table field GF(q^e) used when F_{q^e} itself serves as a base field.

GF(q^e) has its own modulus over F_p, so GF(q) sits inside it through an
embedding found by root search; the F_q-basis 1, g, ..., g^{e-1} uses the
smallest root g of M_e, which matches the canonical power basis.
"""

from __future__ import annotations

import functools

import numpy as np

from . import poly
from .extfield import canonical_modulus
from .gf import GF


def _roots_in_table(L, f) -> list[int]:
    return [x for x in range(L.q) if poly.evaluate(L, f, x) == 0]


@functools.cache
def subfield_embedding(q: int, Q: int) -> np.ndarray:
    """Table i with GF(q) element c -> GF(Q) element i[c]."""
    K, L = GF(q), GF(Q)
    if L.p != K.p or L.r % K.r:
        raise ValueError(f"GF({q}) is not a subfield of GF({Q})")
    if K.r == 1:
        return np.arange(q, dtype=np.int64)
    a = _roots_in_table(L, K.modulus)[0]
    pw = [1]
    for _ in range(K.r - 1):
        pw.append(int(L.mul[pw[-1], a]))
    out = np.zeros(q, dtype=np.int64)
    for c in range(q):
        acc = 0
        for k, dgt in enumerate(K.digits[c]):
            for _ in range(int(dgt)):
                acc = int(L.add[acc, pw[k]])
        out[c] = acc
    return out


class TableBasis:
    """GF(q^e) viewed as an e-dimensional F_q-space with basis g^s."""

    def __init__(self, q: int, e: int):
        self.q, self.e = q, e
        self.K, self.L = GF(q), GF(q**e)
        K, L = self.K, self.L
        self.iota = subfield_embedding(q, q**e)
        M = canonical_modulus(q, e)
        if e == 1:
            g = 0
        else:
            g = _roots_in_table(L, self.iota[M])[0]
        self.gamma = g
        pw = [1]
        for _ in range(e - 1):
            pw.append(int(L.mul[pw[-1], g]))
        self.powers = np.array(pw, dtype=np.int64)
        # every coordinate vector, enumerated in base-q order
        coords = (np.arange(L.q)[:, None] // (q ** np.arange(e))[None, :]) % q
        vals = L.sum(L.mul[self.iota[coords], self.powers[None, :]], axis=1)
        self.from_coords_table = vals
        to = np.zeros((L.q, e), dtype=np.int64)
        to[vals] = coords
        self.to_coords_table = to
        assert len(set(vals.tolist())) == L.q

    def to_coords(self, z):
        return self.to_coords_table[np.asarray(z, dtype=np.int64)]

    def from_coords(self, c):
        c = np.asarray(c, dtype=np.int64)
        return self.from_coords_table[c @ (self.q ** np.arange(self.e))]

    def mult_matrix(self, z: int) -> np.ndarray:
        """F_q-matrix (e x e) of multiplication by z (columns = images of g^s)."""
        return self.to_coords(self.L.mul[z, self.powers]).T


@functools.cache
def table_basis(q: int, e: int) -> TableBasis:
    return TableBasis(q, e)
