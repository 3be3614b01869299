"""Small finite fields F_q (q = p^r) with table arithmetic.

Elements are plain ints in ``range(q)``. The int ``e`` stands for the
polynomial ``sum_k d_k a^k`` where ``d_k`` are the base-``p`` digits of ``e``
and ``a`` is a root of the modulus: the monic irreducible of degree ``r``
over F_p with the smallest integer encoding. Every table is a numpy array,
so elementwise operations broadcast: ``K.mul[A, B]``.
"""

from __future__ import annotations

import functools

import numpy as np

MAX_TABLE_Q = 256


def factor_prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    r, rest = 0, q
    while rest % p == 0:
        rest //= p
        r += 1
    if rest != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, r


class FiniteField:
    """Table-driven F_q. Use :func:`GF` to get the cached instance."""

    def __init__(self, q: int):
        p, r = factor_prime_power(q)
        if q > MAX_TABLE_Q:
            raise ValueError(f"table field too large: q={q}")
        self.p, self.r, self.q = p, r, q
        self.pows = p ** np.arange(r, dtype=np.int64)
        elems = np.arange(q, dtype=np.int64)
        self.digits = (elems[:, None] // self.pows[None, :]) % p
        if r == 1:
            self.modulus = np.array([0, 1], dtype=np.int64)
            self.add = (elems[:, None] + elems[None, :]) % p
            self.mul = (elems[:, None] * elems[None, :]) % p
            # reduction of a^j for j < 2r-1 is trivial
            self.alpha_pow_digits = np.ones((1, 1), dtype=np.int64)
        else:
            from . import poly

            self.modulus = _first_irreducible_prime(p, r)
            apd = np.zeros((2 * r - 1, r), dtype=np.int64)
            for j in range(2 * r - 1):
                rem = poly.mod(GF(p), _monomial(j), self.modulus)
                apd[j, : len(rem)] = rem
            self.alpha_pow_digits = apd
            d = self.digits
            self.add = self.from_digits((d[:, None, :] + d[None, :, :]) % p)
            conv = np.zeros((q, q, 2 * r - 1), dtype=np.int64)
            for i in range(r):
                for j in range(r):
                    conv[:, :, i + j] += d[:, None, i] * d[None, :, j]
            conv %= p
            self.mul = self.from_digits(conv @ apd % p)
        self.neg = self.from_digits((-self.digits) % p)
        self.sub = self.add[:, self.neg]
        inv = np.zeros(q, dtype=np.int64)
        nz = np.arange(1, q)
        inv[nz] = np.argmax(self.mul[nz] == 1, axis=1)
        self.inv = inv

    def __repr__(self):
        return f"GF({self.q})"

    def __reduce__(self):
        return (GF, (self.q,))

    @property
    def is_prime(self) -> bool:
        return self.r == 1

    def from_digits(self, d: np.ndarray) -> np.ndarray:
        return (np.asarray(d, dtype=np.int64) % self.p) @ self.pows

    def sum(self, a: np.ndarray, axis=0) -> np.ndarray:
        """Field sum of ``a`` along ``axis``."""
        a = np.asarray(a, dtype=np.int64)
        if self.r == 1:
            return a.sum(axis=axis) % self.p
        axis = axis % a.ndim
        return self.from_digits(self.digits[a].sum(axis=axis) % self.p)

    def scale(self, c: int, a: np.ndarray) -> np.ndarray:
        return self.mul[c, np.asarray(a, dtype=np.int64)]

    def power(self, a: int, e: int) -> int:
        if e < 0:
            a, e = int(self.inv[a]), -e
        out = 1
        while e:
            if e & 1:
                out = int(self.mul[out, a])
            a = int(self.mul[a, a])
            e >>= 1
        return out

    def prime_embed(self, n: int) -> int:
        """Image of the integer ``n`` in F_q."""
        return int(n % self.p)


@functools.cache
def GF(q: int) -> FiniteField:
    return FiniteField(q)


def _monomial(j: int) -> np.ndarray:
    out = np.zeros(j + 1, dtype=np.int64)
    out[j] = 1
    return out


def _first_irreducible_prime(p: int, r: int) -> np.ndarray:
    from . import poly

    return poly.irreducibles(GF(p), r, 1)[0]
