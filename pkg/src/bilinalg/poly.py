"""Univariate polynomials over a table field ``K``.

A polynomial is a 1-D int64 numpy array of coefficients, lowest degree
first, with no trailing zeros; the zero polynomial is the empty array.
Ordering of monic polynomials of a fixed degree is by integer encoding
``sum c_i q^i``, i.e. lexicographic on the coefficient sequence read from
the leading term down.
"""

from __future__ import annotations

import math

import numpy as np

ZERO = np.zeros(0, dtype=np.int64)


def P(coeffs) -> np.ndarray:
    return trim(np.asarray(list(coeffs), dtype=np.int64))


def trim(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    n = len(a)
    while n and not a[n - 1]:
        n -= 1
    return a[:n] if n else ZERO


def deg(a: np.ndarray) -> int:
    return len(a) - 1


def monomial(n: int, c: int = 1) -> np.ndarray:
    out = np.zeros(n + 1, dtype=np.int64)
    out[n] = c
    return trim(out)


def key(a: np.ndarray) -> tuple:
    return tuple(int(c) for c in a)


def add(K, a, b):
    n = max(len(a), len(b))
    aa = np.zeros(n, dtype=np.int64)
    bb = np.zeros(n, dtype=np.int64)
    aa[: len(a)] = a
    bb[: len(b)] = b
    return trim(K.add[aa, bb])


def neg(K, a):
    return K.neg[a] if len(a) else ZERO


def sub(K, a, b):
    return add(K, a, neg(K, b))


def scale(K, c: int, a):
    return trim(K.mul[c, a]) if len(a) else ZERO


def conv(K, a, b) -> np.ndarray:
    """Untrimmed coefficient convolution over K."""
    if len(a) == 0 or len(b) == 0:
        return ZERO
    if K.r == 1:
        return np.convolve(a, b) % K.p
    na, nb = len(a), len(b)
    dig = K.digits[K.mul[np.asarray(a)[:, None], np.asarray(b)[None, :]]]
    out = np.zeros((na + nb - 1, K.r), dtype=np.int64)
    np.add.at(out, (np.arange(na)[:, None] + np.arange(nb)[None, :]).ravel(), dig.reshape(-1, K.r))
    return K.from_digits(out)


def mul(K, a, b):
    return trim(conv(K, a, b))


def divmod_(K, a, b):
    if len(b) == 0:
        raise ZeroDivisionError("polynomial division by zero")
    a = np.array(a, dtype=np.int64)
    db = len(b) - 1
    if len(a) - 1 < db:
        return ZERO, trim(a)
    inv_lead = int(K.inv[b[-1]])
    qt = np.zeros(len(a) - db, dtype=np.int64)
    for i in range(len(a) - 1, db - 1, -1):
        c = int(a[i])
        if c == 0:
            continue
        f = int(K.mul[c, inv_lead])
        qt[i - db] = f
        a[i - db : i + 1] = K.sub[a[i - db : i + 1], K.mul[f, b]]
    return trim(qt), trim(a[:db])


def mod(K, a, b):
    return divmod_(K, a, b)[1]


def monic(K, a):
    if len(a) == 0:
        return a
    return scale(K, int(K.inv[a[-1]]), a)


def gcd(K, a, b):
    a, b = trim(a), trim(b)
    while len(b):
        a, b = b, mod(K, a, b)
    return monic(K, a)


def xgcd(K, a, b):
    """Return (g, s, t) with s*a + t*b = g monic."""
    r0, r1 = trim(a), trim(b)
    s0, s1 = P([1]), ZERO
    t0, t1 = ZERO, P([1])
    while len(r1):
        qt, r = divmod_(K, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(K, s0, mul(K, qt, s1))
        t0, t1 = t1, sub(K, t0, mul(K, qt, t1))
    if len(r0) == 0:
        return r0, s0, t0
    c = int(K.inv[r0[-1]])
    return scale(K, c, r0), scale(K, c, s0), scale(K, c, t0)


def invmod(K, a, m):
    g, s, _ = xgcd(K, mod(K, a, m), m)
    if len(g) != 1:
        raise ZeroDivisionError("not invertible modulo m")
    return mod(K, s, m)


def mulmod(K, a, b, m):
    return mod(K, conv(K, a, b), m)


def powmod(K, a, e: int, m):
    out = mod(K, P([1]), m)
    a = mod(K, a, m)
    while e:
        if e & 1:
            out = mulmod(K, out, a, m)
        e >>= 1
        if e:
            a = mulmod(K, a, a, m)
    return out


def power(K, a, e: int):
    out = P([1])
    while e:
        if e & 1:
            out = mul(K, out, a)
        e >>= 1
        if e:
            a = mul(K, a, a)
    return out


def derivative(K, a):
    if len(a) <= 1:
        return ZERO
    ks = np.arange(1, len(a)) % K.p
    coeffs = K.mul[np.array([K.prime_embed(int(k)) for k in ks]), a[1:]]
    return trim(coeffs)


def evaluate(K, a, x: int) -> int:
    acc = 0
    for c in a[::-1]:
        acc = int(K.add[K.mul[acc, x], c])
    return acc


def compose_mod(K, f, g, m):
    """f(g) mod m by Horner."""
    acc = ZERO
    for c in f[::-1]:
        acc = add(K, mulmod(K, acc, g, m), P([c]))
    return mod(K, acc, m)


def reverse(a, n: int | None = None):
    """x^n a(1/x) with n = deg a by default."""
    n = deg(a) if n is None else n
    out = np.zeros(n + 1, dtype=np.int64)
    out[n - deg(a) :] = a[::-1]
    return trim(out)


def valuation_at(K, a, irr) -> int:
    """Exponent of the irreducible ``irr`` in ``a`` (a != 0)."""
    v = 0
    while True:
        qt, r = divmod_(K, a, irr)
        if len(r):
            return v
        a, v = qt, v + 1


def to_int(K, a) -> int:
    return sum(int(c) * K.q**i for i, c in enumerate(a))


def from_int_q(q: int, n: int) -> np.ndarray:
    out = []
    while n:
        out.append(n % q)
        n //= q
    return trim(np.array(out, dtype=np.int64))


def _prime_divisors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(K, f) -> bool:
    """Ben-Or's test: no factor of degree k <= n/2, i.e. gcd(x^(q^k) - x, f) = 1.
    Stops at the first factor found, so most reducible inputs exit early."""
    f = trim(f)
    n = deg(f)
    if n < 1:
        return False
    if n == 1:
        return True
    f = monic(K, f)
    x = P([0, 1])
    h = x
    for _ in range(n // 2):
        h = powmod(K, h, K.q, f)
        if deg(gcd(K, sub(K, h, x), f)) > 0:
            return False
    return True


def mobius(n: int) -> int:
    out = 1
    for s in _prime_divisors(n):
        if n % (s * s) == 0:
            return 0
        out = -out
    return out


def necklace_count(q: int, d: int) -> int:
    """Number of monic irreducibles of degree d over F_q."""
    return sum(mobius(e) * q ** (d // e) for e in range(1, d + 1) if d % e == 0) // d


def _has_root(K, f) -> bool:
    """f vanishes somewhere on F_q (Horner over all elements at once)."""
    x = np.arange(K.q)
    acc = np.zeros(K.q, dtype=np.int64)
    for c in f[::-1]:
        acc = K.add[K.mul[acc, x], int(c)]
    return bool((acc == 0).any())


def irreducibles(K, d: int, count: int | None = None) -> list[np.ndarray]:
    """The first ``count`` monic irreducibles of degree d in increasing order."""
    avail = necklace_count(K.q, d)
    if count is None:
        count = avail
    if count > avail:
        raise ValueError(f"only {avail} monic irreducibles of degree {d} over F_{K.q}, asked {count}")
    out = []
    base = K.q**d
    for n in range(K.q**d):
        f = from_int_q(K.q, base + n)
        if d > 1 and f[0] == 0:
            continue
        if d > 1 and _has_root(K, f):
            continue
        if is_irreducible(K, f):
            out.append(f)
            if len(out) == count:
                return out
    return out
