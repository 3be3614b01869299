"""Truncated power series with coefficients in an :class:`ExtField`.

A series of absolute precision P is an array of shape (..., P, m): entry k
is the coefficient of t^k. Leading axes batch independent series.
"""

from __future__ import annotations

import numpy as np


def zeros(F, P: int, shape=()) -> np.ndarray:
    return np.zeros(tuple(shape) + (P, F.m), dtype=np.int64)


def const(F, c, P: int) -> np.ndarray:
    out = zeros(F, P)
    out[0] = c
    return out


def var(F, c, P: int) -> np.ndarray:
    """c + t."""
    out = const(F, c, P)
    if P > 1:
        out[1] = F.one()
    return out


def truncate(a, P: int) -> np.ndarray:
    a = np.asarray(a)
    if a.shape[-2] >= P:
        return a[..., :P, :]
    pad = np.zeros(a.shape[:-2] + (P - a.shape[-2], a.shape[-1]), dtype=np.int64)
    return np.concatenate([a, pad], axis=-2)


def mul(F, a, b, P: int | None = None) -> np.ndarray:
    a, b = np.asarray(a), np.asarray(b)
    if P is None:
        P = min(a.shape[-2], b.shape[-2])
    a, b = truncate(a, P), truncate(b, P)
    shape = np.broadcast_shapes(a.shape[:-2], b.shape[:-2])
    out = zeros(F, P, shape)
    for i in range(P):
        ai = a[..., i : i + 1, :]
        if not ai.any():
            continue
        out[..., i:, :] = F.add(out[..., i:, :], F.mul(ai, b[..., : P - i, :]))
    return out


def add(F, a, b):
    P = min(np.shape(a)[-2], np.shape(b)[-2])
    return F.add(truncate(a, P), truncate(b, P))


def sub(F, a, b):
    P = min(np.shape(a)[-2], np.shape(b)[-2])
    return F.sub(truncate(a, P), truncate(b, P))


def scale(F, c, a):
    """Multiply by a field element c."""
    return F.mul(np.asarray(c)[..., None, :], a)


def inv(F, a) -> np.ndarray:
    """1/a for a unit series (nonzero constant term), Newton iteration."""
    a = np.asarray(a)
    P = a.shape[-2]
    if F.is_zero(a[..., 0, :]).any():
        raise ZeroDivisionError("series is not a unit")
    b = truncate(F.inv(a[..., 0:1, :]), 1)
    prec = 1
    two = const(F, F.from_base(2 % F.p), P)
    while prec < P:
        prec = min(2 * prec, P)
        bp = truncate(b, prec)
        ab = mul(F, truncate(a, prec), bp)
        b = mul(F, bp, sub(F, truncate(two, prec), ab))
    return b


def power(F, a, e: int) -> np.ndarray:
    a = np.asarray(a)
    P = a.shape[-2]
    out = const(F, F.one(), P)
    out = np.broadcast_to(out, a.shape).copy()
    while e:
        if e & 1:
            out = mul(F, out, a)
        e >>= 1
        if e:
            a = mul(F, a, a)
    return out


def shift(F, a, k: int) -> np.ndarray:
    """t^k a (k >= 0), keeping precision."""
    a = np.asarray(a)
    P = a.shape[-2]
    out = np.zeros_like(a)
    if k < P:
        out[..., k:, :] = a[..., : P - k, :]
    return out


def valuation(F, a) -> int | None:
    """Index of the first nonzero coefficient, None if zero to this precision."""
    nz = np.flatnonzero(np.asarray(a).any(axis=-1))
    return int(nz[0]) if len(nz) else None


def compose_poly(F, f, s) -> np.ndarray:
    """f(s) for a base-field polynomial f and series s (Horner)."""
    P = np.shape(s)[-2]
    acc = zeros(F, P, np.shape(s)[:-2])
    for c in np.asarray(f)[::-1]:
        acc = mul(F, acc, s)
        acc[..., 0, 0] = F.K.add[acc[..., 0, 0], int(c)]
    return acc


def negate_variable(F, a) -> np.ndarray:
    """a(-t)."""
    a = np.asarray(a).copy()
    a[..., 1::2, :] = F.neg(a[..., 1::2, :])
    return a
