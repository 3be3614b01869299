"""Divisors: finitely supported integer combinations of closed points.

Points only need ``degree``, hashing and a ``sort_key``; the same class
serves P^1 and elliptic curves.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping


class Divisor(Mapping):
    __slots__ = ("_m", "_hash")

    def __init__(self, mults: Mapping | Iterable = ()):
        m: dict = {}
        items = mults.items() if isinstance(mults, Mapping) else mults
        for P, k in items:
            k = int(k)
            if k:
                m[P] = m.get(P, 0) + k
                if m[P] == 0:
                    del m[P]
        self._m = m
        self._hash = None

    @classmethod
    def point(cls, P, k: int = 1) -> "Divisor":
        return cls({P: k})

    def __getitem__(self, P) -> int:
        return self._m.get(P, 0)

    def __iter__(self):
        return iter(sorted(self._m, key=lambda P: P.sort_key()))

    def __len__(self):
        return len(self._m)

    def __contains__(self, P):
        return P in self._m

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._m.items()))
        return self._hash

    def __eq__(self, other):
        return isinstance(other, Divisor) and self._m == other._m

    def __add__(self, other: "Divisor") -> "Divisor":
        out = dict(self._m)
        for P, k in other._m.items():
            out[P] = out.get(P, 0) + k
        return Divisor(out)

    def __neg__(self) -> "Divisor":
        return Divisor({P: -k for P, k in self._m.items()})

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def __rmul__(self, c: int) -> "Divisor":
        return Divisor({P: c * k for P, k in self._m.items()})

    @property
    def degree(self) -> int:
        return sum(k * P.degree for P, k in self._m.items())

    def support(self) -> list:
        return list(self)

    def positive(self) -> "Divisor":
        return Divisor({P: k for P, k in self._m.items() if k > 0})

    def negative(self) -> "Divisor":
        """The part -min(D, 0), as an effective divisor."""
        return Divisor({P: -k for P, k in self._m.items() if k < 0})

    def is_effective(self) -> bool:
        return all(k > 0 for k in self._m.values())

    def __le__(self, other: "Divisor") -> bool:
        return (other - self).is_effective() or other == self

    def __repr__(self):
        if not self._m:
            return "0"
        return " + ".join(f"{k}*{P!r}" for P, k in ((P, self._m[P]) for P in self))
