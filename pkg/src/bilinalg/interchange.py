"""Line-oriented text format for bilinear algorithms.

    BILALG v1 q=<q> dim=<d> n=<n> sym=<0|1>
    C            d*d lines, line a*d+b holds the d coordinates of e_a e_b
    PHI          n lines of d entries
    PSI          n lines of d entries
    W            d lines of n entries
    END

An F_q entry is its r base-p digits joined by ':' (lowest first), or a
single digit when q is prime. Entries on a line are separated by spaces.
"""

from __future__ import annotations

import numpy as np

from .algebra import StructureAlgebra, find_unity
from .bilinear import BilinearAlgorithm
from .gf import GF, factor_prime_power


class FormatError(ValueError):
    pass


def _fmt(K, v: int) -> str:
    if K.r == 1:
        return str(int(v))
    return ":".join(str(int(x)) for x in K.digits[int(v)])


def _row(K, row) -> str:
    return " ".join(_fmt(K, v) for v in row)


def dumps(alg: BilinearAlgorithm) -> str:
    K, d, n = alg.K, alg.d, alg.length
    out = [f"BILALG v1 q={K.q} dim={d} n={n} sym={int(alg.symmetric)}", "C"]
    C = alg.algebra.C
    out += [_row(K, C[a, b]) for a in range(d) for b in range(d)]
    out.append("PHI")
    out += [_row(K, r) for r in alg.Phi]
    out.append("PSI")
    out += [_row(K, r) for r in alg.Psi]
    out.append("W")
    out += [_row(K, r) for r in alg.W]
    out.append("END")
    return "\n".join(out) + "\n"


def dump(alg: BilinearAlgorithm, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(alg))


def _parse_entry(K, tok: str) -> int:
    parts = tok.split(":")
    if len(parts) != K.r:
        raise FormatError(f"entry {tok!r} needs {K.r} digit(s)")
    digits = []
    for s in parts:
        if not s.isdigit():
            raise FormatError(f"bad digit in {tok!r}")
        v = int(s)
        if v >= K.p:
            raise FormatError(f"digit {v} out of range for p={K.p}")
        digits.append(v)
    return int(K.from_digits(np.array(digits)))


def _parse_rows(K, lines, count, width, label):
    rows = []
    for _ in range(count):
        try:
            line = next(lines)
        except StopIteration:
            raise FormatError(f"block {label} truncated") from None
        toks = line.split()
        if len(toks) != width:
            raise FormatError(f"block {label}: expected {width} entries, got {len(toks)}")
        rows.append([_parse_entry(K, t) for t in toks])
    return np.array(rows, dtype=np.int64).reshape(count, width)


def _expect(lines, word):
    try:
        line = next(lines).strip()
    except StopIteration:
        raise FormatError(f"missing {word}") from None
    if line != word:
        raise FormatError(f"expected {word!r}, got {line!r}")


def loads(text: str) -> BilinearAlgorithm:
    lines = iter(text.split("\n"))
    header = next(lines, "").split()
    if header[:2] != ["BILALG", "v1"] or len(header) != 6:
        raise FormatError("bad header")
    try:
        kv = dict(h.split("=", 1) for h in header[2:])
        q, d, n, sym = (int(kv[k]) for k in ("q", "dim", "n", "sym"))
    except (KeyError, ValueError):
        raise FormatError("bad header fields") from None
    try:
        factor_prime_power(q)
    except ValueError:
        raise FormatError(f"q={q} is not a prime power") from None
    if d < 0 or n < 0 or sym not in (0, 1):
        raise FormatError("bad header values")
    K = GF(q)
    _expect(lines, "C")
    C = _parse_rows(K, lines, d * d, d, "C").reshape(d, d, d)
    _expect(lines, "PHI")
    Phi = _parse_rows(K, lines, n, d, "PHI")
    _expect(lines, "PSI")
    Psi = _parse_rows(K, lines, n, d, "PSI")
    _expect(lines, "W")
    W = _parse_rows(K, lines, d, n, "W")
    _expect(lines, "END")
    if any(line.strip() for line in lines):
        raise FormatError("trailing content after END")
    if sym and not np.array_equal(Phi, Psi):
        raise FormatError("sym=1 but PHI != PSI")
    A = StructureAlgebra(K, C)
    u = find_unity(A)
    if u is not None:
        A = StructureAlgebra(K, C, unity=u)
    return BilinearAlgorithm(A, Phi, Psi, W, symmetric=bool(sym))


def load(path) -> BilinearAlgorithm:
    with open(path) as fh:
        return loads(fh.read())


def loads_constants(text: str, q: int, d: int) -> StructureAlgebra:
    """Structure constants alone: d*d lines of d entries (the C block body)."""
    K = GF(q)
    lines = iter([ln for ln in text.split("\n") if ln.strip() and not ln.startswith("#")])
    C = _parse_rows(K, lines, d * d, d, "C").reshape(d, d, d)
    if next(lines, None) is not None:
        raise FormatError("extra lines after the structure constants")
    A = StructureAlgebra(K, C)
    u = find_unity(A)
    return StructureAlgebra(K, C, unity=u) if u is not None else A
