import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bilinalg import linalg
from bilinalg.algebra import (StructureAlgebra, base_field_algebra, remark_algebra, truncated,
                              zero_algebra)
from bilinalg.bilinear import (BilinearAlgorithm, codes, concatenate, direct_sum, identity_algorithm,
                               lower_bounds, mutually_intersecting, naive_symmetric, restrict,
                               s3_counterexample_witness, symmetrize, tensor_product, verify)
from bilinalg.bounds import TABLE, descent_isomorphism
from bilinalg.extfield import embedding
from bilinalg.fixtures import F8_PHI, F8_W, f8_algorithm
from bilinalg.gf import GF
from bilinalg.interchange import FormatError, dumps, loads, loads_constants
from bilinalg.rank import brute_force_rank
from bilinalg.synthesis import assemble, genus0_plan


def full_check(alg, limit=2**8):
    """Compare with the algebra product on every pair of elements."""
    A = alg.algebra
    if alg.q ** alg.d > limit:
        return True
    X = np.array(list(itertools.product(range(alg.q), repeat=alg.d)))
    for x in X:
        for y in X:
            if not np.array_equal(alg.evaluate(x, y), A.mul(x, y)):
                return False
    return True


def asym_q7_22():
    plan = genus0_plan(7, 2, 2)
    from dataclasses import replace

    return assemble(replace(plan, symmetric=False), lambda q, d, u, s: TABLE.algorithm(q, d, u, False))


def test_f8_fixture_verifies():
    alg = f8_algorithm()
    assert alg.length == 6
    assert alg.symmetric
    assert verify(alg)
    assert full_check(alg)


def test_f8_matrices_shape():
    assert F8_PHI.shape == (6, 3)
    assert F8_W.shape == (3, 6)


def test_zeroed_w_fails_on_first_pair():
    alg = f8_algorithm()
    bad = BilinearAlgorithm(alg.algebra, alg.Phi, alg.Psi, np.zeros_like(alg.W))
    res = verify(bad)
    assert not res
    assert res.pair == (1, 1)


def test_single_flip_is_caught():
    alg = f8_algorithm()
    for k, i in itertools.product(range(3), range(6)):
        W = alg.W.copy()
        W[k, i] ^= 1
        assert not verify(BilinearAlgorithm(alg.algebra, alg.Phi, alg.Psi, W))


def test_dimension_mismatch():
    A = truncated(2, 3)
    with pytest.raises(ValueError):
        BilinearAlgorithm(A, F8_PHI, F8_PHI, F8_W[:, :5])
    with pytest.raises(ValueError):
        BilinearAlgorithm(A, F8_PHI, F8_PHI[::-1], F8_W, symmetric=True)
    with pytest.raises(ValueError):
        BilinearAlgorithm(A, F8_PHI * 2, F8_PHI, F8_W)


def test_genus0_q7_22_verifies():
    alg = TABLE.algorithm(7, 2, 2, True)
    assert alg.length == 7
    assert verify(alg)


@pytest.mark.parametrize("q,m,l", [(2, 1, 1), (2, 2, 1), (2, 1, 3), (3, 2, 2), (4, 2, 1), (5, 3, 1)])
def test_naive_symmetric_length(q, m, l):
    A = truncated(q, m, l)
    alg = naive_symmetric(A)
    d = m * l
    assert alg.length == d * (d + 1) // 2
    assert alg.symmetric
    assert verify(alg)
    assert full_check(alg)


def test_naive_rejects_noncommutative():
    C = np.zeros((2, 2, 2), dtype=np.int64)
    C[0, 1, 0] = 1
    with pytest.raises(ValueError):
        naive_symmetric(StructureAlgebra(GF(2), C))


def test_symmetrize():
    alg = asym_q7_22()
    assert not alg.symmetric
    assert verify(alg)
    s = symmetrize(alg)
    assert s.symmetric
    assert s.length <= 2 * alg.length
    assert verify(s)
    sym = naive_symmetric(truncated(3, 2, 1))
    assert symmetrize(sym).length == sym.length
    with pytest.raises(ValueError):
        symmetrize(f8_algorithm())


def test_symmetrize_drops_vanishing_terms():
    base = naive_symmetric(truncated(5, 2, 1))
    alg = BilinearAlgorithm(base.algebra, base.Phi, base.Psi, base.W, symmetric=False)
    out = symmetrize(alg)
    # phi = psi: only the (phi + psi) terms survive
    assert out.length == base.length
    assert verify(out)


def test_direct_sum():
    K = GF(2)
    z = BilinearAlgorithm(zero_algebra(K), np.zeros((0, 0)), np.zeros((0, 0)), np.zeros((0, 0)))
    f4 = TABLE.algorithm(2, 2, 1, True)
    assert direct_sum(f4, z) is f4
    s = direct_sum(identity_algorithm(K), f4)
    assert s.d == 3 and s.length == 4
    assert verify(s)
    assert s.symmetric
    seven = direct_sum(*[identity_algorithm(GF(7))] * 7)
    assert seven.length == 7 and seven.d == 7
    assert verify(seven)
    with pytest.raises(ValueError):
        direct_sum(identity_algorithm(GF(2)), identity_algorithm(GF(3)))


def test_tensor_product():
    K = GF(2)
    a = TABLE.algorithm(2, 2, 1, True)
    b = TABLE.algorithm(2, 1, 2, True)
    t = tensor_product(a, b)
    assert t.length == 9 and t.d == 4
    assert t.symmetric
    assert verify(t)
    u = tensor_product(a, identity_algorithm(K))
    assert u.length == a.length
    assert verify(u)
    assert np.array_equal(u.algebra.C, a.algebra.C)
    asym = TABLE.algorithm(2, 1, 2, False)
    assert verify(tensor_product(asym, a))
    with pytest.raises(ValueError):
        tensor_product(a, identity_algorithm(GF(3)))


def test_concatenate_identity_outer():
    inner = TABLE.algorithm(4, 2, 2, True)
    outer = BilinearAlgorithm(truncated(4, 1, 1), [[1]], [[1]], [[1]], symmetric=True)
    c = concatenate(outer, inner)
    assert c.length == inner.length
    assert verify(c)


@pytest.mark.parametrize("q,inner_len,total", [(2, 8, 24), (3, 7, 21)])
def test_concatenate_lem42(q, inner_len, total):
    outer = TABLE.algorithm(q, 2, 1, True)
    inner = TABLE.algorithm(q * q, 2, 2, True)
    assert outer.length == 3 and inner.length == inner_len
    c = concatenate(outer, inner)
    assert c.length == total
    assert c.symmetric
    assert verify(c)
    M = descent_isomorphism(c.algebra, q, 2, 4, 2)
    r = restrict(c, truncated(q, 4, 2), M, "sub")
    assert r.length == total
    assert verify(r)


def test_concatenate_mismatch():
    with pytest.raises(ValueError):
        concatenate(TABLE.algorithm(2, 3, 1, True), TABLE.algorithm(4, 2, 1, True))


def test_restrict_quotient_t_to_zero():
    for q, m, l in [(2, 2, 2), (3, 2, 2), (7, 2, 2)]:
        alg = TABLE.algorithm(q, m, l, True)
        M = np.zeros((m, m * l), dtype=np.int64)
        M[:, :m] = np.eye(m, dtype=np.int64)
        r = restrict(alg, truncated(q, m, 1), M, "quotient")
        assert r.length == alg.length
        assert verify(r)


def test_restrict_subfield():
    alg = TABLE.algorithm(2, 4, 1, True)
    E = embedding(2, 2, 4).T  # columns are images of 1, a
    r = restrict(alg, truncated(2, 2, 1), E, "sub")
    assert verify(r)
    assert r.length == alg.length


def test_restrict_identity_and_bad_map():
    alg = f8_algorithm()
    r = restrict(alg, alg.algebra, np.eye(3, dtype=np.int64), "sub")
    assert np.array_equal(r.Phi, alg.Phi) and np.array_equal(r.W, alg.W)
    M = np.array([[1, 0, 0], [0, 0, 1], [0, 1, 0]])
    with pytest.raises(ValueError):
        restrict(alg, alg.algebra, M, "sub")


def test_brute_force_remark_algebra():
    A = remark_algebra()
    assert brute_force_rank(A, 4).rank == 2
    s = brute_force_rank(A, 4, symmetric=True)
    assert s.rank == 3
    assert verify(s.witness) and s.witness.symmetric
    assert lower_bounds(A) == 0


def test_brute_force_small():
    assert brute_force_rank(truncated(2, 2), 4).rank == 3
    assert brute_force_rank(truncated(2, 1), 2).rank == 1
    assert brute_force_rank(truncated(2, 1, 3), 6).rank == 5
    assert brute_force_rank(truncated(2, 2), 2).rank is None
    assert brute_force_rank(truncated(2, 2), 2).exceeds_cap


@pytest.mark.parametrize("q,m,l", [(2, 1, 2), (2, 2, 1), (2, 1, 3), (3, 1, 2), (3, 2, 1), (2, 3, 1)])
def test_brute_force_between_bounds(q, m, l):
    A = truncated(q, m, l)
    naive = naive_symmetric(A).length
    r = brute_force_rank(A, naive)
    assert lower_bounds(A) <= r.rank <= naive
    assert verify(r.witness)
    if (q, m, l) == (2, 3, 1):
        assert r.rank <= f8_algorithm().length


def test_lower_bounds():
    assert lower_bounds(truncated(2, 3)) == 5
    assert lower_bounds(truncated(5, 4)) == 7
    assert lower_bounds(truncated(2, 2, 2)) == 4
    assert lower_bounds(truncated(3, 1, 5)) == 5
    assert lower_bounds(base_field_algebra(GF(3))) == 1


def test_codes_mutually_intersecting():
    K = GF(2)
    alg = f8_algorithm()
    Cphi, Cpsi = codes(alg)
    assert Cphi.shape == (3, 6)
    assert mutually_intersecting(K, Cphi, Cpsi)
    rep = np.ones((1, 3), dtype=np.int64)
    assert mutually_intersecting(K, rep, rep)
    Phi = np.vstack([alg.Phi, np.zeros((1, 3), dtype=np.int64)])
    W = np.hstack([alg.W, np.zeros((3, 1), dtype=np.int64)])
    padded = BilinearAlgorithm(alg.algebra, Phi, Phi, W, symmetric=True)
    assert verify(padded)
    assert mutually_intersecting(K, *codes(padded))
    # disjoint supports
    assert not mutually_intersecting(K, np.array([[1, 0]]), np.array([[0, 1]]))


@pytest.mark.parametrize("q,m", [(2, 2), (2, 3), (2, 4), (3, 2), (4, 3), (5, 2)])
def test_field_algorithms_are_intersecting(q, m):
    alg = TABLE.algorithm(q, m, 1, False)
    assert mutually_intersecting(alg.K, *codes(alg))


def test_s3_witness():
    x, y = s3_counterexample_witness()
    L = GF(4)
    assert x != y
    assert L.mul[L.mul[x, x], y] != L.mul[x, L.mul[y, y]]
    assert L.mul[L.mul[2, 2], 1] != L.mul[2, L.mul[1, 1]]
    count = sum(L.mul[L.mul[a, a], b] != L.mul[a, L.mul[b, b]] for a in range(4) for b in range(4))
    assert count >= 1


# interchange -------------------------------------------------------------


@pytest.mark.parametrize("q,m,l,sym", [(2, 3, 1, True), (4, 2, 2, False), (9, 2, 2, True), (3, 1, 3, False)])
def test_interchange_round_trip(q, m, l, sym):
    alg = TABLE.algorithm(q, m, l, sym)
    text = dumps(alg)
    back = loads(text)
    assert np.array_equal(back.Phi, alg.Phi)
    assert np.array_equal(back.Psi, alg.Psi)
    assert np.array_equal(back.W, alg.W)
    assert np.array_equal(back.algebra.C, alg.algebra.C)
    assert back.symmetric == alg.symmetric
    assert verify(back)
    assert dumps(back) == text


def test_interchange_gf4_digits():
    text = dumps(TABLE.algorithm(4, 1, 3, True))
    body = [ln for ln in text.split("\n")[1:] if ln and ln not in ("C", "PHI", "PSI", "W", "END")]
    toks = [t for ln in body for t in ln.split()]
    assert all(len(t.split(":")) == 2 for t in toks)
    assert "0:1" in toks or "1:1" in toks


@pytest.mark.parametrize("mutate", [
    lambda s: s.replace("BILALG v1", "BILALG v2"),
    lambda s: s.replace("q=2", "q=6"),
    lambda s: s.replace("\nPSI", "\nPSX"),
    lambda s: s.replace("END", ""),
    lambda s: s + "junk\n",
    lambda s: s.replace("\nW\n1 ", "\nW\n2 "),
    lambda s: s.replace("n=6", "n=7"),
    lambda s: "",
])
def test_interchange_rejects(mutate):
    text = dumps(f8_algorithm())
    with pytest.raises(FormatError):
        loads(mutate(text))


def test_loads_constants():
    body = "\n".join(dumps(f8_algorithm()).split("\n")[2:11])
    A = loads_constants(body, 2, 3)
    assert np.array_equal(A.C, truncated(2, 3).C)
    assert A.has_unity


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([(2, 2, 1), (2, 1, 2), (3, 2, 1), (4, 1, 2), (7, 2, 2), (2, 3, 1)]),
       st.integers(0, 2**32))
def test_verified_algorithms_evaluate_correctly(cell, seed):
    alg = TABLE.algorithm(*cell, False)
    rng = np.random.default_rng(seed)
    x, y = rng.integers(0, alg.q, size=(2, alg.d))
    assert np.array_equal(alg.evaluate(x, y), alg.algebra.mul(x, y))


@settings(max_examples=20, deadline=None)
@given(st.lists(st.sampled_from([(2, 1, 1), (2, 2, 1), (2, 1, 2), (2, 3, 1)]), min_size=1, max_size=3))
def test_length_laws(cells):
    algs = [TABLE.algorithm(*c, True) for c in cells]
    s = direct_sum(*algs)
    assert s.length == sum(a.length for a in algs)
    assert verify(s)
    t = tensor_product(algs[0], algs[-1])
    assert t.length == algs[0].length * algs[-1].length
    assert verify(t)
