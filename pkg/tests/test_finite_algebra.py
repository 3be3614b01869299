import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bilinalg import linalg, poly
from bilinalg.algebra import HenselIso, hensel_lift, truncated
from bilinalg.extfield import canonical_modulus, field, gf_embed
from bilinalg.gf import GF, factor_prime_power

QS = [2, 3, 4, 5, 7, 8, 9, 16]


def test_factor_prime_power():
    assert factor_prime_power(2) == (2, 1)
    assert factor_prime_power(9) == (3, 2)
    assert factor_prime_power(256) == (2, 8)
    for bad in (1, 6, 12, 100):
        with pytest.raises(ValueError):
            factor_prime_power(bad)


@pytest.mark.parametrize("q", QS + [25, 27, 49, 256])
def test_table_field_axioms(q):
    K = GF(q)
    e = np.arange(q)
    a, b, c = np.meshgrid(e, e, e, indexing="ij") if q <= 16 else np.meshgrid(e[:7], e[:7], e[:7], indexing="ij")
    assert (K.mul[K.mul[a, b], c] == K.mul[a, K.mul[b, c]]).all()
    assert (K.mul[a, K.add[b, c]] == K.add[K.mul[a, b], K.mul[a, c]]).all()
    assert (K.add[e, K.neg[e]] == 0).all()
    assert (K.mul[e[1:], K.inv[e[1:]]] == 1).all()
    assert (K.mul == K.mul.T).all()


def test_gf4_tables():
    K = GF(4)
    # F_4 = F_2[a]/(a^2 + a + 1): 2 is a, 3 is a + 1
    assert K.mul[2, 2] == 3
    assert K.mul[2, 3] == 1
    assert K.add[2, 3] == 1
    assert K.inv[2] == 3


def test_irreducibles_small():
    K = GF(2)
    assert [poly.key(f) for f in poly.irreducibles(K, 1, 2)] == [(0, 1), (1, 1)]
    assert [poly.key(f) for f in poly.irreducibles(K, 2, 1)] == [(1, 1, 1)]
    assert len(poly.irreducibles(K, 8, 25)) == 25


@pytest.mark.parametrize("q,d", [(2, 1), (2, 4), (2, 8), (3, 3), (4, 2), (5, 2), (3, 4)])
def test_irreducible_count_matches_necklace(q, d):
    K = GF(q)
    got = poly.irreducibles(K, d)
    assert len(got) == poly.necklace_count(q, d)
    keys = [poly.key(f) for f in got]
    assert len(set(keys)) == len(keys)
    for f in got:
        assert poly.is_irreducible(K, f)
        assert f[-1] == 1


def test_necklace_known_values():
    assert [poly.necklace_count(2, d) for d in range(1, 9)] == [2, 1, 2, 3, 6, 9, 18, 30]
    assert poly.necklace_count(3, 2) == 3


def test_irreducibles_count_error():
    with pytest.raises(ValueError):
        poly.irreducibles(GF(2), 2, 2)


def test_canonical_modulus_is_lex_smallest():
    assert poly.key(canonical_modulus(2, 3)) == (1, 1, 0, 1)
    assert poly.key(canonical_modulus(2, 2)) == (1, 1, 1)
    for q, m in [(2, 4), (3, 2), (5, 3)]:
        f = canonical_modulus(q, m)
        assert poly.key(f) == poly.key(poly.irreducibles(GF(q), m, 1)[0])


@pytest.mark.parametrize("q,m", [(2, 3), (2, 4), (3, 2), (4, 2), (5, 2), (2, 8)])
def test_extfield_exhaustive(q, m):
    F = field(q, m)
    x = F.elements()
    assert np.array_equal(F.pow(x, F.order), x)
    nz = x[1:]
    assert F.eq(F.mul(nz, F.inv(nz)), F.one()).all()
    p = F.p
    y = x[::-1]
    assert np.array_equal(F.pow(F.add(x, y), p), F.add(F.pow(x, p), F.pow(y, p)))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(2, 13), (3, 7), (7, 5), (2, 163)]), st.integers(0, 2**32))
def test_extfield_random_axioms(qm, seed):
    F = field(*qm)
    rng = np.random.default_rng(seed)
    a, b, c = (F.random(rng) for _ in range(3))
    assert F.eq(F.mul(F.mul(a, b), c), F.mul(a, F.mul(b, c)))
    assert F.eq(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)))
    if not F.is_zero(a):
        assert F.eq(F.mul(a, F.inv(a)), F.one())


def test_gf_embed_morphism():
    x0 = field(2, 2).zero()
    assert not gf_embed(x0, 2, 2, 4).any()
    one = gf_embed(field(2, 2).one(), 2, 2, 4)
    assert field(2, 4).eq(one, field(2, 4).one())
    F4, F16 = field(2, 2), field(2, 4)
    a = gf_embed(F4.gen(), 2, 2, 4)
    assert F16.is_zero(F16.add(F16.add(F16.mul(a, a), a), F16.one()))
    xs = F4.elements()
    for u, v in itertools.product(xs, xs):
        eu, ev = gf_embed(u, 2, 2, 4), gf_embed(v, 2, 2, 4)
        assert F16.eq(gf_embed(F4.mul(u, v), 2, 2, 4), F16.mul(eu, ev))
        assert F16.eq(gf_embed(F4.add(u, v), 2, 2, 4), F16.add(eu, ev))
    with pytest.raises(ValueError):
        gf_embed(F4.one(), 2, 2, 3)


def test_artin_schreier():
    F = field(2, 163)
    assert not F.artin_schreier_solve(F.zero()).any()
    rng = np.random.default_rng(1)
    found = missing = 0
    for _ in range(20):
        c = F.random(rng)
        y = F.artin_schreier_solve(c)
        if int(F.abs_trace(c)) == 0:
            assert y is not None
            assert F.eq(F.add(F.mul(y, y), y), c)
            found += 1
        else:
            assert y is None
            missing += 1
    assert found and missing
    with pytest.raises(ValueError):
        field(3, 2).artin_schreier_solve(field(3, 2).one())


def test_hensel_lift_identity_and_order2():
    K = GF(2)
    Q = poly.P([1, 1, 1])
    a = hensel_lift(K, Q, 1)
    assert poly.key(a) == (0, 1)
    a2 = hensel_lift(K, Q, 2)
    Q2 = poly.power(K, Q, 2)
    val = poly.compose_mod(K, poly.P([1, 1, 1]), a2, Q2)
    assert len(val) == 0
    assert poly.key(poly.mod(K, a2, Q)) == (0, 1)


@pytest.mark.parametrize("q,Q,l", [(2, (1, 1, 1), 2), (2, (1, 1, 0, 1), 2), (3, (1, 0, 1), 2), (2, (1, 0, 1, 1), 2), (2, (0, 1), 4)])
def test_hensel_iso_is_ring_morphism(q, Q, l):
    K = GF(q)
    H = HenselIso(K, poly.P(Q), l)
    A = truncated(q, len(Q) - 1, l)
    elems = A.elements() if q ** A.d <= 2**8 else np.eye(A.d, dtype=np.int64)
    for x, y in itertools.product(elems, elems):
        lhs = H.to_poly(A.mul(x, y))
        rhs = poly.mulmod(K, H.to_poly(x), H.to_poly(y), H.modulus)
        assert poly.key(lhs) == poly.key(rhs)


def test_hensel_rejects_reducible():
    with pytest.raises(ValueError):
        HenselIso(GF(2), poly.P([1, 0, 1]), 2)


@pytest.mark.parametrize("m,l", [(m, l) for m in range(1, 9) for l in range(1, 9) if m * l <= 8])
def test_truncated_matches_polynomial_product(m, l):
    A = truncated(2, m, l)
    F = field(2, m)
    assert A.d == m * l
    assert (A.C == A.C.transpose(1, 0, 2)).all()
    rng = np.random.default_rng(m * 10 + l)
    xs = rng.integers(0, 2, size=(64, A.d))
    ys = rng.integers(0, 2, size=(64, A.d))
    for x, y in zip(xs, ys):
        sx, sy = A.to_series(x), A.to_series(y)
        want = np.zeros((l, m), dtype=np.int64)
        for i in range(l):
            for j in range(l - i):
                want[i + j] = F.add(want[i + j], F.mul(sx[i], sy[j]))
        assert np.array_equal(A.to_series(A.mul(x, y)), want)


def test_truncated_t_nilpotent():
    A = truncated(3, 2, 3)
    t = np.zeros(A.d, dtype=np.int64)
    t[2] = 1
    t2 = A.mul(t, t)
    assert t2.any()
    assert not A.mul(t2, t).any()


def test_linalg_inverses():
    K = GF(2)
    I = linalg.identity(4)
    assert np.array_equal(linalg.right_inverse(K, I), I)
    assert np.array_equal(linalg.left_inverse(K, I), I)
    M = np.array([[1, 0, 1, 1, 0, 0], [0, 1, 1, 0, 1, 0], [0, 0, 0, 1, 1, 1]])
    R = linalg.right_inverse(K, M)
    assert R.shape == (6, 3)
    assert np.array_equal(linalg.matmul(K, M, R), linalg.identity(3))
    L = linalg.left_inverse(K, M.T)
    assert np.array_equal(linalg.matmul(K, L, M.T), linalg.identity(3))
    with pytest.raises(linalg.RankError) as exc:
        linalg.right_inverse(K, np.array([[1, 1], [1, 1]]))
    assert exc.value.deficit == 1


def test_f8_evaluation_map_kernel_empty():
    # x^2, y^2, z^2, xy, xz, yz at the six points of the plane
    pts = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 0, 1), (0, 1, 1)]
    F = np.array([[x * x, y * y, z * z, x * y, x * z, y * z] for x, y, z in pts])
    assert linalg.kernel(GF(2), F).shape[0] == 0


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 4, 5]), st.integers(1, 6), st.integers(1, 6), st.integers(0, 2**32))
def test_rank_nullity(q, r, c, seed):
    K = GF(q)
    M = np.random.default_rng(seed).integers(0, q, size=(r, c))
    rk = linalg.rank(K, M)
    ker = linalg.kernel(K, M)
    assert rk <= min(r, c)
    assert rk + ker.shape[0] == c
    if ker.shape[0]:
        assert not linalg.matmul(K, M, ker.T).any()


@pytest.mark.parametrize("q,m,d", [(5, 12, 6), (2, 24, 6), (2, 24, 5), (3, 14, 7)])
def test_roots_beyond_enumeration(q, m, d):
    F = field(q, m)
    for g in poly.irreducibles(GF(q), d, 2):
        r = F.roots(g)
        assert len(r) == (d if m % d == 0 else 0)
        assert F.is_zero(F.evaluate(g, r)).all()
        assert len({F.index(x) for x in r}) == len(r)


@pytest.mark.parametrize("q,m,d", [(2, 8, 4), (3, 4, 2), (4, 4, 2)])
def test_split_roots_match_enumeration(q, m, d):
    F = field(q, m)
    X = F.elements()
    for g in poly.irreducibles(GF(q), d):
        assert np.array_equal(F._split_roots(g), X[F.is_zero(F.evaluate(g, X))])
