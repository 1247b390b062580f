import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from starsolve.ring import NotMpInvertibleError
from starsolve.matrix import (CONJUGATE_TRANSPOSE, EXACT, FLOAT, TRANSPOSE,
                              Matrix, MatrixRing, ShapeMismatchError,
                              inverse, mp_inverse, random_matrix,
                              rank_factorization, ring_of)
from starsolve.scalars import GaussianRational

I = GaussianRational(Fraction(0), Fraction(1))

involutions = st.sampled_from((CONJUGATE_TRANSPOSE, TRANSPOSE))
seeds = st.integers(min_value=0, max_value=10**6)
dims = st.integers(min_value=1, max_value=4)


# -- construction and validation -------------------------------------------


def test_exact_construction_coerces_ints():
    m = Matrix.exact([[1, 2], [3, 4]])
    assert m.shape == (2, 2)
    assert m.entry(1, 0) == GaussianRational(Fraction(3))
    assert m.backend == EXACT


def test_transpose_involution_rejects_complex_entries():
    with pytest.raises(ValueError):
        Matrix.exact([[I]], involution=TRANSPOSE)
    with pytest.raises(ValueError):
        Matrix.floating([[1j]], involution=TRANSPOSE)


def test_float_construction_rejects_nan():
    with pytest.raises(ValueError):
        Matrix.floating([[float("nan")]])


def test_shape_mismatch_raises():
    a = Matrix.exact([[1, 2]])
    b = Matrix.exact([[1], [2]])
    with pytest.raises(ShapeMismatchError):
        a.add(b)
    with pytest.raises(ShapeMismatchError):
        b.mul(b)
    assert (a @ b).shape == (1, 1)


def test_mixed_tags_raise():
    a = Matrix.exact([[1]])
    f = Matrix.floating([[1.0]])
    t = Matrix.exact([[1]], involution=TRANSPOSE)
    with pytest.raises(ValueError):
        a.add(f)
    with pytest.raises(ValueError):
        a.add(t)


# -- star, blocks, equality --------------------------------------------------


def test_star_conjugate_transpose():
    m = Matrix.exact([[I, 1], [0, 2 * GaussianRational(Fraction(1))]])
    s = m.star()
    assert s.entry(0, 0) == -I
    assert s.entry(1, 0) == GaussianRational(Fraction(1))


def test_star_plain_transpose_keeps_entries():
    m = Matrix.exact([[1, 2], [3, 4]], involution=TRANSPOSE)
    s = m.star()
    assert s.entry(0, 1) == GaussianRational(Fraction(3))


def test_block_paste_roundtrip():
    m = Matrix.exact([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    sub = m.block(1, 0, 2, 2)
    assert sub.entry(0, 0) == GaussianRational(Fraction(4))
    back = Matrix.zeros(3, 3).paste(1, 0, sub)
    assert back.entry(2, 1) == GaussianRational(Fraction(8))
    assert back.entry(0, 0) == GaussianRational(Fraction(0))


def test_float_equality_is_tolerance_scaled():
    a = Matrix.floating([[1.0, 0.0]])
    b = Matrix.floating([[1.0 + 1e-13, 0.0]])
    assert a.equals(b)
    assert not a.equals(Matrix.floating([[1.1, 0.0]]))
    with pytest.raises(ShapeMismatchError):
        a.equals(Matrix.floating([[1.0]]))


def test_to_float_matches_entries():
    m = Matrix.exact([[Fraction(1, 4), I]])
    f = m.to_float()
    assert f.backend == FLOAT
    assert f.entry(0, 0) == 0.25 + 0j
    assert f.entry(0, 1) == 1j


# -- inverse and MP-inverse ---------------------------------------------------


def test_inverse_pinned():
    m = Matrix.exact([[1, 2], [3, 4]])
    inv = inverse(m)
    assert (m @ inv).equals(Matrix.identity(2))
    with pytest.raises(NotMpInvertibleError):
        inverse(Matrix.exact([[1, 2], [2, 4]]))


def test_mp_inverse_pinned_rank_one():
    # rank-1 symmetric real example: dagger = m / 25
    m = Matrix.exact([[1, 2], [2, 4]], involution=TRANSPOSE)
    d = mp_inverse(m)
    expected = Matrix.exact([[Fraction(1, 25), Fraction(2, 25)],
                             [Fraction(2, 25), Fraction(4, 25)]],
                            involution=TRANSPOSE)
    assert d.equals(expected)


def test_mp_inverse_scalar_imaginary():
    m = Matrix.exact([[I]])
    assert mp_inverse(m).entry(0, 0) == -I


def test_mp_inverse_zero_matrix():
    z = Matrix.zeros(2, 3)
    assert mp_inverse(z).shape == (3, 2)
    assert mp_inverse(z).is_zero()


def test_mp_inverse_same_matrix_under_both_involutions_differs():
    # [[i]] is conj-normal but transpose requires real entries; use a real
    # rank-deficient pair instead and check both dagger computations agree
    m_conj = Matrix.exact([[1, 1], [0, 0]])
    m_tr = Matrix.exact([[1, 1], [0, 0]], involution=TRANSPOSE)
    assert mp_inverse(m_conj).to_float().entries == mp_inverse(m_tr).to_float().entries


def test_rank_factorization_shapes():
    m = Matrix.exact([[1, 2, 3], [2, 4, 6], [1, 1, 1]])
    f, g, r = rank_factorization(m)
    assert r == 2
    assert f.shape == (3, 2) and g.shape == (2, 3)
    assert (f @ g).equals(m)


def test_nilpotent_matrix_mp_inverse():
    m = Matrix.exact([[0, 1], [0, 0]])
    d = mp_inverse(m)
    assert d.equals(Matrix.exact([[0, 0], [1, 0]]))


@given(seeds, dims, dims, involutions)
@settings(max_examples=60, deadline=None)
def test_penrose_equations_exact(seed, rows, cols, involution):
    rng = random.Random(seed)
    m = random_matrix(rng, rows, cols, EXACT, involution)
    d = mp_inverse(m)
    assert (m @ d @ m).equals(m)
    assert (d @ m @ d).equals(d)
    assert (m @ d).star().equals(m @ d)
    assert (d @ m).star().equals(d @ m)


@given(seeds, dims, dims, involutions)
@settings(max_examples=40, deadline=None)
def test_penrose_equations_float(seed, rows, cols, involution):
    rng = random.Random(seed)
    m = random_matrix(rng, rows, cols, FLOAT, involution)
    d = mp_inverse(m)
    tol = 1e-9 * (1.0 + m.max_abs() + d.max_abs())
    assert (m @ d @ m).sub(m).max_abs() <= tol
    assert (d @ m @ d).sub(d).max_abs() <= tol
    assert (m @ d).star().sub(m @ d).max_abs() <= tol
    assert (d @ m).star().sub(d @ m).max_abs() <= tol


def test_mp_inverse_unique_exact(rng):
    # uniqueness: recomputing through the ring helper agrees entrywise
    for _ in range(10):
        m = random_matrix(rng, 3, 2)
        ring = MatrixRing(3)
        assert ring.is_mp_inverse(m, mp_inverse(m))


def test_float_ambiguous_rank_raises():
    # elimination sees rank 2 but the Gram pivots collapse below threshold
    m = Matrix.floating([[1.0, 0.0], [0.0, 1e-8]])
    with pytest.raises(NotMpInvertibleError):
        mp_inverse(m)


# -- MatrixRing ----------------------------------------------------------------


def test_ring_ops_and_constants():
    ring = MatrixRing(2)
    a = Matrix.exact([[1, 2], [3, 4]])
    assert ring.subtract(a, a).is_zero()
    assert ring.multiply(ring.one(), a).equals(a)
    assert ring.half_of(ring.one()).entry(0, 0) == GaussianRational(Fraction(1, 2))
    assert ring.herm_part(a).star().equals(ring.herm_part(a))
    assert ring.skew_part(a).star().equals(ring.skew_part(a).neg())


def test_ring_is_zero_accepts_rectangular():
    # defect checks reuse the square ring on off-size blocks on purpose
    ring = MatrixRing(3)
    assert ring.is_zero(Matrix.zeros(2, 3))
    assert not ring.is_zero(Matrix.exact([[1]]))


def test_ring_of_and_element_of():
    m = random_matrix(random.Random(0), 2, 2, FLOAT, TRANSPOSE)
    ring = ring_of(m)
    assert ring.size == 2 and ring.backend == FLOAT
    assert ring.element_of(m)
    assert not ring.element_of(Matrix.exact([[1, 2], [3, 4]]))


def test_ring_sample_element_deterministic():
    ring = MatrixRing(2)
    a = ring.sample_element(random.Random(5))
    b = ring.sample_element(random.Random(5))
    assert a.equals(b)
