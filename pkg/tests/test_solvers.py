import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from starsolve.matrix import (CONJUGATE_TRANSPOSE, EXACT, FLOAT, TRANSPOSE,
                              Matrix, MatrixRing, random_matrix)
from starsolve.oracle import random_pair, random_sym_instance
from starsolve.scalars import GaussianRational
from starsolve.solvers import (Condition, HypothesesFailError, MINUS, PLUS,
                               UnsolvableError, check_hypotheses,
                               equation_lhs, particular, phi,
                               solvability_conditions, solve, solve_sym_left,
                               solve_sym_right, sym_solvability_conditions)

I = GaussianRational(Fraction(0), Fraction(1))
RING2 = MatrixRing(2)
RING1 = MatrixRing(1)

seeds = st.integers(min_value=0, max_value=10**6)
families = st.sampled_from(("unitary", "equal", "diagonal"))
signs = st.sampled_from((MINUS, PLUS))
involutions = st.sampled_from((CONJUGATE_TRANSPOSE, TRANSPOSE))


def scalar(value):
    return Matrix.exact([[value]])


# -- hypotheses ----------------------------------------------------------------


def test_check_hypotheses_scalar_ones():
    rep = check_hypotheses(RING1, scalar(1), scalar(1))
    assert rep.ok and rep.range_ok and rep.hermitian_ok
    assert rep.d.is_zero()
    assert rep.tol is None


def test_check_hypotheses_failure_names():
    a = Matrix.exact([[1, 0], [0, 0]])
    b = Matrix.exact([[0, 0], [0, 1]])
    rep = check_hypotheses(RING2, a, b)
    assert not rep.range_ok
    assert "range_condition" in rep.failed_names()


def test_derived_element_identities():
    # d = E_b a satisfies: d'b = 0, b*dd' = 0, dd'a = d, d'a = d'd
    rng = random.Random(11)
    for trial in range(25):
        a, b = random_pair(rng, 2, ("unitary", "equal", "diagonal")[trial % 3],
                           CONJUGATE_TRANSPOSE)
        rep = check_hypotheses(RING2, a, b)
        assert rep.ok
        r = RING2
        assert r.multiply(rep.d_dagger, b).is_zero()
        assert r.multiply(r.star(b), r.multiply(rep.d, rep.d_dagger)).is_zero()
        assert r.multiply(r.multiply(rep.d, rep.d_dagger), a).equals(rep.d)
        assert r.multiply(rep.d_dagger, a).equals(r.multiply(rep.d_dagger, rep.d))


def test_d_dagger_is_the_mp_inverse_of_d():
    rng = random.Random(3)
    for _ in range(20):
        a, b = random_pair(rng, 3, "unitary", CONJUGATE_TRANSPOSE)
        rep = check_hypotheses(MatrixRing(3), a, b)
        assert MatrixRing(3).is_mp_inverse(rep.d, rep.d_dagger)


def test_float_hypotheses_record_tolerance():
    rng = random.Random(5)
    a, b = (m.to_float() for m in random_pair(rng, 2, "unitary",
                                              CONJUGATE_TRANSPOSE))
    ring = MatrixRing(2, backend=FLOAT)
    rep = check_hypotheses(ring, a, b)
    assert rep.ok
    assert rep.tol is not None and rep.tol > 0


# -- solvability conditions -----------------------------------------------------


def test_conditions_scalar_minus_solvable():
    rep = check_hypotheses(RING1, scalar(1), scalar(1))
    sym, hcond = solvability_conditions(MINUS, rep, scalar(2 * I))
    assert sym.name == "c_star_neq_minus_c" and sym.ok
    assert hcond.name == "H_condition" and hcond.ok


def test_conditions_scalar_minus_unsolvable():
    rep = check_hypotheses(RING1, scalar(1), scalar(1))
    sym, hcond = solvability_conditions(MINUS, rep, scalar(1))
    assert not sym.ok


def test_conditions_plus_uses_symmetric_name():
    rep = check_hypotheses(RING1, scalar(1), scalar(1))
    sym, _ = solvability_conditions(PLUS, rep, scalar(I))
    assert sym.name == "c_star_neq_c" and not sym.ok


def test_h_condition_pinned_failure():
    # skew c that still fails the averaged projection identity
    a = Matrix.exact([[1, 0], [0, 0]])
    b = Matrix.exact([[1, 0], [0, 0]])
    c = Matrix.exact([[0, 1], [-1, 0]])
    rep = check_hypotheses(RING2, a, b)
    sym, hcond = solvability_conditions(MINUS, rep, c)
    assert sym.ok and not hcond.ok


# -- phi and particular ----------------------------------------------------------


def test_phi_identity_pair_splits_parts():
    # a = b = 1: x - x* = 0 has hermitian solutions, x + x* = 0 skew ones,
    # and phi averages v onto the matching part
    rep = check_hypotheses(RING2, RING2.one(), RING2.one())
    v = Matrix.exact([[1, I], [0, 2]])
    assert phi(MINUS, rep, v).equals(RING2.half_of(RING2.herm_part(v)))
    assert phi(PLUS, rep, v).equals(RING2.half_of(RING2.skew_part(v)))


def test_particular_scalar_pinned():
    rep = check_hypotheses(RING1, scalar(1), scalar(1))
    assert particular(MINUS, rep, scalar(2 * I)).entry(0, 0) == I


def test_particular_diagonal_pinned():
    a = Matrix.exact([[1, 0], [0, 2]])
    b = Matrix.exact([[2, 0], [0, 1]])
    c = Matrix.exact([[4 * I, 0], [0, 0]])
    rep = check_hypotheses(RING2, a, b)
    x0 = particular(MINUS, rep, c)
    assert x0.equals(Matrix.exact([[I, 0], [0, 0]]))


# -- solve -------------------------------------------------------------------------


def test_solve_scalar_family():
    fam = solve(RING1, MINUS, scalar(1), scalar(1), scalar(2 * I))
    assert fam.x0.entry(0, 0) == I
    assert fam.is_solution(fam.x0)
    for seed in range(4):
        assert fam.is_solution(fam.sample(seed))


def test_solve_unsolvable_raises_with_names():
    with pytest.raises(UnsolvableError) as exc:
        solve(RING1, MINUS, scalar(1), scalar(1), scalar(1))
    assert "c_star_neq_minus_c" in exc.value.failed
    assert exc.value.report is not None


def test_solve_hypotheses_fail_raises():
    a = Matrix.exact([[1, 0], [0, 0]])
    b = Matrix.exact([[0, 0], [0, 1]])
    with pytest.raises(HypothesesFailError) as exc:
        solve(RING2, MINUS, a, b, RING2.zero())
    assert "range_condition" in exc.value.report.failed_names()


@given(seeds, signs, families, involutions, st.integers(min_value=1, max_value=3))
@settings(max_examples=60, deadline=None)
def test_solve_forced_instances_roundtrip(seed, sign, family, involution, size):
    rng = random.Random(seed)
    ring = MatrixRing(size, involution=involution)
    a, b = random_pair(rng, size, family, involution)
    x_hat = random_matrix(rng, size, size, EXACT, involution)
    c = equation_lhs(ring, sign, a, b, x_hat)
    fam = solve(ring, sign, a, b, c)
    assert fam.is_solution(fam.x0)
    v = random_matrix(rng, size, size, EXACT, involution)
    assert fam.is_solution(fam.at(v))
    # phi fixes homogeneous solutions: x_hat - x0 solves the zero equation
    h = x_hat.sub(fam.x0)
    assert fam.homogeneous(h).equals(h)


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_solve_float_residuals_small(seed):
    rng = random.Random(seed)
    ring = MatrixRing(2, backend=FLOAT)
    a, b = (m.to_float() for m in random_pair(rng, 2, "unitary",
                                              CONJUGATE_TRANSPOSE))
    x_hat = random_matrix(rng, 2, 2, FLOAT, CONJUGATE_TRANSPOSE)
    c = equation_lhs(ring, MINUS, a, b, x_hat)
    fam = solve(ring, MINUS, a, b, c)
    tol = 1e-9 * (1.0 + c.max_abs())
    assert fam.residual(fam.x0).max_abs() <= tol


# -- symmetric corollaries ----------------------------------------------------------


def test_sym_right_pinned():
    a = Matrix.exact([[1, 1], [0, 0]])
    b = (a @ a.star()).add(a @ a.star())
    fam = solve_sym_right(RING2, a, b)
    assert fam.is_solution(fam.x0)
    assert fam.kind == "sym_right"
    assert fam.report is None


def test_sym_right_unsolvable_squeeze():
    # E_a b E_a != 0 for rank-deficient a missing the (1,1) direction
    a = Matrix.exact([[0, 0], [0, 1]])
    b = Matrix.exact([[1, 0], [0, 0]])
    with pytest.raises(UnsolvableError) as exc:
        solve_sym_right(RING2, a, b)
    assert "E_condition" in exc.value.failed


def test_sym_left_unsolvable_squeeze():
    a = Matrix.exact([[0, 1], [0, 0]])
    b = Matrix.exact([[2, 0], [0, 0]])
    with pytest.raises(UnsolvableError) as exc:
        solve_sym_left(RING2, a, b)
    assert "F_condition" in exc.value.failed


def test_sym_nonhermitian_rhs_rejected():
    a = Matrix.exact([[1, 0], [0, 1]])
    b = Matrix.exact([[0, 1], [0, 0]])
    for solver in (solve_sym_right, solve_sym_left):
        with pytest.raises(UnsolvableError) as exc:
            solver(RING2, a, b)
        assert "b_star_neq_b" in exc.value.failed


def test_sym_helper_matches_solvers():
    rng = random.Random(9)
    for side in ("right", "left"):
        solver = solve_sym_right if side == "right" else solve_sym_left
        for trial in range(30):
            a, b = random_sym_instance(rng, side, 2,
                                       force_solvable=(trial % 2 == 0))
            conds = sym_solvability_conditions(RING2, side, a, b)
            assert tuple(isinstance(c, Condition) for c in conds) == (True, True)
            if all(c.ok for c in conds):
                fam = solver(RING2, a, b)
                assert fam.is_solution(fam.x0)
            else:
                with pytest.raises(UnsolvableError):
                    solver(RING2, a, b)


def test_sym_right_agrees_with_general_plus_form():
    # x a* + a x* = b is the triple (1, a, b) of the plus equation
    rng = random.Random(21)
    for _ in range(15):
        a, b = random_sym_instance(rng, "right", 2, force_solvable=True)
        fam_sym = solve_sym_right(RING2, a, b)
        fam_gen = solve(RING2, PLUS, RING2.one(), a, b)
        assert fam_gen.is_solution(fam_sym.x0)
        assert fam_sym.is_solution(fam_gen.x0)
        v = random_matrix(rng, 2, 2)
        assert fam_gen.is_solution(fam_sym.at(v))


def test_sym_left_solutions_star_relate_to_right():
    # y solves a* x + x* a = b iff y* solves the right-sided equation for a*
    rng = random.Random(33)
    for _ in range(15):
        a, b = random_sym_instance(rng, "left", 2, force_solvable=True)
        fam = solve_sym_left(RING2, a, b)
        x = fam.x0
        lhs = (a.star() @ x).add(x.star() @ a)
        assert lhs.equals(b)
        y = x.star()
        assert (y @ a).add(a.star() @ y.star()).equals(b)


def test_condition_tolerance_recorded_for_float():
    ring = MatrixRing(2, backend=FLOAT)
    a = Matrix.floating([[1.0, 0.0], [0.0, 0.0]])
    b = Matrix.floating([[1.0, 0.0], [0.0, 1.0]])
    conds = sym_solvability_conditions(ring, "right", a, b)
    assert all(c.tol is not None for c in conds)
