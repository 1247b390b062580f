"""Exact ground truth by real-linearization, plus instance generators.

The map X -> A X B* -/+ B X* A* is additive but only real-linear (the star
conjugates scalars), so it is represented as an exact rational matrix over
the coordinates (Re X_ij, Im X_ij) -- just Re X_ij under the transpose
involution, where entries are real.  Solving that system by fraction
arithmetic gives an independent verdict, a particular solution, and a kernel
basis against which the closed-form solver families are checked.

The generators down the bottom produce exact instances that satisfy the
solvers' standing hypotheses by construction; random pairs almost never do
at rank deficiency, so each family seeds structure deliberately.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .matrix import (CONJUGATE_TRANSPOSE, EXACT, TRANSPOSE, Matrix, MatrixRing,
                     random_matrix, random_rational)
from .rect import RectProblem, check_rect_hypotheses
from .scalars import GaussianRational
from .solvers import MINUS, SolutionFamily, _check_sign, check_hypotheses

RE = "re"
IM = "im"

_MAX_TRIES = 500


class GenerationError(Exception):
    """A bounded rejection sampler ran out of attempts."""


def _coordinate_index(rows: int, cols: int, involution: str) -> tuple:
    parts = (RE,) if involution == TRANSPOSE else (RE, IM)
    return tuple((i, j, part) for i in range(rows) for j in range(cols) for part in parts)


def _require_exact(*mats: Matrix):
    if any(m.backend != EXACT for m in mats):
        raise ValueError("the oracle works on the exact backend only")


@dataclass(frozen=True)
class RealLinearSystem:
    """Rational matrix representation of X -> A X B* -/+ B X* A*.

    Rows follow ``row_index`` (output entry coordinates, row-major, re before
    im), columns follow ``col_index`` (X entry coordinates, same order).
    """

    matrix: tuple        # tuple of row tuples of Fractions
    rhs: tuple           # Fractions, one per row
    row_index: tuple     # (i, j, "re"/"im") per row
    col_index: tuple     # (i, j, "re"/"im") per column
    sign: str
    in_shape: Tuple[int, int]
    out_shape: Tuple[int, int]
    involution: str

    def coords_of(self, x: Matrix) -> tuple:
        """Real coordinates of a candidate X."""
        _require_exact(x)
        if x.shape != self.in_shape:
            raise ValueError(f"expected X of shape {self.in_shape}, got {x.shape}")
        return tuple(x.entries[i][j].re if part == RE else x.entries[i][j].im
                     for (i, j, part) in self.col_index)

    def out_coords_of(self, y: Matrix) -> tuple:
        _require_exact(y)
        if y.shape != self.out_shape:
            raise ValueError(f"expected rhs of shape {self.out_shape}, got {y.shape}")
        return tuple(y.entries[i][j].re if part == RE else y.entries[i][j].im
                     for (i, j, part) in self.row_index)

    def apply(self, x: Matrix) -> tuple:
        """System matrix times coords_of(x); equals the coords of the map's value."""
        vec = self.coords_of(x)
        return tuple(sum(r * v for r, v in zip(row, vec) if v) for row in self.matrix)

    def matrix_from_coords(self, vec) -> Matrix:
        rows, cols = self.in_shape
        grid = [[[Fraction(0), Fraction(0)] for _ in range(cols)] for _ in range(rows)]
        for value, (i, j, part) in zip(vec, self.col_index):
            grid[i][j][0 if part == RE else 1] = Fraction(value)
        return Matrix.exact([[GaussianRational(re, im) for re, im in row] for row in grid],
                            self.involution)


def _map_value(sign: str, a: Matrix, b: Matrix, x: Matrix) -> Matrix:
    left = a @ x @ b.star()
    right = b @ x.star() @ a.star()
    return left.sub(right) if sign == MINUS else left.add(right)


def linearize(sign: str, a: Matrix, b: Matrix, c: Optional[Matrix] = None) -> RealLinearSystem:
    """Real-linear system for A X B* -/+ B X* A* (= C when given).

    A: m x n and B: m x p define the map on X: n x p; the rhs is the zero
    vector unless C (m x m) is supplied.
    """
    _check_sign(sign)
    _require_exact(a, b)
    a._check_tags(b)
    if a.rows != b.rows:
        raise ValueError(f"A and B must share their row count; got {a.shape}, {b.shape}")
    m, n, p = a.rows, a.cols, b.cols
    col_index = _coordinate_index(n, p, a.involution)
    row_index = _coordinate_index(m, m, a.involution)

    columns = []
    for (i, j, part) in col_index:
        unit = GaussianRational(1) if part == RE else GaussianRational(0, 1)
        basis = Matrix(n, p, tuple(
            tuple(unit if (r, s) == (i, j) else GaussianRational(0) for s in range(p))
            for r in range(n)), a.involution, EXACT)
        value = _map_value(sign, a, b, basis)
        columns.append(tuple(value.entries[r][s].re if vpart == RE else value.entries[r][s].im
                             for (r, s, vpart) in row_index))
    matrix = tuple(tuple(col[r] for col in columns) for r in range(len(row_index)))

    if c is None:
        rhs = tuple(Fraction(0) for _ in row_index)
    else:
        _require_exact(c)
        a._check_tags(c)
        if c.shape != (m, m):
            raise ValueError(f"C must be {m}x{m}, got {c.shape}")
        rhs = tuple(c.entries[r][s].re if vpart == RE else c.entries[r][s].im
                    for (r, s, vpart) in row_index)
    return RealLinearSystem(matrix, rhs, row_index, col_index, sign,
                            (n, p), (m, m), a.involution)


def _solve_rational(matrix, rhs):
    """Exact Gaussian elimination; returns (consistent, particular, kernel, rank)."""
    nrows = len(matrix)
    ncols = len(matrix[0]) if nrows else 0
    aug = [list(row) + [rhs[r]] for r, row in enumerate(matrix)]
    pivots = []  # (row, col)
    pr = 0
    for pc in range(ncols):
        sel = next((i for i in range(pr, nrows) if aug[i][pc]), None)
        if sel is None:
            continue
        aug[pr], aug[sel] = aug[sel], aug[pr]
        piv = aug[pr][pc]
        aug[pr] = [e / piv for e in aug[pr]]
        for i in range(nrows):
            if i != pr and aug[i][pc]:
                f = aug[i][pc]
                prow = aug[pr]
                aug[i] = [e - f * q for e, q in zip(aug[i], prow)]
        pivots.append((pr, pc))
        pr += 1
    consistent = all(not aug[i][ncols] for i in range(pr, nrows))
    if not consistent:
        return False, None, [], len(pivots)

    particular = [Fraction(0)] * ncols
    for (r, pc) in pivots:
        particular[pc] = aug[r][ncols]
    pivot_cols = {pc for (_, pc) in pivots}
    kernel = []
    for free in range(ncols):
        if free in pivot_cols:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for (r, pc) in pivots:
            vec[pc] = -aug[r][free]
        kernel.append(tuple(vec))
    return True, tuple(particular), kernel, len(pivots)


@dataclass(frozen=True)
class OracleResult:
    """Ground-truth verdict for one instance."""

    solvable: bool
    particular: Optional[Matrix]
    kernel_basis: tuple
    real_dimension: int
    system: RealLinearSystem

    def contains(self, x: Matrix) -> bool:
        """Whether x lies in the oracle's full solution set (exact)."""
        return self.system.apply(x) == self.system.rhs

    def kernel_contains(self, x: Matrix) -> bool:
        return not any(self.system.apply(x))


def oracle_solve(sign: str, a: Matrix, b: Matrix, c: Matrix) -> OracleResult:
    """Exact verdict, particular solution (free variables zero), kernel basis."""
    system = linearize(sign, a, b, c)
    consistent, part_vec, kernel_vecs, rank = _solve_rational(system.matrix, system.rhs)
    if not consistent:
        return OracleResult(False, None, (), len(system.col_index) - rank, system)
    part = system.matrix_from_coords(part_vec)
    kernel = tuple(system.matrix_from_coords(v) for v in kernel_vecs)
    return OracleResult(True, part, kernel, len(kernel), system)


@dataclass(frozen=True)
class OracleAgreement:
    """Cross-check of a closed-form family against the oracle's solution set."""

    x0_ok: bool
    kernel_fixed_ok: bool
    homogeneous_in_kernel_ok: bool
    trials: int
    witnesses: tuple

    @property
    def ok(self) -> bool:
        return self.x0_ok and self.kernel_fixed_ok and self.homogeneous_in_kernel_ok

    def as_dict(self) -> dict:
        return {"x0_in_oracle_set": self.x0_ok,
                "kernel_elements_fixed": self.kernel_fixed_ok,
                "homogeneous_images_in_kernel": self.homogeneous_in_kernel_ok,
                "trials": self.trials,
                "witnesses": list(self.witnesses)}


def verify_family_against_oracle(fam: SolutionFamily, oracle: OracleResult,
                                 trials: int = 5) -> OracleAgreement:
    """Check the family's three completeness claims against the oracle.

    (i) x0 satisfies the linear system; (ii) seeded homogeneous images lie
    in the oracle kernel; (iii) every oracle kernel basis element is a fixed
    point of the homogeneous map (so the family misses no solutions).
    """
    witnesses = []
    x0_ok = oracle.contains(fam.x0)
    if not x0_ok:
        witnesses.append("x0 does not satisfy the linearized system")

    kernel_fixed_ok = True
    for idx, h in enumerate(oracle.kernel_basis):
        if not fam.homogeneous(h).equals(h):
            kernel_fixed_ok = False
            witnesses.append(f"kernel basis element {idx} is not a fixed point")

    homogeneous_ok = True
    for t in range(trials):
        v = fam.draw_parameter(random.Random(t))
        image = fam.homogeneous(v)
        if not oracle.kernel_contains(image):
            homogeneous_ok = False
            witnesses.append(f"homogeneous image for seed {t} leaves the kernel")
    return OracleAgreement(x0_ok, kernel_fixed_ok, homogeneous_ok, trials, tuple(witnesses))


# -- generators ---------------------------------------------------------------
#
# Square pair families (all exact, all satisfying the standing hypotheses):
#   unitary   a unitary/orthogonal with rational entries, b arbitrary
#   equal     b = a
#   diagonal  commuting real/complex diagonals with support(b) inside support(a)
#   rejection bounded rejection sampling of dense pairs
PAIR_FAMILIES = ("unitary", "equal", "diagonal", "rejection")
RECT_FAMILIES = ("coisometry", "diagonal", "rejection")

# Unit-modulus Gaussian rationals (conjugate-transpose involution).
_UNIT_SCALARS = (
    GaussianRational(1), GaussianRational(-1),
    GaussianRational(0, 1), GaussianRational(0, -1),
    GaussianRational(Fraction(3, 5), Fraction(4, 5)),
    GaussianRational(Fraction(3, 5), Fraction(-4, 5)),
    GaussianRational(Fraction(4, 5), Fraction(3, 5)),
    GaussianRational(Fraction(5, 13), Fraction(12, 13)),
    GaussianRational(Fraction(12, 13), Fraction(-5, 13)),
    GaussianRational(Fraction(8, 17), Fraction(15, 17)),
)

# (s, c, h): exact rational cosine/sine pairs s/h, c/h for rotation blocks.
_PYTHAGOREAN = ((3, 4, 5), (5, 12, 13), (8, 15, 17), (20, 21, 29))


def random_signed_permutation(rng: random.Random, size: int,
                              involution: str = CONJUGATE_TRANSPOSE) -> Matrix:
    perm = list(range(size))
    rng.shuffle(perm)
    grid = [[GaussianRational(0)] * size for _ in range(size)]
    for i, j in enumerate(perm):
        grid[i][j] = GaussianRational(rng.choice((1, -1)))
    return Matrix.exact(grid, involution)


def random_unitary(rng: random.Random, size: int,
                   involution: str = CONJUGATE_TRANSPOSE) -> Matrix:
    """Exact unitary (orthogonal under transpose involution) rational matrix."""
    u = random_signed_permutation(rng, size, involution)
    if involution == CONJUGATE_TRANSPOSE:
        diag = Matrix.exact([[rng.choice(_UNIT_SCALARS) if i == j else 0
                              for j in range(size)] for i in range(size)])
        u = diag @ u
    for _ in range(rng.randint(0, 2)):
        if size < 2:
            break
        i, j = rng.sample(range(size), 2)
        s, c, h = rng.choice(_PYTHAGOREAN)
        cos, sin = Fraction(c, h), Fraction(s, h)
        grid = [[GaussianRational(1) if r == q else GaussianRational(0)
                 for q in range(size)] for r in range(size)]
        grid[i][i] = GaussianRational(cos)
        grid[j][j] = GaussianRational(cos)
        grid[i][j] = GaussianRational(-sin)
        grid[j][i] = GaussianRational(sin)
        u = Matrix.exact(grid, involution) @ u
    return u


def random_coisometry(rng: random.Random, rows: int, cols: int,
                      involution: str = CONJUGATE_TRANSPOSE) -> Matrix:
    """rows x cols exact matrix with A A* = identity (requires cols >= rows)."""
    if cols < rows:
        raise ValueError("a coisometry needs at least as many columns as rows")
    return random_unitary(rng, cols, involution).block(0, 0, rows, cols)


def _random_diagonal_support(rng: random.Random, size: int, involution: str):
    support = [i for i in range(size) if rng.random() < 0.75]
    grid = [[GaussianRational(0)] * size for _ in range(size)]
    for i in support:
        re = random_rational(rng)
        im = random_rational(rng) if involution == CONJUGATE_TRANSPOSE else 0
        entry = GaussianRational(re, im)
        grid[i][i] = entry if entry else GaussianRational(1)
    return Matrix.exact(grid, involution), support


def random_pair(rng: random.Random, size: int, family: str,
                involution: str = CONJUGATE_TRANSPOSE):
    """A square (a, b) satisfying the range and hermitian conditions."""
    if family == "unitary":
        return random_unitary(rng, size, involution), random_matrix(rng, size, size, EXACT, involution)
    if family == "equal":
        a = random_matrix(rng, size, size, EXACT, involution)
        return a, a
    if family == "diagonal":
        a, support = _random_diagonal_support(rng, size, involution)
        grid = [[GaussianRational(0)] * size for _ in range(size)]
        for i in support:
            if rng.random() < 0.8:
                re = random_rational(rng)
                im = random_rational(rng) if involution == CONJUGATE_TRANSPOSE else 0
                grid[i][i] = GaussianRational(re, im)
        return a, Matrix.exact(grid, involution)
    if family == "rejection":
        ring = MatrixRing(size, EXACT, involution)
        for _ in range(_MAX_TRIES):
            a = random_matrix(rng, size, size, EXACT, involution)
            b = random_matrix(rng, size, size, EXACT, involution)
            if check_hypotheses(ring, a, b).ok:
                return a, b
        raise GenerationError(
            f"no hypothesis-satisfying pair in {_MAX_TRIES} draws at size {size}")
    raise ValueError(f"unknown pair family {family!r}; choose from {PAIR_FAMILIES}")


def random_square_instance(rng: random.Random, sign: str, size: int, family: str,
                           force_solvable: bool = True,
                           involution: str = CONJUGATE_TRANSPOSE):
    """(a, b, c) with the hypotheses holding; c forced solvable or random
    with the matching symmetry (so the interesting condition stays in play)."""
    _check_sign(sign)
    a, b = random_pair(rng, size, family, involution)
    if force_solvable:
        x_hat = random_matrix(rng, size, size, EXACT, involution)
        c = _map_value(sign, a, b, x_hat)
    else:
        h = random_matrix(rng, size, size, EXACT, involution)
        c = h.sub(h.star()) if sign == MINUS else h.add(h.star())
    return a, b, c


def random_sym_instance(rng: random.Random, side: str, size: int,
                        force_solvable: bool = True,
                        involution: str = CONJUGATE_TRANSPOSE):
    """(a, b) for x a* + a x* = b ("right") or a* x + x* a = b ("left").

    An invertible a makes every symmetric b solvable (the squeezed
    projection condition is vacuous), so a is drawn rank-deficient most of
    the time: a zeroed row starves the column space (right side), a zeroed
    column the row space (left side).
    """
    if side not in ("right", "left"):
        raise ValueError("side must be 'right' or 'left'")
    a = random_matrix(rng, size, size, EXACT, involution)
    if size > 1 and rng.random() < 0.6:
        kill = rng.randrange(size)
        zero_line = Matrix.zeros(1, size, involution, EXACT)
        if side == "right":
            a = a.paste(kill, 0, zero_line)
        else:
            a = a.paste(0, kill, zero_line.star())
    if force_solvable:
        x_hat = random_matrix(rng, size, size, EXACT, involution)
        if side == "right":
            b = (x_hat @ a.star()).add(a @ x_hat.star())
        else:
            b = (a.star() @ x_hat).add(x_hat.star() @ a)
    elif rng.random() < 0.25:
        b = random_matrix(rng, size, size, EXACT, involution)
    else:
        h = random_matrix(rng, size, size, EXACT, involution)
        b = h.add(h.star())
    return a, b


def random_rect_pair(rng: random.Random, dims, family: str,
                     involution: str = CONJUGATE_TRANSPOSE):
    """Rectangular (A: m x n, B: m x p) satisfying the standing hypotheses."""
    m, n, p = dims
    if family == "coisometry":
        if n < m:
            raise ValueError("coisometry family needs n >= m")
        return (random_coisometry(rng, m, n, involution),
                random_matrix(rng, m, p, EXACT, involution))
    if family == "diagonal":
        rank_cap = min(m, n)
        support = [i for i in range(rank_cap) if rng.random() < 0.75]
        a_grid = [[GaussianRational(0)] * n for _ in range(m)]
        for i in support:
            a_grid[i][i] = GaussianRational(random_rational(rng)) or GaussianRational(1)
        b_grid = [[GaussianRational(0)] * p for _ in range(m)]
        for i in support:
            if i < p and rng.random() < 0.8:
                b_grid[i][i] = GaussianRational(random_rational(rng))
        a = Matrix.exact(a_grid, involution)
        b = Matrix.exact(b_grid, involution)
        u = random_unitary(rng, m, involution)
        v = random_unitary(rng, n, involution)
        w = random_unitary(rng, p, involution)
        return u @ a @ v, u @ b @ w
    if family == "rejection":
        # Dense draws only pass when both A and B have full row rank (so
        # n >= m and p >= m); at other dims the bounded sampler exhausts.
        for _ in range(_MAX_TRIES):
            a = random_matrix(rng, m, n, EXACT, involution)
            b = random_matrix(rng, m, p, EXACT, involution)
            probe = RectProblem(a, b, Matrix.zeros(m, m, involution, EXACT))
            if check_rect_hypotheses(probe).ok:
                return a, b
        raise GenerationError(
            f"no hypothesis-satisfying rectangular pair in {_MAX_TRIES} draws at dims {dims}")
    raise ValueError(f"unknown rect family {family!r}; choose from {RECT_FAMILIES}")


def random_rect_instance(rng: random.Random, dims, family: str,
                         force_solvable: bool = True,
                         involution: str = CONJUGATE_TRANSPOSE,
                         sign: str = MINUS) -> RectProblem:
    _check_sign(sign)
    m, n, p = dims
    a, b = random_rect_pair(rng, dims, family, involution)
    if force_solvable:
        x_hat = random_matrix(rng, n, p, EXACT, involution)
        c = _map_value(sign, a, b, x_hat)
    else:
        h = random_matrix(rng, m, m, EXACT, involution)
        c = h.sub(h.star()) if sign == MINUS else h.add(h.star())
    return RectProblem(a, b, c)
