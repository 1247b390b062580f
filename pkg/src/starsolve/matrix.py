"""Dense matrices over Gaussian rationals or complex floats, with involution.

This is the shipped realization of the star-ring contract: square matrices
under conjugate-transpose or plain-transpose involution, together with the
rank-factorization route to the Moore-Penrose inverse.  Rectangular matrices
use the same type; only :class:`MatrixRing` insists on squareness.

Plain-transpose matrices are restricted to real entries at construction so
that the Gram matrices appearing in the MP-inverse are always invertible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .ring import NotMpInvertibleError, StarRing
from .scalars import GR_HALF, GR_ONE, GR_ZERO, GaussianRational, finite_complex

EXACT = "exact"
FLOAT = "float"
BACKENDS = (EXACT, FLOAT)

CONJUGATE_TRANSPOSE = "conjugate_transpose"
TRANSPOSE = "transpose"
INVOLUTIONS = (CONJUGATE_TRANSPOSE, TRANSPOSE)

# Default tolerance policies on the float backend.  Everything exact compares
# structurally; these never apply there.
EQUALS_RTOL = 1e-10          # default entrywise equality: tol = EQUALS_RTOL * (1 + max abs)
PIVOT_RTOL = 1e-12           # elimination pivot threshold: PIVOT_RTOL * max abs entry
_FLOAT_REFINE_STEPS = 2      # Newton polish of the float MP-inverse


class ShapeMismatchError(ValueError):
    """Operand shapes do not conform."""


class BackendMismatchError(ValueError):
    """Operands disagree on scalar backend or involution tag."""


def _zero_scalar(backend):
    return GR_ZERO if backend == EXACT else complex(0.0)


def _one_scalar(backend):
    return GR_ONE if backend == EXACT else complex(1.0)


def _coerce_entry(value, backend):
    if backend == EXACT:
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return GaussianRational(value)
        raise TypeError(f"exact matrices take GaussianRational/int/Fraction entries, got {value!r}")
    if isinstance(value, bool):
        raise TypeError("bool is not a float matrix entry")
    if isinstance(value, (int, float, complex)):
        return finite_complex(value)
    raise TypeError(f"float matrices take int/float/complex entries, got {value!r}")


def _entry_is_real(value, backend) -> bool:
    return value.im == 0 if backend == EXACT else value.imag == 0.0


@dataclass(frozen=True)
class Matrix:
    """Immutable dense rows x cols matrix with involution and backend tags."""

    rows: int
    cols: int
    entries: tuple  # tuple of row tuples, row-major
    involution: str = CONJUGATE_TRANSPOSE
    backend: str = EXACT

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.involution not in INVOLUTIONS:
            raise ValueError(f"unknown involution {self.involution!r}")
        if self.rows < 0 or self.cols < 0:
            raise ShapeMismatchError("negative dimension")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ShapeMismatchError("entry grid does not match declared shape")
        if self.involution == TRANSPOSE:
            # Plain transpose is only a usable involution here on real matrices.
            for row in self.entries:
                for e in row:
                    if not _entry_is_real(e, self.backend):
                        raise ValueError("transpose involution requires all-real entries")

    # -- construction ---------------------------------------------------

    @classmethod
    def exact(cls, rows: Sequence[Sequence], involution: str = CONJUGATE_TRANSPOSE) -> "Matrix":
        """Exact matrix from nested sequences of GaussianRational/int/Fraction."""
        grid = tuple(tuple(_coerce_entry(e, EXACT) for e in row) for row in rows)
        nrows = len(grid)
        ncols = len(grid[0]) if nrows else 0
        return cls(nrows, ncols, grid, involution, EXACT)

    @classmethod
    def floating(cls, rows: Sequence[Sequence], involution: str = CONJUGATE_TRANSPOSE) -> "Matrix":
        """Float matrix from nested sequences of numbers; NaN/Inf rejected."""
        grid = tuple(tuple(_coerce_entry(e, FLOAT) for e in row) for row in rows)
        nrows = len(grid)
        ncols = len(grid[0]) if nrows else 0
        return cls(nrows, ncols, grid, involution, FLOAT)

    @classmethod
    def zeros(cls, rows: int, cols: int, involution: str = CONJUGATE_TRANSPOSE,
              backend: str = EXACT) -> "Matrix":
        z = _zero_scalar(backend)
        return cls(rows, cols, tuple((z,) * cols for _ in range(rows)), involution, backend)

    @classmethod
    def identity(cls, n: int, involution: str = CONJUGATE_TRANSPOSE, backend: str = EXACT) -> "Matrix":
        z, o = _zero_scalar(backend), _one_scalar(backend)
        grid = tuple(tuple(o if i == j else z for j in range(n)) for i in range(n))
        return cls(n, n, grid, involution, backend)

    # -- basics -----------------------------------------------------------

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def entry(self, i: int, j: int):
        return self.entries[i][j]

    def _like(self, grid) -> "Matrix":
        return Matrix(len(grid), len(grid[0]) if grid else 0, tuple(grid),
                      self.involution, self.backend)

    def _check_tags(self, other: "Matrix"):
        if self.backend != other.backend or self.involution != other.involution:
            raise BackendMismatchError(
                f"incompatible matrices: ({self.backend},{self.involution}) vs "
                f"({other.backend},{other.involution})")

    # -- arithmetic -------------------------------------------------------

    def add(self, other: "Matrix") -> "Matrix":
        self._check_tags(other)
        if self.shape != other.shape:
            raise ShapeMismatchError(f"add: {self.shape} vs {other.shape}")
        grid = tuple(tuple(a + b for a, b in zip(ra, rb))
                     for ra, rb in zip(self.entries, other.entries))
        return self._like(grid)

    def sub(self, other: "Matrix") -> "Matrix":
        self._check_tags(other)
        if self.shape != other.shape:
            raise ShapeMismatchError(f"sub: {self.shape} vs {other.shape}")
        grid = tuple(tuple(a - b for a, b in zip(ra, rb))
                     for ra, rb in zip(self.entries, other.entries))
        return self._like(grid)

    def neg(self) -> "Matrix":
        return self._like(tuple(tuple(-a for a in row) for row in self.entries))

    def mul(self, other: "Matrix") -> "Matrix":
        self._check_tags(other)
        if self.cols != other.rows:
            raise ShapeMismatchError(f"mul: {self.shape} @ {other.shape}")
        zero = _zero_scalar(self.backend)
        ocols = other.cols
        out = []
        for i in range(self.rows):
            lrow = self.entries[i]
            orow = [zero] * ocols
            for k in range(self.cols):
                lik = lrow[k]
                if not lik:
                    continue
                rrow = other.entries[k]
                for j in range(ocols):
                    orow[j] = orow[j] + lik * rrow[j]
            out.append(tuple(orow))
        return Matrix(self.rows, ocols, tuple(out), self.involution, self.backend)

    def star(self) -> "Matrix":
        if self.involution == CONJUGATE_TRANSPOSE:
            grid = tuple(tuple(self.entries[i][j].conjugate() for i in range(self.rows))
                         for j in range(self.cols))
        else:
            grid = tuple(tuple(self.entries[i][j] for i in range(self.rows))
                         for j in range(self.cols))
        return Matrix(self.cols, self.rows, grid, self.involution, self.backend)

    def scale(self, scalar) -> "Matrix":
        s = _coerce_entry(scalar, self.backend)
        return self._like(tuple(tuple(s * a for a in row) for row in self.entries))

    def half(self) -> "Matrix":
        """Multiply every entry by one half (the central inverse of 2)."""
        s = GR_HALF if self.backend == EXACT else 0.5
        return self._like(tuple(tuple(s * a for a in row) for row in self.entries))

    def __add__(self, other):
        return self.add(other)

    def __sub__(self, other):
        return self.sub(other)

    def __neg__(self):
        return self.neg()

    def __matmul__(self, other):
        return self.mul(other)

    # -- comparison and measures -------------------------------------------

    def max_abs(self) -> float:
        return max((abs(e) for row in self.entries for e in row), default=0.0)

    def equals(self, other: "Matrix", tol: Optional[float] = None) -> bool:
        """Entrywise equality; exact backend structural, float within ``tol``.

        ``tol`` is absolute; ``None`` selects EQUALS_RTOL * (1 + max abs of
        the operands) on the float backend and is ignored on the exact one.
        """
        self._check_tags(other)
        if self.shape != other.shape:
            raise ShapeMismatchError(f"equals: {self.shape} vs {other.shape}")
        if self.backend == EXACT:
            return self.entries == other.entries
        if tol is None:
            tol = EQUALS_RTOL * (1.0 + max(self.max_abs(), other.max_abs()))
        return all(abs(a - b) <= tol for ra, rb in zip(self.entries, other.entries)
                   for a, b in zip(ra, rb))

    def is_zero(self, tol: Optional[float] = None) -> bool:
        if self.backend == EXACT:
            return all(not e for row in self.entries for e in row)
        if tol is None:
            tol = EQUALS_RTOL * (1.0 + self.max_abs())
        return self.max_abs() <= tol

    # -- blocks and conversion ----------------------------------------------

    def block(self, row0: int, col0: int, rows: int, cols: int) -> "Matrix":
        if row0 + rows > self.rows or col0 + cols > self.cols or row0 < 0 or col0 < 0:
            raise ShapeMismatchError("block out of range")
        grid = tuple(tuple(self.entries[row0 + i][col0 + j] for j in range(cols))
                     for i in range(rows))
        return Matrix(rows, cols, grid, self.involution, self.backend)

    def paste(self, row0: int, col0: int, sub: "Matrix") -> "Matrix":
        """New matrix with ``sub`` written at offset (row0, col0)."""
        self._check_tags(sub)
        if row0 + sub.rows > self.rows or col0 + sub.cols > self.cols:
            raise ShapeMismatchError("paste out of range")
        grid = [list(row) for row in self.entries]
        for i in range(sub.rows):
            for j in range(sub.cols):
                grid[row0 + i][col0 + j] = sub.entries[i][j]
        return self._like(tuple(tuple(row) for row in grid))

    def to_float(self) -> "Matrix":
        if self.backend == FLOAT:
            return self
        grid = tuple(tuple(complex(e) for e in row) for row in self.entries)
        return Matrix(self.rows, self.cols, grid, self.involution, FLOAT)

    def __repr__(self):
        body = "; ".join(" ".join(str(e) for e in row) for row in self.entries)
        return f"Matrix[{self.rows}x{self.cols} {self.backend}/{self.involution}]({body})"


# -- elimination ----------------------------------------------------------


def _rref(m: Matrix):
    """Reduced row echelon form; returns (rows as lists, pivot column list).

    Exact backend: first-nonzero column pivoting.  Float backend: partial
    pivoting with threshold PIVOT_RTOL * max abs entry of ``m``.
    """
    work = [list(row) for row in m.entries]
    pivots = []
    if m.backend == FLOAT:
        thresh = PIVOT_RTOL * m.max_abs()
    pr = 0
    for pc in range(m.cols):
        if pr >= m.rows:
            break
        if m.backend == EXACT:
            sel = next((i for i in range(pr, m.rows) if work[i][pc]), None)
        else:
            sel = max(range(pr, m.rows), key=lambda i: abs(work[i][pc]))
            if abs(work[sel][pc]) <= thresh:
                sel = None
        if sel is None:
            continue
        work[pr], work[sel] = work[sel], work[pr]
        piv = work[pr][pc]
        work[pr] = [e / piv for e in work[pr]]
        for i in range(m.rows):
            if i == pr:
                continue
            f = work[i][pc]
            if not f:
                continue
            prow = work[pr]
            work[i] = [e - f * p for e, p in zip(work[i], prow)]
        pivots.append(pc)
        pr += 1
    return work, pivots


def rank_factorization(m: Matrix):
    """Full-rank factorization ``m = F @ G``.

    F (rows x r) collects the pivot columns of ``m``; G (r x cols) is the
    nonzero part of the reduced row echelon form; r is the rank.  Rank zero
    yields empty factors.
    """
    red, pivots = _rref(m)
    r = len(pivots)
    f_grid = tuple(tuple(m.entries[i][c] for c in pivots) for i in range(m.rows))
    g_grid = tuple(tuple(red[i]) for i in range(r))
    factor_f = Matrix(m.rows, r, f_grid, m.involution, m.backend)
    factor_g = Matrix(r, m.cols, g_grid, m.involution, m.backend)
    return factor_f, factor_g, r


def inverse(m: Matrix) -> Matrix:
    """Ordinary inverse of a square matrix; NotMpInvertibleError if singular."""
    if not m.is_square:
        raise ShapeMismatchError("inverse needs a square matrix")
    n = m.rows
    if n == 0:
        return m
    aug = [list(row) + [_one_scalar(m.backend) if i == j else _zero_scalar(m.backend)
                        for j in range(n)]
           for i, row in enumerate(m.entries)]
    if m.backend == FLOAT:
        thresh = PIVOT_RTOL * max(m.max_abs(), 1e-300)
    for col in range(n):
        if m.backend == EXACT:
            sel = next((i for i in range(col, n) if aug[i][col]), None)
        else:
            sel = max(range(col, n), key=lambda i: abs(aug[i][col]))
            if abs(aug[sel][col]) <= thresh:
                sel = None
        if sel is None:
            raise NotMpInvertibleError("singular matrix")
        aug[col], aug[sel] = aug[sel], aug[col]
        piv = aug[col][col]
        aug[col] = [e / piv for e in aug[col]]
        for i in range(n):
            if i == col:
                continue
            f = aug[i][col]
            if not f:
                continue
            prow = aug[col]
            aug[i] = [e - f * p for e, p in zip(aug[i], prow)]
    grid = tuple(tuple(row[n:]) for row in aug)
    return Matrix(n, n, grid, m.involution, m.backend)


def mp_inverse(m: Matrix) -> Matrix:
    """Moore-Penrose inverse via rank factorization.

    With ``m = F G`` of rank r, returns ``G* (G G*)^-1 (F* F)^-1 F*``.  The
    Gram matrices are positive definite for every shipped backend/involution
    combination; a singular Gram raises NotMpInvertibleError (a guard that is
    unreachable on shipped configurations).
    """
    factor_f, factor_g, r = rank_factorization(m)
    if r == 0:
        return Matrix.zeros(m.cols, m.rows, m.involution, m.backend)
    gram_g = factor_g @ factor_g.star()
    gram_f = factor_f.star() @ factor_f
    try:
        dagger = factor_g.star() @ inverse(gram_g) @ inverse(gram_f) @ factor_f.star()
    except NotMpInvertibleError:
        if m.backend == FLOAT:
            raise NotMpInvertibleError(
                "numerical rank is ambiguous at working precision; "
                "MP-inverse not computed") from None
        raise NotMpInvertibleError(
            "Gram matrix singular; no MP-inverse on this involution/scalar combination")
    if m.backend == FLOAT:
        # Newton polish: quadratically shrinks the m x m - m defects without
        # leaving the rank-factorization route.
        for _ in range(_FLOAT_REFINE_STEPS):
            dagger = dagger.add(dagger).sub(dagger @ m @ dagger)
    return dagger


# -- random draws -----------------------------------------------------------


def random_rational(rng: random.Random) -> Fraction:
    # Small values: numerators in [-9, 9], denominators in {1, 2, 3}.
    return Fraction(rng.randint(-9, 9), rng.choice((1, 2, 3)))


def random_scalar(rng: random.Random, backend: str, real_only: bool = False):
    if backend == EXACT:
        re = random_rational(rng)
        im = 0 if real_only else random_rational(rng)
        return GaussianRational(re, im)
    re = rng.uniform(-1.0, 1.0)
    im = 0.0 if real_only else rng.uniform(-1.0, 1.0)
    return complex(re, im)


def random_matrix(rng: random.Random, rows: int, cols: int,
                  backend: str = EXACT, involution: str = CONJUGATE_TRANSPOSE) -> Matrix:
    real_only = involution == TRANSPOSE
    grid = tuple(tuple(random_scalar(rng, backend, real_only) for _ in range(cols))
                 for _ in range(rows))
    return Matrix(rows, cols, grid, involution, backend)


# -- the ring -----------------------------------------------------------------


class MatrixRing(StarRing):
    """Square matrices of a fixed size as a ring with involution."""

    def __init__(self, size: int, backend: str = EXACT,
                 involution: str = CONJUGATE_TRANSPOSE):
        if size < 1:
            raise ValueError("matrix ring needs size >= 1")
        if backend not in BACKENDS:
            raise ValueError(f"unknown backend {backend!r}")
        if involution not in INVOLUTIONS:
            raise ValueError(f"unknown involution {involution!r}")
        self.size = size
        self.backend = backend
        self.involution = involution
        self._zero = Matrix.zeros(size, size, involution, backend)
        self._one = Matrix.identity(size, involution, backend)

    def __repr__(self):
        return f"MatrixRing(size={self.size}, backend={self.backend!r}, involution={self.involution!r})"

    def add(self, a: Matrix, b: Matrix) -> Matrix:
        return a.add(b)

    def negate(self, a: Matrix) -> Matrix:
        return a.neg()

    def multiply(self, a: Matrix, b: Matrix) -> Matrix:
        return a.mul(b)

    def star(self, a: Matrix) -> Matrix:
        return a.star()

    def zero(self) -> Matrix:
        return self._zero

    def one(self) -> Matrix:
        return self._one

    def half_of(self, a: Matrix) -> Matrix:
        return a.half()

    def equals(self, a: Matrix, b: Matrix, tol: Optional[float] = None) -> bool:
        return a.equals(b, tol)

    def is_zero(self, a: Matrix, tol: Optional[float] = None) -> bool:
        # Shape-agnostic on purpose: solver condition checks route defects of
        # rectangular shape through the ring that provides the operations.
        return a.is_zero(tol)

    def mp_inverse(self, a: Matrix) -> Matrix:
        return mp_inverse(a)

    def max_abs(self, a: Matrix) -> Optional[float]:
        return None if self.backend == EXACT else a.max_abs()

    def sample_element(self, rng: random.Random) -> Matrix:
        return random_matrix(rng, self.size, self.size, self.backend, self.involution)

    def element_of(self, m: Matrix) -> bool:
        return (m.rows == m.cols == self.size and m.backend == self.backend
                and m.involution == self.involution)


def ring_of(m: Matrix) -> MatrixRing:
    """The square matrix ring a given square matrix lives in."""
    if not m.is_square:
        raise ShapeMismatchError("only square matrices generate a matrix ring")
    return MatrixRing(m.rows, m.backend, m.involution)
