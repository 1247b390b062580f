"""Rectangular A X B* - B X* A* = C via embedding into a square matrix ring.

With A: m x n, B: m x p, C: m x m over a common backend/involution, the
triple embeds into the order-k ring, k = m + n + p, as

    a = [0 A 0; 0 0 0; 0 0 0],  b = [0 0 B; 0 0 0; 0 0 0],
    c = [C 0 0; 0 0 0; 0 0 0],

block rows/columns sized (m, n, p).  The square equation a x b* - b x* a* = c
holds iff the (2,3) block X of x solves the rectangular equation, and the
square solver's formulas evaluate verbatim on the rectangular operands
(every product conforms), which is how :func:`solve_rect` computes directly.

Note the shape normalization: B must be m x p for A X B* to exist; the
p x m convention seen elsewhere refers to B*.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

from .matrix import Matrix, MatrixRing, mp_inverse, random_matrix
from .solvers import (MINUS, HypothesesFailError, HypothesisReport, SolutionFamily,
                      UnsolvableError, particular, phi, solvability_conditions, _tol_for)

Dims = Tuple[int, int, int]


@dataclass(frozen=True)
class RectProblem:
    """Operands of A X B* - B X* A* = C with A: m x n, B: m x p, C: m x m."""

    a: Matrix
    b: Matrix
    c: Matrix

    def __post_init__(self):
        for other in (self.b, self.c):
            self.a._check_tags(other)
        m = self.a.rows
        if self.b.rows != m or self.c.shape != (m, m):
            raise ValueError(
                f"need A: m x n, B: m x p, C: m x m; got {self.a.shape}, "
                f"{self.b.shape}, {self.c.shape}")
        if m < 1 or self.a.cols < 1 or self.b.cols < 1:
            raise ValueError("all of m, n, p must be at least 1")

    @property
    def dims(self) -> Dims:
        return (self.a.rows, self.a.cols, self.b.cols)

    @property
    def backend(self) -> str:
        return self.a.backend

    @property
    def involution(self) -> str:
        return self.a.involution

    def to_float(self) -> "RectProblem":
        return RectProblem(self.a.to_float(), self.b.to_float(), self.c.to_float())


@dataclass(frozen=True)
class EmbeddedTriple:
    """The square images a, b, c of a RectProblem, with the block sizes."""

    a: Matrix
    b: Matrix
    c: Matrix
    dims: Dims

    @property
    def k(self) -> int:
        return sum(self.dims)

    def ring(self) -> MatrixRing:
        return MatrixRing(self.k, self.a.backend, self.a.involution)


def embed(problem: RectProblem) -> EmbeddedTriple:
    """Place A at block (1,2), B at block (1,3), C at block (1,1)."""
    m, n, p = problem.dims
    k = m + n + p
    base = Matrix.zeros(k, k, problem.involution, problem.backend)
    a = base.paste(0, m, problem.a)
    b = base.paste(0, m + n, problem.b)
    c = base.paste(0, 0, problem.c)
    return EmbeddedTriple(a, b, c, problem.dims)


def embed_mp(a_dagger: Matrix, b_dagger: Matrix, dims: Dims) -> Tuple[Matrix, Matrix]:
    """Embedded MP-inverses: A-dagger at block (2,1), B-dagger at block (3,1).

    These satisfy the Penrose equations against the embedded a and b.
    """
    m, n, p = dims
    if a_dagger.shape != (n, m) or b_dagger.shape != (p, m):
        raise ValueError(
            f"expected A-dagger {n}x{m} and B-dagger {p}x{m}; got "
            f"{a_dagger.shape}, {b_dagger.shape}")
    k = m + n + p
    base = Matrix.zeros(k, k, a_dagger.involution, a_dagger.backend)
    return base.paste(m, 0, a_dagger), base.paste(m + n, 0, b_dagger)


def extract_solution(x: Matrix, dims: Dims) -> Matrix:
    """The (2,3) block of a square solution: the rectangular X (n x p)."""
    m, n, p = dims
    if x.shape != (m + n + p, m + n + p):
        raise ValueError(f"expected a {m + n + p}-square matrix, got {x.shape}")
    return x.block(m, m + n, n, p)


def embed_solution(x: Matrix, dims: Dims) -> Matrix:
    """The canonical square solution carrying X in block (2,3), zeros elsewhere."""
    m, n, p = dims
    if x.shape != (n, p):
        raise ValueError(f"expected X of shape {n}x{p}, got {x.shape}")
    k = m + n + p
    return Matrix.zeros(k, k, x.involution, x.backend).paste(m, m + n, x)


def check_rect_hypotheses(problem: RectProblem, rtol: Optional[float] = None,
                          mp: Optional[Callable[[Matrix], Matrix]] = None) -> HypothesisReport:
    """Range and hermitian conditions for the rectangular pair (A, B).

    The report's ring is the order-k square ring the problem embeds into;
    it supplies the operations while the stored elements stay rectangular,
    so the square solver's formula evaluators apply unchanged.
    """
    m, n, p = problem.dims
    ops = MatrixRing(m + n + p, problem.backend, problem.involution)
    mp_fn = mp if mp is not None else mp_inverse
    a, b = problem.a, problem.b
    a_dagger = mp_fn(a)
    b_dagger = mp_fn(b)
    tol = _tol_for(ops, rtol, a, b, a_dagger, b_dagger)

    range_defect = (a @ a_dagger @ b).sub(b)
    h = a_dagger @ b @ b_dagger @ a
    hermitian_defect = h.star().sub(h)

    e_b = Matrix.identity(m, problem.involution, problem.backend).sub(b @ b_dagger)
    d = e_b @ a
    d_dagger = a_dagger @ e_b
    return HypothesisReport(ops, a, b, a_dagger, b_dagger, d, d_dagger,
                            range_defect.is_zero(tol), hermitian_defect.is_zero(tol),
                            range_defect, hermitian_defect, tol)


class RectSolutionFamily(SolutionFamily):
    """Solution family of the rectangular equation; parameters V are n x p."""

    def __init__(self, problem: RectProblem, sign: str, x0: Matrix,
                 homogeneous_map: Callable[[Matrix], Matrix],
                 report: HypothesisReport):
        super().__init__(report.ring, sign, problem.a, problem.b, problem.c,
                         x0, homogeneous_map, report, kind="rect")
        self.problem = problem
        self.dims = problem.dims

    def draw_parameter(self, rng: random.Random) -> Matrix:
        m, n, p = self.dims
        return random_matrix(rng, n, p, self.problem.backend, self.problem.involution)


def solve_rect(problem: RectProblem, sign: str = MINUS, rtol: Optional[float] = None,
               mp: Optional[Callable[[Matrix], Matrix]] = None) -> RectSolutionFamily:
    """Solve A X B* - B X* A* = C (or the plus variant) in rectangular shapes.

    Same contract as the square solver: HypothesesFailError when the pair
    (A, B) violates the range/hermitian conditions, UnsolvableError when C
    fails the sign's symmetry or the averaged projection identity,
    NotMpInvertibleError propagated from the MP-inverses.
    """
    report = check_rect_hypotheses(problem, rtol, mp)
    if not report.ok:
        raise HypothesesFailError(report)
    conditions = solvability_conditions(sign, report, problem.c, rtol)
    if not all(cond.ok for cond in conditions):
        raise UnsolvableError(conditions, report)
    x0 = particular(sign, report, problem.c)
    return RectSolutionFamily(problem, sign, x0, lambda v: phi(sign, report, v), report)


def solve_rect_via_embedding(problem: RectProblem, sign: str = MINUS,
                             rtol: Optional[float] = None):
    """Cross-check route: embed, solve in the square ring, keep the square family.

    Returns (square SolutionFamily, EmbeddedTriple); extract_solution maps its
    members to rectangular solutions.  Raises exactly as solve_rect does.
    """
    from .solvers import solve

    triple = embed(problem)
    fam = solve(triple.ring(), sign, triple.a, triple.b, triple.c, rtol)
    return fam, triple
