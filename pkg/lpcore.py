"""Farkas' Lemma as a certificate-producing oracle, via an exact phase-I simplex."""

import logging
from fractions import Fraction
from math import comb
from typing import List, Optional, Sequence

from models import (
    CertificateError,
    DimensionError,
    FarkasOutcome,
    RatMatrix,
    Vector,
    as_vector,
    format_vector,
)

ZERO = Fraction(0)
ONE = Fraction(1)


def pivot_bound(m: int, n: int) -> int:
    """Upper bound on phase-I pivots: the number of candidate bases C(n+m, m)."""
    return comb(n + m, m)


class PhaseOneTableau:
    """Dense phase-I tableau for {x >= 0 : A x = b} with one artificial per row.

    Rows with negative b are negated first so the artificial basis starts
    feasible. The cost row holds reduced costs of min sum(artificials);
    its last entry is minus the current objective value.
    """

    def __init__(self, A: RatMatrix, b: Sequence[Fraction]):
        self.logger = logging.getLogger(__name__)
        self.m, self.n = A.shape
        self.row_signs = [-1 if bi < 0 else 1 for bi in b]
        width = self.n + self.m
        # Sign-normalized rows followed by the artificial identity block
        self.rows: List[List[Fraction]] = []
        for i in range(self.m):
            s = self.row_signs[i]
            row = [s * a for a in A.row(i)]
            row += [ONE if k == i else ZERO for k in range(self.m)]
            row.append(s * b[i])
            self.rows.append(row)
        self.basis = [self.n + i for i in range(self.m)]
        # Reduced costs of min sum(artificials) in the starting basis
        self.cost = [
            -sum((self.rows[i][j] for i in range(self.m)), ZERO) if j < self.n else ZERO
            for j in range(width)
        ]
        self.cost.append(-sum((row[-1] for row in self.rows), ZERO))
        self.pivots = 0

    @property
    def objective(self) -> Fraction:
        return -self.cost[-1]

    def _entering(self) -> Optional[int]:
        # Bland: lowest-index improving column; artificials never re-enter
        for j in range(self.n):
            if self.cost[j] < 0:
                return j
        return None

    def _leaving(self, col: int) -> Optional[int]:
        # minimum ratio, ties broken by the lowest basic-variable index
        best = None
        best_ratio = None
        for i, row in enumerate(self.rows):
            a = row[col]
            if a <= 0:
                continue
            ratio = row[-1] / a
            if (
                best is None
                or ratio < best_ratio
                or (ratio == best_ratio and self.basis[i] < self.basis[best])
            ):
                best, best_ratio = i, ratio
        return best

    def _pivot(self, r: int, c: int) -> None:
        pivot = self.rows[r][c]
        pivot_row = [a / pivot for a in self.rows[r]]
        self.rows[r] = pivot_row
        # Eliminate the entering column from the other rows and the cost row
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row[c]
            if f != 0:
                self.rows[i] = [a - f * p for a, p in zip(row, pivot_row)]
        f = self.cost[c]
        if f != 0:
            self.cost = [a - f * p for a, p in zip(self.cost, pivot_row)]
        self.basis[r] = c
        self.pivots += 1

    def solve(self) -> None:
        bound = pivot_bound(self.m, self.n)
        while True:
            col = self._entering()
            if col is None:
                return
            row = self._leaving(col)
            if row is None:
                # the phase-I objective is bounded below by zero
                raise CertificateError(f"Phase-I column {col} is unbounded")
            self.logger.debug(f"Pivot {self.pivots + 1}: x{col} enters, basis position {row} leaves")
            self._pivot(row, col)
            if self.pivots > bound:
                raise CertificateError(f"Simplex exceeded {bound} pivots; anti-cycling rule violated")

    def primal(self) -> Vector:
        x = [ZERO] * self.n
        for i, j in enumerate(self.basis):
            if j < self.n:
                x[j] = self.rows[i][-1]
        return tuple(x)

    def separator(self) -> Vector:
        """Recover y from the phase-I duals.

        The artificial columns carry reduced costs 1 - y'_i, where y' are the
        optimal duals of the sign-normalized system; y = -R y' undoes the row
        negation and flips the sign so that y^T A >= 0 and y^T b < 0.
        """
        duals = [ONE - self.cost[self.n + i] for i in range(self.m)]
        return tuple(-s * d for s, d in zip(self.row_signs, duals))


def farkas(A: RatMatrix, b: Sequence[Fraction]) -> FarkasOutcome:
    """Decide which alternative of Farkas' Lemma holds for (A, b), with a certificate.

    Returns either x >= 0 with A x = b, or y with y^T A >= 0 and y^T b < 0.
    The returned certificate has been re-verified exactly.
    """
    b = as_vector(b)
    if len(b) != A.rows:
        raise DimensionError(f"Target of length {len(b)} for a matrix with {A.rows} rows")
    logger = logging.getLogger(__name__)
    # b = 0 is the zero combination
    if not any(b):
        outcome = FarkasOutcome.combination((ZERO,) * A.cols)
        return outcome

    tableau = PhaseOneTableau(A, b)
    tableau.solve()
    # A zero phase-I optimum means b is in the cone
    if tableau.objective == 0:
        outcome = FarkasOutcome.combination(tableau.primal(), pivots=tableau.pivots)
    else:
        outcome = FarkasOutcome.separator(tableau.separator(), pivots=tableau.pivots)

    # Re-verify before returning
    if not verify_outcome(A, b, outcome):
        logger.error(f"Farkas certificate failed verification: {outcome.tag.value} {format_vector(outcome.certificate)}")
        raise CertificateError(f"Farkas {outcome.tag.value} certificate does not verify")
    logger.debug(f"farkas {A.rows}x{A.cols}: {outcome.tag.value} after {tableau.pivots} pivots")
    return outcome


def verify_outcome(A: RatMatrix, b: Sequence[Fraction], outcome: FarkasOutcome) -> bool:
    """Re-check a Farkas certificate exactly."""
    b = as_vector(b)
    if len(b) != A.rows:
        return False
    if outcome.is_combination:
        x = outcome.x
        if x is None or len(x) != A.cols:
            return False
        return all(v >= 0 for v in x) and A.mat_vec(x) == b
    y = outcome.y
    if y is None or len(y) != A.rows:
        return False
    if any(v < 0 for v in A.vec_mat(y)):
        return False
    return sum((yi * bi for yi, bi in zip(y, b)), ZERO) < 0
