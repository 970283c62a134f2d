"""Exact rational linear algebra: row reduction, determinants, projections, matrix files."""

import csv
import io
import logging
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

from models import (
    CertificateError,
    DimensionError,
    MatrixFormatError,
    RatMatrix,
    Rational,
    Vector,
    as_vector,
    format_rational,
    format_vector,
    to_rational,
)

__all__ = [
    "Rational",
    "RatMatrix",
    "to_rational",
    "format_rational",
    "format_vector",
    "dot",
    "rref",
    "rank",
    "determinant",
    "row_space_basis",
    "in_span",
    "solve",
    "project_onto_complement",
    "parse_matrix_csv",
    "read_matrix",
    "read_vector",
    "matrix_to_csv",
]

logger = logging.getLogger(__name__)

ZERO = Fraction(0)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise DimensionError(f"Cannot take dot product of lengths {len(u)} and {len(v)}")
    return sum((a * b for a, b in zip(u, v)), ZERO)


def _reduce_rows(rows: List[List[Fraction]], width: int) -> List[int]:
    """Bring rows to reduced row echelon form in place; return the pivot columns.

    Pivot choice is partial pivoting on magnitude: the largest |entry| at or
    below the current pivot row, lowest row index on ties.
    """
    pivots: List[int] = []
    piv_r = 0
    n_rows = len(rows)
    for piv_c in range(width):
        if piv_r == n_rows:
            break
        # Find the pivot row
        best = None
        for i in range(piv_r, n_rows):
            value = rows[i][piv_c]
            if value != 0 and (best is None or abs(value) > abs(rows[best][piv_c])):
                best = i
        if best is None:
            continue
        if best != piv_r:
            rows[piv_r], rows[best] = rows[best], rows[piv_r]
        # Normalize it and clear the column above and below
        fp = rows[piv_r][piv_c]
        if fp != 1:
            rows[piv_r] = [a / fp for a in rows[piv_r]]
        pivot_row = rows[piv_r]
        for r in range(n_rows):
            if r == piv_r:
                continue
            fr = rows[r][piv_c]
            if fr == 0:
                continue
            rows[r] = [a - fr * p for a, p in zip(rows[r], pivot_row)]
        pivots.append(piv_c)
        piv_r += 1
    return pivots


def rref(M: RatMatrix) -> Tuple[RatMatrix, List[int], int]:
    """Return (reduced row echelon form, pivot columns, rank), computed exactly."""
    rows = M.as_lists()
    pivots = _reduce_rows(rows, M.cols)
    return RatMatrix.from_rows(rows), pivots, len(pivots)


def rank(M: Union[RatMatrix, Sequence[Sequence[Fraction]]]) -> int:
    if isinstance(M, RatMatrix):
        return rref(M)[2]
    rows = [list(as_vector(r)) for r in M]
    if not rows:
        return 0
    return len(_reduce_rows(rows, len(rows[0])))


def determinant(M: RatMatrix) -> Fraction:
    """Exact determinant by rational Gaussian elimination."""
    if not M.is_square:
        raise DimensionError(f"Determinant needs a square matrix, got {M.rows}x{M.cols}")
    rows = M.as_lists()
    size = M.rows
    det = Fraction(1)
    for c in range(size):
        best = None
        for i in range(c, size):
            if rows[i][c] != 0 and (best is None or abs(rows[i][c]) > abs(rows[best][c])):
                best = i
        if best is None:
            return ZERO
        if best != c:
            rows[c], rows[best] = rows[best], rows[c]
            det = -det
        fp = rows[c][c]
        det *= fp
        # Eliminate below the diagonal
        for r in range(c + 1, size):
            fr = rows[r][c]
            if fr == 0:
                continue
            frp = fr / fp
            rows[r] = [a - frp * p for a, p in zip(rows[r], rows[c])]
    return det


def row_space_basis(vectors: Sequence[Sequence[Fraction]]) -> List[Vector]:
    """A basis (the nonzero rref rows) of span(vectors); empty for an empty or zero list."""
    if not vectors:
        return []
    width = len(vectors[0])
    if any(len(v) != width for v in vectors):
        raise DimensionError("Spanning vectors have different lengths")
    rows = [list(as_vector(v)) for v in vectors]
    pivots = _reduce_rows(rows, width)
    return [tuple(rows[i]) for i in range(len(pivots))]


def in_span(vectors: Sequence[Sequence[Fraction]], x: Sequence[Fraction]) -> bool:
    """True if x lies in span(vectors), decided by rank non-increase."""
    if not any(a != 0 for a in x):
        return True
    if not vectors:
        return False
    return rank(list(vectors)) == rank(list(vectors) + [x])


def solve(M: Union[RatMatrix, Sequence[Sequence[Fraction]]], rhs: Sequence[Fraction]) -> Optional[Vector]:
    """Return one exact solution z of M z = rhs (free variables set to 0), or None."""
    rows_in = M.as_lists() if isinstance(M, RatMatrix) else [list(as_vector(r)) for r in M]
    if len(rows_in) != len(rhs):
        raise DimensionError(f"{len(rows_in)} equations but {len(rhs)} right-hand sides")
    width = len(rows_in[0])
    # Reduce the augmented matrix; a pivot in the last column means no solution
    rows = [row + [to_rational(b)] for row, b in zip(rows_in, rhs)]
    pivots = _reduce_rows(rows, width + 1)
    if pivots and pivots[-1] == width:
        return None
    solution = [ZERO] * width
    for r, c in enumerate(pivots):
        solution[c] = rows[r][width]
    return tuple(solution)


def project_onto_complement(vectors: Sequence[Sequence[Fraction]], x: Sequence[Fraction]) -> Vector:
    """Orthogonal projection of x onto the complement of span(vectors).

    Solves the normal equations (B B^T) c = B x on a basis B of the span and
    returns x - B^T c; both defining properties are re-checked exactly.
    """
    x = as_vector(x)
    for v in vectors:
        if len(v) != len(x):
            raise DimensionError(f"Spanning vector of length {len(v)} for a point of length {len(x)}")
    basis = row_space_basis(vectors)
    if not basis:
        return x
    # Normal equations on the basis
    gram = [[dot(u, v) for v in basis] for u in basis]
    coeffs = solve(gram, [dot(u, x) for u in basis])
    if coeffs is None:
        raise CertificateError("Gram matrix of a basis turned out singular")
    shadow = tuple(sum((c * u[k] for c, u in zip(coeffs, basis)), ZERO) for k in range(len(x)))
    result = tuple(a - s for a, s in zip(x, shadow))
    # Check both defining properties
    if any(dot(result, as_vector(v)) != 0 for v in vectors) or not in_span(basis, shadow):
        logger.error(f"Projection of {format_vector(x)} failed its exact check")
        raise CertificateError("Projection is not orthogonal to the spanning vectors")
    return result


def parse_matrix_csv(text: str) -> RatMatrix:
    """Parse the CSV matrix format: one scenario per row, '#' lines are comments."""
    lines = [line for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    rows: List[List[Fraction]] = []
    for number, cells in enumerate(csv.reader(io.StringIO("\n".join(lines))), start=1):
        cells = [c.strip() for c in cells]
        # blank lines were dropped above, so an empty cell is a missing entry
        if not all(cells):
            raise MatrixFormatError(f"Row {number} has an empty entry")
        rows.append([to_rational(c) for c in cells])
    if not rows:
        raise MatrixFormatError("Matrix file contains no rows")
    width = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != width:
            raise MatrixFormatError(f"Row {i + 1} has {len(row)} entries, expected {width}")
    return RatMatrix.from_rows(rows)


def read_matrix(path: Union[str, Path]) -> RatMatrix:
    with open(path, "r", encoding="utf-8") as f:
        return parse_matrix_csv(f.read())


def read_vector(path: Union[str, Path]) -> Vector:
    """Read a vector stored as a single CSV row or a single column."""
    matrix = read_matrix(path)
    if matrix.rows == 1:
        return matrix.row(0)
    if matrix.cols == 1:
        return matrix.column(0)
    raise MatrixFormatError(f"Expected a single row or column, got a {matrix.rows}x{matrix.cols} matrix")


def matrix_to_csv(M: RatMatrix) -> str:
    return "\n".join(",".join(row) for row in M.to_strings()) + "\n"
