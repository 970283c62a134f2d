"""Polyhedral convex cones: membership, lineality space, pointedness and the pointed-slice decomposition."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from arbitrage import detect
from lpcore import farkas, verify_outcome
from models import (
    CertificateError,
    DimensionError,
    FarkasOutcome,
    MembershipError,
    PayoffMatrix,
    RatMatrix,
    Vector,
    as_vector,
    format_vector,
)
from ratmath import dot, in_span, project_onto_complement, row_space_basis, solve

ZERO = Fraction(0)

logger = logging.getLogger(__name__)


def _is_zero(v: Sequence[Fraction]) -> bool:
    return all(a == 0 for a in v)


@dataclass(frozen=True)
class Cone:
    """All nonnegative combinations of the generators a^(i) in R^m."""

    generators: Tuple[Vector, ...]

    def __post_init__(self):
        gens = tuple(as_vector(g) for g in self.generators)
        if not gens:
            raise DimensionError("A cone needs at least one generator")
        m = len(gens[0])
        if m < 1 or any(len(g) != m for g in gens):
            raise DimensionError("Cone generators must share one positive dimension")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def from_matrix(cls, A: RatMatrix) -> "Cone":
        """The cone generated by the columns of A."""
        return cls(tuple(A.columns()))

    @property
    def dimension(self) -> int:
        return len(self.generators[0])

    def matrix(self) -> RatMatrix:
        return RatMatrix.from_columns(self.generators)


@dataclass(frozen=True)
class ConeDecomposition:
    """C = (C ∩ L^perp) ⊕ L with L the lineality space."""

    generators: Tuple[Vector, ...]
    lineality_basis: Tuple[Vector, ...]
    slice_generators: Tuple[Vector, ...]

    @property
    def cone(self) -> Cone:
        return Cone(self.generators)

    @property
    def slice_cone(self) -> Cone:
        return Cone(self.slice_generators)


def member(C: Cone, b: Sequence[Fraction]) -> Tuple[bool, Optional[Vector]]:
    """Return (True, x) with x >= 0 and sum x_i a^(i) = b, or (False, None)."""
    b = as_vector(b)
    if len(b) != C.dimension:
        raise DimensionError(f"Point of length {len(b)} for a cone in dimension {C.dimension}")
    outcome = farkas(C.matrix(), b)
    if outcome.is_combination:
        return True, outcome.x
    return False, None


def _lineality_witnesses(C: Cone) -> Dict[int, Vector]:
    """Map i -> x >= 0 expressing -a^(i) for every nonzero generator whose negation lies in C."""
    witnesses: Dict[int, Vector] = {}
    for i, g in enumerate(C.generators):
        if _is_zero(g):
            continue
        inside, x = member(C, tuple(-a for a in g))
        if inside:
            witnesses[i] = x  # type: ignore[assignment]
    return witnesses


def lineality(C: Cone) -> List[Vector]:
    """A basis of L(C) = C ∩ -C: the span of the generators whose negations lie in C."""
    witnesses = _lineality_witnesses(C)
    basis = row_space_basis([C.generators[i] for i in sorted(witnesses)])
    logger.debug(f"Lineality of a {len(C.generators)}-generator cone has dimension {len(basis)}")
    return basis


def is_pointed(C: Cone) -> bool:
    """True if C contains no line through the origin."""
    return not lineality(C)


def decompose(C: Cone) -> ConeDecomposition:
    """Split C into its lineality space and the pointed slice C ∩ L^perp."""
    basis = lineality(C)
    slice_generators = tuple(project_onto_complement(basis, g) for g in C.generators)
    for g, s in zip(C.generators, slice_generators):
        if any(dot(s, u) != 0 for u in basis):
            raise CertificateError(f"Slice generator {format_vector(s)} is not orthogonal to the lineality space")
        if not in_span(basis, tuple(a - b for a, b in zip(g, s))):
            raise CertificateError(f"Generator {format_vector(g)} minus its slice part leaves the lineality space")
    if not is_pointed(Cone(slice_generators)):
        raise CertificateError("Slice of the cone is not pointed")
    return ConeDecomposition(C.generators, tuple(basis), slice_generators)


def split_point(D: ConeDecomposition, x: Sequence[Fraction]) -> Tuple[Vector, Vector]:
    """Write x in C uniquely as u + v with u in the slice and v in L."""
    x = as_vector(x)
    inside, _ = member(D.cone, x)
    if not inside:
        raise MembershipError(f"Point {format_vector(x)} is not in the cone")
    u = project_onto_complement(D.lineality_basis, x)
    v = tuple(a - b for a, b in zip(x, u))
    if not member(D.slice_cone, u)[0]:
        raise CertificateError(f"Slice part {format_vector(u)} is outside the slice cone")
    if not in_span(D.lineality_basis, v):
        raise CertificateError(f"Lineality part {format_vector(v)} is outside the lineality space")
    if dot(u, v) != 0:
        raise CertificateError("Slice and lineality parts are not orthogonal")
    return u, v


def farkas_by_arbitrage(A: RatMatrix, b: Sequence[Fraction]) -> FarkasOutcome:
    """Decide Farkas' alternative through the arbitrage detector instead of the simplex.

    Generators and b are projected onto the complement of the lineality space.
    Zero slice generators are dropped; the rest generate a pointed cone, and
    detect() on the payoff matrix [slice^T; -b~^T] either finds y with
    slice^T y > 0 and b~^T y < 0 (a separator once projected onto L^perp), or a
    probability vector (u, s) with s > 0 and sum u_i a~^(i) = s b~. The part of b
    left over in L is written with the nonnegative witnesses of the lineality
    generators.
    """
    b = as_vector(b)
    if len(b) != A.rows:
        raise DimensionError(f"Target of length {len(b)} for a matrix with {A.rows} rows")
    C = Cone.from_matrix(A)
    witnesses = _lineality_witnesses(C)
    basis = row_space_basis([C.generators[i] for i in sorted(witnesses)])
    slices = [project_onto_complement(basis, g) for g in C.generators]
    b_slice = project_onto_complement(basis, b)
    kept = [i for i, s in enumerate(slices) if not _is_zero(s)]

    x = [ZERO] * A.cols
    if not kept:
        if not _is_zero(b_slice):
            outcome = FarkasOutcome.separator(tuple(-a for a in b_slice))
            return _checked(A, b, outcome)
    else:
        rows = [slices[i] for i in kept] + [tuple(-a for a in b_slice)]
        verdict = detect(PayoffMatrix(RatMatrix.from_rows(rows)))
        if verdict.is_arbitrage:
            y = project_onto_complement(basis, verdict.portfolio)  # type: ignore[arg-type]
            return _checked(A, b, FarkasOutcome.separator(y))
        pi = verdict.state_prices
        s = pi[-1]  # type: ignore[index]
        if s <= 0:
            raise CertificateError("State-price weight on -b vanished although the slice is pointed")
        for k, i in enumerate(kept):
            x[i] = pi[k] / s  # type: ignore[index]

    residual = tuple(bj - sum((x[i] * A[j, i] for i in range(A.cols)), ZERO) for j, bj in enumerate(b))
    if not _is_zero(residual):
        line_indices = sorted(witnesses)
        coeffs = solve(RatMatrix.from_columns([C.generators[i] for i in line_indices]), residual)
        if coeffs is None:
            raise CertificateError("Residual of b does not lie in the lineality space")
        for c, i in zip(coeffs, line_indices):
            if c >= 0:
                x[i] += c
            else:
                x = [xk - c * wk for xk, wk in zip(x, witnesses[i])]
    return _checked(A, b, FarkasOutcome.combination(tuple(x)))


def _checked(A: RatMatrix, b: Vector, outcome: FarkasOutcome) -> FarkasOutcome:
    if not verify_outcome(A, b, outcome):
        logger.error(f"Arbitrage-route {outcome.tag.value} certificate failed: {format_vector(outcome.certificate)}")
        raise CertificateError(f"Farkas {outcome.tag.value} certificate does not verify")
    return outcome
