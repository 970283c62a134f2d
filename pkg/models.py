"""Data models shared across the arbitrage geometry modules."""

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

from typing_extensions import TypeAlias

Rational: TypeAlias = Fraction
Vector: TypeAlias = Tuple[Fraction, ...]
RationalLike: TypeAlias = Union[Fraction, int, float, str]


class ArbigeomError(Exception):
    """Base class for every error raised by the library."""


class DimensionError(ArbigeomError, ValueError):
    """Operands have incompatible shapes."""


class DomainError(ArbigeomError, ValueError):
    """An input violates a documented precondition."""


class DegenerateMarketError(DomainError):
    """Up and down factors coincide."""


class MembershipError(DomainError):
    """A point is not in the cone it was supposed to belong to."""


class CensusLimitError(DomainError):
    """An orthant census was requested beyond the configured scenario cap."""


class MatrixFormatError(DomainError):
    """Matrix text could not be parsed."""


class CertificateError(ArbigeomError):
    """A computed certificate failed its exact re-check."""


def to_rational(value: RationalLike) -> Fraction:
    """Convert a number or literal to an exact Fraction.

    Floats convert exactly through their binary expansion; strings accept
    decimal literals ("0.15", "1e-3") and fractions ("3/7").
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise DomainError(f"Boolean {value!r} is not a number")
    if isinstance(value, (int, float)):
        if isinstance(value, float) and (value != value or value in (float("inf"), float("-inf"))):
            raise DomainError(f"Non-finite value {value!r} has no rational form")
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise MatrixFormatError(f"Invalid rational literal {value!r}: {e}") from e
    # numpy scalars and other numeric types
    try:
        return Fraction(float(value))
    except (TypeError, ValueError) as e:
        raise DomainError(f"Cannot convert {value!r} to a rational: {e}") from e


def format_rational(value: Fraction) -> str:
    """Render a rational as 'p/q', or 'p' when integral."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_vector(values: Sequence[Fraction]) -> str:
    return "[" + ", ".join(format_rational(v) for v in values) + "]"


def as_vector(values: Sequence[RationalLike]) -> Vector:
    return tuple(to_rational(v) for v in values)


@dataclass(frozen=True)
class RatMatrix:
    """Immutable dense matrix of exact rationals, stored row-major."""

    entries: Tuple[Vector, ...]

    def __post_init__(self):
        rows = tuple(as_vector(row) for row in self.entries)
        if not rows or not rows[0]:
            raise DimensionError("A matrix needs at least one row and one column")
        width = len(rows[0])
        for i, row in enumerate(rows):
            if len(row) != width:
                raise DimensionError(f"Row {i} has {len(row)} entries, expected {width}")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[RationalLike]]) -> "RatMatrix":
        return cls(tuple(tuple(row) for row in rows))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[RationalLike]]) -> "RatMatrix":
        if not columns:
            raise DimensionError("A matrix needs at least one column")
        height = len(columns[0])
        if any(len(c) != height for c in columns):
            raise DimensionError("Columns have different lengths")
        return cls(tuple(tuple(col[i] for col in columns) for i in range(height)))

    @classmethod
    def identity(cls, size: int) -> "RatMatrix":
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(size)) for i in range(size)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(tuple(tuple(Fraction(0) for _ in range(cols)) for _ in range(rows)))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, index: Tuple[int, int]) -> Fraction:
        i, j = index
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> List[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def as_lists(self) -> List[List[Fraction]]:
        return [list(row) for row in self.entries]

    def transpose(self) -> "RatMatrix":
        return RatMatrix(tuple(self.columns()))

    def mat_vec(self, v: Sequence[Fraction]) -> Vector:
        """Return A v."""
        if len(v) != self.cols:
            raise DimensionError(f"Vector of length {len(v)} cannot multiply a {self.rows}x{self.cols} matrix")
        return tuple(sum((a * x for a, x in zip(row, v)), Fraction(0)) for row in self.entries)

    def vec_mat(self, y: Sequence[Fraction]) -> Vector:
        """Return y^T A."""
        if len(y) != self.rows:
            raise DimensionError(f"Vector of length {len(y)} cannot left-multiply a {self.rows}x{self.cols} matrix")
        return tuple(
            sum((y[i] * self.entries[i][j] for i in range(self.rows)), Fraction(0))
            for j in range(self.cols)
        )

    def with_row_signs(self, signs: Sequence[int]) -> "RatMatrix":
        """Return R_signs A (row i multiplied by signs[i])."""
        if len(signs) != self.rows:
            raise DimensionError(f"{len(signs)} signs given for {self.rows} rows")
        return RatMatrix(tuple(tuple(s * a for a in row) for s, row in zip(signs, self.entries)))

    def scale_columns(self, factors: Sequence[Fraction]) -> "RatMatrix":
        if len(factors) != self.cols:
            raise DimensionError(f"{len(factors)} factors given for {self.cols} columns")
        return RatMatrix(tuple(tuple(a * f for a, f in zip(row, factors)) for row in self.entries))

    def append_row(self, row: Sequence[RationalLike]) -> "RatMatrix":
        return RatMatrix(self.entries + (as_vector(row),))

    def append_column(self, column: Sequence[RationalLike]) -> "RatMatrix":
        if len(column) != self.rows:
            raise DimensionError(f"Column of length {len(column)} cannot extend {self.rows} rows")
        return RatMatrix(tuple(row + (to_rational(c),) for row, c in zip(self.entries, column)))

    def select_rows(self, indices: Sequence[int]) -> "RatMatrix":
        return RatMatrix(tuple(self.entries[i] for i in indices))

    def to_strings(self) -> List[List[str]]:
        return [[format_rational(a) for a in row] for row in self.entries]


class FarkasTag(Enum):
    """Which alternative of Farkas' Lemma holds."""
    COMBINATION = "combination"
    SEPARATOR = "separator"

    @classmethod
    def from_string(cls, value: str) -> "FarkasTag":
        value = value.lower()
        if "comb" in value:
            return cls.COMBINATION
        if "sep" in value:
            return cls.SEPARATOR
        raise DomainError(f"Unknown Farkas outcome {value!r}")


@dataclass(frozen=True)
class FarkasOutcome:
    """Certificate for Farkas' alternative: x >= 0 with Ax = b, or y with y^T A >= 0, y^T b < 0."""

    tag: FarkasTag
    x: Optional[Vector] = None
    y: Optional[Vector] = None
    pivots: int = 0

    @classmethod
    def combination(cls, x: Sequence[Fraction], pivots: int = 0) -> "FarkasOutcome":
        return cls(FarkasTag.COMBINATION, x=tuple(x), pivots=pivots)

    @classmethod
    def separator(cls, y: Sequence[Fraction], pivots: int = 0) -> "FarkasOutcome":
        return cls(FarkasTag.SEPARATOR, y=tuple(y), pivots=pivots)

    @property
    def is_combination(self) -> bool:
        return self.tag is FarkasTag.COMBINATION

    @property
    def certificate(self) -> Vector:
        return self.x if self.is_combination else self.y  # type: ignore[return-value]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "outcome": self.tag.value,
            "x": [format_rational(v) for v in self.x] if self.x is not None else None,
            "y": [format_rational(v) for v in self.y] if self.y is not None else None,
            "pivots": self.pivots,
        }


class VerdictTag(Enum):
    """Arbitrage Theorem alternatives."""
    ARBITRAGE = "arbitrage"
    NO_ARBITRAGE = "no_arbitrage"

    @classmethod
    def from_string(cls, value: str) -> "VerdictTag":
        value = value.lower().replace("-", "_").replace(" ", "_")
        if value in ("no_arbitrage", "noarbitrage"):
            return cls.NO_ARBITRAGE
        if value == "arbitrage":
            return cls.ARBITRAGE
        raise DomainError(f"Unknown verdict {value!r}")


@dataclass(frozen=True)
class ArbitrageVerdict:
    """Either an arbitrage portfolio v (A v >= 1) or a state-price vector pi."""

    tag: VerdictTag
    portfolio: Optional[Vector] = None
    state_prices: Optional[Vector] = None

    @property
    def is_arbitrage(self) -> bool:
        return self.tag is VerdictTag.ARBITRAGE

    @property
    def certificate(self) -> Vector:
        return self.portfolio if self.is_arbitrage else self.state_prices  # type: ignore[return-value]

    def describe(self) -> str:
        if self.is_arbitrage:
            return f"ARBITRAGE v={format_vector(self.certificate)}"
        return f"NO ARBITRAGE pi={format_vector(self.certificate)}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "verdict": self.tag.value,
            "portfolio": [format_rational(v) for v in self.portfolio] if self.portfolio is not None else None,
            "state_prices": [format_rational(v) for v in self.state_prices] if self.state_prices is not None else None,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ArbitrageVerdict":
        return cls(
            tag=VerdictTag.from_string(data["verdict"]),
            portfolio=as_vector(data["portfolio"]) if data.get("portfolio") is not None else None,
            state_prices=as_vector(data["state_prices"]) if data.get("state_prices") is not None else None,
        )


@dataclass(frozen=True)
class PayoffMatrix:
    """Present-value returns: rows are scenarios, columns are investments."""

    A: RatMatrix

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[RationalLike]]) -> "PayoffMatrix":
        return cls(RatMatrix.from_rows(rows))

    @property
    def m(self) -> int:
        return self.A.rows

    @property
    def n(self) -> int:
        return self.A.cols

    def reflect(self, delta: "SignVector") -> "PayoffMatrix":
        """Return R_delta A, the matrix with row i multiplied by delta_i."""
        if len(delta) != self.m:
            raise DimensionError(f"Sign vector of length {len(delta)} for {self.m} scenarios")
        return PayoffMatrix(self.A.with_row_signs(delta.signs))

    def integral_columns(self) -> "PayoffMatrix":
        """Rescale every column by a positive integer so all entries are integers.

        Positive column scaling describes the same investments, so the
        verdict tag and every orthant hit are unchanged.
        """
        factors = []
        for column in self.A.columns():
            lcm = 1
            for a in column:
                d = a.denominator
                lcm = lcm * d // math.gcd(lcm, d)
            factors.append(Fraction(lcm))
        return PayoffMatrix(self.A.scale_columns(factors))


@dataclass(frozen=True)
class SignVector:
    """An element of {+1,-1}^m naming the open orthant where coordinate i has sign signs[i]."""

    signs: Tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        signs = tuple(int(s) for s in self.signs)
        if not signs:
            raise DimensionError("A sign vector needs at least one coordinate")
        if any(s not in (1, -1) for s in signs):
            raise DomainError(f"Sign vector entries must be +1 or -1, got {signs}")
        object.__setattr__(self, "signs", signs)

    @classmethod
    def positive(cls, m: int) -> "SignVector":
        return cls((1,) * m)

    @classmethod
    def from_string(cls, value: str) -> "SignVector":
        """Parse '+-+' or '1,-1,1'."""
        value = value.strip()
        mapping = {"+": 1, "-": -1}
        try:
            if "," in value:
                return cls(tuple(int(part) for part in value.split(",")))
            return cls(tuple(mapping[ch] for ch in value))
        except (KeyError, ValueError) as e:
            raise DomainError(f"Invalid sign vector {value!r}") from e

    @classmethod
    def all_vectors(cls, m: int) -> Iterator["SignVector"]:
        """Every sign vector of length m, in lexicographic order with + before -."""
        for signs in itertools.product((1, -1), repeat=m):
            yield cls(signs)

    @classmethod
    def half_vectors(cls, m: int) -> Iterator["SignVector"]:
        """Sign vectors whose first coordinate is +1 (one per antipodal pair)."""
        for rest in itertools.product((1, -1), repeat=m - 1):
            yield cls((1,) + rest)

    def __len__(self) -> int:
        return len(self.signs)

    def __iter__(self) -> Iterator[int]:
        return iter(self.signs)

    def __mul__(self, other: "SignVector") -> "SignVector":
        if len(other) != len(self):
            raise DimensionError("Sign vectors of different lengths")
        return SignVector(tuple(a * b for a, b in zip(self.signs, other.signs)))

    def __neg__(self) -> "SignVector":
        return SignVector(tuple(-s for s in self.signs))

    def contains(self, point: Sequence[Fraction]) -> bool:
        """True if the point lies in the open orthant."""
        return len(point) == len(self) and all(s * p > 0 for s, p in zip(self.signs, point))

    def __str__(self) -> str:
        return "".join("+" if s > 0 else "-" for s in self.signs)
