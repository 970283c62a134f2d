"""Q(m,n), genericity, and the census of orthants met by a column space."""

import itertools
import logging
from dataclasses import dataclass, field
from math import comb
from typing import Any, Dict, List, Optional, Tuple

from arbitrage import detect_in_orthant
from config import CENSUS_MAX_M
from models import CensusLimitError, CertificateError, DimensionError, DomainError, PayoffMatrix, SignVector
from ratmath import determinant, rank
from worker_pool import TrialRunner

logger = logging.getLogger(__name__)


def _check_dims(m: int, n: int) -> None:
    if m < 1 or n < 1:
        raise DomainError(f"Q(m,n) needs m, n >= 1, got ({m}, {n})")


def q(m: int, n: int) -> int:
    """Q(m,n) = 2 * sum_{k=0}^{n-1} C(m-1, k), exact."""
    _check_dims(m, n)
    return 2 * sum(comb(m - 1, k) for k in range(n))


def q_recursive(m: int, n: int) -> int:
    """Q(m,n) from Q(m,1)=2, Q(m,2)=2m, Q(m,n)=2^m for m<=n and Q(m,n)=Q(m-1,n)+Q(m-1,n-1)."""
    _check_dims(m, n)
    # fill row by row; row r holds Q(r, 1..n)
    row: List[int] = []
    for r in range(1, m + 1):
        previous = row
        row = [0] * (n + 1)
        for k in range(1, n + 1):
            if k == 1:
                row[k] = 2
            elif k == 2:
                row[k] = 2 * r
            elif r <= k:
                row[k] = 2 ** r
            else:
                row[k] = previous[k] + previous[k - 1]
    return row[n]


def q_table(max_m: int, max_n: int, min_m: int = 1, min_n: int = 1) -> List[List[int]]:
    """Rows m = min_m..max_m, columns n = min_n..max_n."""
    _check_dims(min_m, min_n)
    if max_m < min_m or max_n < min_n:
        raise DomainError(f"Empty table range m {min_m}..{max_m}, n {min_n}..{max_n}")
    return [[q(m, n) for n in range(min_n, max_n + 1)] for m in range(min_m, max_m + 1)]


def hyperplane_regions(k: int, d: int) -> int:
    """Regions cut out of R^d by k affine hyperplanes in general position: sum_{i<=d} C(k, i)."""
    if k < 0 or d < 0:
        raise DomainError(f"Need k, d >= 0, got ({k}, {d})")
    return sum(comb(k, i) for i in range(d + 1))


def affine_regions(m: int, n: int) -> int:
    """Q(m,n)/2: regions of m-1 generic hyperplanes in R^(n-1), or of m generic hyperplanes in RP^(n-1)."""
    half = q(m, n) // 2
    if half != hyperplane_regions(m - 1, n - 1):
        raise DomainError(f"Q({m},{n})/2 disagrees with the hyperplane region count")
    return half


@dataclass(frozen=True)
class GenericityResult:
    generic: bool
    rank: int
    deleted_rows: Optional[Tuple[int, ...]] = None

    def __bool__(self) -> bool:
        return self.generic


def is_generic(P: PayoffMatrix) -> GenericityResult:
    """True iff every n x n submatrix left after deleting m-n rows is nonsingular.

    On failure deleted_rows names the offending set of deleted rows.
    """
    m, n = P.m, P.n
    if n > m:
        raise DimensionError(f"Genericity needs n <= m, got a {m}x{n} matrix")
    # Rank deficiency fails on the first subset
    full_rank = rank(P.A)
    subsets = itertools.combinations(range(m), m - n)
    if full_rank < n:
        first = next(subsets)
        return GenericityResult(False, full_rank, tuple(first))
    # Check every square submatrix
    for deleted in subsets:
        kept = [i for i in range(m) if i not in deleted]
        if determinant(P.A.select_rows(kept)) == 0:
            logger.debug(f"Deleting rows {deleted} leaves a singular submatrix")
            return GenericityResult(False, full_rank, tuple(deleted))
    return GenericityResult(True, full_rank)


@dataclass
class OrthantCensus:
    """Which orthants of R^m the column space of an m x n matrix meets."""

    m: int
    n: int
    hit: Dict[SignVector, bool] = field(default_factory=dict)

    @property
    def count(self) -> int:
        return sum(1 for h in self.hit.values() if h)

    def hits(self) -> List[SignVector]:
        """Hit sign vectors in the fixed order of SignVector.all_vectors."""
        return [delta for delta in SignVector.all_vectors(self.m) if self.hit.get(delta)]

    def is_antipodal(self) -> bool:
        return all(self.hit[delta] == self.hit[-delta] for delta in self.hit)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m": self.m,
            "n": self.n,
            "count": self.count,
            "hits": [str(delta) for delta in self.hits()],
        }


def orthant_census(
    P: PayoffMatrix,
    max_m: int = CENSUS_MAX_M,
    allow_large: bool = False,
    workers: Optional[int] = 1,
) -> OrthantCensus:
    """Decide, for every orthant, whether the column space of P meets it.

    One arbitrage check per antipodal pair: a subspace meets O_delta iff it
    meets O_-delta. A rank-m matrix meets every orthant without any LP.
    """
    m, n = P.m, P.n
    if m > max_m and not allow_large:
        raise CensusLimitError(f"Census over 2^{m} orthants exceeds the cap m <= {max_m}")
    census = OrthantCensus(m, n)
    # Full-rank column space is all of R^m
    if rank(P.A) == m:
        census.hit = {delta: True for delta in SignVector.all_vectors(m)}
        return census

    # Census runs on integral columns
    scaled = P.integral_columns()
    half = list(SignVector.half_vectors(m))
    runner = TrialRunner(workers=workers)
    results = runner.map(lambda delta: detect_in_orthant(scaled, delta).is_arbitrage, half)
    # Mirror each answer onto the opposite orthant
    for delta, hit in zip(half, results):
        census.hit[delta] = hit
        census.hit[-delta] = hit
    if not census.is_antipodal():
        raise CertificateError("Orthant census lost antipodal symmetry")
    logger.debug(f"Census of a {m}x{n} matrix: {census.count} of {2 ** m} orthants")
    return census
