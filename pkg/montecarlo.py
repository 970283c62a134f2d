"""Seeded random payoff matrices and statistical checks of the arbitrage probability Q(m,n)/2^m."""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy.special import erfc
from scipy.stats import chi2

from arbitrage import detect_in_orthant
from arrangement import is_generic, orthant_census, q
from config import EQUAL_ORTHANT_MAX_M
from models import DimensionError, DomainError, PayoffMatrix, RatMatrix, SignVector
from worker_pool import TrialRunner

logger = logging.getLogger(__name__)

SAMPLERS = ("gaussian", "uniform")
_MASK64 = (1 << 64) - 1
_TWO_POW_53 = float(2 ** 53)


def trial_stream(seed: int, trial: int) -> np.random.Philox:
    """Counter-based stream for one trial: key = seed, counter word 2 = trial index."""
    return np.random.Philox(key=seed & _MASK64, counter=trial << 128)


def _raw53(stream: np.random.Philox, count: int) -> np.ndarray:
    return stream.random_raw(count) >> np.uint64(11)


def _standard_normals(stream: np.random.Philox, count: int) -> np.ndarray:
    """Box-Muller over 53-bit uniforms; u1 in (0, 1] so the logarithm is finite."""
    pairs = (count + 1) // 2
    raw = _raw53(stream, 2 * pairs)
    u1 = (raw[0::2].astype(np.float64) + 1.0) / _TWO_POW_53
    u2 = raw[1::2].astype(np.float64) / _TWO_POW_53
    radius = np.sqrt(-2.0 * np.log(u1))
    theta = 2.0 * np.pi * u2
    normals = np.empty(2 * pairs, dtype=np.float64)
    normals[0::2] = radius * np.cos(theta)
    normals[1::2] = radius * np.sin(theta)
    return normals[:count]


def _symmetric_uniforms(stream: np.random.Philox, count: int) -> np.ndarray:
    """Uniform on (-1, 1) over the odd multiples of 2^-53, symmetric about zero."""
    raw = _raw53(stream, count).astype(np.int64)
    return (2 * raw + 1 - 2 ** 53).astype(np.float64) / _TWO_POW_53


def _to_payoff(values: np.ndarray, m: int, n: int) -> PayoffMatrix:
    grid = values.reshape(m, n)
    return PayoffMatrix(RatMatrix.from_rows([[Fraction(float(a)) for a in row] for row in grid]))


def sample_gaussian_matrix(m: int, n: int, stream: np.random.Philox) -> PayoffMatrix:
    """m x n iid N(0,1) entries, each double converted exactly to a rational."""
    return _to_payoff(_standard_normals(stream, m * n), m, n)


def sample_uniform_matrix(m: int, n: int, stream: np.random.Philox) -> PayoffMatrix:
    """m x n iid entries uniform on (-1, 1); also invariant under reflections."""
    return _to_payoff(_symmetric_uniforms(stream, m * n), m, n)


@dataclass(frozen=True)
class SimConfig:
    """One Monte Carlo experiment: trials t = 0..trials-1 each sample from stream (seed, t)."""

    m: int
    n: int
    trials: int
    seed: int
    target_orthant: Optional[SignVector] = None
    sampler: str = "gaussian"
    reflection: Optional[SignVector] = None

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise DomainError(f"Dimensions must be positive, got {self.m}x{self.n}")
        if self.trials < 1:
            raise DomainError(f"Need at least one trial, got {self.trials}")
        if self.sampler not in SAMPLERS:
            raise DomainError(f"Unknown sampler {self.sampler!r}; choose from {', '.join(SAMPLERS)}")
        for name, signs in (("target_orthant", self.target_orthant), ("reflection", self.reflection)):
            if signs is not None and len(signs) != self.m:
                raise DimensionError(f"{name} has length {len(signs)}, expected {self.m}")

    @property
    def orthant(self) -> SignVector:
        return self.target_orthant if self.target_orthant is not None else SignVector.positive(self.m)

    def sample(self, trial: int) -> PayoffMatrix:
        stream = trial_stream(self.seed, trial)
        if self.sampler == "uniform":
            matrix = sample_uniform_matrix(self.m, self.n, stream)
        else:
            matrix = sample_gaussian_matrix(self.m, self.n, stream)
        if self.reflection is not None:
            matrix = matrix.reflect(self.reflection)
        return matrix


@dataclass(frozen=True)
class SimReport:
    m: int
    n: int
    trials: int
    seed: int
    hits: int
    theoretical: Fraction

    @property
    def estimate(self) -> float:
        return self.hits / self.trials

    @property
    def std_error(self) -> float:
        p = self.estimate
        return math.sqrt(p * (1.0 - p) / self.trials)

    @property
    def ci95(self) -> Tuple[float, float]:
        half = 1.96 * self.std_error
        return self.estimate - half, self.estimate + half

    def to_dict(self) -> Dict[str, Any]:
        lo, hi = self.ci95
        return {
            "m": self.m,
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "hits": self.hits,
            "estimate": self.estimate,
            "theoretical_num": self.theoretical.numerator,
            "theoretical_den": self.theoretical.denominator,
            "std_error": self.std_error,
            "ci95_lo": lo,
            "ci95_hi": hi,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SimReport":
        return cls(
            m=data["m"],
            n=data["n"],
            trials=data["trials"],
            seed=data["seed"],
            hits=data["hits"],
            theoretical=Fraction(data["theoretical_num"], data["theoretical_den"]),
        )


def theoretical_probability(m: int, n: int) -> Fraction:
    """Q(m,n)/2^m from big-integer arithmetic."""
    return Fraction(q(m, n), 2 ** m)


def estimate_arbitrage_probability(cfg: SimConfig, workers: Optional[int] = None) -> SimReport:
    """Count trials whose column space meets the target orthant (the positive one by default)."""
    orthant = cfg.orthant

    def trial(t: int) -> int:
        sample = cfg.sample(t).integral_columns()
        return int(detect_in_orthant(sample, orthant).is_arbitrage)

    indicators = TrialRunner(workers=workers).map(trial, range(cfg.trials))
    report = SimReport(cfg.m, cfg.n, cfg.trials, cfg.seed, sum(indicators), theoretical_probability(cfg.m, cfg.n))
    logger.info(
        f"Simulated {cfg.trials} {cfg.m}x{cfg.n} {cfg.sampler} matrices: "
        f"estimate {report.estimate:.4f}, theory {float(report.theoretical):.4f}"
    )
    return report


@dataclass
class OrthantRates:
    """Per-orthant hit counts over many censuses, against the uniform rate Q(m,n)/2^m."""

    m: int
    n: int
    trials: int
    counts: Dict[SignVector, int] = field(default_factory=dict)
    census_counts: List[int] = field(default_factory=list)
    chi_square: float = 0.0
    p_value: float = 1.0

    @property
    def expected_rate(self) -> Fraction:
        return theoretical_probability(self.m, self.n)

    def rate(self, delta: SignVector) -> float:
        return self.counts[delta] / self.trials

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m": self.m,
            "n": self.n,
            "trials": self.trials,
            "expected_rate": float(self.expected_rate),
            "rates": {str(delta): self.rate(delta) for delta in SignVector.all_vectors(self.m)},
            "census_counts": sorted(set(self.census_counts)),
            "chi_square": self.chi_square,
            "p_value": self.p_value,
        }


def equal_orthant_check(cfg: SimConfig, workers: Optional[int] = None) -> OrthantRates:
    """Run a full census per trial and test the per-orthant hit rates for uniformity."""
    if cfg.m > EQUAL_ORTHANT_MAX_M:
        raise DomainError(f"Per-orthant statistics are limited to m <= {EQUAL_ORTHANT_MAX_M}, got {cfg.m}")
    orthants = list(SignVector.all_vectors(cfg.m))

    def trial(t: int) -> Tuple[bool, ...]:
        census = orthant_census(cfg.sample(t), workers=1)
        return tuple(census.hit[delta] for delta in orthants)

    rows = TrialRunner(workers=workers).map(trial, range(cfg.trials))
    rates = OrthantRates(cfg.m, cfg.n, cfg.trials)
    rates.counts = {delta: sum(1 for row in rows if row[k]) for k, delta in enumerate(orthants)}
    rates.census_counts = [sum(row) for row in rows]

    expected = cfg.trials * float(rates.expected_rate)
    rates.chi_square = sum((rates.counts[delta] - expected) ** 2 / expected for delta in orthants)
    rates.p_value = float(chi2.sf(rates.chi_square, df=len(orthants) - 1))
    if len(set(rates.census_counts)) > 1:
        logger.warning(f"Census counts varied across trials: {sorted(set(rates.census_counts))}")
    logger.info(f"Equal-orthant check {cfg.m}x{cfg.n}: chi-square {rates.chi_square:.3f}, p = {rates.p_value:.4f}")
    return rates


def generic_rate(m: int, n: int, trials: int, seed: int, workers: Optional[int] = None) -> float:
    """Fraction of sampled Gaussian matrices that are generic (expected to be 1)."""
    cfg = SimConfig(m, n, trials, seed)
    flags = TrialRunner(workers=workers).map(lambda t: bool(is_generic(cfg.sample(t))), range(trials))
    return sum(flags) / trials


def binomial_tail_identity(m: int, n: int) -> Fraction:
    """P[Binomial(m-1, 1/2) <= n-1] as an exact rational; equals Q(m,n)/2^m."""
    if m < 1 or n < 1:
        raise DomainError(f"Need m, n >= 1, got ({m}, {n})")
    return Fraction(sum(comb(m - 1, k) for k in range(min(n, m))), 2 ** (m - 1))


def clt_approximation(m: int, n: int) -> float:
    """Normal approximation Phi((n - (m-1)/2) / sqrt((m-1)/4)) of the arbitrage probability."""
    if m < 2:
        raise DomainError(f"The normal approximation needs m >= 2, got {m}")
    x = (n - (m - 1) / 2) / math.sqrt((m - 1) / 4)
    return float(0.5 * erfc(-x / math.sqrt(2.0)))
