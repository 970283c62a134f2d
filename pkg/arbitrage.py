"""Arbitrage Theorem: a portfolio with strictly positive payoff, or a state-price vector.

detect() reduces to the Farkas oracle on [A^T; 1^T] pi = (0, ..., 0, 1):
a nonnegative solution is a state-price vector, and a separating
certificate (v, s) with s < 0 gives A v >= -s > 0.
"""

import logging
from fractions import Fraction

from lpcore import farkas
from models import (
    ArbitrageVerdict,
    CertificateError,
    PayoffMatrix,
    SignVector,
    VerdictTag,
    format_vector,
)

ZERO = Fraction(0)

logger = logging.getLogger(__name__)


def detect(P: PayoffMatrix) -> ArbitrageVerdict:
    """Return exactly one verdict: Arbitrage with A v >= 1, or NoArbitrage with pi."""
    m, n = P.m, P.n
    stacked = P.A.transpose().append_row([1] * m)
    target = (ZERO,) * n + (Fraction(1),)
    outcome = farkas(stacked, target)

    if outcome.is_combination:
        verdict = ArbitrageVerdict(VerdictTag.NO_ARBITRAGE, state_prices=outcome.x)
    else:
        y = outcome.y
        v, s = y[:n], y[n]
        payoff = P.A.mat_vec(v)
        low = min(payoff)
        if s >= 0 or low <= 0:
            raise CertificateError(f"Separator {format_vector(y)} does not yield a positive payoff")
        verdict = ArbitrageVerdict(VerdictTag.ARBITRAGE, portfolio=tuple(vi / low for vi in v))

    if not verify_verdict(P, verdict):
        logger.error(f"Verdict failed verification for a {m}x{n} matrix: {verdict.describe()}")
        raise CertificateError(f"{verdict.tag.value} certificate does not verify")
    logger.debug(f"detect {m}x{n}: {verdict.tag.value} ({outcome.pivots} pivots)")
    return verdict


def detect_in_orthant(P: PayoffMatrix, delta: SignVector) -> ArbitrageVerdict:
    """detect() on R_delta A; Arbitrage means the column space meets the orthant of delta."""
    return detect(P.reflect(delta))


def verify_verdict(P: PayoffMatrix, verdict: ArbitrageVerdict) -> bool:
    """Re-check the verdict invariants exactly."""
    if verdict.is_arbitrage:
        v = verdict.portfolio
        if v is None or len(v) != P.n:
            return False
        return all(p >= 1 for p in P.A.mat_vec(v))
    pi = verdict.state_prices
    if pi is None or len(pi) != P.m:
        return False
    if any(p < 0 for p in pi) or sum(pi, ZERO) != 1:
        return False
    return all(c == 0 for c in P.A.vec_mat(pi))
