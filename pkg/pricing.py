"""One-period Bernoulli market: the stock goes to S*u or S*d, cash grows by 1+r."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from models import DegenerateMarketError, DomainError, PayoffMatrix, RatMatrix, RationalLike, to_rational

ONE = Fraction(1)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BernoulliMarket:
    spot: Fraction
    up: Fraction
    down: Fraction
    rate: Fraction
    strike: Optional[Fraction] = None

    @classmethod
    def from_values(
        cls,
        spot: RationalLike,
        up: RationalLike,
        down: RationalLike,
        rate: RationalLike,
        strike: Optional[RationalLike] = None,
    ) -> "BernoulliMarket":
        return cls(
            to_rational(spot),
            to_rational(up),
            to_rational(down),
            to_rational(rate),
            to_rational(strike) if strike is not None else None,
        )

    @property
    def growth(self) -> Fraction:
        return ONE + self.rate

    def validate(self) -> None:
        """Raise unless S > 0, 0 <= d < 1+r < u."""
        if self.up == self.down:
            raise DegenerateMarketError(f"Up and down factors are both {self.up}")
        if self.spot <= 0:
            raise DomainError(f"Spot price must be positive, got {self.spot}")
        # d = 0 allowed: the stock may be worthless tomorrow
        if self.down < 0:
            raise DomainError(f"Down factor must be nonnegative, got {self.down}")
        if not self.down < self.growth < self.up:
            raise DomainError(f"Need d < 1+r < u, got d={self.down}, 1+r={self.growth}, u={self.up}")

    def validate_strike(self) -> Fraction:
        self.validate()
        if self.strike is None:
            raise DomainError("The call needs a strike price")
        if not self.spot * self.down < self.strike < self.spot * self.up:
            raise DomainError(
                f"Strike {self.strike} must lie strictly between S*d={self.spot * self.down} and S*u={self.spot * self.up}"
            )
        return self.strike


@dataclass(frozen=True)
class SecurityPayoff:
    """Costs price_today now, pays payoff_up or payoff_down tomorrow."""

    price_today: Fraction
    payoff_up: Fraction
    payoff_down: Fraction

    @classmethod
    def from_values(cls, price: RationalLike, up: RationalLike, down: RationalLike) -> "SecurityPayoff":
        return cls(to_rational(price), to_rational(up), to_rational(down))

    @classmethod
    def parse(cls, text: str) -> "SecurityPayoff":
        """Parse 'P,rho_u,rho_d'."""
        parts = text.split(",")
        if len(parts) != 3:
            raise DomainError(f"Security must be given as P,rho_u,rho_d, got {text!r}")
        return cls.from_values(*parts)

    def with_price(self, price: Fraction) -> "SecurityPayoff":
        return SecurityPayoff(price, self.payoff_up, self.payoff_down)


def risk_neutral_probs(mkt: BernoulliMarket) -> Tuple[Fraction, Fraction]:
    """pi_u = (1+r-d)/(u-d), pi_d = (u-1-r)/(u-d)."""
    mkt.validate()
    spread = mkt.up - mkt.down
    pi_u = (mkt.growth - mkt.down) / spread
    pi_d = (mkt.up - mkt.growth) / spread
    return pi_u, pi_d


def price_security(mkt: BernoulliMarket, payoff_up: RationalLike, payoff_down: RationalLike) -> Fraction:
    """Discounted risk-neutral expectation of the payoff."""
    pi_u, pi_d = risk_neutral_probs(mkt)
    return (pi_u * to_rational(payoff_up) + pi_d * to_rational(payoff_down)) / mkt.growth


def price_call(mkt: BernoulliMarket) -> Fraction:
    """(Su-K)(1+r-d) / ((1+r)(u-d)) for a call struck inside (Sd, Su)."""
    strike = mkt.validate_strike()
    return (mkt.spot * mkt.up - strike) * (mkt.growth - mkt.down) / (mkt.growth * (mkt.up - mkt.down))


def call_security(mkt: BernoulliMarket, price: Optional[RationalLike] = None) -> SecurityPayoff:
    """The call as a security; priced at price_call unless a price is given."""
    strike = mkt.validate_strike()
    today = price_call(mkt) if price is None else to_rational(price)
    return SecurityPayoff(today, mkt.spot * mkt.up - strike, Fraction(0))


def build_payoff_matrix(
    mkt: BernoulliMarket,
    securities: Sequence[SecurityPayoff] = (),
    include_risk_free: bool = False,
) -> PayoffMatrix:
    """Present-value net returns, rows (up, down).

    Column 0 is the stock, then one column per security, then the all-zero
    risk-free column when requested.
    """
    mkt.validate()
    columns = [(mkt.up / mkt.growth - ONE, mkt.down / mkt.growth - ONE)]
    for k, sec in enumerate(securities):
        if sec.price_today <= 0:
            raise DomainError(f"Security {k} has nonpositive price {sec.price_today}")
        discount = sec.price_today * mkt.growth
        columns.append((sec.payoff_up / discount - ONE, sec.payoff_down / discount - ONE))
    if include_risk_free:
        columns.append((Fraction(0), Fraction(0)))
    logger.debug(f"Built a 2x{len(columns)} payoff matrix for {len(securities)} securities")
    return PayoffMatrix(RatMatrix.from_columns(columns))
