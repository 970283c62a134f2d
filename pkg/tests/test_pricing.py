"""Bernoulli market pricing tests."""

import random
from fractions import Fraction

import pytest

from arbitrage import detect, verify_verdict
from models import DegenerateMarketError, DomainError
from pricing import (
    BernoulliMarket,
    SecurityPayoff,
    build_payoff_matrix,
    call_security,
    price_call,
    price_security,
    risk_neutral_probs,
)

F = Fraction
MARKET = BernoulliMarket.from_values(100, "1.2", "0.9", "0.05", 100)


def random_market(rng):
    """A rational market with 0 < d < 1+r < u and a strike strictly between Sd and Su."""
    rate = F(rng.randint(0, 10), 100)
    down = F(1) + rate - F(rng.randint(1, 40), 100)
    up = F(1) + rate + F(rng.randint(1, 60), 100)
    spot = F(rng.randint(10, 200))
    low, high = spot * down, spot * up
    strike = low + (high - low) * F(rng.randint(1, 99), 100)
    return BernoulliMarket(spot, up, down, rate, strike)


def test_risk_neutral_probabilities():
    assert risk_neutral_probs(MARKET) == (F(1, 2), F(1, 2))


def test_symmetric_market_is_a_fair_coin():
    mkt = BernoulliMarket.from_values(1, "1.3", "0.9", "0.1")
    assert risk_neutral_probs(mkt) == (F(1, 2), F(1, 2))


def test_call_price():
    assert price_call(MARKET) == F(200, 21)
    pi_u, _ = risk_neutral_probs(MARKET)
    assert price_call(MARKET) == pi_u * (MARKET.spot * MARKET.up - MARKET.strike) / MARKET.growth


def test_price_security_examples():
    growth = MARKET.growth
    assert price_security(MARKET, growth, growth) == 1
    assert price_security(MARKET, MARKET.spot * MARKET.up, MARKET.spot * MARKET.down) == MARKET.spot
    assert price_security(MARKET, MARKET.spot * MARKET.up - MARKET.strike, 0) == price_call(MARKET)


def test_market_validation():
    with pytest.raises(DegenerateMarketError):
        risk_neutral_probs(BernoulliMarket.from_values(100, 1, 1, 0))
    with pytest.raises(DomainError):
        risk_neutral_probs(BernoulliMarket.from_values(100, "1.2", "1.1", "0.2"))
    with pytest.raises(DomainError):
        risk_neutral_probs(BernoulliMarket.from_values(-5, "1.2", "0.9", "0.05"))
    with pytest.raises(DomainError):
        price_call(BernoulliMarket.from_values(100, "1.2", "0.9", "0.05", 120))
    with pytest.raises(DomainError):
        price_call(BernoulliMarket.from_values(100, "1.2", "0.9", "0.05"))


def test_stock_only_matrix():
    P = build_payoff_matrix(MARKET)
    assert P.A.as_lists() == [[F(1, 7)], [F(-1, 7)]]
    verdict = detect(P)
    assert verdict.state_prices == risk_neutral_probs(MARKET)


def test_fair_call_is_a_multiple_of_the_stock():
    P = build_payoff_matrix(MARKET, [call_security(MARKET)])
    stock, call = P.A.columns()
    ratio = call[0] / stock[0]
    assert call == tuple(ratio * a for a in stock)
    assert not detect(P).is_arbitrage


def test_overpriced_call_is_arbitrage():
    P = build_payoff_matrix(MARKET, [call_security(MARKET, price_call(MARKET) + 1)])
    verdict = detect(P)
    assert verdict.is_arbitrage
    assert verify_verdict(P, verdict)


def test_risk_free_column():
    P = build_payoff_matrix(MARKET, include_risk_free=True)
    assert P.n == 2
    assert P.A.column(1) == (0, 0)
    assert detect(P).state_prices == (F(1, 2), F(1, 2))


def test_nonpositive_security_price():
    with pytest.raises(DomainError):
        build_payoff_matrix(MARKET, [SecurityPayoff.from_values(0, 1, 1)])


def test_parse_security():
    assert SecurityPayoff.parse("1/2,1,0") == SecurityPayoff(F(1, 2), F(1), F(0))
    with pytest.raises(DomainError):
        SecurityPayoff.parse("1,2")


def test_random_markets_price_consistently():
    """Fair prices give state prices (pi_u, pi_d); a 1/100 mispricing either way is an arbitrage."""
    rng = random.Random(50)
    for _ in range(50):
        mkt = random_market(rng)
        probs = risk_neutral_probs(mkt)
        assert sum(probs) == 1 and all(0 < p < 1 for p in probs)

        fair = call_security(mkt)
        extra = SecurityPayoff(price_security(mkt, 3, 1), F(3), F(1))
        P = build_payoff_matrix(mkt, [fair, extra])
        verdict = detect(P)
        assert not verdict.is_arbitrage
        assert verdict.state_prices == probs
        assert all(c == 0 for c in P.A.vec_mat(probs))

        for shift in (F(1, 100), F(-1, 100)):
            if fair.price_today + shift <= 0:
                continue
            mispriced = build_payoff_matrix(mkt, [fair.with_price(fair.price_today + shift)])
            verdict = detect(mispriced)
            assert verdict.is_arbitrage
            assert verify_verdict(mispriced, verdict)


def test_stock_that_can_go_to_zero():
    mkt = BernoulliMarket.from_values(100, "1.2", 0, "0.05", 50)
    assert risk_neutral_probs(mkt) == (F(7, 8), F(1, 8))
    assert price_call(mkt) == F(7, 8) * 70 / F(21, 20)
    assert not detect(build_payoff_matrix(mkt, [call_security(mkt)])).is_arbitrage
    with pytest.raises(DomainError):
        risk_neutral_probs(BernoulliMarket.from_values(100, "1.2", "-0.1", "0.05"))
