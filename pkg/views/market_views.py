from argparse import Namespace

from arbitrage import detect, verify_verdict
from models import CertificateError, format_rational
from pricing import BernoulliMarket, SecurityPayoff, build_payoff_matrix, call_security, price_call, risk_neutral_probs
from views import ViewResult


def price_view(args: Namespace) -> ViewResult:
    """Risk-neutral probabilities, call price and the verdict on the market's payoff matrix."""
    mkt = BernoulliMarket.from_values(args.spot, args.up, args.down, args.rate, args.strike)
    pi_u, pi_d = risk_neutral_probs(mkt)
    securities = [SecurityPayoff.parse(text) for text in args.security or []]

    call_price = None
    if mkt.strike is not None:
        call_price = price_call(mkt)
        securities.insert(0, call_security(mkt, call_price))

    P = build_payoff_matrix(mkt, securities, include_risk_free=args.risk_free)
    verdict = detect(P)
    if not verify_verdict(P, verdict):
        raise CertificateError(f"Refusing to print an unverified verdict: {verdict.describe()}")

    payload = {
        "pi_u": format_rational(pi_u),
        "pi_d": format_rational(pi_d),
        "call_price": format_rational(call_price) if call_price is not None else None,
        "verdict": verdict.tag.value,
        "certificate": [format_rational(v) for v in verdict.certificate],
        "payoff_matrix": P.A.to_strings(),
    }
    lines = [f"pi_u = {payload['pi_u']}, pi_d = {payload['pi_d']}"]
    if call_price is not None:
        lines.append(f"call price = {payload['call_price']}")
    lines.append(verdict.describe())
    return ViewResult(payload, lines, json_by_default=True)
