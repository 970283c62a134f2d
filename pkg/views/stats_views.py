"""Counting and simulation views: qtable, simulate, history."""

import logging
import time
from argparse import Namespace

from arrangement import q_table
from database import RunDatabase
from models import CertificateError, SignVector, format_rational
from montecarlo import SimConfig, binomial_tail_identity, clt_approximation, equal_orthant_check, estimate_arbitrage_probability
from views import ViewResult

logger = logging.getLogger(__name__)


def qtable_view(args: Namespace) -> ViewResult:
    """Grid of Q(m,n), rows m and columns n."""
    table = q_table(args.max_m, args.max_n, args.min_m, args.min_n)
    columns = list(range(args.min_n, args.max_n + 1))
    width = max(len(str(value)) for row in table for value in row) + 1
    lines = ["m\\n".rjust(4) + "".join(str(n).rjust(width) for n in columns)]
    for m, row in zip(range(args.min_m, args.max_m + 1), table):
        lines.append(str(m).rjust(4) + "".join(str(value).rjust(width) for value in row))
    payload = {
        "min_m": args.min_m,
        "max_m": args.max_m,
        "min_n": args.min_n,
        "max_n": args.max_n,
        "rows": table,
    }
    return ViewResult(payload, lines)


def _sim_config(args: Namespace) -> SimConfig:
    return SimConfig(
        m=args.m,
        n=args.n,
        trials=args.trials,
        seed=args.seed,
        target_orthant=SignVector.from_string(args.orthant) if args.orthant else None,
        sampler=args.sampler,
        reflection=SignVector.from_string(args.reflect) if args.reflect else None,
    )


def simulate_view(args: Namespace) -> ViewResult:
    """Monte Carlo estimate of the arbitrage probability, or per-orthant rates with --equal-orthants."""
    cfg = _sim_config(args)

    if args.equal_orthants:
        rates = equal_orthant_check(cfg, workers=args.threads)
        lines = [f"expected rate {format_rational(rates.expected_rate)} = {float(rates.expected_rate):.4f}"]
        lines += [f"  {delta} {rates.rate(delta):.4f}" for delta in SignVector.all_vectors(cfg.m)]
        lines.append(f"chi-square {rates.chi_square:.3f}, p-value {rates.p_value:.4f}")
        return ViewResult(rates.to_dict(), lines, json_by_default=True)

    started = time.perf_counter()
    report = estimate_arbitrage_probability(cfg, workers=args.threads)
    elapsed = time.perf_counter() - started
    if report.theoretical != binomial_tail_identity(cfg.m, cfg.n):
        raise CertificateError(f"Q({cfg.m},{cfg.n})/2^{cfg.m} disagrees with the binomial tail")

    lo, hi = report.ci95
    lines = [
        f"{report.hits} of {report.trials} {cfg.m}x{cfg.n} {cfg.sampler} matrices admit arbitrage",
        f"estimate {report.estimate:.4f} +/- {report.std_error:.4f} (95% CI [{lo:.4f}, {hi:.4f}])",
        f"theory {format_rational(report.theoretical)} = {float(report.theoretical):.4f}",
    ]
    if cfg.m >= 2:
        lines.append(f"normal approximation {clt_approximation(cfg.m, cfg.n):.4f}")

    if args.record:
        run_id = RunDatabase().log_run(report, cfg.sampler, elapsed)
        if run_id is None:
            logger.warning("Simulation finished but could not be recorded")
    return ViewResult(report.to_dict(), lines, json_by_default=True)


def history_view(args: Namespace) -> ViewResult:
    """Recorded simulation runs, newest first."""
    db = RunDatabase()
    if args.clear:
        removed = db.clear_history()
        return ViewResult({"cleared": removed}, [f"removed {removed} recorded runs"])

    runs = db.get_run_history(args.limit)
    lines = [
        f"{run['timestamp']}  {run['m']}x{run['n']} {run['sampler']} seed {run['seed']}: "
        f"{run['hits']}/{run['trials']} = {run['estimate']:.4f} "
        f"(theory {run['theoretical_num']}/{run['theoretical_den']})"
        for run in runs
    ]
    return ViewResult({"runs": runs}, lines or ["no recorded runs"])
