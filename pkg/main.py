#!/usr/bin/env python3
"""Command-line entry point for arbigeom."""

import sys
import logging
import argparse
from logging.handlers import RotatingFileHandler
from typing import Callable, Dict, List, Optional

from config import DEBUG, DEFAULT_SEED, DEFAULT_TRIALS, LOG_FILE
from models import ArbigeomError, CertificateError
from views import UsageError, ViewResult
from views.market_views import price_view
from views.matrix_views import cone_view, detect_view, farkas_view, generic_check_view, orthants_view
from views.stats_views import history_view, qtable_view, simulate_view

EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_USAGE = 2

VIEWS: Dict[str, Callable[[argparse.Namespace], ViewResult]] = {
    'detect': detect_view,
    'farkas': farkas_view,
    'cone': cone_view,
    'orthants': orthants_view,
    'generic-check': generic_check_view,
    'qtable': qtable_view,
    'simulate': simulate_view,
    'history': history_view,
    'price': price_view,
}

logger = logging.getLogger(__name__)


def configure_logging(verbose: bool = False) -> None:
    """Rotating log file plus a stderr handler; stdout is left to command output."""
    root = logging.getLogger()
    for handler in root.handlers[:]:
        root.removeHandler(handler)
        handler.close()

    formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')

    if LOG_FILE:
        file_handler = RotatingFileHandler(
            LOG_FILE,
            maxBytes=1024 * 1024 * 5,  # 5 MB
            backupCount=5
        )
        file_handler.setLevel(logging.INFO)
        file_handler.setFormatter(formatter)
        root.addHandler(file_handler)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(logging.DEBUG if verbose or DEBUG else logging.WARNING)
    console_handler.setFormatter(formatter)
    root.addHandler(console_handler)
    root.setLevel(logging.DEBUG if verbose or DEBUG else logging.INFO)


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    """--json, --matrix, --seed, --threads and --verbose, accepted before or after the subcommand."""
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument('--json', action='store_true', default=default(False), help='Machine-readable JSON output')
    parser.add_argument('--matrix', metavar='FILE', default=default(None), help='Payoff matrix CSV (rows = scenarios)')
    parser.add_argument('--seed', type=int, default=default(DEFAULT_SEED), help=f'Random seed (default: {DEFAULT_SEED})')
    parser.add_argument('--threads', type=int, default=default(None), help='Worker threads (default: ARBIGEOM_THREADS, 0 = one per CPU)')
    parser.add_argument('--verbose', '-v', action='store_true', default=default(False), help='Debug logging on stderr')


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='arbigeom', description='Arbitrage detection and the geometry of payoff matrices')
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True

    detect = sub.add_parser('detect', parents=[common], help='Arbitrage portfolio or state-price vector')
    detect.add_argument('--orthant', metavar='SIGNS', help="Look for payoffs in the orthant SIGNS, e.g. '+-+'")
    detect.add_argument('--save-case', metavar='NAME', help='Save matrix and verdict as a YAML test case')

    farkas = sub.add_parser('farkas', parents=[common], help="Farkas' alternative for A x = b, x >= 0")
    farkas.add_argument('--target', metavar='FILE', help='Right-hand side b (one row or one column)')
    farkas.add_argument('--via-arbitrage', action='store_true', help='Decide through the arbitrage detector')

    cone = sub.add_parser('cone', parents=[common], help='Lineality space and pointed slice of the column cone')
    cone.add_argument('--point', metavar='FILE', help='Also split this point of the cone')

    orthants = sub.add_parser('orthants', parents=[common], help='Count the orthants the column space meets')
    orthants.add_argument('--list', action='store_true', help='List every hit sign vector')
    orthants.add_argument('--allow-large', action='store_true', help='Lift the scenario cap on the census')

    generic = sub.add_parser('generic-check', parents=[common], help='Genericity of a matrix or of sampled matrices')
    generic.add_argument('-m', type=_positive_int, help='Scenarios of the sampled matrices')
    generic.add_argument('-n', type=_positive_int, help='Investments of the sampled matrices')
    generic.add_argument('--trials', type=_positive_int, default=100, help='Sampled matrices (default: 100)')

    qtable = sub.add_parser('qtable', parents=[common], help='Table of Q(m,n)')
    qtable.add_argument('--max-m', type=_positive_int, default=8)
    qtable.add_argument('--max-n', type=_positive_int, default=8)
    qtable.add_argument('--min-m', type=_positive_int, default=1)
    qtable.add_argument('--min-n', type=_positive_int, default=1)

    simulate = sub.add_parser('simulate', parents=[common], help='Monte Carlo estimate of the arbitrage probability')
    simulate.add_argument('-m', type=_positive_int, required=True, help='Scenarios')
    simulate.add_argument('-n', type=_positive_int, required=True, help='Investments')
    simulate.add_argument('--trials', type=_positive_int, default=DEFAULT_TRIALS, help=f'Trials (default: {DEFAULT_TRIALS})')
    simulate.add_argument('--sampler', choices=['gaussian', 'uniform'], default='gaussian')
    simulate.add_argument('--orthant', metavar='SIGNS', help='Target orthant instead of the positive one')
    simulate.add_argument('--reflect', metavar='SIGNS', help='Negate these rows of every sample')
    simulate.add_argument('--equal-orthants', action='store_true', help='Per-orthant hit rates with a chi-square test')
    simulate.add_argument('--record', action='store_true', help='Store the run in the history database')
    simulate.add_argument('--text', action='store_true', help='Print a readable summary instead of the JSON report')

    history = sub.add_parser('history', parents=[common], help='Recorded simulation runs')
    history.add_argument('--limit', type=_positive_int, default=10)
    history.add_argument('--clear', action='store_true', help='Delete every recorded run')

    price = sub.add_parser('price', parents=[common], help='Bernoulli market: risk-neutral probabilities and call price')
    price.add_argument('--spot', required=True, help='Spot price S')
    price.add_argument('--up', required=True, help='Up factor u')
    price.add_argument('--down', required=True, help='Down factor d')
    price.add_argument('--rate', required=True, help='Risk-free rate r')
    price.add_argument('--strike', help='Call strike K')
    price.add_argument('--security', action='append', metavar='P,RHO_U,RHO_D', help='Extra security (repeatable)')
    price.add_argument('--risk-free', action='store_true', help='Append the all-zero risk-free column')
    price.add_argument('--text', action='store_true', help='Print a readable summary instead of JSON')

    return parser


def parse_arguments(argv: Optional[List[str]] = None) -> argparse.Namespace:
    return build_parser().parse_args(argv)


def run(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand and return its exit code."""
    try:
        args = parse_arguments(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    configure_logging(args.verbose)
    logger.debug(f"Running {args.command} with {vars(args)}")

    try:
        result = VIEWS[args.command](args)
    except UsageError as e:
        print(f"arbigeom {args.command}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except CertificateError as e:
        logger.critical(f"Certificate verification failed in {args.command}: {e}")
        raise
    except ArbigeomError as e:
        logger.info(f"{args.command} rejected its input: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN_ERROR
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN_ERROR
    except KeyboardInterrupt:
        logger.info("Ctrl-C detected, run abandoned")
        return 130

    as_json = args.json or (result.json_by_default and not getattr(args, "text", False))
    print(result.render(as_json))
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
