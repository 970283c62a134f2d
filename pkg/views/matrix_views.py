"""Views over a payoff matrix read from --matrix: detect, farkas, cone, orthants, generic-check."""

import logging
from argparse import Namespace
from typing import Any, Dict

from arbitrage import detect, detect_in_orthant, verify_verdict
from arrangement import is_generic, orthant_census, q
from case_utils import CaseUtils
from cones import Cone, decompose, farkas_by_arbitrage, split_point
from lpcore import farkas, verify_outcome
from models import CertificateError, PayoffMatrix, RatMatrix, SignVector, format_vector
from montecarlo import generic_rate
from ratmath import in_span, read_matrix, read_vector
from views import UsageError, ViewResult

logger = logging.getLogger(__name__)


def _load_matrix(args: Namespace) -> RatMatrix:
    if not getattr(args, "matrix", None):
        raise UsageError(f"{args.command} needs --matrix FILE")
    return read_matrix(args.matrix)


def detect_view(args: Namespace) -> ViewResult:
    """Arbitrage portfolio or state prices for the matrix, optionally inside another orthant."""
    P = PayoffMatrix(_load_matrix(args))
    payload: Dict[str, Any] = {"m": P.m, "n": P.n}
    if args.orthant:
        delta = SignVector.from_string(args.orthant)
        verdict = detect_in_orthant(P, delta)
        checked = P.reflect(delta)
        payload["orthant"] = str(delta)
    else:
        verdict = detect(P)
        checked = P
    if not verify_verdict(checked, verdict):
        raise CertificateError(f"Refusing to print an unverified verdict: {verdict.describe()}")

    if args.save_case:
        if CaseUtils().save_as_case(args.save_case, checked, verdict):
            payload["saved_case"] = args.save_case
        else:
            logger.warning(f"Could not save case {args.save_case}")

    payload.update(verdict.to_dict())
    return ViewResult(payload, [verdict.describe()])


def farkas_view(args: Namespace) -> ViewResult:
    """Which side of Farkas' alternative holds for A and --target b."""
    A = _load_matrix(args)
    if not args.target:
        raise UsageError("farkas needs --target FILE")
    b = read_vector(args.target)
    outcome = farkas_by_arbitrage(A, b) if args.via_arbitrage else farkas(A, b)
    if not verify_outcome(A, b, outcome):
        raise CertificateError(f"Refusing to print an unverified {outcome.tag.value} certificate")

    name = "x" if outcome.is_combination else "y"
    line = f"{outcome.tag.value.upper()} {name}={format_vector(outcome.certificate)}"
    payload = outcome.to_dict()
    payload["route"] = "arbitrage" if args.via_arbitrage else "simplex"
    return ViewResult(payload, [line])


def cone_view(args: Namespace) -> ViewResult:
    """Lineality space, pointedness and pointed slice of the cone spanned by the columns."""
    cone = Cone.from_matrix(_load_matrix(args))
    decomposition = decompose(cone)
    basis = decomposition.lineality_basis
    lines = [
        f"pointed: {'yes' if not basis else 'no'}",
        f"lineality dimension: {len(basis)}",
    ]
    lines += [f"  lineality {format_vector(v)}" for v in basis]
    lines += [f"  slice {format_vector(g)}" for g in decomposition.slice_generators]
    payload: Dict[str, Any] = {
        "dimension": cone.dimension,
        "generators": len(cone.generators),
        "pointed": not basis,
        "lineality_basis": [format_vector(v) for v in basis],
        "slice_generators": [format_vector(g) for g in decomposition.slice_generators],
    }

    if args.point:
        x = read_vector(args.point)
        u, v = split_point(decomposition, x)
        if tuple(a + b for a, b in zip(u, v)) != x or not in_span(basis, v):
            raise CertificateError(f"Split of {format_vector(x)} does not add back up")
        lines.append(f"point {format_vector(x)} = slice {format_vector(u)} + lineality {format_vector(v)}")
        payload["split"] = {"point": format_vector(x), "slice_part": format_vector(u), "lineality_part": format_vector(v)}
    return ViewResult(payload, lines)


def orthants_view(args: Namespace) -> ViewResult:
    """How many orthants the column space meets, and which ones with --list."""
    P = PayoffMatrix(_load_matrix(args))
    census = orthant_census(P, allow_large=args.allow_large, workers=args.threads)
    if not census.is_antipodal() or census.count > 2 ** P.m:
        raise CertificateError("Census failed its consistency check")

    lines = [f"orthants hit: {census.count} of {2 ** P.m}"]
    payload = census.to_dict()
    if P.n <= P.m and is_generic(P):
        payload["q"] = q(P.m, P.n)
        lines.append(f"Q({P.m},{P.n}) = {payload['q']}")
    if args.list:
        lines += [f"  {delta}" for delta in census.hits()]
    else:
        payload.pop("hits")
    return ViewResult(payload, lines)


def generic_check_view(args: Namespace) -> ViewResult:
    """Genericity of --matrix, or the rate of generic samples for -m/-n."""
    if getattr(args, "matrix", None):
        P = PayoffMatrix(read_matrix(args.matrix))
        result = is_generic(P)
        payload: Dict[str, Any] = {"m": P.m, "n": P.n, "generic": result.generic, "rank": result.rank}
        if result:
            return ViewResult(payload, [f"GENERIC rank {result.rank}"])
        deleted = list(result.deleted_rows or ())
        payload["deleted_rows"] = deleted
        return ViewResult(payload, [f"NOT GENERIC: deleting rows {deleted} leaves a singular submatrix"])

    if args.m is None or args.n is None:
        raise UsageError("generic-check needs --matrix FILE or both -m and -n")
    rate = generic_rate(args.m, args.n, args.trials, args.seed, workers=args.threads)
    payload = {"m": args.m, "n": args.n, "trials": args.trials, "seed": args.seed, "generic_rate": rate}
    return ViewResult(payload, [f"{rate:.4f} of {args.trials} sampled {args.m}x{args.n} matrices are generic"])
