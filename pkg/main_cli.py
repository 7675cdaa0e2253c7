# main_cli.py - Command-line entry point for the hypercube polytope census

import argparse
import asyncio
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from config_loader import load_app_config
from models import AppSettings, ComputationError, GeneralHyperplane
from cycle_index import hypercube_cycle_index
from hyperplanes import (
    atlas_record, canonicalize, cycle_index_burnside, cycle_index_symbolic, format_atlas, max_coefficient,
    spanned_representatives, stabilizer_description, vertex_count,
)
from census import assemble_table, read_external_values
from result_aggregator import render_atlas, render_census, render_cycle_index, render_verification
from verification_workflow import SUITES, run_verification

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_COMPUTATION = 1
EXIT_USAGE = 2
EXIT_VERIFICATION = 3


# --- Argument Parsing ---

def parse_k_range(text: str) -> List[int]:
    """'13..16' -> [13, 14, 15, 16]; '9' -> [9]."""
    try:
        if ".." in text:
            low, high = text.split("..", 1)
            return list(range(int(low), int(high) + 1))
        return [int(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected k or a..b, got '{text}'")


def parse_int_list(text: str) -> List[int]:
    try:
        return [int(a) for a in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "csv", "json"], default=None, help="output format")
    common.add_argument("--log-level", dest="log_level", default=None, help="logging level for stderr")
    common.add_argument("--expensive", action="store_true", help="allow n=6 enumeration and n>6")
    common.add_argument("--seed", type=int, default=None, help="seed for sampled checks")

    parser = argparse.ArgumentParser(
        prog="cube-census",
        description="Exact counts of full-dimensional 0/1-polytopes of the n-cube up to symmetry.",
    )
    verbs = parser.add_subparsers(dest="verb", required=True)

    p = verbs.add_parser("cycle-index", parents=[common], help="cycle index of B_n on Q_n or of a hyperplane stabilizer")
    p.add_argument("n", type=int)
    p.add_argument("--hyperplane", type=parse_int_list, default=None, help="canonical coefficients a1,..,at")
    p.add_argument("--rhs", type=int, default=None)

    p = verbs.add_parser("hyperplanes", parents=[common], help="atlas of spanned hyperplane classes")
    p.add_argument("n", type=int)
    p.add_argument("--min-vertices", dest="min_vertices", type=int, default=0)

    p = verbs.add_parser("table", parents=[common], help="census table A, H, F by vertex count")
    p.add_argument("n", type=int)
    p.add_argument("--k", dest="k_range", type=parse_k_range, default=None, help="k or a..b")
    p.add_argument("--external", type=Path, default=None, help="known F values as JSON or 'k F' lines")
    p.add_argument("--per-hyperplane", dest="per_hyperplane", action="store_true")

    p = verbs.add_parser("stabilizer", parents=[common], help="canonical form and stabilizer of a hyperplane")
    p.add_argument("n", type=int)
    p.add_argument("--coeffs", type=parse_int_list, required=True, help="a1,..,an (any signs)")
    p.add_argument("--rhs", type=int, required=True)

    p = verbs.add_parser("verify", parents=[common], help="run the verification suites")
    p.add_argument("target", nargs="?", choices=list(SUITES) + ["all"], default="all", help="suite to run, or all")
    p.add_argument("--suite", dest="suites", action="append", choices=list(SUITES), default=None)
    p.add_argument("--n-max", dest="n_max", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--subset-budget", dest="subset_budget", type=int, default=None)
    p.add_argument("--data-dir", dest="data_dir", type=Path, default=None, help="directory of reference fixtures")
    return parser


def selected_suites(args: argparse.Namespace) -> Optional[List[str]]:
    """--suite flags and the positional target together; None runs every suite."""
    suites = list(args.suites or [])
    if args.target != "all" and args.target not in suites:
        suites.append(args.target)
    return suites or None


# --- Verbs ---

def _cmd_cycle_index(args: argparse.Namespace, settings: AppSettings) -> str:
    if args.hyperplane is None:
        return render_cycle_index(hypercube_cycle_index(args.n), f"Z_{args.n}", settings.output_format)
    if args.rhs is None:
        raise ValueError("--hyperplane needs --rhs")
    coeffs = tuple(args.hyperplane) + (0,) * (args.n - len(args.hyperplane))
    H = canonicalize(GeneralHyperplane(coeffs=coeffs, rhs=args.rhs))
    return render_cycle_index(cycle_index_symbolic(H), f"Z[{H}] in Q_{args.n}", settings.output_format)


def _cmd_hyperplanes(args: argparse.Namespace, settings: AppSettings) -> str:
    reps = spanned_representatives(args.n, args.min_vertices, settings.expensive)
    records = [atlas_record(H, f"H{args.n}.{i}") for i, H in enumerate(reps, start=1)]
    text = f"{format_atlas(records)}\n# coeff({args.n}) = {max_coefficient(reps)}"
    return render_atlas(records, text, settings.output_format)


def _cmd_table(args: argparse.Namespace, settings: AppSettings) -> str:
    external = read_external_values(args.external) if args.external else None
    table = assemble_table(
        args.n, external=external, per_hyperplane=args.per_hyperplane, ks=args.k_range,
        expensive=settings.expensive, external_label=f"external:{args.external.name}" if args.external else "external",
    )
    return render_census(table, settings.output_format, args.per_hyperplane)


def _cmd_stabilizer(args: argparse.Namespace, settings: AppSettings) -> str:
    if len(args.coeffs) != args.n:
        raise ValueError(f"--coeffs needs {args.n} entries, got {len(args.coeffs)}")
    H = canonicalize(GeneralHyperplane(coeffs=tuple(args.coeffs), rhs=args.rhs))
    description = stabilizer_description(H)
    record = atlas_record(H, "input")
    if settings.output_format != "text":
        return render_atlas([record], format_atlas([record]), settings.output_format)
    symbolic = cycle_index_symbolic(H)
    agrees = symbolic.terms == cycle_index_burnside(H).terms
    lines = [
        f"canonical: {H}",
        f"alpha: ({description.alpha}), delta: {description.delta}, t: {description.t}",
        f"vertices: {vertex_count(H)}",
        f"stabilizer order: {description.order}",
        f"burnside agrees: {'yes' if agrees else 'NO'}",
        render_cycle_index(symbolic, f"Z[{H}]", "text"),
    ]
    return "\n".join(lines)


def _cmd_verify(args: argparse.Namespace, settings: AppSettings):
    report = asyncio.run(run_verification(settings, selected_suites(args)))
    return render_verification(report, settings.output_format), report.failed


COMMANDS = {
    "cycle-index": _cmd_cycle_index,
    "hyperplanes": _cmd_hyperplanes,
    "table": _cmd_table,
    "stabilizer": _cmd_stabilizer,
}


def _configure_logging(level: str) -> None:
    numeric_level = getattr(logging, level.upper(), logging.WARNING)
    logging.basicConfig(
        level=numeric_level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S',
        stream=sys.stderr,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = load_app_config(args)
    except ValueError as e:
        _configure_logging("ERROR")
        logger.critical(f"Failed to load configuration: {e}")
        return EXIT_USAGE
    _configure_logging(settings.log_level)
    logger.info(f"Running '{args.verb}' with format {settings.output_format}.")

    try:
        if args.verb == "verify":
            output, failed = _cmd_verify(args, settings)
            print(output)
            return EXIT_VERIFICATION if failed else EXIT_OK
        print(COMMANDS[args.verb](args, settings))
        return EXIT_OK
    except ComputationError as e:
        logger.error(f"Computation failed [{e.code}]: {e.message}")
        return EXIT_COMPUTATION
    except ValueError as e:
        logger.error(f"Invalid request: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
