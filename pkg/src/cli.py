"""
Command-line interface.

    archtest test   DATA.csv [options]   run one test, JSON report
    archtest sample SPEC -n N [--seed S]  draw from a copula model, CSV
    archtest study  CONFIG.toml          Monte Carlo rejection rates
    archtest diag   [DATA.csv] [--model SPEC]  diagonal diagnostics, CSV

Exit codes: 0 success / hypothesis not rejected, 3 rejected, 1 error.
"""

import argparse
import dataclasses
import sys
import time
from contextlib import contextmanager
from pathlib import Path
from typing import List, Optional

from . import __version__
from .arch_test import TestConfig, analyse, decide
from .config import DEFAULT_ALPHA, DEFAULT_B, DEFAULT_GRID_M, DEFAULT_TIE_POLICY, TIE_POLICIES
from .data_loader import load_sample_csv, write_sample_csv
from .diagnostics import diagonal_table, save_field, tail_summary
from .empirical_copula import EmpiricalCopula
from .exceptions import ArchTestError, ConfigError
from .model_spec import parse_model
from .study import load_study_config, print_study_summary, run_study
from .utils import configure_logger, dumps_results, get_logger, make_rng

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_REJECT = 3


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with the generic error code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _bandwidth(value: str):
    if value == "auto":
        return value
    try:
        return float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bandwidth must be a number or 'auto', got '{value}'")


def _jobs(value: str) -> int:
    if value == "auto":
        return -1
    try:
        jobs = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"jobs must be an integer or 'auto', got '{value}'")
    if jobs == 0:
        raise argparse.ArgumentTypeError("jobs must be non-zero")
    return jobs


def _add_common(parser: argparse.ArgumentParser):
    group = parser.add_argument_group("logging")
    group.add_argument("--log-file", default=None, help="Also write log lines to this file")
    verbosity = group.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="count", default=0,
                           help="More log output (-v info, -vv debug)")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Errors only")


def _add_csv(parser: argparse.ArgumentParser):
    group = parser.add_argument_group("CSV input")
    group.add_argument("--has-header", action="store_true", help="First line holds column names")
    group.add_argument("--delimiter", default=",", help="Field separator (default ',')")
    group.add_argument("--columns", nargs=2, metavar=("COL1", "COL2"), default=None,
                       help="Column names or 0-based indices (default: first two)")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="archtest",
        description="Tests of associativity and Archimedeanity for bivariate copulas")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    p = sub.add_parser("test", help="Test one data set")
    p.add_argument("input", help="CSV file")
    _add_csv(p)
    p.add_argument("--hypothesis", choices=("arch", "assoc"), default="arch")
    p.add_argument("--stat", choices=("l2", "ks"), default="l2")
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p.add_argument("-B", type=int, default=DEFAULT_B, help="Bootstrap replications")
    p.add_argument("--grid-m", type=int, default=DEFAULT_GRID_M, help="Grid points per axis")
    p.add_argument("--bandwidth", type=_bandwidth, default="auto", help="Number in (0, 1/2) or 'auto'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ties", choices=TIE_POLICIES, default=DEFAULT_TIE_POLICY)
    p.add_argument("--jobs", type=_jobs, default=1, help="Worker count or 'auto'")
    p.add_argument("--out", default=None, help="JSON report file (default stdout)")
    p.add_argument("--dump-field", default=None,
                   help="Write H_n on the grid (.npy binary, otherwise CSV)")
    _add_common(p)

    p = sub.add_parser("sample", help="Draw from a copula model")
    p.add_argument("model", help="Model specification, e.g. 'clayton(theta=1)'")
    p.add_argument("-n", type=int, required=True, help="Number of rows")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="CSV file (default stdout)")
    p.add_argument("--no-header", action="store_true", help="Omit the u1,u2 header line")
    _add_common(p)

    p = sub.add_parser("study", help="Monte Carlo rejection rates")
    p.add_argument("config", help="Study configuration (TOML)")
    p.add_argument("--jobs", type=_jobs, default=None, help="Override the configured worker count")
    p.add_argument("--runs", type=int, default=None, help="Override the configured number of runs")
    p.add_argument("--out", default=None, help="JSON result file (default stdout)")
    p.add_argument("--table", default=None, help="Table-1 shaped CSV")
    p.add_argument("--long", default=None, help="Long CSV, one row per cell")
    p.add_argument("--timing", action="store_true", help="Include wall time in the JSON result")
    p.add_argument("--no-progress", action="store_true", help="Hide the progress bar")
    _add_common(p)

    p = sub.add_parser("diag", help="Diagonal diagnostics")
    p.add_argument("input", nargs="?", default=None, help="CSV file")
    _add_csv(p)
    p.add_argument("--model", default=None, help="Model specification for the C(u,u) column")
    p.add_argument("-n", type=int, default=None,
                   help="Lattice size (model only) or sample size drawn from --model when no CSV")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ties", choices=TIE_POLICIES, default=DEFAULT_TIE_POLICY)
    p.add_argument("--sample-model", action="store_true",
                   help="Without CSV: draw n observations from --model and diagnose them")
    p.add_argument("--out", default=None, help="CSV file (default stdout)")
    _add_common(p)
    return parser


@contextmanager
def _output(path: Optional[str]):
    if path is None:
        yield sys.stdout
        return
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        yield f


def _configure_logging(args):
    if args.quiet:
        level = "ERROR"
    elif args.verbose >= 2:
        level = "DEBUG"
    elif args.verbose == 1:
        level = "INFO"
    else:
        level = "WARNING"
    configure_logger(args.log_file, level)


def cmd_test(args) -> int:
    sample = load_sample_csv(args.input, args.has_header, args.delimiter, args.columns)
    config = TestConfig(
        hypothesis=args.hypothesis,
        statistic=args.stat,
        alpha=args.alpha,
        B=args.B,
        grid_m=args.grid_m,
        bandwidth=args.bandwidth,
        seed=args.seed,
        tie_policy=args.ties,
        n_jobs=args.jobs,
    )
    analysis = analyse(sample, config)
    report = decide(analysis)

    if args.dump_field:
        save_field(analysis.process_field, args.dump_field)
        get_logger().info(f"Process field written to {args.dump_field}")

    with _output(args.out) as out:
        out.write(dumps_results(report.to_dict()))
    return EXIT_REJECT if report.reject else EXIT_OK


def cmd_sample(args) -> int:
    model = parse_model(args.model)
    if args.n < 1:
        raise ConfigError(f"-n must be >= 1, got {args.n}")
    sample = model.sample(args.n, make_rng(args.seed))
    with _output(args.out) as out:
        write_sample_csv(sample, out, header=not args.no_header)
    return EXIT_OK


def cmd_study(args) -> int:
    config = load_study_config(args.config)
    if args.runs is not None:
        config = dataclasses.replace(config, runs=args.runs)
    result = run_study(config, n_jobs=args.jobs, progress=not args.no_progress)

    if args.table:
        result.to_table().to_csv(args.table, index=False, lineterminator="\n")
    if args.long:
        result.to_long_frame().to_csv(args.long, index=False, float_format="%.17g", lineterminator="\n")
    if not args.quiet:
        print_study_summary(result)
    if args.timing:
        get_logger().info(f"Wall time: {result.wall_time:.1f}s")

    with _output(args.out) as out:
        out.write(dumps_results(result.payload(include_timing=args.timing)))
    return EXIT_OK


def cmd_diag(args) -> int:
    model = parse_model(args.model) if args.model else None
    ec = None
    if args.input:
        sample = load_sample_csv(args.input, args.has_header, args.delimiter, args.columns)
        ec = EmpiricalCopula.from_sample(sample, args.ties, make_rng(args.seed, 2))
    elif model is None:
        raise ConfigError("diag needs a CSV input, a --model, or both")
    elif args.sample_model:
        if args.n is None:
            raise ConfigError("--sample-model needs -n")
        sample = model.sample(args.n, make_rng(args.seed, 0))
        ec = EmpiricalCopula.from_sample(sample, args.ties, make_rng(args.seed, 2))
    elif args.n is None:
        raise ConfigError("a model-only diagonal needs -n")

    table = diagonal_table(ec, model, n=args.n)
    if model is not None:
        summary = tail_summary(model)
        get_logger().info(
            f"{summary['family']}: tau={summary['kendall_tau']}, "
            f"lambda_L={summary['lambda_L']:.4g}, lambda_U={summary['lambda_U']:.4g}")
    with _output(args.out) as out:
        table.to_csv(out, index=False, float_format="%.17g", lineterminator="\n")
    return EXIT_OK


COMMANDS = {
    "test": cmd_test,
    "sample": cmd_sample,
    "study": cmd_study,
    "diag": cmd_diag,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args)
    logger = get_logger()

    start = time.perf_counter()
    try:
        code = COMMANDS[args.command](args)
    except (ArchTestError, OSError) as e:
        logger.error(str(e))
        return EXIT_ERROR
    logger.debug(f"{args.command} finished in {time.perf_counter() - start:.2f}s")
    return code
