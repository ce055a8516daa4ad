"""Command-line surface for the library.

Subcommands wrap the library operations one to one; every number is
printed as an exact base-10 ``num/den`` string.  Exit codes: 0 success,
1 invalid input or error, 2 a sweep found a singular pair at some
weight other than the degenerate k = 14, 3 a bound comparison stayed
inconclusive at the precision ceiling.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import enclosure
from .classnum import bernoulli_table, hurwitz_H, warm_bernoulli
from .cohen import NormalizationUndefined, c_coeff, delta
from .independence import (
    CheckpointMismatch,
    SweepReport,
    logk_capacity,
    min_weight_general,
    pair_sweep,
    sweep_cap,
    tuple_nonsingular,
)

DEGENERATE_WEIGHT = 14  # dim S_14 = 0: every coefficient row with r < 13 vanishes

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_SINGULAR = 2
EXIT_INCONCLUSIVE = 3


@dataclass
class RunConfig:
    workers: int = 1
    precision_bits: int = enclosure.DEFAULT_MAX_PREC_BITS
    cache_dir: str = ""
    output: str = "human"

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.precision_bits < 128:
            raise ValueError("precision-bits must be >= 128")
        if self.output not in ("human", "jsonl", "csv"):
            raise ValueError(f"unknown output format {self.output!r}")
        if not self.cache_dir:
            self.cache_dir = os.environ.get(
                "COHENPERIODS_CACHE_DIR",
                os.path.join(os.path.expanduser("~"), ".cache", "cohenperiods"),
            )

    @property
    def bernoulli_cache(self) -> str:
        return os.path.join(self.cache_dir, "bernoulli-cache.txt")


def _global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    parser.add_argument("--workers", type=int,
                        default=d if suppress else 1,
                        help="worker processes for sweeps")
    parser.add_argument("--precision-bits", type=int,
                        default=d if suppress else enclosure.DEFAULT_MAX_PREC_BITS,
                        help="ceiling for adaptive enclosure precision (default 4096)")
    parser.add_argument("--cache-dir",
                        default=d if suppress else "",
                        help="cache directory (env COHENPERIODS_CACHE_DIR)")
    parser.add_argument("--out",
                        default=d if suppress else "",
                        help="write report output to this file instead of stdout")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cohenperiods",
        description="Exact class numbers, Cohen form coefficients and period-matrix certification",
    )
    _global_options(parser, suppress=False)
    # the same options are accepted after the subcommand; SUPPRESS keeps the
    # subparser from clobbering values parsed by the main parser
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)

    sub = parser.add_subparsers(dest="command", required=True, parser_class=argparse.ArgumentParser)

    p = sub.add_parser("hclass", parents=[common], help="generalized Hurwitz class number H(r, N)")
    p.add_argument("r", type=int)
    p.add_argument("N", type=int)

    p = sub.add_parser("coeff", parents=[common], help="exact Fourier coefficient c_{k,r}(m)")
    p.add_argument("k", type=int)
    p.add_argument("r", type=int)
    p.add_argument("m", type=int)

    p = sub.add_parser("delta", parents=[common], help="normalized-coefficient error term and bound verdict")
    p.add_argument("k", type=int)
    p.add_argument("r", type=int)
    p.add_argument("m", type=int)

    p = sub.add_parser("sweep", parents=[common], help="pairwise nonsingularity sweep over a weight range")
    p.add_argument("k_min", type=int)
    p.add_argument("k_max", type=int)
    p.add_argument("--cap", choices=("central", "quarter"), default="central")
    p.add_argument("--checkpoint", default="", help="checkpoint file for resumable sweeps")
    p.add_argument("--format", choices=("human", "jsonl", "csv"), default="human")

    p = sub.add_parser("tuple", parents=[common], help="exact nonsingularity of one coefficient matrix")
    p.add_argument("k", type=int)
    p.add_argument("ells", type=int, nargs="+")
    p.add_argument("--scheme", choices=("powers_of_4", "squares"), default="powers_of_4")

    p = sub.add_parser("thresholds", parents=[common], help="weight thresholds for n-tuples of rows")
    p.add_argument("n", type=int)

    p = sub.add_parser("bern", parents=[common], help="build and persist the Bernoulli number cache")
    p.add_argument("--up-to", type=int, required=True, dest="up_to")

    return parser


def _fail(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return EXIT_ERROR


def cmd_hclass(args, config: RunConfig, out) -> int:
    print(hurwitz_H(args.r, args.N), file=out)
    return EXIT_OK


def cmd_coeff(args, config: RunConfig, out) -> int:
    print(c_coeff(args.k, args.r, args.m), file=out)
    return EXIT_OK


def cmd_delta(args, config: RunConfig, out) -> int:
    result = delta(args.k, args.r, args.m, max_prec_bits=config.precision_bits)
    print(f"{result.delta} ({result.within})", file=out)
    if result.within == enclosure.INCONCLUSIVE:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _emit_human(report: SweepReport, out) -> None:
    status = "ok" if not report.singular_pairs else "SINGULAR"
    if report.k == DEGENERATE_WEIGHT and report.singular_pairs:
        status = "degenerate (dim S_14 = 0)"
    pairs = " ".join(f"{a}-{b}" for a, b in report.singular_pairs)
    norm = " ".join(str(l) for l in report.normalization_failures)
    print(
        f"k={report.k} pairs={report.pairs_checked} {status}"
        + (f" singular=[{pairs}]" if pairs else "")
        + (f" norm_fail=[{norm}]" if norm else ""),
        file=out,
    )


def cmd_sweep(args, config: RunConfig, out) -> int:
    if args.k_min % 2 or args.k_max % 2 or not 12 <= args.k_min <= args.k_max:
        return _fail("sweep needs even weights with 12 <= k_min <= k_max")
    os.makedirs(config.cache_dir, exist_ok=True)
    warm_bernoulli(2 * (args.k_max - 1), config.bernoulli_cache)
    csv_writer = None
    if config.output == "csv":
        csv_writer = csv.writer(out)
        csv_writer.writerow(["k", "pairs", "singular", "norm_fail", "ms"])
    saw_singular = False
    reports = pair_sweep(
        args.k_min,
        args.k_max,
        cap_rule=args.cap,
        workers=config.workers,
        checkpoint_path=args.checkpoint or None,
    )
    for report in reports:
        if report.singular_pairs and report.k != DEGENERATE_WEIGHT:
            saw_singular = True
        if config.output == "jsonl":
            print(json.dumps(report.to_json_dict()), file=out)
        elif config.output == "csv":
            csv_writer.writerow([
                report.k,
                report.pairs_checked,
                " ".join(f"{a}-{b}" for a, b in report.singular_pairs),
                " ".join(str(l) for l in report.normalization_failures),
                report.wall_ms,
            ])
        else:
            _emit_human(report, out)
        out.flush()
    return EXIT_SINGULAR if saw_singular else EXIT_OK


def cmd_tuple(args, config: RunConfig, out) -> int:
    result = tuple_nonsingular(args.k, args.ells, scheme=args.scheme)
    verdict = "nonsingular" if result.nonsingular else "singular"
    print(f"{verdict} det={result.det}", file=out)
    return EXIT_OK


def cmd_thresholds(args, config: RunConfig, out) -> int:
    lo, hi = min_weight_general(args.n, max_prec_bits=config.precision_bits)
    print(f"min_weight enclosure [{lo:.6f}, {hi:.6f}]", file=out)
    # smallest even weight whose log-capacity admits n rows
    k = _capacity_weight(args.n, config.precision_bits)
    print(f"logk_capacity: smallest even k with floor(log k / 4) >= {args.n} "
          f"and k >= e^12 is {k}", file=out)
    return EXIT_OK


def _capacity_weight(n: int, precision_bits: int) -> int:
    import math as _math

    guess = max(_math.exp(12.0), _math.exp(4.0 * n))
    k = int(guess) // 2 * 2
    k = max(k - 4, 12)
    while True:
        cap = logk_capacity(k, max_prec_bits=precision_bits)
        if cap.valid and cap.n_max >= n:
            return k
        k += 2


def cmd_bern(args, config: RunConfig, out) -> int:
    if args.up_to < 0:
        return _fail("--up-to must be >= 0")
    os.makedirs(config.cache_dir, exist_ok=True)
    table = warm_bernoulli(args.up_to, config.bernoulli_cache)
    print(f"cache covers B_0..B_{table.max_index - 1} at {config.bernoulli_cache}", file=out)
    return EXIT_OK


_HANDLERS = {
    "hclass": cmd_hclass,
    "coeff": cmd_coeff,
    "delta": cmd_delta,
    "sweep": cmd_sweep,
    "tuple": cmd_tuple,
    "thresholds": cmd_thresholds,
    "bern": cmd_bern,
}


def main(argv=None) -> int:
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)  # exact output can run to many digits
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        config = RunConfig(
            workers=args.workers,
            precision_bits=args.precision_bits,
            cache_dir=args.cache_dir,
            output=getattr(args, "format", "human"),
        )
    except ValueError as exc:
        return _fail(str(exc))
    out = sys.stdout
    opened = None
    if args.out:
        # append when resuming a checkpointed sweep so earlier lines survive
        resume = (
            args.command == "sweep"
            and getattr(args, "checkpoint", "")
            and os.path.exists(args.checkpoint)
        )
        opened = open(args.out, "a" if resume else "w")
        out = opened
    try:
        return _HANDLERS[args.command](args, config, out)
    except (ValueError, NormalizationUndefined, CheckpointMismatch, OSError) as exc:
        return _fail(str(exc))
    finally:
        if opened:
            opened.close()


if __name__ == "__main__":
    sys.exit(main())
