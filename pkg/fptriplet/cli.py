"""Command-line entry point: sample, validate, bench and fpde subcommands.

Exit codes: 0 on success, 1 on runtime errors or failed checks, 2 on configuration errors.
"""
import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from .acceptance import SUITES, run_suite, write_validate_json
from .bench import GRIDS, run_bench, write_bench_csv
from .config import ConfigLoader
from .diagnostics import Tally
from .engine import sample_many
from .errors import ConfigError, FptripletError
from .fpde import FpdeProblem, default_grid, fpde_estimate, write_fpde_csv
from .model import drift_adjust
from .rng import RngStream

logger = logging.getLogger(__name__)

SAMPLE_COLUMNS = ("tau", "undershoot", "overshoot", "M", "K")
# flag dest -> config key
MODEL_FLAGS = {
    "alpha": "alpha",
    "vartheta": "vartheta",
    "q": "q",
    "r": "r",
    "r0": "r0",
    "lambda_": "lambda",
    "boundary": "boundary",
    "rho": "rho",
    "seed": "seed",
    "drift": "drift",
    "undershoot": "undershoot",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--config", help="key = value configuration file")
    common.add_argument("--out", help="output file")
    common.add_argument("--threads", type=int, default=1, help="worker threads")
    common.add_argument("--quiet", action="store_true", help="log warnings only")
    common.add_argument("--verbose", action="store_true", help="log debug messages")
    model = common.add_argument_group("model")
    model.add_argument("--alpha")
    model.add_argument("--vartheta")
    model.add_argument("--q")
    model.add_argument("--r", help="truncation level or 'auto'")
    model.add_argument("--r0", help="outer truncation level or 'inf'")
    model.add_argument("--lambda", dest="lambda_", help="exp(rate[,mass]), pareto(p,cut), point(size[,mass]), none")
    model.add_argument("--boundary", help="const(c0) or linear(c0,slope)")
    model.add_argument("--rho")
    model.add_argument("--seed")
    model.add_argument("--drift")
    model.add_argument("--undershoot", help="joint or beta")

    parser = _Parser(prog="fptriplet", description="Exact first-passage triplets of subordinators")
    sub = parser.add_subparsers(dest="command", required=True)
    sample = sub.add_parser("sample", parents=[common], help="draw crossing triplets")
    sample.add_argument("--n", type=int, default=1000)
    validate = sub.add_parser("validate", parents=[common], help="run the acceptance suite")
    validate.add_argument("--suite", choices=SUITES, default="quick")
    bench = sub.add_parser("bench", parents=[common], help="time the sampler over a parameter grid")
    bench.add_argument("--grid", choices=sorted(GRIDS), default="alpha")
    bench.add_argument("--n", type=int, default=100)
    bench.add_argument("--timeout", type=float, default=600.0, help="seconds per grid point")
    fpde = sub.add_parser("fpde", parents=[common], help="Monte Carlo FPDE solution on a 3x3 grid")
    fpde.add_argument("--horizon", type=float, default=5.0)
    fpde.add_argument("--n", type=int, default=10_000)
    return parser


def configure_logging(args):
    level = logging.INFO
    if args.quiet:
        level = logging.WARNING
    if args.verbose:
        level = logging.DEBUG
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def _resolve(args):
    overrides = {key: getattr(args, dest) for dest, key in MODEL_FLAGS.items()}
    return ConfigLoader(args.config).resolve(overrides)


def _sidecar(path, data):
    path = Path(path)
    sidecar = path.with_suffix(".json")
    if sidecar == path:
        sidecar = path.with_name(f"{path.stem}.config.json")
    with open(sidecar, "w") as f:
        json.dump(data, f, indent=4)
    return sidecar


def run_sample(args, resolved):
    if args.n < 1:
        raise ConfigError(f"--n must be >= 1, got {args.n}")
    out = args.out or "samples.csv"
    tally = Tally()
    trips = sample_many(resolved.spec, resolved.sampling_boundary, args.n, resolved.engine,
                        threads=args.threads, tally=tally)
    with open(out, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(SAMPLE_COLUMNS)
        for trip in trips:
            trip = drift_adjust(trip, resolved.drift)
            writer.writerow([repr(trip.T), repr(trip.U), repr(trip.V), trip.loop_count, trip.cpp_jump_count])
    _sidecar(out, {"config": resolved.as_dict(), "n": args.n, "tally": tally.as_dict()})
    logger.info(f"wrote {args.n} triplets to {out}")
    return 0


def run_validate(args, resolved):
    out = args.out or "validate.json"
    results = run_suite(args.suite, seed=resolved.engine.seed)
    write_validate_json(results, out)
    _sidecar(out, {"config": resolved.as_dict(), "suite": args.suite})
    failed = [name for name, result in results.items() if not result.passed]
    for name in failed:
        logger.error(f"check failed: {name}")
    return 1 if failed else 0


def run_bench_command(args, resolved):
    out = args.out or "bench.csv"
    tally = Tally()
    rows = run_bench(GRIDS[args.grid](), args.n, seed=resolved.engine.seed, cfg=resolved.engine,
                     timeout=args.timeout, threads=args.threads, tally=tally)
    write_bench_csv(rows, out)
    _sidecar(out, {"config": resolved.as_dict(), "grid": args.grid, "n": args.n,
                   "timeout": args.timeout, "tally": tally.as_dict()})
    logger.info(f"wrote {len(rows)} grid points to {out}")
    return 0


def run_fpde(args, resolved):
    out = args.out or "fpde.csv"
    problem = FpdeProblem(horizon=args.horizon)
    rows = fpde_estimate(problem, default_grid(), args.n, RngStream(resolved.engine.seed),
                         cfg=resolved.engine, threads=args.threads)
    write_fpde_csv(rows, out)
    _sidecar(out, {"config": resolved.as_dict(), "horizon": args.horizon, "n": args.n,
                   "spec": problem.spec.as_dict()})
    logger.info(f"wrote {len(rows)} grid points to {out}")
    return 0


COMMANDS = {
    "sample": run_sample,
    "validate": run_validate,
    "bench": run_bench_command,
    "fpde": run_fpde,
}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except ConfigError as exc:
        print(f"fptriplet: {exc}", file=sys.stderr)
        return 2
    configure_logging(args)
    try:
        resolved = _resolve(args)
        return COMMANDS[args.command](args, resolved)
    except ConfigError as exc:
        logger.error(f"configuration error: {exc}")
        return 2
    except (FptripletError, AssertionError, OSError) as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        return 1
