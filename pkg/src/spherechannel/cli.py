"""Command-line front end: `simulate` sweeps and `verify` self-checks.

Exit codes: 0 success, 1 validation error, 2 solver failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys

from .errors import (
    RecurrenceOverflowError,
    ScenarioValidationError,
    SeriesConvergenceError,
    SingularInterfaceError,
)
from .greens import TruncationSpec
from .scattering import dump_coefficient_csv
from .scenario import load_scenario
from .sweep import (
    DEFAULT_OFFSETS,
    DEFAULT_THETAS,
    SweepConfig,
    run_sweep,
    write_plot_script,
)
from .verify import format_report, run_verify

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_SOLVER = 2
EXIT_IO = 3


def _float_list(text):
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated floats, got {text!r}") from exc


def build_parser():
    parser = argparse.ArgumentParser(
        prog="spherechannel",
        description="Dipole fields near a lossy dielectric sphere",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a receiver sweep and write CSV")
    sim.add_argument("--config", required=True, help="scenario JSON file")
    sim.add_argument("--out", required=True, help="output CSV path")
    sim.add_argument("--theta", type=_float_list, default=DEFAULT_THETAS,
                     help="comma-separated receiver polar angles (rad)")
    sim.add_argument("--offsets", type=_float_list, default=DEFAULT_OFFSETS,
                     help="comma-separated vertical offsets (m)")
    sim.add_argument("--field", choices=("scattered", "total"), default="scattered")
    sim.add_argument("--truncation-q", type=int, default=None,
                     help="series order cap (default 120 with adaptive stop)")
    sim.add_argument("--rel-tol", type=float, default=1e-8,
                     help="series stop tolerance; 0 sums every order up to the cap")
    sim.add_argument("--receiver-range", type=float, default=0.18,
                     help="receiver base radius before offset displacement (m)")
    sim.add_argument("--offset-direction", choices=("radial", "away", "plus-z"),
                     default="radial")
    sim.add_argument("--phi-step", type=float, default=None, help="azimuth step (rad)")
    sim.add_argument("--workers", type=int, default=1)
    sim.add_argument("--plot-script", action="store_true",
                     help="emit a gnuplot script next to the CSV")
    sim.add_argument("--dump-coefficients", metavar="CSV",
                     help="also write per-order interface coefficients")

    ver = sub.add_parser("verify", help="run the invariant self-checks")
    ver.add_argument("--full", action="store_true", help="use the large grids")
    return parser


def _simulate(args):
    scenario, source = load_scenario(args.config)
    trunc_kwargs = {"rel_tol": args.rel_tol}
    if args.truncation_q is not None:
        trunc_kwargs["max_order"] = args.truncation_q
    config_kwargs = dict(
        theta_values=args.theta,
        offsets_m=args.offsets,
        field_selector=args.field,
        truncation=TruncationSpec(**trunc_kwargs),
        receiver_range_m=args.receiver_range,
        offset_direction=args.offset_direction,
        workers=args.workers,
    )
    if args.phi_step is not None:
        config_kwargs["phi_step"] = args.phi_step
    config = SweepConfig(**config_kwargs)

    summary = run_sweep(scenario, source, config, args.out)
    if args.plot_script:
        write_plot_script(args.out, str(args.out) + ".gnuplot", config)
    if args.dump_coefficients:
        dump_coefficient_csv(scenario, config.truncation.max_order, args.dump_coefficients)
    print(
        f"rows={summary.rows} max_db={summary.max_db:.3f} min_db={summary.min_db:.3f} "
        f"monotone_trend={summary.monotone_trend}"
    )
    return EXIT_OK


def _verify(args):
    results = run_verify(full=args.full)
    print(format_report(results))
    return EXIT_OK if all(check.passed for check in results) else EXIT_SOLVER


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            return _simulate(args)
        return _verify(args)
    except ScenarioValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ValueError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (SeriesConvergenceError, SingularInterfaceError, RecurrenceOverflowError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
