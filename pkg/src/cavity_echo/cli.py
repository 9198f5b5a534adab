"""Command-line front end.

    cavity-echo efficiency [--config PATH] [--set section.field=value ...]
    cavity-echo scan --ratios 0.5,1,2 --modes 1,10
    cavity-echo fig1 --out fig1.csv
    cavity-echo oracle --trajectory traj.dat
    cavity-echo optimize --objective retrieval
    cavity-echo depth --gamma1-hz 1e8 --length-m 1e-3

Without ``--config`` the reference ``fig1`` scenario (one mode, ratio 1) are used.
Exit status: 0 on success, 2 for configuration errors, 3 for numerical
failures.
"""

from __future__ import annotations

import argparse
import copy
import os
import sys

from .errors import ConfigError, NumericalError
from .model import load_config, validate_config
from .optimize import fig1_grids, find_optimal_gamma1, optical_depth, scan_ratio_modes
from .reports import emit_report, format_number
from .spectral import memory_efficiency_total
from .timedomain import export_trajectory, oracle_comparison, simulate

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

# the reference fig1 scenario, in config-file form
DEFAULT_DOCUMENT = {
    "cavity": {"gamma1": 80.0, "gamma2": 0.8},
    "ensemble": {"coupling_strength_sq": 400.0, "delta_in": 10.0, "gamma21": 1e-4},
    "train": {"mode_count": 1, "bandwidth": 1.0, "mean_photons": 1.0, "spacing_factor": 5.0},
}


def _float_list(text):
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("list is empty")
    return values


def _int_list(text):
    out = []
    for part in text.split(","):
        part = part.strip()
        try:
            if "-" in part:
                lo, hi = part.split("-")
                out.extend(range(int(lo), int(hi) + 1))
            elif part:
                out.append(int(part))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected integers or ranges like 1-100, got {text!r}")
    if not out:
        raise argparse.ArgumentTypeError("list is empty")
    return out


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="TOML configuration file (default: the fig1 scenario)")
    common.add_argument("--out", metavar="PATH", help="write the main output here instead of stdout")
    common.add_argument("--set", metavar="SECTION.FIELD=VALUE", action="append", default=[],
                        dest="overrides", help="override one config field; repeatable")

    parser = argparse.ArgumentParser(prog="cavity-echo", description="Cavity photon-echo memory efficiencies.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("efficiency", parents=[common], help="storage and memory efficiency of the configured train")
    p.add_argument("--format", choices=("json", "csv"), default="json", help="report format (default json)")

    p = sub.add_parser("scan", parents=[common], help="Q_ME over ratio Gamma_in/gamma1 and mode count, as CSV")
    p.add_argument("--ratios", type=_float_list, default=[1.0], help="comma-separated ratios Gamma_in/gamma1")
    p.add_argument("--modes", type=_int_list, default=[1], help="mode counts, e.g. 1,2,5 or 1-100")
    p.add_argument("--gamma2-ratio", type=float, default=None,
                   help="gamma2/gamma1 held fixed across the scan (default: from the config)")
    p.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")

    p = sub.add_parser("fig1", parents=[common],
                       help="reference surface: M = 1..100, 61 ratios log-spaced over 0.1..10, as CSV")
    p.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")

    p = sub.add_parser("oracle", parents=[common],
                       help="time-domain integration and comparison with the closed forms")
    p.add_argument("--trajectory", metavar="PATH", help="also export the trajectory as columns to PATH")
    p.add_argument("--stride", type=int, default=1, help="keep every n-th time step in the export")

    p = sub.add_parser("optimize", parents=[common], help="gamma1 maximising a single-mode efficiency")
    p.add_argument("--objective", choices=("retrieval", "storage", "narrowband"), default="retrieval")
    p.add_argument("--format", choices=("json", "csv"), default="json", help="report format (default json)")
    p.add_argument("--rate-unit-hz", type=float, default=None,
                   help="physical value of one rate unit in 1/s, to report the optical depth")
    p.add_argument("--length-m", type=float, default=None, help="medium length in metres, for the optical depth")

    p = sub.add_parser("depth", help="optical depth gamma1 L / c")
    p.add_argument("--gamma1-hz", type=float, required=True, help="cavity coupling rate in 1/s")
    p.add_argument("--length-m", type=float, required=True, help="medium length in metres")
    p.add_argument("--out", metavar="PATH", help="write the value here instead of stdout")
    return parser


def _config(args):
    if args.config is None:
        return validate_config(copy.deepcopy(DEFAULT_DOCUMENT), args.overrides)
    if not os.path.isfile(args.config):
        raise ConfigError(f"config file {args.config!r} not found")
    return load_config(args.config, args.overrides)


def _emit(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _comparison_table(rows, audit):
    lines = ["quantity,analytic,oracle,rel_error"]
    lines += [f"{n},{format_number(a)},{format_number(o)},{format_number(e)}" for n, a, o, e in rows]
    lines.append(f"# energy audit relative error {format_number(audit.relative_error)}")
    return "\n".join(lines) + "\n"


def run(args) -> int:
    if args.command == "depth":
        _emit(format_number(optical_depth(args.gamma1_hz, args.length_m)) + "\n", args.out)
        return EXIT_OK

    config = _config(args)
    if args.command == "efficiency":
        report = memory_efficiency_total(config.train, config.cavity, config.ensemble, config.quadrature)
        _emit(emit_report(report, args.format), args.out)
    elif args.command == "scan":
        result = scan_ratio_modes(config, args.ratios, args.modes, args.gamma2_ratio, workers=args.workers)
        _emit(emit_report(result, "csv"), args.out)
    elif args.command == "fig1":
        m_grid, ratio_grid = fig1_grids()
        result = scan_ratio_modes(config, ratio_grid, m_grid, workers=args.workers)
        _emit(emit_report(result, "csv"), args.out)
    elif args.command == "oracle":
        traj = simulate(config)
        if args.trajectory:
            export_trajectory(traj, args.trajectory, args.stride)
        _emit(_comparison_table(oracle_comparison(config, traj), traj.audit), args.out)
    elif args.command == "optimize":
        mode = config.train.modes[0]
        report = find_optimal_gamma1(
            config.ensemble, config.cavity.gamma2, mode.bandwidth, mode.shape, args.objective,
            config.quadrature, rate_unit_hz=args.rate_unit_hz, length_m=args.length_m,
        )
        _emit(emit_report(report, args.format), args.out)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except ConfigError as exc:
        for e in exc.errors:
            print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, FloatingPointError) as exc:
        print(f"numerical error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        # invalid numeric flags such as a negative length
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
