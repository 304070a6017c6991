"""Command line entry point: ``wgms run | verify | norm-scan | soliton-error``."""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

import numpy as np

from wgms.config import KEYS, ConfigError, parse_run_spec
from wgms.diagnostics import fit_scaling_exponent, nls_soliton_run, observed_order, operator_norm_B
from wgms.equations import kdv_system, nls_system, sge_system
from wgms.io import format_real
from wgms.runner import EXIT_USAGE, run
from wgms.spectral import make_grid
from wgms.verify import verify_suite


def _add_run_parser(sub):
    p = sub.add_parser("run", help="integrate one equation and write snapshots")
    p.add_argument("config", nargs="?", help="key = value configuration file")
    for key, (_, text) in KEYS.items():
        if key == "force":
            p.add_argument("--force", action="store_const", const=True, default=None, help=text)
        else:
            p.add_argument(f"--{key.replace('_', '-')}", dest=key, metavar="VALUE", help=text)
    return p


def _writer(out):
    fh = open(out, "w", newline="") if out else sys.stdout
    return fh, csv.writer(fh, lineterminator="\n")


def _system(name, args):
    if name == "kdv":
        return kdv_system(args.epsilon, args.beta)
    if name == "nls":
        return nls_system(args.mu, args.nu)
    return sge_system()


def cmd_run(args) -> int:
    text = Path(args.config).read_text() if args.config else ""
    overrides = {k: getattr(args, k) for k in KEYS}
    try:
        spec = parse_run_spec(text, overrides)
    except ConfigError as exc:
        where = f"{args.config}: " if args.config and exc.line is not None else ""
        print(f"error: {where}{exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(spec)


def cmd_verify(args) -> int:
    status, _ = verify_suite(args.scope)
    return status


def cmd_norm_scan(args) -> int:
    grid = make_grid(args.n, args.period)
    sys_ = _system(args.equation, args)
    dts = np.logspace(np.log10(args.dt_min), np.log10(args.dt_max), args.count)
    fit = fit_scaling_exponent(sys_, grid, dts)
    fh, w = _writer(args.out)
    w.writerow(["dt", "norm_B"])
    for dt in dts:
        w.writerow([format_real(dt), format_real(operator_norm_B(sys_, grid, dt))])
    if fh is not sys.stdout:
        fh.close()
    print(f"# slope {fit.slope:.6f} expected q/ell {fit.expected_slope:.6f}", file=sys.stderr)
    return 0


def cmd_soliton_error(args) -> int:
    dts = sorted((float(v) for v in args.dt.split(",")), reverse=True)
    fh, w = _writer(args.out)
    w.writerow(["dt", "linf", "l2", "mass_drift", "order"])
    prev = prev_dt = None
    for dt in dts:
        r = nls_soliton_run(dt, t_end=args.t_end, a=args.a, v=args.v, mu=args.mu, nu=args.nu,
                            n_points=args.n, period=args.period)
        order = observed_order(prev, r["linf"]) if prev is not None and np.isclose(prev_dt, 2 * dt) else ""
        w.writerow([format_real(dt), format_real(r["linf"]), format_real(r["l2"]),
                    format_real(r["mass_drift"]), format_real(order) if order != "" else ""])
        prev, prev_dt = r["linf"], dt
    if fh is not sys.stdout:
        fh.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wgms", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    _add_run_parser(sub).set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("scope", nargs="?", choices=("all", "fast"), default="all")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("norm-scan", help="filter operator norm against dt, as CSV")
    p.add_argument("--equation", choices=("kdv", "nls", "sge"), required=True)
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--nu", type=float, default=1.0)
    p.add_argument("--n", type=int, default=512)
    p.add_argument("--period", type=float, default=2 * np.pi)
    p.add_argument("--dt-min", type=float, default=1e-4)
    p.add_argument("--dt-max", type=float, default=1e-2)
    p.add_argument("--count", type=int, default=8)
    p.add_argument("--out")
    p.set_defaults(func=cmd_norm_scan)

    p = sub.add_parser("soliton-error", help="NLS soliton error against dt, as CSV")
    p.add_argument("--dt", default="4e-3,2e-3,1e-3", help="comma-separated step sizes")
    p.add_argument("--t-end", type=float, default=1.0)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--v", type=float, default=0.0)
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--nu", type=float, default=2.0)
    p.add_argument("--n", type=int, default=512)
    p.add_argument("--period", type=float, default=40.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_soliton_error)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
