"""``udw`` command line: presets, sweeps, convergence reports and mode dumps.

Exit codes: 0 success, 1 numerical failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import experiments as exp
from .errors import ConfigError, UDWError
from .response import DetectorParams
from .states import build_pullback

EXIT_OK, EXIT_NUMERICAL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"udw: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _parser():
    p = _Parser(prog="udw", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    pre = sub.add_parser("preset", help="reproduce one figure's curves as CSV")
    pre.add_argument("name", nargs="?", help="preset name (omit with --list)")
    pre.add_argument("--out", default="udw-out", help="output directory")
    pre.add_argument("--threads", type=int, default=1)
    pre.add_argument("--list", action="store_true", help="list the preset catalog")

    sw = sub.add_parser("sweep", help="run a sweep from a config file or a manifest")
    sw.add_argument("spec")
    sw.add_argument("--out", default="udw-out")
    sw.add_argument("--threads", type=int, default=None)
    sw.add_argument("--name", default=None, help="output file stem (default: spec file stem)")

    cv = sub.add_parser("converge", help="P(N) table and recommended truncation")
    cv.add_argument("spec")
    cv.add_argument("--n-list", default="5,15,50,100,200")
    cv.add_argument("--out", default=None, help="also write the table as CSV here")

    md = sub.add_parser("modes", help="inspect the mode family of a config")
    md.add_argument("spec")
    md.add_argument("--dump", action="store_true", help="also print profiles on a grid")
    md.add_argument("--points", type=int, default=11)
    return p


def _first_config(spec, kind_index=0):
    over = {spec.axis: spec.grid[0]} if spec.axis in ("a", "m") else {}
    return spec.scenario(spec.kinds[kind_index], **over)


def _cmd_preset(args):
    if args.list or not args.name:
        for name in exp.PRESETS:
            note = exp.PRESET_NOTES.get(name, "")
            print(f"{name}{'  (' + note + ')' if note else ''}")
        return EXIT_OK
    if args.name not in exp.PRESETS:
        print(f"udw: unknown preset {args.name!r}; try 'udw preset --list'", file=sys.stderr)
        return EXIT_USAGE
    paths, ok = exp.run_preset(args.name, args.out, args.threads)
    for path in paths:
        print(path)
    return EXIT_OK if ok else EXIT_NUMERICAL


def _cmd_sweep(args):
    spec = exp.load_spec(args.spec)
    result = exp.run_sweep(spec, args.threads)
    name = args.name or Path(args.spec).name.split(".")[0]
    for path in exp.write_result(result, args.out, name):
        print(path)
    for i, msg in result.failures.items():
        print(f"row {i}: {msg}", file=sys.stderr)
    return EXIT_NUMERICAL if result.failures else EXIT_OK


def _cmd_converge(args):
    spec = exp.load_spec(args.spec)
    try:
        n_list = [int(x) for x in args.n_list.split(",") if x.strip()]
    except ValueError:
        print(f"udw: --n-list must be comma-separated integers, got {args.n_list!r}",
              file=sys.stderr)
        return EXIT_USAGE
    if not n_list or any(b <= a for a, b in zip(n_list, n_list[1:])) or n_list[0] < 1:
        print("udw: --n-list must be positive and strictly ascending", file=sys.stderr)
        return EXIT_USAGE
    for i, kind in enumerate(spec.kinds):
        cfg = _first_config(spec, i)
        det = DetectorParams(spec.omega_at(cfg.L, cfg.m), spec.lam, spec.window)
        report = exp.convergence_report(cfg, spec.state, det, n_list, spec.quad, spec.basis)
        print(f"[{kind.value}]")
        print(report.table())
        if args.out:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            lines = ["N,P,delta"] + [
                f"{n},{exp.format_value(p)},{'' if d is None else exp.format_value(d)}"
                for n, p, d in zip(report.N, report.P, report.deltas)]
            path = out / f"converge_{kind.value}.csv"
            path.write_text("\n".join(lines) + "\n")
            print(path)
    return EXIT_OK


def _cmd_modes(args):
    spec = exp.load_spec(args.spec)
    n = np.arange(1, spec.N + 1)
    for i, kind in enumerate(spec.kinds):
        cfg = _first_config(spec, i)
        fam = build_pullback(cfg, spec.basis).family
        print(f"[{kind.value}] family={fam.tag} chart={fam.chart} walls={fam.walls}")
        print("n,omega,norm")
        for k, om, nm in zip(n, fam.omegas(n), fam.norms(n)):
            print(f"{k},{exp.format_value(om)},{exp.format_value(nm)}")
        if args.dump:
            lo, hi = fam.walls
            pos = np.linspace(lo, hi, max(2, args.points))
            prof = fam.profiles(pos, n)
            print("position," + ",".join(f"v{k}" for k in n))
            for p, row in zip(pos, prof):
                print(",".join(exp.format_value(v) for v in (p, *row)))
    return EXIT_OK


def main(argv=None):
    args = _parser().parse_args(argv)
    handler = {"preset": _cmd_preset, "sweep": _cmd_sweep, "converge": _cmd_converge,
               "modes": _cmd_modes}[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"udw: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UDWError as exc:
        print(f"udw: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
