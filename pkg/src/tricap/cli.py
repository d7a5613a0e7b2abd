"""Command line: ``tricap run``, ``tricap measure`` and ``tricap check``.

Failures print one line ``error <CODE>: <message>`` to stderr and exit 1
(2 for command-line usage errors).
"""

from __future__ import annotations

import argparse
import sys

from .config import describe_defaults, load_config
from .errors import TricapError
from .io import read_vtk
from .measure import measure_snapshot
from .runner import run


def _parser():
    p = argparse.ArgumentParser(
        prog="tricap",
        description="Ternary phase-field flow and elastic solid simulator.",
        epilog="configuration keys and defaults:\n" + describe_defaults(),
        formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a scenario",
                       epilog=describe_defaults(),
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    r.add_argument("config")
    r.add_argument("--out", help="output directory (overrides [output] dir)")
    r.add_argument("--seed", type=int, help="random seed (overrides [scenario] seed)")
    r.add_argument("--steps", type=int, help="number of steps (overrides [time])")
    m = sub.add_parser("measure", help="post-process a snapshot")
    m.add_argument("snapshot")
    m.add_argument("--quantity", choices=("angle", "lens", "sigma"), required=True)
    c = sub.add_parser("check", help="validate a configuration file")
    c.add_argument("config")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "run":
            cfg = load_config(args.config)
            if args.seed is not None:
                cfg.seed = args.seed
            res = run(cfg, out_dir=args.out, steps=args.steps)
            print(f"ok steps={res.steps} t={res.time:.17g} out={res.out_dir}")
        elif args.command == "measure":
            for key, value in measure_snapshot(read_vtk(args.snapshot), args.quantity).items():
                print(f"{key} = {value:.17g}")
        else:
            cfg = load_config(args.config)
            print(f"ok scenario={cfg.scenario}")
    except TricapError as exc:
        msg = " ".join(str(exc).split())
        print(f"error {exc.code}: {msg}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
