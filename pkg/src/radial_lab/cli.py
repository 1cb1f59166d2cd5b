"""Command-line front end for the experiment runner.

Subcommands map one-to-one onto experiment kinds (``bounds-table``,
``project``, ``incidence``, ``audit``) plus ``gen``, which materialises a
generator config into a DSET1 file.  Flags override the corresponding
config keys.  Worker count is capped by the RADIAL_LAB_THREADS
environment variable.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .experiments import (
    CertificationError,
    ConfigError,
    ExperimentConfig,
    load_config,
    run,
)
from .storage import save_set

_SUBCOMMAND_KIND = {
    "bounds-table": "bounds-table",
    "project": "projection-sweep",
    "incidence": "incidence-sweep",
    "audit": "frostman-audit",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="radial-lab",
        description="dyadic geometry experiments: bounds, projections, incidences",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("bounds-table", "emit the CSV grid of bound functions and dominance flags"),
        ("project", "radial-projection dimension sweep"),
        ("incidence", "union-size exponent harness sweep"),
        ("audit", "certify an input set (ball and dyadic Frostman checks)"),
        ("gen", "materialise the [x] generator section into a DSET1 file"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", type=Path, help="experiment config file")
        p.add_argument("--out", type=Path, help="output directory")
        p.add_argument("--seed", type=int, help="seed override")
        p.add_argument("--level", type=int, help="single-level override")
        if name == "bounds-table":
            p.add_argument("--step", type=str, help="grid step, e.g. 1/20")
    return parser


def _configure(args) -> ExperimentConfig:
    if args.config is not None:
        cfg = load_config(args.config)
    elif args.command == "bounds-table":
        cfg = ExperimentConfig(kind="bounds-table", out="runs/bounds")
    else:
        raise ConfigError("config", f"{args.command} needs --config")
    kind = _SUBCOMMAND_KIND.get(args.command)
    if kind is not None and cfg.kind != kind:
        cfg = replace(cfg, kind=kind)
    if args.out is not None:
        cfg = replace(cfg, out=str(args.out))
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if args.level is not None:
        cfg = replace(cfg, levels=(args.level,))
    if getattr(args, "step", None):
        from fractions import Fraction

        cfg = replace(cfg, step=Fraction(args.step))
    return cfg


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "gen":
            if args.config is None:
                raise ConfigError("config", "gen needs --config")
            cfg = _configure(args)
            if cfg.x is None:
                raise ConfigError("x", "gen needs an [x] section")
            level = args.level if args.level is not None else cfg.levels[-1]
            S = cfg.x.materialize(level=level)
            out = Path(cfg.out)
            out.mkdir(parents=True, exist_ok=True)
            dest = out / "set.dset"
            save_set(dest, S)
            print(f"wrote {len(S)} cubes at level {S.level} to {dest}")
            return 0
        cfg = _configure(args)
        result = run(cfg)
        for name, path in sorted(result.outputs.items()):
            print(f"{name}: {path}")
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except CertificationError as exc:
        print(f"certification failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
