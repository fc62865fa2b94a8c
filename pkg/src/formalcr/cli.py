"""``analyze`` command-line entry point.

    analyze manifold FILE [--degree D] [--seed S] [--d-max K] [--format json|text]
    analyze map MAPFILE [--source FILE] [--target FILE] [--alpha-max A] [--jet-order K] ...

Defaults may be overridden with ``FORMALCR_DEGREE``, ``FORMALCR_ALPHA_MAX``,
``FORMALCR_JET_ORDER``, ``FORMALCR_SEED``, ``FORMALCR_D_MAX`` and
``FORMALCR_FORMAT``; explicit flags win over the environment.

Exit codes: 0 success (negative verdicts included), 2 input error,
3 insufficient truncation degree.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Sequence

from .errors import FormalCRError, InputError, InsufficientCapError
from .io import load_map, read_manifold
from .report import AnalysisConfig, manifold_report, map_report, render

EXIT_OK, EXIT_INPUT, EXIT_CAP = 0, 2, 3

ENV_PREFIX = "FORMALCR_"
_INT_SETTINGS = ("degree", "alpha_max", "jet_order", "seed", "d_max")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--degree", type=int, help="truncation degree cap (default 10)")
    common.add_argument("--seed", type=int, help="seed for the sampled-rank cross-check (default 0)")
    common.add_argument("--d-max", type=int, help="longest Segre chain tried (default 2(c+1))")
    common.add_argument("--format", choices=("json", "text"), help="report format (default json)")
    common.add_argument("--output", "-o", type=Path, help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="analyze", description="Analyze truncated CR data at the origin.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("manifold", parents=[common], help="analyze a generic submanifold")
    p.add_argument("file", type=Path)
    p = sub.add_parser("map", parents=[common], help="analyze a formal map between two manifolds")
    p.add_argument("mapfile", type=Path)
    p.add_argument("--source", type=Path, help="override the source manifold file")
    p.add_argument("--target", type=Path, help="override the target manifold file")
    p.add_argument("--alpha-max", type=int, help="largest |alpha| of reflection identities (default 2)")
    p.add_argument("--jet-order", type=int, help="jet order of the characteristic variety (default degree-2)")
    return parser


def resolve_config(args: argparse.Namespace, env: dict[str, str] | None = None) -> tuple[AnalysisConfig, str]:
    env = os.environ if env is None else env
    values = {}
    for name in _INT_SETTINGS:
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
            continue
        raw = env.get(ENV_PREFIX + name.upper())
        if raw is not None and raw.strip():
            try:
                values[name] = int(raw)
            except ValueError:
                raise InputError(f"{ENV_PREFIX}{name.upper()} must be an integer, got {raw!r}") from None
    fmt = args.format or env.get(ENV_PREFIX + "FORMAT") or "json"
    if fmt not in ("json", "text"):
        raise InputError(f"unknown format {fmt!r}")
    config = AnalysisConfig(**values)
    if config.degree < 1:
        raise InputError("--degree must be at least 1")
    return config, fmt


def run(args: argparse.Namespace, env: dict[str, str] | None = None) -> str:
    config, fmt = resolve_config(args, env)
    if args.command == "manifold":
        m = read_manifold(args.file, cap=config.degree)
        report = manifold_report(m, config)
    else:
        f, source, target = load_map(args.mapfile, config.degree, args.source, args.target)
        report = map_report(f, source, target, config)
    return render(report, fmt)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = run(args)
    except InsufficientCapError as exc:
        print(f"error: insufficient truncation degree: {exc}", file=sys.stderr)
        return EXIT_CAP
    except FormalCRError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.output:
        args.output.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
