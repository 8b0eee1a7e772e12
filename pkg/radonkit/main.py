# radonkit/main.py

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np
import pandas as pd
from pydantic import ValidationError

from radonkit.core.config import LOG_FORMAT, LOG_LEVEL
from radonkit.core.schema import (
    QuadratureSettings,
    RIGIDITY_EXIT_CODES,
    RigidityTolerances,
    RunConfig,
    load_body_arg,
    parse_function_arg,
)
from radonkit.core.run_pipeline import build_sinogram, oracle_table, run_moments, run_rigidity, table_passes
from radonkit.core.sinogram_io import FLOAT_FORMAT, write_sinogram

logger = logging.getLogger("radonkit")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3


def get_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="radonkit", description="Radon/X-ray transforms and ball rigidity checks")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--body", help="body spec: inline JSON or path to a JSON file")
    common.add_argument("--function", help="function spec: constant-xray, indicator, gamma:<g>, synthetic[:<G>], JSON")
    common.add_argument("--sinogram", type=Path, help="sinogram CSV to analyse instead of generating one")
    common.add_argument("--dirs", type=int, help="number of directions")
    common.add_argument("--offsets", type=int, help="offsets per direction")
    common.add_argument("--nodes", type=int, help="Gauss-Legendre nodes per chord or ray")
    common.add_argument("--angular-nodes", type=int, help="angular nodes for 3-D sections")
    common.add_argument("--out", type=Path, help="output file (stdout when omitted, except for sinogram)")
    common.add_argument("--seed", type=int, help="rotation seed for spherical direction grids")
    common.add_argument("--threads", type=int, help="worker threads (default: RADON_THREADS)")

    generate = sub.add_parser("sinogram", parents=[common], help="generate a sinogram CSV and JSON sidecar")
    generate.add_argument("--transform", choices=["radon", "xray"],
                          help="transform kind recorded with the data (xray: n = 2 only)")

    oracle = sub.add_parser("verify-oracle", parents=[common], help="compare numeric routes with closed forms")
    oracle.add_argument("--mode", choices=["radon", "fourier-slice", "kernel", "moments", "xray"], default="radon")
    _add_oracle_flags(oracle)

    fourier = sub.add_parser("fourier-slice", parents=[common], help="Fourier-slice comparison table")
    _add_oracle_flags(fourier)

    for name in ("rigidity", "moments"):
        p = sub.add_parser(name, parents=[common], help=f"{name} report as JSON")
        p.add_argument("--bins", type=int, help="G-profile bins")
        p.add_argument("--tol-k", type=float, help="K-spread tolerance")
        p.add_argument("--tol-linearity", type=float, help="g-linearity tolerance")
        p.add_argument("--tol-centered", type=float, help="centered-slab tolerance")
        p.add_argument("--tol-width", type=float, help="constant-width tolerance")
        p.add_argument("--tol-g", type=float, help="G-collapse tolerance")
    return parser


def _add_oracle_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tol", type=float, help="pass threshold on the error column")
    parser.add_argument("--dimension", type=int, help="dimension of the gamma family (2 or 3)")
    parser.add_argument("--radius", type=float)
    parser.add_argument("--gammas", type=float, nargs="+")
    parser.add_argument("--distances", type=float, nargs="+", help="plane distances as fractions of the radius")
    parser.add_argument("--xi", type=float, nargs="+", help="frequencies |xi|")
    parser.add_argument("--kernel-points", type=float, nargs="+", help="|x| values for the kernel check")
    parser.add_argument("--chords", type=int, help="random chords for the X-ray audit")


def config_from_args(argued: argparse.Namespace) -> RunConfig:
    """Collect the flags that were given; RunConfig fills the rest from the environment defaults."""
    values = {"subcommand": argued.subcommand}
    if argued.body is not None:
        values["body"] = load_body_arg(argued.body)
    if argued.function is not None:
        values["function"] = parse_function_arg(argued.function)
    plain = {
        "sinogram": "sinogram_path", "dirs": "dirs", "offsets": "offsets", "out": "out", "seed": "seed",
        "threads": "threads", "bins": "bins", "tol": "oracle_tol", "dimension": "dimension", "radius": "radius",
        "gammas": "gammas", "distances": "distances", "xi": "xi", "kernel_points": "kernel_points",
        "chords": "chords", "mode": "mode", "transform": "transform",
    }
    for flag, key in plain.items():
        value = getattr(argued, flag, None)
        if value is not None:
            values[key] = value
    if argued.subcommand == "fourier-slice":
        values["mode"] = "fourier-slice"

    quadrature = {k: getattr(argued, k) for k in ("nodes", "angular_nodes") if getattr(argued, k) is not None}
    if quadrature:
        values["quadrature"] = QuadratureSettings(**quadrature)
    tolerances = {key: getattr(argued, flag, None) for flag, key in (
        ("tol_k", "k_spread"), ("tol_linearity", "linearity"), ("tol_centered", "centered"),
        ("tol_width", "width"), ("tol_g", "g_collapse"))}
    tolerances = {k: v for k, v in tolerances.items() if v is not None}
    if tolerances:
        values["tolerances"] = RigidityTolerances(**tolerances)
    return RunConfig(**values)


def _emit_text(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(out, "w") as f:
            f.write(text if text.endswith("\n") else text + "\n")


def _emit_table(table: pd.DataFrame, out: Optional[Path]) -> None:
    _emit_text(table.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n"), out)


def dispatch(config: RunConfig) -> int:
    if config.subcommand == "sinogram":
        sino = build_sinogram(config)
        write_sinogram(sino, config.out)
        return EXIT_OK
    if config.subcommand in ("verify-oracle", "fourier-slice"):
        table, tol = oracle_table(config)
        _emit_table(table, config.out)
        if table_passes(table, tol):
            return EXIT_OK
        logger.warning(f"[WARN] {config.mode} comparison exceeds tolerance {tol:g}")
        return EXIT_FAILED
    if config.subcommand == "rigidity":
        report = run_rigidity(config)
        _emit_text(report.model_dump_json(indent=2), config.out)
        return RIGIDITY_EXIT_CODES[report.verdict]
    report = run_moments(config)
    _emit_text(report.model_dump_json(indent=2), config.out)
    return EXIT_OK


def main(argued: Optional[List[str]] = None) -> int:
    logging.basicConfig(level=LOG_LEVEL, format=LOG_FORMAT)
    args = get_parser().parse_args(argued)
    try:
        config = config_from_args(args)
        return dispatch(config)
    except np.linalg.LinAlgError as e:
        logger.error(f"[ERROR] linear algebra failure: {e}")
        return EXIT_NUMERIC
    except ArithmeticError as e:
        logger.error(f"[ERROR] numeric failure: {e}")
        return EXIT_NUMERIC
    except ValidationError as e:
        logger.error(f"[ERROR] invalid input: {e}")
        return EXIT_USAGE
    except (ValueError, OSError) as e:
        logger.error(f"[ERROR] {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
