"""
Command-line front end.

    python -m bvtn bd    --nodes nodes.txt --degree 1
    python -m bvtn solve --nodes nodes.txt --degree 1 --rhs "1 1"
    python -m bvtn eig   --nodes nodes.txt --format json
    python -m bvtn repro example5.1 --format csv

Node and right-hand-side files hold whitespace separated decimals or p/q
rationals. Rationals are parsed exactly and rounded to the nearest double
for the floating-point pipeline.

Exit codes: 0 success, 1 library error, 2 malformed input.
"""

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence

import logzero
import numpy as np
import pandas as pd
from logzero import logger
from tabulate import tabulate

from .bd_algebra import expand, solve_system
from .bv_core import BdMatrix, compute_bd, validate_nodes
from .errors import BvtnError
from .oracle import rational_nodes, reference_spectrum, relative_errors
from .spectral import (
    PrecisionPolicy,
    baseline_eigenvalues,
    baseline_singular_values,
    condition_number,
    eigenvalues,
    least_squares,
    qr,
    singular_values,
)

FORMATS = ("text", "csv", "json")

# Text mode rounds for reading; csv and json keep every bit
TEXT_FLOAT = ".15g"

# Nodes shared by both reproduced experiments
EXAMPLE_NODES = (
    "1/22 1/20 1/18 1/16 1/14 1/12 1/10 1/8 1/6 1/4 1/2 "
    "23/42 21/38 19/34 17/30 15/26 13/22 11/18 9/14 7/10 5/6"
)

# name -> (spectrum kind, Bernstein degree); example5.2 is the 21 x 16 matrix
EXPERIMENTS = {
    "example5.1": ("eigen", 20),
    "example5.2": ("singular", 15),
}


class InputError(Exception):
    """Malformed command-line input (exit code 2)."""


def _parse_numbers(text: str, what: str) -> List[Fraction]:
    try:
        values = [Fraction(token) for token in text.split()]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"Cannot parse {what}: {exc}")
    if not values:
        raise InputError(f"{what} is empty.")
    return values


def _read_file(path: str, what: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"Cannot read {what} file {path}: {exc}")


def _load_nodes(args):
    exact = _parse_numbers(_read_file(args.nodes, "nodes"), "nodes")
    return validate_nodes([float(x) for x in exact])


def _load_vector(args, what: str = "rhs") -> List[float]:
    if args.rhs is not None:
        text = args.rhs
    elif args.rhs_file is not None:
        text = _read_file(args.rhs_file, what)
    else:
        raise InputError(f"Give the {what} with --rhs or --rhs-file.")
    return [float(v) for v in _parse_numbers(text, what)]


def _load_bd(args) -> BdMatrix:
    if getattr(args, "bd", None):
        try:
            payload = json.loads(_read_file(args.bd, "BD"))
            return BdMatrix.from_list(payload["entries"])
        except (ValueError, KeyError, TypeError) as exc:
            raise InputError(f"Malformed BD file {args.bd}: {exc}")
    if args.nodes is None:
        raise InputError("Give --nodes (or --bd for expand).")
    nodes = _load_nodes(args)
    degree = nodes.l if args.degree is None else args.degree
    return compute_bd(nodes, degree)


def _policy(args) -> PrecisionPolicy:
    overrides = {}
    if args.start_bits is not None:
        overrides["start_bits"] = args.start_bits
    if args.max_bits is not None:
        overrides["max_bits"] = args.max_bits
    if args.rtol is not None:
        overrides["stabilization_rtol"] = args.rtol
    try:
        return PrecisionPolicy.from_env(**overrides)
    except ValueError as exc:
        raise InputError(str(exc))


def _fmt(value: float) -> str:
    return format(value, TEXT_FLOAT)


def _emit_matrix(name: str, matrix: np.ndarray, fmt: str):
    matrix = np.asarray(matrix, dtype=np.float64)
    if fmt == "json":
        print(json.dumps({"rows": matrix.shape[0], "cols": matrix.shape[1], name: matrix.tolist()}))
    elif fmt == "csv":
        print(pd.DataFrame(matrix).to_csv(index=False), end="")
    else:
        print(f"{name} =")
        print(tabulate(matrix.tolist(), tablefmt="plain", floatfmt=TEXT_FLOAT))


def _emit_vectors(fmt: str, **vectors):
    if fmt == "json":
        print(json.dumps({k: [float(v) for v in vec] for k, vec in vectors.items()}))
    elif fmt == "csv":
        print(pd.DataFrame({k: pd.Series(vec, dtype=float) for k, vec in vectors.items()}).to_csv(index=False), end="")
    else:
        for vec in vectors.values():
            print(" ".join(_fmt(v) for v in vec))


def _cmd_bd(args) -> int:
    bd = _load_bd(args)
    if args.format == "json":
        print(json.dumps({"rows": bd.rows, "cols": bd.cols, "entries": bd.to_list()}))
    else:
        _emit_matrix("M", bd.entries, args.format)
    return 0


def _cmd_expand(args) -> int:
    _emit_matrix("A", expand(_load_bd(args)), args.format)
    return 0


def _cmd_solve(args) -> int:
    x = solve_system(_load_bd(args), _load_vector(args))
    _emit_vectors(args.format, x=x)
    return 0


def _emit_spectrum(spectrum, fmt: str):
    if fmt == "json":
        print(
            json.dumps(
                {
                    "values": spectrum.values.tolist(),
                    "achieved_bits": spectrum.achieved_bits,
                    "stabilized": spectrum.stabilized,
                }
            )
        )
    elif fmt == "csv":
        print(pd.DataFrame({"value": spectrum.values}).to_csv(index=False), end="")
    else:
        print(" ".join(_fmt(v) for v in spectrum.values))
        print(f"achieved_bits = {spectrum.achieved_bits}")


def _cmd_eig(args) -> int:
    _emit_spectrum(eigenvalues(_load_bd(args), _policy(args)), args.format)
    return 0


def _cmd_svd(args) -> int:
    _emit_spectrum(singular_values(_load_bd(args), _policy(args)), args.format)
    return 0


def _cmd_cond(args) -> int:
    kappa = condition_number(_load_bd(args), _policy(args))
    if args.format == "json":
        print(json.dumps({"kappa2": kappa}))
    else:
        print(_fmt(kappa))
    return 0


def _cmd_qr(args) -> int:
    result = qr(_load_bd(args), _policy(args))
    if args.format == "json":
        print(json.dumps({"q": result.q.tolist(), "r": result.r.tolist()}))
    else:
        _emit_matrix("Q", result.q, args.format)
        _emit_matrix("R", result.r, args.format)
    return 0


def _cmd_lsq(args) -> int:
    solution = least_squares(_load_bd(args), _load_vector(args, "f"), _policy(args))
    if args.format == "json":
        print(
            json.dumps(
                {
                    "coefficients": solution.coefficients.tolist(),
                    "residual": solution.residual.tolist(),
                    "residual_norm": solution.residual_norm,
                }
            )
        )
    elif args.format == "csv":
        _emit_vectors("csv", coefficients=solution.coefficients, residual=solution.residual)
    else:
        print("c = " + " ".join(_fmt(v) for v in solution.coefficients))
        print("r = " + " ".join(_fmt(v) for v in solution.residual))
        print(f"||r||_2 = {_fmt(solution.residual_norm)}")
    return 0


def reproduce(name: str, policy: Optional[PrecisionPolicy] = None):
    """
    Rebuild one of the accuracy tables.

    Returns:
        (DataFrame with columns <symbol>_ref, mm_rel_err, baseline_rel_err,
        kappa_2 from the reference singular values).
    """
    kind, degree = EXPERIMENTS[name]
    nodes = rational_nodes(EXAMPLE_NODES.split())
    bd = compute_bd(validate_nodes(nodes.as_floats()), degree)

    if kind == "eigen":
        accurate = eigenvalues(bd, policy)
        baseline = baseline_eigenvalues(expand(bd))
        label = "lambda_ref"
    else:
        accurate = singular_values(bd, policy)
        baseline = baseline_singular_values(expand(bd))
        label = "sigma_ref"

    reference = reference_spectrum(nodes, degree, kind)
    sv = reference if kind == "singular" else reference_spectrum(nodes, degree, "singular")
    kappa = float(sv.values[0] / sv.values[-1])

    mm = relative_errors(reference, accurate)
    base = relative_errors(reference, baseline)
    table = pd.DataFrame(
        {
            label: mm["reference"],
            "mm_rel_err": mm["rel_error"],
            "baseline_rel_err": base["rel_error"],
        }
    )
    logger.info(f"{name}: kappa_2 = {kappa:.2e}, achieved_bits = {accurate.achieved_bits}")
    return table, kappa


def _cmd_repro(args) -> int:
    table, kappa = reproduce(args.example, _policy(args))
    if args.format == "json":
        print(json.dumps({"rows": table.to_dict(orient="records"), "kappa2": kappa}))
    elif args.format == "csv":
        print(table.to_csv(index=False), end="")
        # stdout holds only the table
        print(f"kappa_2 = {kappa!r}", file=sys.stderr)
    else:
        shown = table.apply(lambda col: col.map(lambda v: f"{v:.1e}"))
        print(tabulate(shown, headers="keys", tablefmt="fancy_grid", showindex=False))
        print(f"kappa_2 = {kappa:.1e}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bvtn",
        description="Accurate computations with totally positive Bernstein-Vandermonde matrices.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--nodes", help="File of nodes in (0, 1), decimals or p/q.")
    common.add_argument("--degree", type=int, help="Bernstein degree n (default: number of nodes - 1).")
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--start-bits", type=int, dest="start_bits")
    common.add_argument("--max-bits", type=int, dest="max_bits", help="Overrides BVTN_MAX_BITS.")
    common.add_argument("--rtol", type=float, help="Stabilization tolerance between precisions.")

    rhs = argparse.ArgumentParser(add_help=False)
    rhs.add_argument("--rhs", help='Inline vector, e.g. "1 1".')
    rhs.add_argument("--rhs-file", dest="rhs_file")

    handlers = {
        "bd": (_cmd_bd, [common], "Print the bidiagonal decomposition M."),
        "expand": (_cmd_expand, [common], "Print the dense matrix rebuilt from M."),
        "solve": (_cmd_solve, [common, rhs], "Solve A x = b (square)."),
        "eig": (_cmd_eig, [common], "Accurate eigenvalues (square)."),
        "svd": (_cmd_svd, [common], "Accurate singular values."),
        "cond": (_cmd_cond, [common], "kappa_2 from the accurate singular values."),
        "qr": (_cmd_qr, [common], "QR factorization A = Q [R; 0]."),
        "lsq": (_cmd_lsq, [common, rhs], "Least squares min ||A c - f||_2."),
    }
    for name, (handler, parents, help_text) in handlers.items():
        p = sub.add_parser(name, parents=parents, help=help_text)
        if name == "expand":
            p.add_argument("--bd", help="JSON file written by `bd --format json`.")
        p.set_defaults(handler=handler)

    p = sub.add_parser("repro", parents=[common], help="Regenerate an accuracy table.")
    p.add_argument("example", choices=sorted(EXPERIMENTS))
    p.set_defaults(handler=_cmd_repro)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv``, run the command, return the exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    logzero.loglevel(logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.handler(args)
    except InputError as exc:
        logger.error(str(exc))
        return 2
    except BvtnError as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        return 1
    except ValueError as exc:
        logger.error(str(exc))
        return 2


def main():
    sys.exit(run(sys.argv[1:]))
