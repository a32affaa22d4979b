"""Command-line surface.

Subcommands: factorize, decompose, demo-hilbert, verify, basis.
Exit codes: 0 success, 1 usage or I/O error, 2 numeric/verification failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import serialize
from .errors import (
    BadDimension,
    ConstraintViolation,
    IwasawaError,
    NotHermitian,
    Singular,
    SingularCompression,
)
from .families import parse_family, structure_context, context_invariant_residuals
from .frame import build_frame, to_frame
from .kan import closure_study, kan_factor, verify_kan
from .linalg import frobenius
from .triangular import diag_expectation, triadic_decompose, truncation_growth

DEFAULT_SIZES = "16,32,64,128,256,512,1024"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # the exit-code contract reserves 2 for numeric failures
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _load_matrix(path: str, flag: str) -> np.ndarray:
    try:
        return serialize.load_matrix(path)
    except OSError as exc:
        raise _UsageError(f"{flag}: cannot read {path}: {exc.strerror or exc}") from exc
    except ValueError as exc:
        raise _UsageError(f"{flag}: {path}: {exc}") from exc


def _print_residual_table(residuals: dict[str, float]) -> None:
    width = max(len(name) for name in residuals)
    for name, value in residuals.items():
        print(f"  {name:<{width}}  {value:.6g}")


def _cmd_factorize(args) -> int:
    g = _load_matrix(args.input, "--input")
    x0 = _load_matrix(args.x0, "--x0")
    try:
        frame = build_frame(x0)
    except NotHermitian as exc:
        raise _UsageError(f"--x0: {exc}") from exc
    if g.shape != (frame.dim, frame.dim):
        raise _UsageError(
            f"--input: matrix shape {g.shape} does not match --x0 dimension {frame.dim}"
        )
    ctx = None
    if args.family is not None:
        ctx = structure_context(parse_family(args.family), frame.dim)
    try:
        factors = kan_factor(frame, g)
    except Singular:
        print("Singular: input matrix is not invertible", file=sys.stderr)
        return EXIT_NUMERIC
    residuals, passed = verify_kan(frame, g, factors, ctx, tol=args.tol)
    if args.out:
        Path(args.out).write_text(serialize.factors_to_json(factors, residuals) + "\n")
        print(f"factors written to {args.out}")
    print(f"residual summary (tolerance {args.tol:g} relative):")
    _print_residual_table(residuals)
    print("PASS" if passed else "FAIL")
    return EXIT_OK if passed else EXIT_NUMERIC


def _cmd_decompose(args) -> int:
    x = _load_matrix(args.input, "--input")
    x0 = _load_matrix(args.x0, "--x0")
    if x.shape[0] != x.shape[1]:
        raise _UsageError(f"--input: matrix must be square, got {x.shape}")
    try:
        frame = build_frame(x0)
    except NotHermitian as exc:
        raise _UsageError(f"--x0: {exc}") from exc
    if x.shape != (frame.dim, frame.dim):
        raise _UsageError(
            f"--input: matrix shape {x.shape} does not match --x0 dimension {frame.dim}"
        )
    parts = triadic_decompose(frame, x)

    scale = 1.0 + frobenius(x)
    n_f = to_frame(frame, parts.n_part)
    bi = frame.block_index()
    residuals = {
        "k_skew": frobenius(parts.k_part + parts.k_part.conj().T),
        "a_hermitian_commuting": frobenius(parts.a_part - parts.a_part.conj().T)
        + frobenius(parts.a_part - diag_expectation(frame, parts.a_part)),
        "n_strictly_upper": frobenius(np.where(bi[:, None] >= bi[None, :], n_f, 0.0)),
        "sum_reconstruction": frobenius(parts.k_part + parts.a_part + parts.n_part - x),
    }
    if args.out:
        Path(args.out).write_text(serialize.triadic_to_json(parts, residuals) + "\n")
        print(f"parts written to {args.out}")
    print("triadic residuals:")
    _print_residual_table(residuals)
    passed = all(v <= args.tol * scale for v in residuals.values())
    print("PASS" if passed else "FAIL")
    return EXIT_OK if passed else EXIT_NUMERIC


def _cmd_demo_hilbert(args) -> int:
    try:
        sizes = [int(tok) for tok in args.sizes.split(",") if tok.strip()]
        rows = truncation_growth(sizes)
    except ValueError as exc:
        raise _UsageError(f"--sizes: {exc}") from exc
    out = Path(args.out)
    out.write_text(serialize.growth_csv(rows))
    figure_path = out.with_suffix(".png")
    from .report import render_growth_figure

    render_growth_figure(rows, figure_path)
    print(f"growth table written to {out}, figure to {figure_path}")
    print(f"  {'n':>6}  {'ratio_op':>10}  {'ratio_s2':>10}")
    for r in rows:
        print(f"  {r.n:>6}  {r.ratio_op:>10.6f}  {r.ratio_s2:>10.6f}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    family = parse_family(args.family)
    summary = closure_study(family, args.dim, args.trials, args.seed, tol=args.tol)
    print(
        f"family {family.name} dim {args.dim}: max residuals over {args.trials} trials "
        f"(normalized, tolerance {args.tol:g}):"
    )
    _print_residual_table(summary.residuals)
    print("PASS" if summary.passed else "FAIL")
    return EXIT_OK if summary.passed else EXIT_NUMERIC


def _cmd_basis(args) -> int:
    family = parse_family(args.family)
    ctx = structure_context(family, args.dim)
    text = serialize.context_to_json(ctx) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        print(f"basis and structure operators written to {args.out}")
    else:
        sys.stdout.write(text)
    residuals = context_invariant_residuals(ctx)
    print("verified invariants (all residuals <= 1e-12):")
    _print_residual_table(residuals)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="iwasawa", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("factorize", parents=[], help="KAN-factor a matrix relative to --x0")
    p.add_argument("--input", required=True, help="matrix JSON to factor")
    p.add_argument("--x0", required=True, help="Hermitian reference element (matrix JSON)")
    p.add_argument("--family", help="optional family tag for factor membership checks")
    p.add_argument("--out", help="write factor JSON here")
    p.add_argument("--tol", type=float, default=1e-10, help="pass/fail tolerance")
    p.set_defaults(func=_cmd_factorize)

    p = sub.add_parser("decompose", help="triadic k/a/n split of a matrix relative to --x0")
    p.add_argument("--input", required=True)
    p.add_argument("--x0", required=True)
    p.add_argument("--out", help="write three-part JSON here")
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("demo-hilbert", help="triangular-truncation growth table")
    p.add_argument("--sizes", default=DEFAULT_SIZES, help="comma list of sizes (each >= 2)")
    p.add_argument("--out", default="hilbert_growth.csv", help="CSV output path")
    p.set_defaults(func=_cmd_demo_hilbert)

    p = sub.add_parser("verify", help="family-closure study")
    p.add_argument("--family", required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("basis", help="emit adapted basis and structure operators")
    p.add_argument("--family", required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=_cmd_basis)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"iwasawa: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BadDimension, ConstraintViolation, ValueError) as exc:
        print(f"iwasawa: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (Singular, SingularCompression) as exc:
        print(f"Singular: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"iwasawa: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IwasawaError as exc:
        print(f"iwasawa: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    raise SystemExit(main())
