"""Shared file formats.

Matrix JSON: {"rows": n, "cols": m, "data": [[re, im], ...]} with data in
row-major order; readers reject wrong lengths and non-finite values.
Floats are written with 17 significant digits so every value round-trips
exactly and output files are byte-deterministic.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .frame import SpectralFrame
from .kan import ConvergenceRow, KanFactors
from .linalg import as_matrix
from .triangular import GrowthRow, TriadicParts

__all__ = [
    "matrix_to_json",
    "matrix_from_json",
    "dump_matrix",
    "load_matrix",
    "frame_to_json",
    "factors_to_json",
    "triadic_to_json",
    "context_to_json",
    "growth_csv",
    "error_curve_csv",
]

GROWTH_HEADER = "n,op_norm_W,op_norm_TW,ratio_op,s2_norm_W,s2_norm_TW,ratio_s2"
ERROR_CURVE_HEADER = "rank,err_k,err_a,err_n"


def _f(x: float) -> str:
    return format(float(x), ".17g")


def _matrix_json_text(m: np.ndarray) -> str:
    rows, cols = m.shape
    flat = m.reshape(-1)
    entries = ", ".join(f"[{_f(z.real)}, {_f(z.imag)}]" for z in flat)
    return f'{{"rows": {rows}, "cols": {cols}, "data": [{entries}]}}'


def matrix_to_json(m) -> str:
    return _matrix_json_text(as_matrix(m))


def matrix_from_json(text: str) -> np.ndarray:
    return matrix_from_obj(json.loads(text))


def matrix_from_obj(obj) -> np.ndarray:
    """Decode the shared matrix object, validating shape and finiteness."""
    if not isinstance(obj, dict):
        raise ValueError("matrix JSON must be an object")
    try:
        rows = int(obj["rows"])
        cols = int(obj["cols"])
        data = obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed matrix JSON: {exc}") from exc
    if rows < 1 or cols < 1:
        raise ValueError("matrix dimensions must be positive")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise ValueError(f"matrix data must hold exactly rows*cols = {rows * cols} entries")
    out = np.empty(rows * cols, dtype=np.complex128)
    for i, pair in enumerate(data):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ValueError(f"entry {i} is not a [re, im] pair")
        try:
            re, im = float(pair[0]), float(pair[1])
        except (TypeError, ValueError) as exc:
            raise ValueError(f"entry {i} is not numeric: {exc}") from exc
        if not (math.isfinite(re) and math.isfinite(im)):
            raise ValueError(f"entry {i} is not finite")
        out[i] = complex(re, im)
    return out.reshape(rows, cols)


def dump_matrix(m, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(matrix_to_json(m))
        fh.write("\n")


def load_matrix(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return matrix_from_json(fh.read())


def frame_to_json(frame: SpectralFrame) -> str:
    clusters = ", ".join(f"[{_f(v)}, {int(m)}]" for v, m in frame.clusters)
    return f'{{"clusters": [{clusters}], "basis": {_matrix_json_text(frame.basis)}}}'


def factors_to_json(f: KanFactors, residuals: dict[str, float]) -> str:
    res = ", ".join(f'"{name}": {_f(v)}' for name, v in residuals.items())
    return (
        f'{{"k": {_matrix_json_text(f.k)}, '
        f'"a": {_matrix_json_text(f.a)}, '
        f'"n": {_matrix_json_text(f.n)}, '
        f'"residuals": {{{res}}}}}'
    )


def triadic_to_json(parts: TriadicParts, residuals: dict[str, float]) -> str:
    res = ", ".join(f'"{name}": {_f(v)}' for name, v in residuals.items())
    return (
        f'{{"k_part": {_matrix_json_text(parts.k_part)}, '
        f'"a_part": {_matrix_json_text(parts.a_part)}, '
        f'"n_part": {_matrix_json_text(parts.n_part)}, '
        f'"residuals": {{{res}}}}}'
    )


def context_to_json(ctx) -> str:
    """Basis and structure operators of a family context."""
    fields = [f'"family": "{ctx.family.value}"', f'"dim": {ctx.dim}']
    for name in ("J", "Jt", "V"):
        op = getattr(ctx, name)
        if op is None:
            fields.append(f'"{name}": null')
        else:
            fields.append(f'"{name}": {_matrix_json_text(np.asarray(op, dtype=np.complex128))}')
    fields.append(f'"adapted_basis": {_matrix_json_text(ctx.adapted_basis)}')
    return "{" + ", ".join(fields) + "}"


def growth_csv(rows: list[GrowthRow]) -> str:
    lines = [GROWTH_HEADER]
    for r in rows:
        lines.append(
            f"{r.n},{_f(r.op_norm_w)},{_f(r.op_norm_tw)},{_f(r.ratio_op)},"
            f"{_f(r.s2_norm_w)},{_f(r.s2_norm_tw)},{_f(r.ratio_s2)}"
        )
    return "\n".join(lines) + "\n"


def error_curve_csv(rows: list[ConvergenceRow]) -> str:
    lines = [ERROR_CURVE_HEADER]
    for r in rows:
        lines.append(f"{r.rank},{_f(r.err_k)},{_f(r.err_a)},{_f(r.err_n)}")
    return "\n".join(lines) + "\n"
