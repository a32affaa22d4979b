"""Diagonal expectation, triangular projection, the triadic split of a matrix
into skew / commuting-Hermitian / strictly-upper parts, and the Hilbert-matrix
experiment that shows why the operator norm cannot support all of this at
scale while the Hilbert-Schmidt norm can.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure
from .frame import SpectralFrame, from_frame, to_frame

# Exact dense SVD is used for operator norms up to this order; beyond it,
# power iteration at 1e-6 relative convergence.
DENSE_SVD_LIMIT = 1024

__all__ = [
    "TriadicParts",
    "GrowthRow",
    "diag_expectation",
    "triangular_projection",
    "triadic_decompose",
    "hilbert_witness",
    "truncation_growth",
    "operator_norm",
]


def _same_block_mask(frame: SpectralFrame) -> np.ndarray:
    bi = frame.block_index()
    return bi[:, None] == bi[None, :]


def _upper_mask(frame: SpectralFrame) -> np.ndarray:
    """Blocks on or above the diagonal in the descending spectral order."""
    bi = frame.block_index()
    return bi[:, None] <= bi[None, :]


def diag_expectation(frame: SpectralFrame, z) -> np.ndarray:
    """Block-diagonal compression: keep diagonal blocks, zero the rest.

    Finite realization of averaging z over conjugation by the one-parameter
    unitary group of the frame's reference element.
    """
    zf = to_frame(frame, z)
    return from_frame(frame, np.where(_same_block_mask(frame), zf, 0.0))


def triangular_projection(frame: SpectralFrame, z) -> np.ndarray:
    """Keep blocks (i, j) with i <= j in frame coordinates, zero the rest."""
    zf = to_frame(frame, z)
    return from_frame(frame, np.where(_upper_mask(frame), zf, 0.0))


@dataclass(frozen=True)
class TriadicParts:
    """The three components of a matrix under the triadic decomposition:
    skew-Hermitian, Hermitian-commuting, and strictly-upper-block."""

    k_part: np.ndarray
    a_part: np.ndarray
    n_part: np.ndarray


def triadic_decompose(frame: SpectralFrame, x) -> TriadicParts:
    """Split x = k + a + n relative to the frame.

    With T the triangular projection and D the diagonal expectation:

        k = (1-T)x - ((1-T)x)* + ((Dx) - (Dx)*)/2
        a = ((Dx) + (Dx)*)/2
        n = (T-D)x + ((1-T)x)*

    k is skew-Hermitian, a is Hermitian and commutes with the reference
    element, n is strictly upper block-triangular in frame coordinates.
    """
    xf = to_frame(frame, x)
    upper = _upper_mask(frame)
    diag = _same_block_mask(frame)

    tx = np.where(upper, xf, 0.0)
    dx = np.where(diag, xf, 0.0)
    low = xf - tx  # (1-T)x

    k = low - low.conj().T + (dx - dx.conj().T) / 2.0
    a = (dx + dx.conj().T) / 2.0
    n = (tx - dx) + low.conj().T
    return TriadicParts(
        k_part=from_frame(frame, k),
        a_part=from_frame(frame, a),
        n_part=from_frame(frame, n),
    )


def hilbert_witness(n: int) -> np.ndarray:
    """The skew-symmetric Hilbert-type matrix W[j, l] = 1/(j-l), zero diagonal.

    Exactly skew-Hermitian; its triangular truncation has operator norm
    growing with n while the S2 ratio stays pinned at 1/sqrt(2).
    """
    if n < 2:
        raise ValueError("hilbert_witness requires n >= 2")
    return np.asarray(_hilbert_real(n), dtype=np.complex128)


def _hilbert_real(n: int) -> np.ndarray:
    d = np.arange(n)[:, None] - np.arange(n)[None, :]
    with np.errstate(divide="ignore"):
        w = np.where(d != 0, 1.0 / np.where(d == 0, 1, d), 0.0)
    return w


def operator_norm(m, seed: int = 0) -> float:
    """Largest singular value: dense SVD up to order 1024, power iteration
    (1e-6 relative) beyond."""
    m = np.asarray(m)
    if max(m.shape) <= DENSE_SVD_LIMIT:
        return float(np.linalg.svd(m, compute_uv=False)[0])
    rng = np.random.Generator(np.random.PCG64(seed))
    v = rng.standard_normal(m.shape[1])
    v /= np.linalg.norm(v)
    sigma = 0.0
    for _ in range(10_000):
        w = m.conj().T @ (m @ v)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        new_sigma = float(np.sqrt(nw))
        if sigma > 0 and abs(new_sigma - sigma) <= 1e-6 * sigma:
            return new_sigma
        sigma = new_sigma
    raise ConvergenceFailure("power iteration did not converge to 1e-6 relative")


@dataclass(frozen=True)
class GrowthRow:
    n: int
    op_norm_w: float
    op_norm_tw: float
    ratio_op: float
    s2_norm_w: float
    s2_norm_tw: float
    ratio_s2: float


def truncation_growth(sizes) -> list[GrowthRow]:
    """Norm growth table for the Hilbert witness under triangular truncation.

    The truncation is taken in the standard basis, i.e. for the regular frame
    of diag(n, n-1, ..., 1), where it is exactly the upper triangle.
    """
    sizes = [int(s) for s in sizes]
    if not sizes:
        raise ValueError("sizes must be non-empty")
    if any(s < 2 for s in sizes):
        raise ValueError("each size must be >= 2")
    rows = []
    for n in sizes:
        w = _hilbert_real(n)
        tw = np.triu(w)
        op_w = operator_norm(w)
        op_tw = operator_norm(tw)
        s2_w = float(np.linalg.norm(w))
        s2_tw = float(np.linalg.norm(tw))
        rows.append(
            GrowthRow(
                n=n,
                op_norm_w=op_w,
                op_norm_tw=op_tw,
                ratio_op=op_tw / op_w,
                s2_norm_w=s2_w,
                s2_norm_tw=s2_tw,
                ratio_s2=s2_tw / s2_w,
            )
        )
    return rows
