"""Spectral frames: the eigenstructure of a Hermitian reference element that
fixes what "diagonal" and "triangular" mean everywhere else.

A frame holds eigenvalue clusters in strictly descending order together with
an ordered unitary eigenbasis.  Descending order is the single normative
convention of the whole package: with it, nilpotent parts are strictly upper
block-triangular and the triangular projection keeps blocks on or above the
diagonal.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, DimensionMismatch
from .linalg import as_matrix, frobenius, hermitian_eig

CLUSTER_TOL = 1e-8

__all__ = [
    "CLUSTER_TOL",
    "SpectralFrame",
    "RegularityClass",
    "build_frame",
    "classify",
    "to_frame",
    "from_frame",
]


class RegularityClass(enum.Enum):
    REGULAR = "regular"
    QUASI_REGULAR = "quasi_regular"


@dataclass(frozen=True)
class SpectralFrame:
    """Eigenvalue clusters and ordered eigenbasis of a Hermitian element.

    ``clusters`` is a tuple of (eigenvalue, multiplicity) pairs with strictly
    decreasing eigenvalues; ``basis`` is unitary with columns grouped by
    cluster in that order; ``block_offsets`` are the prefix sums
    (0, m_1, m_1+m_2, ..., dim).
    """

    dim: int
    clusters: tuple[tuple[float, int], ...]
    basis: np.ndarray
    block_offsets: tuple[int, ...]

    def block_slices(self) -> list[slice]:
        off = self.block_offsets
        return [slice(off[i], off[i + 1]) for i in range(len(self.clusters))]

    def block_index(self) -> np.ndarray:
        """Cluster index of every basis column (length ``dim``)."""
        mults = [m for _, m in self.clusters]
        return np.repeat(np.arange(len(mults)), mults)

    def values_vector(self) -> np.ndarray:
        """Cluster eigenvalues repeated per multiplicity (length ``dim``)."""
        return np.repeat([v for v, _ in self.clusters], [m for _, m in self.clusters])


def _canonical_column_order(vecs: np.ndarray, significant: float = 1e-8) -> np.ndarray:
    """Deterministic ordering/phase for eigenvector columns of one cluster.

    Each column is rotated so its first significant coordinate is real
    positive; columns are then sorted by descending magnitude of that
    coordinate, ties broken by original index.
    """
    n, k = vecs.shape
    out = vecs.copy()
    keys = []
    for j in range(k):
        col = out[:, j]
        idx = int(np.argmax(np.abs(col) > significant)) if np.any(np.abs(col) > significant) else 0
        lead = col[idx]
        if np.abs(lead) > 0:
            out[:, j] = col * (np.conj(lead) / np.abs(lead))
        keys.append((-np.abs(lead), j))
    order = [j for _, j in sorted(keys)]
    return out[:, order]


def build_frame(x0, cluster_tol: float = CLUSTER_TOL) -> SpectralFrame:
    """Diagonalize Hermitian ``x0`` and merge near-degenerate eigenvalues.

    Eigenvalues whose descending-order gap is at most
    ``cluster_tol * (1 + max|eig|)`` fall into one cluster; the cluster value
    is the mean of its members.  Ties inside a cluster are a quasi-regularity
    signal, never an error.
    """
    x0 = as_matrix(x0)
    values, vectors = hermitian_eig(x0)
    n = x0.shape[0]
    scale = float(np.max(np.abs(values))) if n else 0.0
    gap = cluster_tol * (1.0 + scale)

    boundaries = [0]
    for i in range(1, n):
        if values[i - 1] - values[i] > gap:
            boundaries.append(i)
    boundaries.append(n)

    clusters = []
    basis = np.empty_like(vectors)
    for b, e in zip(boundaries[:-1], boundaries[1:]):
        clusters.append((float(np.mean(values[b:e])), e - b))
        basis[:, b:e] = _canonical_column_order(vectors[:, b:e])

    recon = frobenius(x0 - (basis * values[None, :]) @ basis.conj().T)
    if recon > 1e-10 * (1.0 + frobenius(x0)):
        raise ConvergenceFailure(f"frame reconstruction residual {recon:.3e} too large")

    return SpectralFrame(
        dim=n,
        clusters=tuple(clusters),
        basis=basis,
        block_offsets=tuple(boundaries),
    )


def classify(frame: SpectralFrame) -> RegularityClass:
    """Regular iff every eigenvalue cluster is simple."""
    if all(m == 1 for _, m in frame.clusters):
        return RegularityClass.REGULAR
    return RegularityClass.QUASI_REGULAR


def _check_dim(frame: SpectralFrame, m: np.ndarray) -> None:
    if m.shape != (frame.dim, frame.dim):
        raise DimensionMismatch(f"expected {frame.dim}x{frame.dim}, got {m.shape}")


def to_frame(frame: SpectralFrame, m) -> np.ndarray:
    """Coordinates of ``m`` in the ordered eigenbasis: basis* @ m @ basis."""
    m = as_matrix(m)
    _check_dim(frame, m)
    return frame.basis.conj().T @ m @ frame.basis


def from_frame(frame: SpectralFrame, m) -> np.ndarray:
    """Inverse coordinate change: basis @ m @ basis*."""
    m = as_matrix(m)
    _check_dim(frame, m)
    return frame.basis @ m @ frame.basis.conj().T
