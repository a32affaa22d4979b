"""Dense complex matrix substrate: adjoint, eigensolver, exp, Schatten norms,
linear solve, and seeded Ginibre sampling.

All functions are pure; matrices are plain 2-D ``numpy.ndarray`` of
``complex128`` and are never mutated in place.
"""

from __future__ import annotations

import warnings

import numpy as np
import scipy.linalg

from .errors import ConvergenceFailure, DimensionMismatch, NotHermitian, NotSquare, Singular

# Default tolerances (relative); overridable per call where it matters.
RESIDUAL_TOL = 1e-10
HERMITIAN_TOL = 1e-12
PIVOT_TOL = 1e-13

__all__ = [
    "RESIDUAL_TOL",
    "HERMITIAN_TOL",
    "PIVOT_TOL",
    "as_matrix",
    "adjoint",
    "frobenius",
    "hermitian_eig",
    "matrix_exp",
    "singular_values",
    "schatten_norm",
    "solve",
    "inverse",
    "require_invertible",
    "random_ginibre",
    "derive_seed",
]


def as_matrix(a) -> np.ndarray:
    """Coerce to a finite 2-D complex128 array.

    Raises ``ValueError`` on non-2-D input or non-finite entries.
    """
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={m.ndim}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def adjoint(m) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(m).conj().T


def frobenius(m) -> float:
    return float(np.linalg.norm(m))


def _require_square(m: np.ndarray) -> None:
    if m.shape[0] != m.shape[1]:
        raise NotSquare(f"matrix must be square, got shape {m.shape}")


def hermitian_eig(h, tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.

    Returns ``(values, vectors)`` with ``h @ vectors ~= vectors @ diag(values)``
    and unitary ``vectors``.  Raises ``NotHermitian`` when the input exceeds
    ``tol * (1 + ||h||_F)`` in Hermitian defect, and ``ConvergenceFailure`` when
    the solver misses the ``1e-12 * ||h||_F`` residual contract.
    """
    h = as_matrix(h)
    _require_square(h)
    scale = frobenius(h)
    if frobenius(h - h.conj().T) > tol * (1.0 + scale):
        raise NotHermitian(f"Hermitian defect exceeds {tol:g} * (1 + ||h||_F)")
    try:
        values, vectors = np.linalg.eigh((h + h.conj().T) / 2.0)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"eigensolver failed: {exc}") from exc
    values = values[::-1].copy()
    vectors = vectors[:, ::-1].copy()
    residual = frobenius(h @ vectors - vectors * values[None, :])
    if residual > 1e-12 * max(scale, np.finfo(float).tiny):
        raise ConvergenceFailure(f"eigensolver residual {residual:.3e} exceeds 1e-12 * ||h||_F")
    return values, vectors


def matrix_exp(m) -> np.ndarray:
    """Matrix exponential via scaling-and-squaring (Pade)."""
    m = as_matrix(m)
    _require_square(m)
    return np.asarray(scipy.linalg.expm(m), dtype=np.complex128)


def singular_values(m) -> np.ndarray:
    return np.linalg.svd(as_matrix(m), compute_uv=False)


def schatten_norm(m, p: float) -> float:
    """Schatten p-norm: (sum sigma_i^p)^(1/p), or the largest singular value
    for p = inf.  Requires p >= 1.
    """
    if not p >= 1:
        raise ValueError(f"Schatten exponent must satisfy p >= 1, got {p}")
    sigma = singular_values(m)
    if sigma.size == 0:
        return 0.0
    if np.isinf(p):
        return float(sigma[0])
    if p == 2:
        # same value as the Frobenius norm; computed from sigma for uniformity
        return float(np.sqrt(np.sum(sigma**2)))
    top = sigma[0]
    if top == 0.0:
        return 0.0
    return float(top * np.sum((sigma / top) ** p) ** (1.0 / p))


def _lu_with_pivot_check(a: np.ndarray):
    scale = frobenius(a)
    try:
        with warnings.catch_warnings():
            # exact zero pivots are reported below through the Singular error
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise Singular(f"LU factorization failed: {exc}") from exc
    if scale == 0.0 or np.min(np.abs(np.diagonal(lu))) <= PIVOT_TOL * scale:
        raise Singular(f"pivot magnitude below ||a||_F * {PIVOT_TOL:g}")
    return lu, piv


def solve(a, b) -> np.ndarray:
    """Solve a @ x = b.  Raises ``Singular`` when a pivot falls below
    ``||a||_F * 1e-13``.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    _require_square(a)
    if b.shape[0] != a.shape[0]:
        raise DimensionMismatch(f"rhs rows {b.shape[0]} != matrix order {a.shape[0]}")
    lu, piv = _lu_with_pivot_check(a)
    return np.asarray(scipy.linalg.lu_solve((lu, piv), b, check_finite=False), dtype=np.complex128)


def inverse(a) -> np.ndarray:
    a = as_matrix(a)
    _require_square(a)
    return solve(a, np.eye(a.shape[0], dtype=np.complex128))


def require_invertible(a) -> None:
    """Raise ``Singular`` unless ``a`` passes the pivot-magnitude check."""
    a = as_matrix(a)
    _require_square(a)
    _lu_with_pivot_check(a)


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    return seed


def random_ginibre(n: int, seed: int) -> np.ndarray:
    """n x n matrix of independent standard complex Gaussian entries CN(0,1).

    Generator: numpy PCG64 seeded with ``seed``; real and imaginary parts are
    N(0, 1/2) so each entry has unit second moment.  Identical (n, seed) pairs
    reproduce bit-identical output.
    """
    if n < 1:
        raise ValueError("n must be positive")
    rng = np.random.Generator(np.random.PCG64(_check_seed(seed)))
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return z * np.sqrt(0.5)


def derive_seed(seed: int, index: int) -> int:
    """Mix a base seed with a trial index into an independent 64-bit seed.

    Documented rule: numpy ``SeedSequence((seed, index))`` hashed to one
    uint64 word; stable across platforms and numpy versions >= 1.17.
    """
    ss = np.random.SeedSequence((_check_seed(seed), int(index)))
    return int(ss.generate_state(1, dtype=np.uint64)[0])
