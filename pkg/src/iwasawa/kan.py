"""Group-level factorizations relative to a spectral frame: the KAN
(unitary x positive x unipotent) split of an invertible matrix, the nest
factorization of a positive matrix, family-closure studies, and the
compression-convergence experiment.
"""

from __future__ import annotations

import concurrent.futures
import os
from dataclasses import dataclass

import numpy as np

from .errors import FrameMismatch, NotPositive, Singular, SingularCompression
from .families import (
    FamilyTag,
    StructureContext,
    default_coefficients,
    group_membership,
    regular_element,
    sample_group,
    structure_context,
)
from .frame import SpectralFrame, build_frame, from_frame, to_frame
from .linalg import as_matrix, derive_seed, frobenius, schatten_norm, solve

__all__ = [
    "KanFactors",
    "NestFactors",
    "ClosureSummary",
    "ConvergenceRow",
    "kan_factor",
    "nest_factor",
    "verify_kan",
    "closure_study",
    "truncation_convergence",
    "worker_count",
]


@dataclass(frozen=True)
class KanFactors:
    """g = k @ a @ n with k unitary, a positive block-diagonal (diagonal with
    positive entries for regular frames), and n unipotent with strictly upper
    block-triangular offset, all relative to the frame order."""

    k: np.ndarray
    a: np.ndarray
    n: np.ndarray
    residual_recon: float
    residual_unitary: float


@dataclass(frozen=True)
class NestFactors:
    """a = (1 + r*) @ d @ (1 + r) with d positive block-diagonal and r
    strictly upper block-triangular (nilpotent)."""

    d: np.ndarray
    r: np.ndarray


def _check_frame_shape(frame: SpectralFrame, m: np.ndarray) -> None:
    if m.shape != (frame.dim, frame.dim):
        raise FrameMismatch(f"matrix shape {m.shape} does not match frame dimension {frame.dim}")


def _hermitian_sqrt_polar(block: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Polar split block = U @ H with U unitary and H Hermitian positive."""
    u, s, vh = np.linalg.svd(block)
    unitary = u @ vh
    hpd = (vh.conj().T * s[None, :]) @ vh
    return unitary, (hpd + hpd.conj().T) / 2.0


def kan_factor(frame: SpectralFrame, g) -> KanFactors:
    """Factor an invertible matrix as k @ a @ n relative to the frame.

    Route: transform to frame coordinates, Householder QR with a phase fix
    making the triangular factor's diagonal positive, then a per-block polar
    correction so diagonal blocks of the triangular factor are Hermitian
    positive definite; a is that block diagonal and n = a^{-1} R.
    """
    g = as_matrix(g)
    _check_frame_shape(frame, g)
    gf = to_frame(frame, g)

    q, r = np.linalg.qr(gf)
    d = np.diagonal(r).copy()
    scale = frobenius(g)
    if scale == 0.0 or np.min(np.abs(d)) <= 1e-13 * scale:
        raise Singular("input matrix is numerically singular")
    phase = d / np.abs(d)
    q = q * phase[None, :]
    r = np.conj(phase)[:, None] * r

    slices = frame.block_slices()
    for s in slices:
        if s.stop - s.start > 1:
            unitary, hpd = _hermitian_sqrt_polar(r[s, s])
            q[:, s] = q[:, s] @ unitary
            r[s, :] = unitary.conj().T @ r[s, :]
            r[s, s] = hpd

    bi = frame.block_index()
    r[bi[:, None] > bi[None, :]] = 0.0

    a_f = np.zeros_like(r)
    n_f = np.zeros_like(r)
    for s in slices:
        block = r[s, s]
        block = (block + block.conj().T) / 2.0
        a_f[s, s] = block
        n_f[s, :] = np.linalg.solve(block, r[s, :])
        n_f[s, s] = np.eye(s.stop - s.start)
    n_f[bi[:, None] > bi[None, :]] = 0.0

    k = from_frame(frame, q)
    a = from_frame(frame, a_f)
    n = from_frame(frame, n_f)
    recon = frobenius(k @ a @ n - g)
    unit = frobenius(k.conj().T @ k - np.eye(frame.dim))
    return KanFactors(k=k, a=a, n=n, residual_recon=recon, residual_unitary=unit)


def nest_factor(frame: SpectralFrame, a) -> NestFactors:
    """Factor a Hermitian positive definite matrix as (1+r*) d (1+r).

    Computed as the block Cholesky factorization in frame coordinates; the
    factors are uniquely determined by the frame.
    """
    a = as_matrix(a)
    _check_frame_shape(frame, a)
    norm_a = frobenius(a)
    if frobenius(a - a.conj().T) > 1e-12 * (1.0 + norm_a):
        raise NotPositive("input is not Hermitian")
    af = to_frame(frame, (a + a.conj().T) / 2.0)
    try:
        chol = np.linalg.cholesky(af)
    except np.linalg.LinAlgError as exc:
        raise NotPositive(f"input is not positive definite: {exc}") from exc
    if float(np.min(np.abs(np.diagonal(chol)))) ** 2 <= 1e-12 * norm_a:
        raise NotPositive("smallest eigenvalue below 1e-12 * ||a||")

    slices = frame.block_slices()
    unit_lower = np.zeros_like(chol)
    d_f = np.zeros_like(chol)
    for s in slices:
        block = chol[s, s]
        # right-multiply by the inverse of the diagonal block: L @ B^{-1}
        unit_lower[:, s] = np.linalg.solve(block.T, chol[:, s].T).T
        dd = block @ block.conj().T
        d_f[s, s] = (dd + dd.conj().T) / 2.0

    bi = frame.block_index()
    r_f = unit_lower.conj().T
    r_f[bi[:, None] >= bi[None, :]] = 0.0

    return NestFactors(d=from_frame(frame, d_f), r=from_frame(frame, r_f))


def _structure_residuals(frame: SpectralFrame, g: np.ndarray, f: KanFactors) -> dict[str, float]:
    n_dim = frame.dim
    eye = np.eye(n_dim)
    bi = frame.block_index()
    off_block = bi[:, None] != bi[None, :]
    below = bi[:, None] >= bi[None, :]

    res = {
        "reconstruction": frobenius(f.k @ f.a @ f.n - g),
        "unitarity": frobenius(f.k.conj().T @ f.k - eye),
    }
    a_f = to_frame(frame, f.a)
    positivity = frobenius(np.where(off_block, a_f, 0.0)) + frobenius(a_f - a_f.conj().T)
    eigs = np.linalg.eigvalsh((a_f + a_f.conj().T) / 2.0)
    positivity += max(0.0, -float(eigs.min()))
    res["positivity"] = positivity

    n_f = to_frame(frame, f.n) - eye
    res["unipotence"] = frobenius(np.where(below, n_f, 0.0))
    return res


def verify_kan(
    frame: SpectralFrame,
    g,
    f: KanFactors,
    ctx: StructureContext | None = None,
    tol: float = 1e-8,
) -> tuple[dict[str, float], bool]:
    """Residual report for a factorization: reconstruction, unitarity,
    positivity, and unipotence; with a structure context, also the group
    membership residuals of each factor.

    Returns ``(residuals, passed)`` with passed meaning every residual is at
    most ``tol * (1 + ||g||_F)``.
    """
    g = as_matrix(g)
    _check_frame_shape(frame, g)
    res = _structure_residuals(frame, g, f)
    if ctx is not None:
        for name, factor in (("k", f.k), ("a", f.a), ("n", f.n)):
            report = group_membership(ctx, factor, tol=tol)
            for rel, value in report.residuals.items():
                res[f"{name}_{rel}"] = value
    bound = tol * (1.0 + frobenius(g))
    passed = all(v <= bound for v in res.values())
    return res, passed


def worker_count() -> int:
    """Parallel worker cap: IWASAWA_THREADS when set, else the CPU count."""
    raw = os.environ.get("IWASAWA_THREADS")
    if raw is None:
        return max(1, os.cpu_count() or 1)
    try:
        value = int(raw)
    except ValueError:
        raise ValueError("IWASAWA_THREADS must be a positive integer") from None
    if value < 1:
        raise ValueError("IWASAWA_THREADS must be a positive integer")
    return value


@dataclass(frozen=True)
class ClosureSummary:
    """Max residuals over all trials of a family-closure study, each
    normalized by 1 + ||input||_F of the quantity it checks."""

    family: FamilyTag
    dim: int
    trials: int
    residuals: dict[str, float]
    passed: bool


def _closure_trial(args) -> dict[str, float]:
    ctx, frame, seed, trial, scale, tol = args
    g = sample_group(ctx, derive_seed(seed, trial), scale)
    f = kan_factor(frame, g)
    res, _ = verify_kan(frame, g, f, ctx, tol)
    norm_g = 1.0 + frobenius(g)
    out = {name: value / norm_g for name, value in res.items()}

    # AN = NA: n' = a n a^{-1} stays unipotent, a' = a
    n_swapped = solve(f.a.conj().T, (f.a @ f.n).conj().T).conj().T
    out["swap"] = frobenius(f.a @ f.n - n_swapped @ f.a) / norm_g
    return out


def closure_study(
    family: FamilyTag,
    n: int,
    trials: int,
    seed: int,
    scale: float = 0.5,
    tol: float = 1e-8,
) -> ClosureSummary:
    """Sample group elements, factor them, and verify that every factor stays
    in the family; also run the AN = NA swap test per trial.

    Trials are independent; they run on a thread pool capped by
    IWASAWA_THREADS, each with a seed derived from (seed, trial).
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    ctx = structure_context(family, n)
    x0 = regular_element(ctx, default_coefficients(ctx.family, n))
    frame = build_frame(x0)

    jobs = [(ctx, frame, seed, t, scale, tol) for t in range(trials)]
    workers = min(worker_count(), trials)
    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            per_trial = list(pool.map(_closure_trial, jobs))
    else:
        per_trial = [_closure_trial(job) for job in jobs]

    maxima: dict[str, float] = {}
    for res in per_trial:
        for name, value in res.items():
            maxima[name] = max(maxima.get(name, 0.0), value)
    passed = all(v <= tol for v in maxima.values())
    return ClosureSummary(
        family=ctx.family, dim=n, trials=trials, residuals=maxima, passed=passed
    )


@dataclass(frozen=True)
class ConvergenceRow:
    rank: int
    err_k: float
    err_a: float
    err_n: float


def truncation_convergence(
    ctx: StructureContext,
    g,
    ranks,
    p: float,
) -> list[ConvergenceRow]:
    """Factor leading compressions of g and report Schatten-p distances of
    their factors to the full factors.

    The rank-r compression is P_r g P_r + (1 - P_r) with P_r the projection
    onto the first r frame basis vectors (identity on the complement), so
    generic compressions stay invertible; a singular one raises
    ``SingularCompression`` naming the rank.
    """
    g = as_matrix(g)
    ranks = [int(r) for r in ranks]
    if not ranks or sorted(ranks) != ranks:
        raise ValueError("ranks must be a non-empty increasing list")
    if ranks[-1] != ctx.dim:
        raise ValueError("ranks must end at the full dimension")

    x0 = regular_element(ctx, default_coefficients(ctx.family, ctx.dim))
    frame = build_frame(x0)
    _check_frame_shape(frame, g)

    full = kan_factor(frame, g)
    gf = to_frame(frame, g)
    rows = []
    for rank in ranks:
        if not 1 <= rank <= ctx.dim:
            raise ValueError(f"rank {rank} out of range 1..{ctx.dim}")
        compressed_f = np.eye(ctx.dim, dtype=np.complex128)
        compressed_f[:rank, :rank] = gf[:rank, :rank]
        compressed = from_frame(frame, compressed_f)
        try:
            fr = kan_factor(frame, compressed)
        except Singular as exc:
            raise SingularCompression(f"compression at rank {rank} is singular") from exc
        rows.append(
            ConvergenceRow(
                rank=rank,
                err_k=schatten_norm(fr.k - full.k, p),
                err_a=schatten_norm(fr.a - full.a, p),
                err_n=schatten_norm(fr.n - full.n, p),
            )
        )
    return rows
