import json

import numpy as np
import pytest

from iwasawa.errors import DimensionMismatch, NotHermitian
from iwasawa.frame import (
    RegularityClass,
    SpectralFrame,
    build_frame,
    classify,
    from_frame,
    to_frame,
)
from iwasawa.linalg import adjoint, frobenius, random_ginibre, schatten_norm
from iwasawa.serialize import frame_to_json, matrix_from_obj


def random_hermitian(n, seed):
    z = random_ginibre(n, seed)
    return (z + adjoint(z)) / 2


def test_build_frame_diagonal():
    frame = build_frame(np.diag([2.0, 1.0]))
    assert frame.clusters == ((2.0, 1), (1.0, 1))
    np.testing.assert_array_equal(frame.basis, np.eye(2))
    assert frame.block_offsets == (0, 1, 2)


def test_build_frame_forced_merge():
    frame = build_frame(np.diag([1.0, 1.0 + 1e-12, 0.0]))
    assert [m for _, m in frame.clusters] == [2, 1]
    assert abs(frame.clusters[0][0] - 1.0) < 1e-9
    assert frame.clusters[1][0] == 0.0


def test_build_frame_offdiagonal():
    frame = build_frame(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert [v for v, _ in frame.clusters] == pytest.approx([1.0, -1.0])
    inv_sqrt2 = 1 / np.sqrt(2)
    for col, target in (
        (frame.basis[:, 0], [inv_sqrt2, inv_sqrt2]),
        (frame.basis[:, 1], [inv_sqrt2, -inv_sqrt2]),
    ):
        phase = col[np.argmax(np.abs(col))]
        phase /= abs(phase)
        np.testing.assert_allclose(col / phase, target, atol=1e-14)


def test_build_frame_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        build_frame(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_classify():
    frame = build_frame(np.diag([3.0, 1.0]))
    assert classify(frame) is RegularityClass.REGULAR
    frame = build_frame(np.diag([3.0, 3.0, 1.0]))
    assert classify(frame) is RegularityClass.QUASI_REGULAR
    frame = build_frame(np.zeros((2, 2)))
    assert classify(frame) is RegularityClass.QUASI_REGULAR


def test_to_frame_identity_basis():
    frame = build_frame(np.diag([5.0, 4.0, 3.0]))
    m = random_ginibre(3, 1)
    np.testing.assert_allclose(to_frame(frame, m), m)


def test_to_frame_diagonalizes_x0():
    x0 = random_hermitian(6, 5)
    frame = build_frame(x0)
    d = to_frame(frame, x0)
    np.testing.assert_allclose(d, np.diag(frame.values_vector()), atol=1e-10)


def test_round_trip_and_norm_invariance():
    x0 = random_hermitian(7, 2)
    frame = build_frame(x0)
    m = random_ginibre(7, 3)
    np.testing.assert_allclose(from_frame(frame, to_frame(frame, m)), m, atol=1e-12)
    for p in (1.0, 2.0, np.inf):
        a, b = schatten_norm(to_frame(frame, m), p), schatten_norm(m, p)
        assert abs(a - b) <= 1e-10 * max(a, b)


def test_dimension_mismatch():
    frame = build_frame(np.diag([2.0, 1.0]))
    with pytest.raises(DimensionMismatch):
        to_frame(frame, np.eye(3))
    with pytest.raises(DimensionMismatch):
        from_frame(frame, np.eye(3))


def test_order_canonical_under_relabeling():
    # conjugating by a permutation relabels eigenvectors but not the spectrum
    x0 = random_hermitian(6, 11)
    perm = np.eye(6)[:, [3, 1, 5, 0, 2, 4]]
    relabeled = perm.T @ x0 @ perm
    c1 = build_frame(x0).clusters
    c2 = build_frame(relabeled).clusters
    assert len(c1) == len(c2)
    for (v1, m1), (v2, m2) in zip(c1, c2):
        assert m1 == m2 and abs(v1 - v2) < 1e-10


def test_regular_frame_blocks_are_scalar():
    frame = build_frame(random_hermitian(5, 21))
    assert classify(frame) is RegularityClass.REGULAR
    assert all(m == 1 for _, m in frame.clusters)
    assert frame.block_offsets == tuple(range(6))


def test_frame_json_round_trip():
    x0 = random_hermitian(4, 8)
    frame = build_frame(x0)
    obj = json.loads(frame_to_json(frame))
    assert [[v, m] for v, m in frame.clusters] == obj["clusters"]
    basis = matrix_from_obj(obj["basis"])
    np.testing.assert_array_equal(basis, frame.basis)
    # reconstruction from the serialized data
    diag = np.diag(np.repeat([v for v, _ in frame.clusters], [m for _, m in frame.clusters]))
    recon = basis @ diag @ basis.conj().T
    assert frobenius(recon - x0) <= 1e-10 * (1 + frobenius(x0))


def test_quasi_regular_merge_spans_eigenspace():
    basis_rot = build_frame(np.array([[0.0, 1.0], [1.0, 0.0]])).basis
    x0 = basis_rot @ np.diag([2.0, 2.0]) @ basis_rot.conj().T
    frame = build_frame(x0)
    assert frame.clusters == ((pytest.approx(2.0), 2),)
    # the block projection reproduces x0
    proj = frame.basis @ np.diag([2.0, 2.0]) @ frame.basis.conj().T
    np.testing.assert_allclose(proj, x0, atol=1e-12)


def test_manual_frame_construction():
    frame = SpectralFrame(
        dim=3,
        clusters=((1.0, 2), (0.0, 1)),
        basis=np.eye(3, dtype=complex),
        block_offsets=(0, 2, 3),
    )
    assert classify(frame) is RegularityClass.QUASI_REGULAR
    np.testing.assert_array_equal(frame.block_index(), [0, 0, 1])
    np.testing.assert_array_equal(frame.values_vector(), [1.0, 1.0, 0.0])
