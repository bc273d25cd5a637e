import numpy as np
import pytest

from asqem.gridfile import GridError, GridWarning, load_grid, write_grid


def orthonormal_grid(n_points=64, n_orb=3, seed=0):
    """Random weights plus MOs orthonormalized against that quadrature."""
    rng = np.random.default_rng(seed)
    w = rng.uniform(0.1, 1.0, n_points)
    raw = rng.standard_normal((n_points, n_orb))
    # Gram-Schmidt in the weighted inner product
    q = np.zeros_like(raw)
    for j in range(n_orb):
        v = raw[:, j].copy()
        for k in range(j):
            v -= q[:, k] * np.sum(w * q[:, k] * v)
        q[:, j] = v / np.sqrt(np.sum(w * v * v))
    return w, q


def test_round_trip_and_quadrature(tmp_path):
    w, phi = orthonormal_grid()
    path = tmp_path / "grid.bin"
    write_grid(path, w, phi)
    grid = load_grid(path)
    np.testing.assert_array_equal(grid.weights, w)
    np.testing.assert_array_equal(grid.mo_values, phi)
    assert grid.orthonormality_defect < 1e-12
    # quadrature oracle: sum_k w_k phi_0^2 = 1
    assert np.sum(w * phi[:, 0] ** 2) == pytest.approx(1.0, abs=1e-12)


def test_single_point_identity_warns(tmp_path):
    path = tmp_path / "one.bin"
    write_grid(path, np.array([1.0]), np.array([[1.0, 0.0]]))
    with pytest.warns(GridWarning):
        grid = load_grid(path)
    assert grid.n_points == 1
    assert grid.orthonormality_defect == pytest.approx(1.0)


def test_occupied_block_check_only(tmp_path):
    w, phi = orthonormal_grid(n_orb=4)
    phi = phi.copy()
    phi[:, 3] *= 2.0  # ruin the last (virtual) orbital only
    path = tmp_path / "occ.bin"
    write_grid(path, w, phi)
    grid = load_grid(path, n_occupied=3)
    assert grid.orthonormality_defect < 1e-12


def test_truncated_payload(tmp_path):
    w, phi = orthonormal_grid(n_points=8)
    path = tmp_path / "trunc.bin"
    write_grid(path, w, phi)
    data = path.read_bytes()
    path.write_bytes(data[:-16])
    with pytest.raises(GridError):
        load_grid(path)


def test_negative_weight_rejected(tmp_path):
    path = tmp_path / "neg.bin"
    w = np.array([0.5, -0.5])
    phi = np.ones((2, 1))
    with open(path, "wb") as fh:
        fh.write(b"ASQEM-GRID 1 2 1\n")
        fh.write(w.astype("<f8").tobytes())
        fh.write(phi.astype("<f8").tobytes())
    with pytest.raises(GridError):
        load_grid(path)


def test_nan_rejected(tmp_path):
    path = tmp_path / "nan.bin"
    w = np.array([0.5, 0.5])
    phi = np.array([[1.0], [np.nan]])
    with open(path, "wb") as fh:
        fh.write(b"ASQEM-GRID 1 2 1\n")
        fh.write(w.astype("<f8").tobytes())
        fh.write(phi.astype("<f8").tobytes())
    with pytest.raises(GridError):
        load_grid(path)


def test_bad_header(tmp_path):
    path = tmp_path / "hdr.bin"
    path.write_bytes(b"NOT-A-GRID 1 2 1\n" + b"\x00" * 48)
    with pytest.raises(GridError):
        load_grid(path)
    path.write_bytes(b"ASQEM-GRID 2 2 1\n" + b"\x00" * 48)
    with pytest.raises(GridError):
        load_grid(path)
