"""ASQEM-GRID v1 quadrature files: points, weights, and MO values.

Layout: one ASCII header line ``ASQEM-GRID 1 <n_points> <n_orbitals>``
terminated by a newline, followed by a little-endian float64 block holding
``n_points`` quadrature weights (bohr^3) and then the ``n_points x
n_orbitals`` MO-value matrix phi_p(r_k) in point-major order (bohr^-3/2).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = ["GridData", "GridError", "GridWarning", "load_grid", "write_grid"]

DEFAULT_GRID_TOL = 1e-5


class GridError(ValueError):
    """Unreadable or invalid grid file."""


class GridWarning(UserWarning):
    """Quadrature quality below the requested tolerance."""


@dataclass(frozen=True)
class GridData:
    """Quadrature grid with MO amplitudes evaluated on it.

    ``orthonormality_defect`` is the largest deviation of
    ``sum_k w_k phi_p(r_k) phi_q(r_k)`` from ``delta_pq`` over the orbital
    block it was checked on (set by :func:`load_grid`).
    """

    weights: np.ndarray
    mo_values: np.ndarray
    orthonormality_defect: float | None = None

    def __post_init__(self):
        w = np.ascontiguousarray(self.weights, dtype=float)
        v = np.ascontiguousarray(self.mo_values, dtype=float)
        if w.ndim != 1 or v.ndim != 2 or v.shape[0] != w.shape[0]:
            raise GridError("weights and MO values have inconsistent shapes")
        if np.any(w < 0):
            raise GridError("negative quadrature weight")
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(v))):
            raise GridError("non-finite grid data")
        w.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "mo_values", v)

    @property
    def n_points(self) -> int:
        return self.weights.shape[0]

    @property
    def n_orbitals(self) -> int:
        return self.mo_values.shape[1]

    def overlap(self, orbitals: slice | None = None) -> np.ndarray:
        """Quadrature overlap matrix over the selected orbital block."""
        v = self.mo_values if orbitals is None else self.mo_values[:, orbitals]
        return (v * self.weights[:, None]).T @ v


def _ortho_defect(grid: GridData, n_check: int) -> float:
    s = grid.overlap(slice(0, n_check))
    return float(np.max(np.abs(s - np.eye(n_check))))


def load_grid(
    path: str | Path,
    tol: float = DEFAULT_GRID_TOL,
    n_occupied: int | None = None,
) -> GridData:
    """Load an ASQEM-GRID file and run the orthonormality check.

    The check covers the first ``n_occupied`` orbitals (all orbitals when
    omitted).  A defect above ``tol`` raises :class:`GridWarning`, not an
    error, so coarse test grids stay usable.
    """
    path = Path(path)
    raw = path.read_bytes()
    nl = raw.find(b"\n")
    if nl < 0:
        raise GridError(f"{path}: missing header line")
    header = raw[:nl].decode("ascii", errors="replace").split()
    if len(header) != 4 or header[0] != "ASQEM-GRID":
        raise GridError(f"{path}: bad header {header!r}")
    if header[1] != "1":
        raise GridError(f"{path}: unsupported version {header[1]}")
    try:
        n_points, n_orb = int(header[2]), int(header[3])
    except ValueError as exc:
        raise GridError(f"{path}: unparsable header counts") from exc
    if n_points <= 0 or n_orb <= 0:
        raise GridError(f"{path}: non-positive header counts")

    payload = raw[nl + 1:]
    expected = 8 * n_points * (1 + n_orb)
    if len(payload) < expected:
        raise GridError(f"{path}: truncated payload ({len(payload)} < {expected} bytes)")
    data = np.frombuffer(payload[:expected], dtype="<f8")
    weights = np.array(data[:n_points])
    mo_values = np.array(data[n_points:]).reshape(n_points, n_orb)
    if not (np.all(np.isfinite(weights)) and np.all(np.isfinite(mo_values))):
        raise GridError(f"{path}: NaN or infinite value in payload")
    if np.any(weights < 0):
        raise GridError(f"{path}: negative weight")

    grid = GridData(weights=weights, mo_values=mo_values)
    n_check = n_orb if n_occupied is None else min(n_occupied, n_orb)
    defect = _ortho_defect(grid, n_check)
    if defect > tol:
        warnings.warn(
            f"{path}: quadrature orthonormality defect {defect:.3e} exceeds {tol:.1e}",
            GridWarning,
        )
    return GridData(weights=weights, mo_values=mo_values, orthonormality_defect=defect)


def write_grid(path: str | Path, weights: np.ndarray, mo_values: np.ndarray) -> None:
    weights = np.ascontiguousarray(weights, dtype="<f8")
    mo_values = np.ascontiguousarray(mo_values, dtype="<f8")
    n_points, n_orb = mo_values.shape
    if weights.shape != (n_points,):
        raise GridError("weights/mo_values shape mismatch")
    with open(path, "wb") as fh:
        fh.write(f"ASQEM-GRID 1 {n_points} {n_orb}\n".encode("ascii"))
        fh.write(weights.tobytes())
        fh.write(mo_values.tobytes())
