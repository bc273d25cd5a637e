"""Exact ground states of Pauli operators.

Small registers are diagonalized densely.  Larger ones go through a sparse
matrix assembled either over the full register or, when a symmetry-invariant
sector basis is supplied (particle-number sector of a mapped molecular
Hamiltonian), over that sector only; sector dimensions stay tiny compared
with 2^n, which is what makes 18-qubit embedded problems routine.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import _kernels
from .pauli import PauliOperator

__all__ = ["ExactResult", "exact_ground_state", "operator_matrix"]

DENSE_QUBIT_LIMIT = 16
ITERATIVE_QUBIT_LIMIT = 24
DENSE_SECTOR_LIMIT = 1500
DEGENERACY_GAP = 1e-8


@dataclass(frozen=True)
class ExactResult:
    energy: float
    state: np.ndarray          # full 2^n statevector
    degenerate: bool
    gap: float | None          # energy gap to the next computed level

    def __iter__(self):
        yield self.energy
        yield self.state


def operator_matrix(
    op: PauliOperator, sector: np.ndarray | None = None
) -> sp.csr_matrix:
    """Sparse matrix of ``op``, optionally restricted to a sector basis.

    ``sector`` must be a sorted array of computational-basis indices spanning
    an invariant subspace; restriction is exact for operators that preserve
    the subspace and is not checked here.
    """
    if sector is None:
        sector = np.arange(1 << op.n_qubits, dtype=np.uint64)
    xs, zs, cs = op.mask_arrays()
    rows, cols, data = _kernels.sector_matrix_entries(xs, zs, cs, sector)
    dim = sector.shape[0]
    if not rows:
        return sp.csr_matrix((dim, dim), dtype=complex)
    mat = sp.coo_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(dim, dim),
    )
    return mat.tocsr()


def _embed(vec: np.ndarray, sector: np.ndarray | None, n_qubits: int) -> np.ndarray:
    if sector is None:
        return vec.astype(complex)
    full = np.zeros(1 << n_qubits, dtype=complex)
    full[sector.astype(np.int64)] = vec
    return full


def exact_ground_state(
    op: PauliOperator,
    sector: np.ndarray | None = None,
) -> ExactResult:
    """Lowest eigenvalue and eigenvector of ``op``.

    Dense up to DENSE_QUBIT_LIMIT qubits (or DENSE_SECTOR_LIMIT sector
    dimension); a deterministic Lanczos solve beyond that, up to
    ITERATIVE_QUBIT_LIMIT qubits.  Degenerate ground spaces return one
    member, flagged when the computed gap is below 1e-8.
    """
    n = op.n_qubits
    if n == 0:
        c = complex(op.coefficient(0, 0))
        return ExactResult(float(c.real), np.array([1.0 + 0.0j]), False, None)
    dim = (1 << n) if sector is None else sector.shape[0]
    if sector is None and n > ITERATIVE_QUBIT_LIMIT:
        raise ValueError(f"{n} qubits exceeds the iterative solver limit")

    if dim <= DENSE_SECTOR_LIMIT or (sector is None and n <= 10):
        if sector is None and n > DENSE_QUBIT_LIMIT:
            raise ValueError(f"{n} qubits exceeds the dense solver limit")
        mat = operator_matrix(op, sector).toarray()
        vals, vecs = np.linalg.eigh(mat)
        gap = float(vals[1] - vals[0]) if dim > 1 else None
        return ExactResult(
            energy=float(vals[0]),
            state=_embed(vecs[:, 0], sector, n),
            degenerate=bool(gap is not None and gap < DEGENERACY_GAP),
            gap=gap,
        )

    mat = operator_matrix(op, sector)
    k = min(4, dim - 1)
    rng = np.random.default_rng(1234)
    v0 = rng.standard_normal(dim) + 0.1
    vals, vecs = spla.eigsh(mat, k=k, which="SA", v0=v0, maxiter=10000, tol=0)
    order = np.argsort(vals)
    vals, vecs = vals[order], vecs[:, order]
    gap = float(vals[1] - vals[0]) if k > 1 else None
    return ExactResult(
        energy=float(vals[0]),
        state=_embed(vecs[:, 0], sector, n),
        degenerate=bool(gap is not None and gap < DEGENERACY_GAP),
        gap=gap,
    )
