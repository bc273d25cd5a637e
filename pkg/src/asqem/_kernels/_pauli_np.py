"""Pure-NumPy statevector kernels (fallback when the compiled core is absent).

A Pauli string is encoded by two bit masks over qubits: ``x`` marks X or Y,
``z`` marks Z or Y.  Acting on a computational basis state |b>:

    P |b> = i^popcount(x & z) * (-1)^popcount(z & b) * |b XOR x>

Coefficients refer to the Hermitian string (Y factors included).
"""

from __future__ import annotations

import numpy as np

BACKEND = "numpy"


def _signs(indices: np.ndarray, z: int) -> np.ndarray:
    if z == 0:
        return np.ones(indices.shape[0])
    par = np.bitwise_count(indices & np.uint64(z)).astype(np.int64) & 1
    return 1.0 - 2.0 * par


def apply_pauli_sum(
    xs: np.ndarray,
    zs: np.ndarray,
    coeffs: np.ndarray,
    state: np.ndarray,
    indices: np.ndarray,
) -> np.ndarray:
    """out = (sum_t c_t P_t) |state> over the full register."""
    out = np.zeros_like(state)
    for x, z, c in zip(xs, zs, coeffs):
        phase = c * (1j) ** int(bin(int(x) & int(z)).count("1") % 4)
        vals = phase * _signs(indices, int(z)) * state
        if x == 0:
            out += vals
        else:
            out[indices ^ np.uint64(x)] += vals
    return out


def expectation(
    xs: np.ndarray,
    zs: np.ndarray,
    coeffs: np.ndarray,
    state: np.ndarray,
    indices: np.ndarray,
) -> complex:
    acc = apply_pauli_sum(xs, zs, coeffs, state, indices)
    return complex(np.vdot(state, acc))


def sector_matrix_entries(
    xs: np.ndarray,
    zs: np.ndarray,
    coeffs: np.ndarray,
    sector: np.ndarray,
):
    """COO entries of the operator restricted to a symmetry-invariant sector.

    ``sector`` is the sorted array of basis indices spanning the block.
    Terms are grouped by flip mask so duplicate (row, col) pairs only arise
    between groups; returns (rows, cols, data) lists.
    """
    groups: dict[int, list[tuple[int, complex]]] = {}
    for x, z, c in zip(xs, zs, coeffs):
        phase = c * (1j) ** int(bin(int(x) & int(z)).count("1") % 4)
        groups.setdefault(int(x), []).append((int(z), phase))

    dim = sector.shape[0]
    cols_base = np.arange(dim, dtype=np.int64)
    rows_out, cols_out, data_out = [], [], []
    for x, zl in groups.items():
        vals = np.zeros(dim, dtype=complex)
        for z, phase in zl:
            vals += phase * _signs(sector, z)
        if x == 0:
            rows_out.append(cols_base)
            cols_out.append(cols_base)
            data_out.append(vals)
            continue
        targets = sector ^ np.uint64(x)
        pos = np.searchsorted(sector, targets)
        pos_c = np.minimum(pos, dim - 1)
        ok = sector[pos_c] == targets
        rows_out.append(pos_c[ok].astype(np.int64))
        cols_out.append(cols_base[ok])
        data_out.append(vals[ok])
    return rows_out, cols_out, data_out
