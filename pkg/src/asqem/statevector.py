"""Exact (noiseless) statevector simulation of Pauli operators.

States are dense complex vectors of length 2^n over the computational
basis, index bit q = qubit q.  Heavy loops are delegated to the selected
kernel backend (compiled core or NumPy fallback).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import _kernels
from .pauli import PauliOperator

__all__ = [
    "basis_state",
    "apply_operator",
    "expectation",
    "apply_pauli_rotation",
    "norm_defect",
]

NORM_TOL = 1e-10


@lru_cache(maxsize=32)
def _indices(n_qubits: int) -> np.ndarray:
    return np.arange(1 << n_qubits, dtype=np.uint64)


def basis_state(n_qubits: int, index: int) -> np.ndarray:
    state = np.zeros(1 << n_qubits, dtype=complex)
    state[index] = 1.0
    return state


def apply_operator(op: PauliOperator, state: np.ndarray) -> np.ndarray:
    if state.shape[0] != 1 << op.n_qubits:
        raise ValueError("state length does not match operator width")
    xs, zs, cs = op.mask_arrays()
    return _kernels.apply_pauli_sum(xs, zs, cs, state, _indices(op.n_qubits))


def expectation(op: PauliOperator, state: np.ndarray) -> complex:
    if state.shape[0] != 1 << op.n_qubits:
        raise ValueError("state length does not match operator width")
    xs, zs, cs = op.mask_arrays()
    return _kernels.expectation(xs, zs, cs, state, _indices(op.n_qubits))


def apply_pauli_rotation(
    state: np.ndarray, x: int, z: int, angle: float, n_qubits: int
) -> np.ndarray:
    """exp(i * angle * P) |state> for a single Pauli string P.

    P^2 = I, so the exponential is cos(angle) I + i sin(angle) P.
    """
    xs = np.array([x], dtype=np.uint64)
    zs = np.array([z], dtype=np.uint64)
    cs = np.array([1.0], dtype=complex)
    p_state = _kernels.apply_pauli_sum(xs, zs, cs, state, _indices(n_qubits))
    return np.cos(angle) * state + 1j * np.sin(angle) * p_state


def norm_defect(state: np.ndarray) -> float:
    return abs(float(np.linalg.norm(state)) - 1.0)
