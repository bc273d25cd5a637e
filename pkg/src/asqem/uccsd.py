"""UCCSD ansatz over an active space: spin-conserving singles and doubles,
single-step Trotterized as a product of Pauli-string rotations.

Generator ordering is deterministic (all singles, then all doubles, each
index-lexicographic) and theta = 0 prepares the Hartree-Fock reference
determinant of the declared sector.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fermion import FermionOperator
from .mappings import MappingConfig, encode_occupation, hartree_fock_occupation, map_operator
from .pauli import PauliOperator
from .statevector import apply_pauli_rotation, basis_state

__all__ = ["UCCSDAnsatz", "excitation_list", "prepare_uccsd"]


def excitation_list(n_spatial: int, n_alpha: int, n_beta: int):
    """Spin-conserving single and double excitations (occupied -> virtual).

    Modes are block-ordered; alpha occupations are modes 0..n_alpha-1, beta
    occupations m..m+n_beta-1.  Returns (singles, doubles) as mode tuples
    ((i, a) and (i, j, a, b) with the convention a+_a a_i and
    a+_a a+_b a_j a_i).
    """
    m = n_spatial
    occ_a = list(range(n_alpha))
    vir_a = list(range(n_alpha, m))
    occ_b = [m + i for i in range(n_beta)]
    vir_b = [m + i for i in range(n_beta, m)]

    singles = [(i, a) for i in occ_a for a in vir_a]
    singles += [(i, a) for i in occ_b for a in vir_b]

    doubles = []
    for bi in range(len(occ_a)):
        for bj in range(bi + 1, len(occ_a)):
            for ba in range(len(vir_a)):
                for bb in range(ba + 1, len(vir_a)):
                    doubles.append((occ_a[bi], occ_a[bj], vir_a[ba], vir_a[bb]))
    for bi in range(len(occ_b)):
        for bj in range(bi + 1, len(occ_b)):
            for ba in range(len(vir_b)):
                for bb in range(ba + 1, len(vir_b)):
                    doubles.append((occ_b[bi], occ_b[bj], vir_b[ba], vir_b[bb]))
    for i in occ_a:
        for j in occ_b:
            for a in vir_a:
                for b in vir_b:
                    doubles.append((i, j, a, b))
    return singles, doubles


def _single_generator(n_modes: int, i: int, a: int) -> FermionOperator:
    op = FermionOperator(n_modes)
    op.add_term(((a, True), (i, False)), 1.0)
    op.add_term(((i, True), (a, False)), -1.0)
    return op


def _double_generator(n_modes: int, i: int, j: int, a: int, b: int) -> FermionOperator:
    op = FermionOperator(n_modes)
    op.add_term(((a, True), (b, True), (j, False), (i, False)), 1.0)
    op.add_term(((i, True), (j, True), (b, False), (a, False)), -1.0)
    return op


@dataclass(frozen=True)
class UCCSDAnsatz:
    """Mapped UCCSD generators plus the reference state for one sector."""

    config: MappingConfig
    labels: tuple[str, ...]
    generators: tuple[PauliOperator, ...]
    reference_index: int

    @property
    def n_parameters(self) -> int:
        return len(self.generators)

    @property
    def n_qubits(self) -> int:
        return self.config.n_qubits

    def reference_state(self) -> np.ndarray:
        return basis_state(self.n_qubits, self.reference_index)

    def prepare_state(self, theta: np.ndarray) -> np.ndarray:
        """First-order Trotter product of generator-term rotations at theta."""
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (self.n_parameters,):
            raise ValueError(
                f"expected {self.n_parameters} parameters, got {theta.shape}"
            )
        state = self.reference_state()
        n = self.n_qubits
        for t, gen in zip(theta, self.generators):
            if t == 0.0:
                continue
            for x, z, c in gen.terms():
                # anti-Hermitian generator: coefficients are purely imaginary
                state = apply_pauli_rotation(state, x, z, t * c.imag, n)
        return state


def prepare_uccsd(n_spatial: int, config: MappingConfig) -> UCCSDAnsatz:
    """Build the UCCSD ansatz for the sector declared in ``config``."""
    if config.n_alpha is None or config.n_beta is None:
        raise ValueError("UCCSD needs the declared (n_alpha, n_beta) sector")
    if config.n_modes != 2 * n_spatial:
        raise ValueError("mapping register does not match the active space")
    singles, doubles = excitation_list(n_spatial, config.n_alpha, config.n_beta)
    if not singles and not doubles:
        raise ValueError("active space admits no excitations; nothing to variate")

    generators = []
    labels = []
    for i, a in singles:
        gen = map_operator(_single_generator(config.n_modes, i, a), config)
        generators.append(_sorted_terms(gen))
        labels.append(f"s:{i}->{a}")
    for i, j, a, b in doubles:
        gen = map_operator(_double_generator(config.n_modes, i, j, a, b), config)
        generators.append(_sorted_terms(gen))
        labels.append(f"d:{i},{j}->{a},{b}")

    for gen in generators:
        defect = max((abs(c.real) for _, _, c in gen.terms()), default=0.0)
        if defect > 1e-12:
            raise RuntimeError("mapped UCCSD generator is not anti-Hermitian")

    occ = hartree_fock_occupation(config.n_modes, config.n_alpha, config.n_beta)
    ref = encode_occupation(occ, config)
    return UCCSDAnsatz(
        config=config,
        labels=tuple(labels),
        generators=tuple(generators),
        reference_index=ref,
    )


def _sorted_terms(op: PauliOperator) -> PauliOperator:
    return PauliOperator(op.n_qubits, dict(sorted(op._terms.items())))
