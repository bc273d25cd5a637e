"""Fermionic operators over spin orbitals and their construction from
embedded Hamiltonians.

Spin orbitals are ordered block-wise: modes 0..m-1 are the alpha spins of
the m active spatial orbitals, modes m..2m-1 the beta spins.  The block
ordering is what makes the parity mapping's two-qubit reduction land on the
fixed alpha-parity and total-parity qubits.

An operator is a weighted sum of products of creation/annihilation
operators, stored term-wise as ``((mode, is_creation), ...) -> coefficient``
in the order written (no normal ordering is imposed).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hf_embedding import EmbeddedHamiltonian

__all__ = ["FermionOperator", "to_fermion_operator", "excitation_operator"]

PRUNE_TOL = 1e-14


@dataclass
class FermionOperator:
    """Weighted sum of fermionic operator strings on ``n_modes`` spin orbitals."""

    n_modes: int
    terms: dict = field(default_factory=dict)

    def add_term(self, ops: tuple, coeff: complex) -> None:
        if abs(coeff) < PRUNE_TOL:
            return
        for mode, _dag in ops:
            if not 0 <= mode < self.n_modes:
                raise ValueError(f"mode {mode} outside register of {self.n_modes}")
        new = self.terms.get(ops, 0.0) + coeff
        if abs(new) < PRUNE_TOL:
            self.terms.pop(ops, None)
        else:
            self.terms[ops] = new

    def __add__(self, other: "FermionOperator") -> "FermionOperator":
        if other.n_modes != self.n_modes:
            raise ValueError("mode-count mismatch")
        out = FermionOperator(self.n_modes, dict(self.terms))
        for ops, c in other.terms.items():
            out.add_term(ops, c)
        return out

    def __mul__(self, scalar: complex) -> "FermionOperator":
        return FermionOperator(
            self.n_modes, {k: scalar * v for k, v in self.terms.items()}
        )

    __rmul__ = __mul__

    def __sub__(self, other: "FermionOperator") -> "FermionOperator":
        return self + (other * -1.0)

    def adjoint(self) -> "FermionOperator":
        out = FermionOperator(self.n_modes)
        for ops, c in self.terms.items():
            rev = tuple((mode, not dag) for mode, dag in reversed(ops))
            out.add_term(rev, np.conj(c))
        return out

    @property
    def n_terms(self) -> int:
        return len(self.terms)


def excitation_operator(n_modes: int, ops: tuple, coeff: complex = 1.0) -> FermionOperator:
    op = FermionOperator(n_modes)
    op.add_term(ops, coeff)
    return op


def to_fermion_operator(ham: EmbeddedHamiltonian, tol: float = 1e-12) -> FermionOperator:
    """Second-quantized active-space Hamiltonian over 2m spin orbitals.

    H = sum_s sum_uv h^s[u,v] a+_us a_vs
        + 1/2 sum_st sum_uvxy g^st[u,v,x,y] a+_us a+_xt a_yt a_vs
        + e_offset

    with chemist-ordered g blocks; the identity term carries the scalar
    offset so expectation values are total energies.
    """
    m = ham.n_active_orbitals
    op = FermionOperator(2 * m)
    op.add_term((), ham.e_offset)

    h_a = ham.h_eff
    h_b = ham.h_eff_beta if ham.spin_resolved else ham.h_eff
    for u in range(m):
        for v in range(m):
            if abs(h_a[u, v]) > tol:
                op.add_term(((u, True), (v, False)), h_a[u, v])
            if abs(h_b[u, v]) > tol:
                op.add_term(((u + m, True), (v + m, False)), h_b[u, v])

    g_aa = ham.g_active.array
    g_bb = ham.g_active_bb.array if ham.spin_resolved_two_body else g_aa
    g_ab = ham.g_active_ab.array if ham.spin_resolved_two_body else g_aa
    for u in range(m):
        for v in range(m):
            for x in range(m):
                for y in range(m):
                    # same spin: 1/2 g^ss (a+_us a+_xs a_ys a_vs)
                    if abs(g_aa[u, v, x, y]) > tol:
                        op.add_term(
                            ((u, True), (x, True), (y, False), (v, False)),
                            0.5 * g_aa[u, v, x, y],
                        )
                    if abs(g_bb[u, v, x, y]) > tol:
                        op.add_term(
                            ((u + m, True), (x + m, True), (y + m, False), (v + m, False)),
                            0.5 * g_bb[u, v, x, y],
                        )
                    # opposite spin: the ab and ba sums combine pairwise
                    if abs(g_ab[u, v, x, y]) > tol:
                        op.add_term(
                            ((u, True), (x + m, True), (y + m, False), (v, False)),
                            0.5 * g_ab[u, v, x, y],
                        )
                        op.add_term(
                            ((x + m, True), (u, True), (v, False), (y + m, False)),
                            0.5 * g_ab[u, v, x, y],
                        )
    return op
