"""Mean-field embedding of an active space: inactive Fock operator,
inactive energy, and the embedded active-space Hamiltonian.

The restricted closed-shell forms are

    F_I[p,q] = h[p,q] + sum_i (2 (ii|pq) - (iq|pi))
    E_I      = sum_j (h[j,j] + F_I[j,j])

over the inactive set, and the embedded problem hands the active block of
F_I (one-body), the active block of g (two-body), and E_I + E_nn (scalar
offset) to the solver.  The spin-resolved variant keeps one Fock matrix per
spin with

    F_I^s[p,q] = h[p,q] + sum_{i in I_s} ((ii|pq) - (iq|pi)) + sum_{i in I_t} (ii|pq)

and E_I = (1/2) sum_s sum_j (h[j,j] + F_I^s[j,j]).  Both kernels (full-range
g or long-range g_lr) are supported.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .integrals import (
    ActiveSpace,
    DensityMatrix,
    MolecularSystem,
    TwoBodyIntegrals,
    TwoParticleDensityMatrix,
)

__all__ = [
    "FockKernel",
    "FockMatrix",
    "EmbeddedHamiltonian",
    "build_inactive_fock",
    "build_inactive_fock_unrestricted",
    "inactive_energy",
    "assemble_active_hamiltonian",
    "embedded_energy",
]

HERMITICITY_TOL = 1e-12


class FockKernel(enum.Enum):
    FULL_RANGE = "full_range"
    LONG_RANGE = "long_range"


class SpinLabel(enum.Enum):
    RESTRICTED = "restricted"
    ALPHA = "alpha"
    BETA = "beta"


@dataclass(frozen=True)
class FockMatrix:
    """Inactive Fock operator over all general orbital indices."""

    matrix: np.ndarray
    kernel: FockKernel
    spin: SpinLabel = SpinLabel.RESTRICTED

    def __post_init__(self):
        m = np.ascontiguousarray(self.matrix, dtype=float)
        if np.max(np.abs(m - m.T), initial=0.0) > HERMITICITY_TOL:
            raise ValueError("inactive Fock matrix is not symmetric")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


def _kernel_tensor(system: MolecularSystem, kernel: FockKernel) -> TwoBodyIntegrals:
    if kernel is FockKernel.FULL_RANGE:
        return system.two_body
    if system.two_body_lr is None:
        raise ValueError("LONG_RANGE kernel requested but no LR integrals attached")
    return system.two_body_lr


def _coulomb_exchange(g: np.ndarray, inactive: tuple[int, ...]):
    """Inactive Coulomb sum_i (ii|pq) and exchange sum_i (iq|pi)."""
    n = g.shape[0]
    if not inactive:
        z = np.zeros((n, n))
        return z, z.copy()
    ix = np.asarray(inactive)
    j = np.einsum("iipq->pq", g[np.ix_(ix, ix)])
    k = np.einsum("iqpi->pq", g[ix][:, :, :, ix])
    return j, k


def build_inactive_fock(
    system: MolecularSystem,
    active_space: ActiveSpace,
    kernel: FockKernel = FockKernel.FULL_RANGE,
) -> FockMatrix:
    """Restricted inactive Fock operator for the selected kernel."""
    g = _kernel_tensor(system, kernel).array
    j, k = _coulomb_exchange(g, active_space.inactive)
    f = system.one_body.array + 2.0 * j - k
    return FockMatrix(matrix=f, kernel=kernel, spin=SpinLabel.RESTRICTED)


def build_inactive_fock_unrestricted(
    system: MolecularSystem,
    active_space: ActiveSpace,
    kernel: FockKernel = FockKernel.FULL_RANGE,
) -> tuple[FockMatrix, FockMatrix]:
    """Per-spin inactive Fock operators (alpha, beta).

    The inactive set is doubly occupied, so both spins see the same inactive
    orbitals; same-spin terms carry exchange, opposite-spin terms only
    Coulomb.  With spin-resolved integrals attached, each spin uses its own
    one-body and same-spin two-body blocks plus the cross-spin Coulomb.
    """
    if system.spin_resolved_integrals:
        if kernel is not FockKernel.FULL_RANGE:
            raise ValueError("range separation is restricted-orbital only")
        ix = list(active_space.inactive)
        g_aa = system.two_body.array
        g_bb = system.two_body_bb.array
        g_ab = system.two_body_ab.array
        j_aa, k_aa = _coulomb_exchange(g_aa, active_space.inactive)
        j_bb, k_bb = _coulomb_exchange(g_bb, active_space.inactive)
        n = system.n_orbitals
        j_ba = np.zeros((n, n))  # beta-inactive Coulomb felt by alpha
        j_ab = np.zeros((n, n))  # alpha-inactive Coulomb felt by beta
        for i in ix:
            j_ba += g_ab[:, :, i, i]
            j_ab += g_ab[i, i, :, :]
        fa = system.one_body.array + j_aa - k_aa + j_ba
        fb = system.one_body_beta.array + j_bb - k_bb + j_ab
        return (
            FockMatrix(matrix=fa, kernel=kernel, spin=SpinLabel.ALPHA),
            FockMatrix(matrix=fb, kernel=kernel, spin=SpinLabel.BETA),
        )
    g = _kernel_tensor(system, kernel).array
    j, k = _coulomb_exchange(g, active_space.inactive)
    f = system.one_body.array + 2.0 * j - k
    return (
        FockMatrix(matrix=f, kernel=kernel, spin=SpinLabel.ALPHA),
        FockMatrix(matrix=f.copy(), kernel=kernel, spin=SpinLabel.BETA),
    )


def inactive_energy(
    system: MolecularSystem,
    active_space: ActiveSpace,
    fock: FockMatrix | tuple[FockMatrix, FockMatrix],
) -> float:
    """Inactive energy E_I for a restricted or spin-resolved Fock operator."""
    ix = list(active_space.inactive)
    if not ix:
        return 0.0
    if isinstance(fock, FockMatrix):
        h = system.one_body.array
        f = fock.matrix
        return float(np.sum(h[ix, ix] + f[ix, ix]))
    fa, fb = fock
    h_a = system.one_body.array
    h_b = (system.one_body_beta or system.one_body).array
    total = 0.5 * float(np.sum(h_a[ix, ix] + fa.matrix[ix, ix]))
    total += 0.5 * float(np.sum(h_b[ix, ix] + fb.matrix[ix, ix]))
    return total


@dataclass(frozen=True)
class EmbeddedHamiltonian:
    """Active-space electronic Hamiltonian plus scalar energy offset.

    ``h_eff`` is the effective one-body operator restricted to active indices
    (per spin when ``h_eff_beta`` is present), ``g_active`` the active block
    of the selected two-electron kernel, and ``e_offset`` collects all scalar
    terms (inactive energy, nuclear repulsion, and any mean-field
    double-counting corrections) so that

        E = e_offset + sum(h_eff * D_A) + 0.5 * sum(g_active * d_A).
    """

    h_eff: np.ndarray
    g_active: TwoBodyIntegrals
    e_offset: float
    active_space: ActiveSpace
    h_eff_beta: np.ndarray | None = None
    g_active_bb: TwoBodyIntegrals | None = None
    g_active_ab: TwoBodyIntegrals | None = None

    def __post_init__(self):
        n = len(self.active_space.active)
        h = np.ascontiguousarray(self.h_eff, dtype=float)
        if h.shape != (n, n):
            raise ValueError("h_eff shape does not match the active space")
        if np.max(np.abs(h - h.T), initial=0.0) > HERMITICITY_TOL:
            raise ValueError("h_eff is not symmetric")
        h.setflags(write=False)
        object.__setattr__(self, "h_eff", h)
        if self.h_eff_beta is not None:
            hb = np.ascontiguousarray(self.h_eff_beta, dtype=float)
            if hb.shape != (n, n):
                raise ValueError("h_eff_beta shape does not match the active space")
            hb.setflags(write=False)
            object.__setattr__(self, "h_eff_beta", hb)
        for g in (self.g_active, self.g_active_bb, self.g_active_ab):
            if g is not None and g.n_orbitals != n:
                raise ValueError("g_active dimension does not match the active space")
        if (self.g_active_bb is None) != (self.g_active_ab is None):
            raise ValueError("spin-resolved g blocks must come together")

    @property
    def spin_resolved(self) -> bool:
        return self.h_eff_beta is not None

    @property
    def spin_resolved_two_body(self) -> bool:
        return self.g_active_bb is not None

    @property
    def n_active_orbitals(self) -> int:
        return len(self.active_space.active)


def assemble_active_hamiltonian(
    system: MolecularSystem,
    active_space: ActiveSpace,
    kernel: FockKernel = FockKernel.FULL_RANGE,
    unrestricted: bool = False,
) -> EmbeddedHamiltonian:
    """Build the embedded Hamiltonian (F_I over actives, g block, E_I + E_nn)."""
    if not active_space.active:
        raise ValueError("empty active space: nothing to embed")
    act = np.asarray(active_space.active)
    block = np.ix_(act, act, act, act)
    g = _kernel_tensor(system, kernel).array
    g_act = TwoBodyIntegrals(g[block], symmetrize=False)
    if unrestricted or system.spin_resolved_integrals:
        fa, fb = build_inactive_fock_unrestricted(system, active_space, kernel)
        e_i = inactive_energy(system, active_space, (fa, fb))
        g_bb = g_ab = None
        if system.spin_resolved_integrals:
            g_bb = TwoBodyIntegrals(system.two_body_bb.array[block], symmetrize=False)
            g_ab = TwoBodyIntegrals(
                system.two_body_ab.array[block], symmetrize=False,
                pair_symmetric_only=True,
            )
        return EmbeddedHamiltonian(
            h_eff=fa.matrix[np.ix_(act, act)],
            h_eff_beta=fb.matrix[np.ix_(act, act)],
            g_active=g_act,
            g_active_bb=g_bb,
            g_active_ab=g_ab,
            e_offset=e_i + system.e_nuclear,
            active_space=active_space,
        )
    fock = build_inactive_fock(system, active_space, kernel)
    e_i = inactive_energy(system, active_space, fock)
    return EmbeddedHamiltonian(
        h_eff=fock.matrix[np.ix_(act, act)],
        g_active=g_act,
        e_offset=e_i + system.e_nuclear,
        active_space=active_space,
    )


def embedded_energy(
    ham: EmbeddedHamiltonian,
    d1: DensityMatrix,
    d2: TwoParticleDensityMatrix,
) -> float:
    """Total energy from active-space RDMs: offset + tr(h_eff D) + 1/2 g:d."""
    n = ham.n_active_orbitals
    if d1.n_orbitals != n or d2.n_orbitals != n:
        raise ValueError("RDM dimensions do not match the active space")
    if ham.spin_resolved_two_body:
        if not d2.spin_resolved:
            raise ValueError("spin-resolved g blocks need a spin-blocked 2-RDM")
        two_body = 0.5 * float(np.einsum("uvxy,uvxy->", ham.g_active.array, d2.aa))
        two_body += 0.5 * float(np.einsum("uvxy,uvxy->", ham.g_active_bb.array, d2.bb))
        two_body += float(np.einsum("uvxy,uvxy->", ham.g_active_ab.array, d2.ab))
    else:
        two_body = 0.5 * float(np.einsum("uvxy,uvxy->", ham.g_active.array, d2.tensor))
    if ham.spin_resolved:
        if not d1.spin_resolved:
            raise ValueError("spin-resolved Hamiltonian needs a spin-resolved 1-RDM")
        one_body = float(np.sum(ham.h_eff * d1.alpha) + np.sum(ham.h_eff_beta * d1.beta))
    else:
        one_body = float(np.sum(ham.h_eff * d1.total))
    return ham.e_offset + one_body + two_body
