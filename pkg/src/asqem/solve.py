"""One-stop solve of an embedded Hamiltonian: map to qubits, find the ground
state in the declared particle sector, and extract RDMs.

Used by the CLI and by every iteration of the self-consistent DFT loop.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exact import ExactResult, exact_ground_state
from .fermion import to_fermion_operator
from .hf_embedding import EmbeddedHamiltonian
from .integrals import DensityMatrix, TwoParticleDensityMatrix
from .mappings import MappingConfig, map_operator, sector_basis
from .rdm import extract_rdms, extract_rdms_unrestricted
from .uccsd import prepare_uccsd
from .vqe import VqeConfig, VqeResult, vqe_minimize

__all__ = ["SolverConfig", "EmbeddedSolution", "solve_embedded"]


@dataclass(frozen=True)
class SolverConfig:
    kind: str = "exact"                     # "exact" | "vqe"
    mapping: str = "parity"                 # "jw" | "parity"
    reduce_two_qubits: bool = True
    vqe: VqeConfig = field(default_factory=VqeConfig)

    def __post_init__(self):
        if self.kind not in ("exact", "vqe"):
            raise ValueError(f"unknown solver {self.kind!r}")
        if self.reduce_two_qubits and self.mapping != "parity":
            raise ValueError("two-qubit reduction applies to the parity mapping")


@dataclass
class EmbeddedSolution:
    energy: float                        # total energy (offset included)
    state: np.ndarray
    mapping: MappingConfig
    d1: DensityMatrix
    d2: TwoParticleDensityMatrix
    n_qubits: int
    vqe_result: VqeResult | None = None
    exact_result: ExactResult | None = None


def mapping_for(ham: EmbeddedHamiltonian, solver: SolverConfig) -> MappingConfig:
    as_ = ham.active_space
    return MappingConfig(
        scheme=solver.mapping,
        n_modes=2 * ham.n_active_orbitals,
        reduce_two_qubits=solver.reduce_two_qubits,
        n_alpha=as_.n_active_alpha,
        n_beta=as_.n_active_beta,
    )


def solve_embedded(
    ham: EmbeddedHamiltonian,
    solver: SolverConfig = SolverConfig(),
    extract_rdm: bool = True,
) -> EmbeddedSolution:
    as_ = ham.active_space
    cfg = mapping_for(ham, solver)
    qop = map_operator(to_fermion_operator(ham), cfg)

    vqe_res = None
    exact_res = None
    basis = None
    if solver.kind == "exact":
        basis = sector_basis(cfg, as_.n_active_alpha, as_.n_active_beta)
        exact_res = exact_ground_state(qop, sector=basis)
        energy, state = exact_res.energy, exact_res.state
    else:
        ansatz = prepare_uccsd(ham.n_active_orbitals, cfg)
        vqe_res = vqe_minimize(qop, ansatz, solver.vqe)
        energy, state = vqe_res.energy, vqe_res.state

    d1 = d2 = None
    if extract_rdm:
        if ham.spin_resolved:
            d1, d2 = extract_rdms_unrestricted(
                state, ham.n_active_orbitals, cfg, sector=basis
            )
        else:
            d1, d2 = extract_rdms(state, ham.n_active_orbitals, cfg, sector=basis)
    return EmbeddedSolution(
        energy=energy,
        state=state,
        mapping=cfg,
        d1=d1,
        d2=d2,
        n_qubits=cfg.n_qubits,
        vqe_result=vqe_res,
        exact_result=exact_res,
    )
