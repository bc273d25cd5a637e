"""Range-separated DFT embedding: short-range mean-field pieces, the
iteration-energy assembly, the self-consistent loop, and the mu sweep.

Each iteration freezes the short-range potentials at the current density
(linear model), builds the effective long-range active Hamiltonian

    h_eff[u,v] = F_I_lr[u,v] + j_I_sr[u,v] + j_A_sr[u,v] + v_xc_sr[u,v]

with the long-range two-electron block, and hands it to the wavefunction
solver.  The scalar offset collects the constant inactive long-range
energy, nuclear repulsion, the short-range exchange-correlation and
inactive Coulomb energies, and the double-counting corrections contracted
with the current active density, so the solver's eigenvalue is already the
total energy of the iteration.  The loop repeats, feeding the relaxed
active density back, until the total energy is stationary.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .fcidump import attach_lr_integrals
from .gridfile import GridData
from .hf_embedding import (
    EmbeddedHamiltonian,
    FockKernel,
    FockMatrix,
    build_inactive_fock,
    inactive_energy,
)
from .integrals import ActiveSpace, MolecularSystem, TwoBodyIntegrals
from .solve import EmbeddedSolution, SolverConfig, solve_embedded
from .xcfunc import SrLdaErf

__all__ = [
    "DftStep",
    "EmbeddingState",
    "EmbeddingHistory",
    "SweepPoint",
    "density_on_grid",
    "sr_coulomb_matrix",
    "sr_xc_terms",
    "assemble_step",
    "step_energy",
    "run_dft_embedding",
    "sweep_mu",
]

DENSITY_CLIP_TOL = -1e-10
DEFAULT_ENERGY_TOL = 1e-10
DEFAULT_MAX_ITER = 50


def density_on_grid(d_matrix: np.ndarray, grid: GridData) -> np.ndarray:
    """rho(r_k) = sum_pq D_pq phi_p(r_k) phi_q(r_k), clipped at zero."""
    phi = grid.mo_values
    if d_matrix.shape != (phi.shape[1], phi.shape[1]):
        raise ValueError("density matrix does not match the grid's orbital count")
    rho = np.einsum("kp,pq,kq->k", phi, d_matrix, phi, optimize=True)
    low = rho.min(initial=0.0)
    if low < DENSITY_CLIP_TOL:
        warnings.warn(f"density reached {low:.3e}; clipping at zero")
    return np.maximum(rho, 0.0)


def sr_coulomb_matrix(system: MolecularSystem, d_matrix: np.ndarray) -> np.ndarray:
    """j_sr[p,q] = sum_rs g_sr[p,q,r,s] D[r,s] over the full orbital set."""
    g_sr = system.two_body_sr().array
    if d_matrix.shape != g_sr.shape[:2]:
        raise ValueError("density matrix does not match the orbital count")
    return np.einsum("pqrs,rs->pq", g_sr, d_matrix, optimize=True)


def sr_xc_terms(functional, grid: GridData, rho: np.ndarray):
    """(E_xc_sr, v_xc matrix) by quadrature over the grid."""
    e_dens, v_vals = functional.evaluate(rho)
    if not (np.all(np.isfinite(e_dens)) and np.all(np.isfinite(v_vals))):
        raise FloatingPointError("functional produced non-finite values")
    e_xc = float(grid.weights @ e_dens)
    wphi = grid.mo_values * (grid.weights * v_vals)[:, None]
    v_mat = grid.mo_values.T @ wphi
    return e_xc, 0.5 * (v_mat + v_mat.T)


@dataclass(frozen=True)
class DftStep:
    """Operators of one linear-model iteration, plus its embedded problem."""

    hamiltonian: EmbeddedHamiltonian
    h_eff_active: np.ndarray
    e_constant: float            # inactive LR energy + nuclear repulsion
    e_sr_scalar: float           # xc + inactive SR Coulomb - double counting
    e_xc_sr: float
    j_i_sr: np.ndarray
    j_a_sr: np.ndarray
    v_xc_sr: np.ndarray


def _inactive_density(n: int, inactive) -> np.ndarray:
    d = np.zeros((n, n))
    for i in inactive:
        d[i, i] = 2.0
    return d


def assemble_step(
    system: MolecularSystem,
    active_space: ActiveSpace,
    fock_lr: FockMatrix,
    e_constant: float,
    d_active: np.ndarray,
    e_xc_sr: float,
    v_xc_sr: np.ndarray,
) -> DftStep:
    """Build the iteration's effective Hamiltonian from frozen SR pieces.

    ``d_active`` is the current active-block density (active x active);
    ``e_xc_sr``/``v_xc_sr`` are the functional pieces already evaluated at
    the current full density.
    """
    n = system.n_orbitals
    act = np.asarray(active_space.active)
    d_i = _inactive_density(n, active_space.inactive)
    d_a_full = np.zeros((n, n))
    d_a_full[np.ix_(act, act)] = d_active

    j_i_sr = sr_coulomb_matrix(system, d_i)
    j_a_sr = sr_coulomb_matrix(system, d_a_full)

    e_coul_i = 0.5 * float(np.sum(j_i_sr * d_i))
    dc = ((0.5 * j_a_sr + v_xc_sr)[np.ix_(act, act)] * d_active).sum()
    e_sr_scalar = e_xc_sr + e_coul_i - float(dc)

    h_eff = (fock_lr.matrix + j_i_sr + j_a_sr + v_xc_sr)[np.ix_(act, act)]
    g_lr_act = TwoBodyIntegrals(
        system.two_body_lr.array[np.ix_(act, act, act, act)], symmetrize=False
    )
    ham = EmbeddedHamiltonian(
        h_eff=h_eff,
        g_active=g_lr_act,
        e_offset=e_constant + e_sr_scalar,
        active_space=active_space,
    )
    return DftStep(
        hamiltonian=ham,
        h_eff_active=h_eff,
        e_constant=e_constant,
        e_sr_scalar=e_sr_scalar,
        e_xc_sr=e_xc_sr,
        j_i_sr=j_i_sr,
        j_a_sr=j_a_sr,
        v_xc_sr=v_xc_sr,
    )


def step_energy(step: DftStep, d1_next: np.ndarray, d2_next: np.ndarray) -> float:
    """Total energy of the iteration for updated active RDMs."""
    e = step.hamiltonian.e_offset
    e += float(np.sum(step.h_eff_active * d1_next))
    e += 0.5 * float(np.einsum("uvxy,uvxy->", step.hamiltonian.g_active.array, d2_next))
    return e


@dataclass(frozen=True)
class EmbeddingState:
    iteration: int
    energy: float
    delta_e: float
    d_active: np.ndarray          # D^A after this iteration's solve
    trace_d_active: float
    converged: bool


@dataclass
class EmbeddingHistory:
    states: list[EmbeddingState] = field(default_factory=list)
    converged: bool = False
    solution: EmbeddedSolution | None = None
    mu: float | None = None

    @property
    def final_energy(self) -> float:
        return self.states[-1].energy

    @property
    def n_iterations(self) -> int:
        return len(self.states)

    def write_csv(self, path: str | Path) -> None:
        import csv

        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["iteration", "e_total", "abs_delta_e", "trace_d_active"])
            for s in self.states:
                w.writerow([s.iteration, repr(s.energy), repr(abs(s.delta_e)),
                            repr(s.trace_d_active)])


def _initial_active_density(
    system: MolecularSystem, active_space: ActiveSpace,
    occupations: np.ndarray | None,
) -> np.ndarray:
    n = system.n_orbitals
    if occupations is None:
        if system.mo_occupations is not None:
            occupations = np.asarray(system.mo_occupations, dtype=float)
        else:
            occupations = np.zeros(n)
            occupations[: system.n_electrons // 2] = 2.0
    occupations = np.asarray(occupations, dtype=float)
    if occupations.shape != (n,):
        raise ValueError("occupation vector does not match the orbital count")
    act = np.asarray(active_space.active)
    return np.diag(occupations[act])


def run_dft_embedding(
    system: MolecularSystem,
    active_space: ActiveSpace,
    grid: GridData,
    solver: SolverConfig = SolverConfig(),
    functional=None,
    tol: float = DEFAULT_ENERGY_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    damping: float = 0.0,
    initial_occupations: np.ndarray | None = None,
) -> EmbeddingHistory:
    """Self-consistent range-separated embedding loop.

    Starts from the mean-field occupations, repeats (short-range update,
    long-range solve) until |E_(i+1) - E_(i)| < tol or ``max_iter``.
    """
    if system.two_body_lr is None:
        raise ValueError("DFT embedding needs attached long-range integrals")
    if grid.n_orbitals != system.n_orbitals:
        raise ValueError("grid orbital count does not match the system")
    if active_space.n_active_electrons <= 0:
        raise ValueError("zero-electron active space: nothing to embed")
    if functional is None:
        functional = SrLdaErf(mu=system.mu if system.mu is not None else 0.0)

    n = system.n_orbitals
    act = np.asarray(active_space.active)
    fock_lr = build_inactive_fock(system, active_space, FockKernel.LONG_RANGE)
    e_constant = inactive_energy(system, active_space, fock_lr) + system.e_nuclear
    d_i = _inactive_density(n, active_space.inactive)

    d_active = _initial_active_density(system, active_space, initial_occupations)
    history = EmbeddingHistory(mu=system.mu)
    e_prev = None
    for it in range(max_iter):
        d_full = d_i.copy()
        d_full[np.ix_(act, act)] = d_active
        rho = density_on_grid(d_full, grid)
        e_xc, v_xc = sr_xc_terms(functional, grid, rho)
        step = assemble_step(
            system, active_space, fock_lr, e_constant, d_active, e_xc, v_xc
        )
        sol = solve_embedded(step.hamiltonian, solver)
        energy = sol.energy
        d_new = sol.d1.total
        if damping > 0.0 and it > 0:
            d_new = (1.0 - damping) * d_new + damping * d_active
        delta = energy - e_prev if e_prev is not None else float("inf")
        converged = abs(delta) < tol
        history.states.append(
            EmbeddingState(
                iteration=it,
                energy=energy,
                delta_e=delta,
                d_active=d_new,
                trace_d_active=float(np.trace(d_new)),
                converged=converged,
            )
        )
        history.solution = sol
        if converged:
            history.converged = True
            break
        e_prev = energy
        d_active = d_new
    return history


@dataclass(frozen=True)
class SweepPoint:
    mu: float
    energy: float | None
    n_iterations: int
    converged: bool
    error: str | None = None


def sweep_mu(
    system: MolecularSystem,
    active_space: ActiveSpace,
    sidecars: list[tuple[float, str | Path]],
    grid: GridData,
    solver: SolverConfig = SolverConfig(),
    tol: float = DEFAULT_ENERGY_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    threads: int = 1,
    initial_occupations: np.ndarray | None = None,
) -> list[SweepPoint]:
    """Run the embedding once per (mu, LR sidecar); failures stay isolated."""

    def run_point(item) -> SweepPoint:
        mu, path = item
        try:
            sys_mu = attach_lr_integrals(system, path)
            if sys_mu.mu is not None and abs(sys_mu.mu - mu) > 1e-12:
                raise ValueError(
                    f"sidecar declares MU={sys_mu.mu}, sweep expected {mu}"
                )
            hist = run_dft_embedding(
                sys_mu, active_space, grid, solver,
                tol=tol, max_iter=max_iter,
                initial_occupations=initial_occupations,
            )
            return SweepPoint(
                mu=mu,
                energy=hist.final_energy,
                n_iterations=hist.n_iterations,
                converged=hist.converged,
            )
        except Exception as exc:  # per-point failures recorded, sweep continues
            return SweepPoint(mu=mu, energy=None, n_iterations=0,
                              converged=False, error=str(exc))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(run_point, sidecars))
    return [run_point(item) for item in sidecars]


def write_sweep_csv(points: list[SweepPoint], path: str | Path) -> None:
    import csv

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["mu", "energy", "iterations", "converged", "error"])
        for p in points:
            w.writerow([
                repr(p.mu),
                "" if p.energy is None else repr(p.energy),
                p.n_iterations,
                p.converged,
                p.error or "",
            ])
