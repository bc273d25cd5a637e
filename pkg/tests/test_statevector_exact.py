import numpy as np
import pytest
import scipy.linalg

from asqem.exact import exact_ground_state, operator_matrix
from asqem.fermion import to_fermion_operator
from asqem.hf_embedding import assemble_active_hamiltonian
from asqem.integrals import ActiveSpace
from asqem.fcidump import load_fcidump
from asqem.mappings import MappingConfig, map_operator, sector_basis
from asqem.pauli import PauliOperator
from asqem.statevector import (
    apply_operator,
    apply_pauli_rotation,
    basis_state,
    expectation,
    norm_defect,
)

from oracles.detfci import fci_ground_energy, fci_spectrum
from test_pauli import random_operator


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_apply_operator_matches_dense(seed):
    op = random_operator(5, 7, seed)
    rng = np.random.default_rng(seed + 50)
    state = rng.standard_normal(32) + 1j * rng.standard_normal(32)
    state /= np.linalg.norm(state)
    np.testing.assert_allclose(
        apply_operator(op, state), op.to_matrix() @ state, atol=1e-12
    )


@pytest.mark.parametrize("seed", [3, 4])
def test_expectation_matches_dense(seed):
    op = random_operator(4, 6, seed, hermitian=True)
    rng = np.random.default_rng(seed)
    state = rng.standard_normal(16) + 1j * rng.standard_normal(16)
    state /= np.linalg.norm(state)
    val = expectation(op, state)
    oracle = np.vdot(state, op.to_matrix() @ state)
    assert val == pytest.approx(oracle, abs=1e-12)


def test_rotation_matches_expm_oracle():
    op = PauliOperator.from_label("XYZ")
    ((x, z),) = [k for k in op._terms]
    rng = np.random.default_rng(5)
    state = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    state /= np.linalg.norm(state)
    theta = 0.37
    rotated = apply_pauli_rotation(state, x, z, theta, 3)
    oracle = scipy.linalg.expm(1j * theta * op.to_matrix()) @ state
    np.testing.assert_allclose(rotated, oracle, atol=1e-12)
    assert norm_defect(rotated) < 1e-12


def test_single_qubit_z_ground_state():
    op = PauliOperator.from_label("Z")
    res = exact_ground_state(op)
    assert res.energy == pytest.approx(-1.0, abs=1e-12)
    np.testing.assert_allclose(np.abs(res.state), basis_state(1, 1).real)
    assert not res.degenerate


def test_identity_flagged_degenerate():
    res = exact_ground_state(PauliOperator.identity(2, 3.0))
    assert res.energy == pytest.approx(3.0)
    assert res.degenerate


def test_zero_qubit_scalar():
    res = exact_ground_state(PauliOperator.identity(0, -2.5))
    assert res.energy == -2.5


@pytest.mark.parametrize("seed", [0, 5])
def test_sparse_path_matches_dense_spectrum(seed):
    op = random_operator(6, 10, seed, hermitian=True)
    dense = np.sort(np.linalg.eigvalsh(op.to_matrix()))
    mat = operator_matrix(op)
    sparse_spec = np.sort(np.linalg.eigvalsh(mat.toarray()))
    np.testing.assert_allclose(sparse_spec, dense, atol=1e-10)


def h2_system():
    return load_fcidump("tests/fixtures/h2_sto3g/fcidump")


def test_h2_full_space_matches_determinant_fci():
    sys_ = h2_system()
    as_ = ActiveSpace.from_counts(2, 2, 2, 2)
    ham = assemble_active_hamiltonian(sys_, as_)
    fop = to_fermion_operator(ham)
    cfg = MappingConfig("jw", 4)
    qop = map_operator(fop, cfg)
    basis = sector_basis(cfg, 1, 1)
    res = exact_ground_state(qop, sector=basis)
    oracle = fci_ground_energy(
        ham.h_eff, ham.g_active.array, 1, 1, e_offset=ham.e_offset
    )
    assert res.energy == pytest.approx(oracle, abs=1e-10)
    # global ground state lies in the same sector for H2
    res_global = exact_ground_state(qop)
    assert res_global.energy == pytest.approx(oracle, abs=1e-10)


def test_h2_parity_reduced_sector_solve():
    sys_ = h2_system()
    as_ = ActiveSpace.from_counts(2, 2, 2, 2)
    ham = assemble_active_hamiltonian(sys_, as_)
    fop = to_fermion_operator(ham)
    cfg = MappingConfig("parity", 4, True, 1, 1)
    qop = map_operator(fop, cfg)
    assert qop.n_qubits == 2
    basis = sector_basis(cfg, 1, 1)
    res = exact_ground_state(qop, sector=basis)
    oracle = fci_ground_energy(
        ham.h_eff, ham.g_active.array, 1, 1, e_offset=ham.e_offset
    )
    assert res.energy == pytest.approx(oracle, abs=1e-10)


def test_sector_restriction_matches_sector_fci_spectrum():
    # the restricted block reproduces the determinant-space sector exactly
    sys_ = h2_system()
    as_ = ActiveSpace.from_counts(2, 2, 2, 2)
    ham = assemble_active_hamiltonian(sys_, as_)
    fop = to_fermion_operator(ham)
    cfg = MappingConfig("jw", 4)
    basis = sector_basis(cfg, 1, 1)
    qop = map_operator(fop, cfg)
    block = operator_matrix(qop, sector=basis).toarray()
    spec = np.sort(np.linalg.eigvalsh(block))
    oracle = fci_spectrum(ham.h_eff, ham.g_active.array, 1, 1, ham.e_offset)
    np.testing.assert_allclose(spec, oracle, atol=1e-10)


def test_norm_preserved_by_rotations():
    rng = np.random.default_rng(17)
    state = basis_state(4, 3)
    for _ in range(10):
        x = int(rng.integers(0, 16))
        z = int(rng.integers(0, 16))
        state = apply_pauli_rotation(state, x, z, float(rng.standard_normal()), 4)
    assert norm_defect(state) < 1e-10
