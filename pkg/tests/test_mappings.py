import numpy as np
import pytest

from asqem.fermion import FermionOperator, excitation_operator, to_fermion_operator
from asqem.hf_embedding import EmbeddedHamiltonian
from asqem.integrals import ActiveSpace, TwoBodyIntegrals
from asqem.mappings import (
    MappingConfig,
    encode_occupation,
    hartree_fock_occupation,
    map_jordan_wigner,
    map_operator,
    map_parity,
    sector_basis,
)
from asqem.pauli import PauliOperator

from oracles.detfci import fci_spectrum


def number_operator(n_modes, mode):
    op = FermionOperator(n_modes)
    op.add_term(((mode, True), (mode, False)), 1.0)
    return op


def random_hermitian_fermion_op(n_spatial, seed):
    """Random one- and two-body Hamiltonian over block-ordered spin orbitals."""
    rng = np.random.default_rng(seed)
    h = rng.standard_normal((n_spatial, n_spatial))
    h = 0.5 * (h + h.T)
    g = TwoBodyIntegrals(rng.standard_normal((n_spatial,) * 4) * 0.3).array
    as_ = ActiveSpace((), tuple(range(n_spatial)), (), n_spatial, n_spatial // 2)
    ham = EmbeddedHamiltonian(
        h_eff=h,
        g_active=TwoBodyIntegrals(g, symmetrize=False),
        e_offset=float(rng.standard_normal()),
        active_space=as_,
    )
    return to_fermion_operator(ham), h, g, ham.e_offset


def test_jw_number_operator_identity():
    op = map_jordan_wigner(number_operator(1, 0))
    expected = PauliOperator.from_label("I", 0.5) + PauliOperator.from_label("Z", -0.5)
    assert (op - expected).prune(1e-14).n_terms == 0


def test_jw_hopping_identity():
    hop = excitation_operator(2, ((0, True), (1, False))) + excitation_operator(
        2, ((1, True), (0, False))
    )
    op = map_jordan_wigner(hop)
    expected = PauliOperator.from_label("XX", 0.5) + PauliOperator.from_label("YY", 0.5)
    assert (op - expected).prune(1e-14).n_terms == 0


def test_single_orbital_hamiltonian_dense_oracle():
    # h_eff = [[-1]], g(0000) = 0.5: H = -n_a - n_b + 0.5 n_a n_b + offset
    as_ = ActiveSpace((), (0,), (), 2, 1)
    ham = EmbeddedHamiltonian(
        h_eff=np.array([[-1.0]]),
        g_active=TwoBodyIntegrals(np.full((1, 1, 1, 1), 0.5), symmetrize=False),
        e_offset=0.25,
        active_space=as_,
    )
    op = map_jordan_wigner(to_fermion_operator(ham))
    mat = op.to_matrix()
    # dense oracle over occupations |n_a n_b> = |00>,|10>,|01>,|11>
    oracle = np.diag([0.25, -0.75, -0.75, -1.25])
    np.testing.assert_allclose(mat, oracle, atol=1e-13)


def test_zero_hamiltonian_maps_to_offset_identity():
    as_ = ActiveSpace((), (0, 1), (), 2, 1)
    ham = EmbeddedHamiltonian(
        h_eff=np.zeros((2, 2)),
        g_active=TwoBodyIntegrals(np.zeros((2, 2, 2, 2)), symmetrize=False),
        e_offset=1.5,
        active_space=as_,
    )
    op = map_jordan_wigner(to_fermion_operator(ham))
    assert op.n_terms == 1
    assert op.coefficient(0, 0) == 1.5


def full_fock_spectrum(h, g, e_offset):
    """Oracle: union of determinant-FCI spectra over all particle sectors."""
    n = h.shape[0]
    vals = []
    for na in range(n + 1):
        for nb in range(n + 1):
            vals.extend(fci_spectrum(h, g, na, nb, e_offset))
    return np.sort(np.array(vals))


@pytest.mark.parametrize("n_spatial,seed", [(1, 0), (2, 1), (2, 2)])
def test_jw_spectrum_matches_sector_fci_union(n_spatial, seed):
    op, h, g, off = random_hermitian_fermion_op(n_spatial, seed)
    qubit_op = map_jordan_wigner(op)
    assert qubit_op.is_hermitian()
    spec = np.sort(np.linalg.eigvalsh(qubit_op.to_matrix()))
    oracle = full_fock_spectrum(h, g, off)
    np.testing.assert_allclose(spec, oracle, atol=1e-10)


@pytest.mark.parametrize("n_spatial,seed", [(2, 3), (3, 4), (4, 5)])
def test_parity_and_jw_spectra_agree(n_spatial, seed):
    op, _, _, _ = random_hermitian_fermion_op(n_spatial, seed)
    jw = np.sort(np.linalg.eigvalsh(map_jordan_wigner(op).to_matrix()))
    par = np.sort(np.linalg.eigvalsh(map_parity(op).to_matrix()))
    np.testing.assert_allclose(jw, par, atol=1e-10)


def jw_sector_spectrum(op, n_spatial, n_alpha, n_beta):
    cfg = MappingConfig("jw", 2 * n_spatial)
    basis = sector_basis(cfg, n_alpha, n_beta).astype(np.int64)
    mat = map_jordan_wigner(op).to_matrix()
    block = mat[np.ix_(basis, basis)]
    return np.sort(np.linalg.eigvalsh(block))


@pytest.mark.parametrize("n_spatial,na,nb,seed", [(2, 1, 1, 6), (3, 2, 1, 7)])
def test_parity_reduction_preserves_sector_spectrum(n_spatial, na, nb, seed):
    op, _, _, _ = random_hermitian_fermion_op(n_spatial, seed)
    reduced = map_parity(op, reduce_two_qubits=True, n_alpha=na, n_beta=nb)
    assert reduced.n_qubits == 2 * n_spatial - 2
    cfg = MappingConfig("parity", 2 * n_spatial, True, na, nb)
    basis = sector_basis(cfg, na, nb).astype(np.int64)
    mat = reduced.to_matrix()
    block = mat[np.ix_(basis, basis)]
    np.testing.assert_allclose(
        np.sort(np.linalg.eigvalsh(block)),
        jw_sector_spectrum(op, n_spatial, na, nb),
        atol=1e-10,
    )


def test_two_spin_orbitals_reduce_to_scalar():
    # one spatial orbital, declared (1,0) sector: the problem is fully fixed
    op = number_operator(2, 0) * (-0.8)
    reduced = map_parity(op, reduce_two_qubits=True, n_alpha=1, n_beta=0)
    assert reduced.n_qubits == 0
    assert reduced.coefficient(0, 0) == pytest.approx(-0.8)


def test_reduction_requires_sector_declaration():
    op = number_operator(4, 0)
    with pytest.raises(ValueError):
        map_parity(op, reduce_two_qubits=True)


def test_occupation_encoding_consistency():
    # <n_j> on an encoded basis state equals the occupation bit in any mapping
    rng = np.random.default_rng(8)
    n_modes = 6
    for cfg in (
        MappingConfig("jw", n_modes),
        MappingConfig("parity", n_modes),
        MappingConfig("parity", n_modes, True, 2, 1),
    ):
        occ = hartree_fock_occupation(n_modes, 2, 1)
        index = encode_occupation(occ, cfg)
        for mode in range(n_modes):
            n_op = map_operator(number_operator(n_modes, mode), cfg)
            mat = n_op.to_matrix()
            val = mat[index, index].real
            assert val == pytest.approx((occ >> mode) & 1, abs=1e-12)


def test_sector_basis_dimensions():
    cfg = MappingConfig("parity", 10, True, 3, 3)
    basis = sector_basis(cfg, 3, 3)
    assert basis.shape[0] == 100  # C(5,3)^2
    assert basis.dtype == np.uint64
    assert np.all(np.diff(basis.astype(np.int64)) > 0)


def test_hermiticity_preserved_by_both_mappings():
    op, _, _, _ = random_hermitian_fermion_op(3, 11)
    for mapped in (map_jordan_wigner(op), map_parity(op)):
        assert mapped.hermiticity_defect() < 1e-12
