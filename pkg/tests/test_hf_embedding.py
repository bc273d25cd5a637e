import numpy as np
import pytest

from asqem.hf_embedding import (
    FockKernel,
    assemble_active_hamiltonian,
    build_inactive_fock,
    build_inactive_fock_unrestricted,
    embedded_energy,
    inactive_energy,
)
from asqem.integrals import (
    ActiveSpace,
    DensityMatrix,
    MolecularSystem,
    OneBodyIntegrals,
    TwoBodyIntegrals,
    TwoParticleDensityMatrix,
)

from oracles.detfci import fci_ground_energy


def make_system(h, g, nelec=2, e_nuc=0.0, n_alpha=None):
    h = np.asarray(h, dtype=float)
    n = h.shape[0]
    na = n_alpha if n_alpha is not None else nelec // 2
    return MolecularSystem(
        n_orbitals=n,
        n_electrons=nelec,
        n_alpha=na,
        n_beta=nelec - na,
        e_nuclear=e_nuc,
        one_body=OneBodyIntegrals(h),
        two_body=TwoBodyIntegrals(g),
    )


def random_molecular_system(n, seed, nelec=None, e_nuc=None):
    rng = np.random.default_rng(seed)
    h = rng.standard_normal((n, n))
    h = 0.5 * (h + h.T)
    g = rng.standard_normal((n, n, n, n)) * 0.2
    nelec = nelec if nelec is not None else (n // 2) * 2
    e_nuc = e_nuc if e_nuc is not None else float(rng.standard_normal())
    return make_system(h, g, nelec=nelec, e_nuc=e_nuc)


def toy_two_orbital_system():
    h = np.diag([-1.0, -0.5])
    g = np.zeros((2, 2, 2, 2))
    g[0, 0, 0, 0] = 0.5
    for t in [(0, 0, 1, 1), (1, 1, 0, 0)]:
        g[t] = 0.25
    return make_system(h, g)


def fock_triple_loop(h, g, inactive):
    """Direct evaluation of F_I[p,q] = h + sum_i (2(ii|pq) - (iq|pi))."""
    n = h.shape[0]
    f = h.copy()
    for p in range(n):
        for q in range(n):
            for i in inactive:
                f[p, q] += 2.0 * g[i, i, p, q] - g[i, q, p, i]
    return f


def test_empty_inactive_gives_bare_h():
    sys_ = random_molecular_system(3, seed=1)
    as_ = ActiveSpace.from_counts(3, 2, 2, 3)
    assert as_.inactive == ()
    f = build_inactive_fock(sys_, as_)
    np.testing.assert_array_equal(f.matrix, sys_.one_body.array)
    assert inactive_energy(sys_, as_, f) == 0.0
    ham = assemble_active_hamiltonian(sys_, as_)
    np.testing.assert_array_equal(ham.h_eff, sys_.one_body.array)
    assert ham.e_offset == sys_.e_nuclear


def test_toy_fock_element():
    sys_ = toy_two_orbital_system()
    as_ = ActiveSpace((0,), (1,), (), 0, 0)
    f = build_inactive_fock(sys_, as_)
    oracle = fock_triple_loop(sys_.one_body.array, sys_.two_body.array, [0])
    np.testing.assert_allclose(f.matrix, oracle, atol=1e-14)
    assert f.matrix[1, 1] == pytest.approx(0.0, abs=1e-14)


def test_toy_inactive_energy():
    sys_ = toy_two_orbital_system()
    as_ = ActiveSpace((0,), (1,), (), 0, 0)
    f = build_inactive_fock(sys_, as_)
    # oracle: E_I = 2 h_00 + 2 g(0000) - g(0000)
    assert inactive_energy(sys_, as_, f) == pytest.approx(-1.5, abs=1e-14)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_fock_matches_triple_loop_oracle(seed):
    sys_ = random_molecular_system(5, seed=seed, nelec=4)
    as_ = ActiveSpace.from_counts(5, 4, 2, 2)
    f = build_inactive_fock(sys_, as_)
    oracle = fock_triple_loop(
        sys_.one_body.array, sys_.two_body.array, as_.inactive
    )
    np.testing.assert_allclose(f.matrix, oracle, atol=1e-13)
    defect = np.max(np.abs(f.matrix - f.matrix.T))
    assert defect < 1e-12


def test_inactive_energy_density_contraction_identity():
    # E_I from the diagonal sum equals (1/2) sum_ij (h+F)_ij D^I_ij exactly
    sys_ = random_molecular_system(6, seed=3, nelec=6)
    as_ = ActiveSpace.from_counts(6, 6, 2, 3)
    f = build_inactive_fock(sys_, as_)
    e_i = inactive_energy(sys_, as_, f)
    d_i = np.zeros((6, 6))
    for i in as_.inactive:
        d_i[i, i] = 2.0
    via_density = 0.5 * np.sum((sys_.one_body.array + f.matrix) * d_i)
    assert e_i == pytest.approx(via_density, abs=1e-12)


def test_unrestricted_matches_restricted_closed_shell():
    sys_ = random_molecular_system(5, seed=4, nelec=4)
    as_ = ActiveSpace.from_counts(5, 4, 2, 3)
    f = build_inactive_fock(sys_, as_)
    fa, fb = build_inactive_fock_unrestricted(sys_, as_)
    np.testing.assert_allclose(fa.matrix, f.matrix, atol=1e-12)
    np.testing.assert_allclose(fb.matrix, f.matrix, atol=1e-12)
    e_r = inactive_energy(sys_, as_, f)
    e_u = inactive_energy(sys_, as_, (fa, fb))
    assert e_u == pytest.approx(e_r, abs=1e-12)


def test_long_range_kernel_requires_lr_integrals():
    sys_ = random_molecular_system(3, seed=5)
    as_ = ActiveSpace.from_counts(3, 2, 2, 2)
    with pytest.raises(ValueError):
        build_inactive_fock(sys_, as_, FockKernel.LONG_RANGE)


def test_long_range_kernel_uses_lr_tensor():
    sys_ = random_molecular_system(3, seed=6)
    rng = np.random.default_rng(7)
    g_lr = TwoBodyIntegrals(rng.standard_normal((3, 3, 3, 3)) * 0.1)
    sys_lr = sys_.with_lr(g_lr, mu=0.5)
    as_ = ActiveSpace((0,), (1, 2), (), 0, 0)
    f = build_inactive_fock(sys_lr, as_, FockKernel.LONG_RANGE)
    oracle = fock_triple_loop(sys_.one_body.array, g_lr.array, [0])
    np.testing.assert_allclose(f.matrix, oracle, atol=1e-13)


def test_empty_active_space_rejected():
    sys_ = random_molecular_system(2, seed=8)
    as_ = ActiveSpace((0, 1), (), (), 0, 0)
    with pytest.raises(ValueError):
        assemble_active_hamiltonian(sys_, as_)


def test_embedded_energy_zero_rdms_returns_offset():
    sys_ = random_molecular_system(4, seed=9, nelec=4)
    as_ = ActiveSpace.from_counts(4, 4, 2, 2)
    ham = assemble_active_hamiltonian(sys_, as_)
    nact = len(as_.active)
    d1 = DensityMatrix(matrix=np.zeros((nact, nact)))
    d2 = TwoParticleDensityMatrix(np.zeros((nact,) * 4))
    assert embedded_energy(ham, d1, d2) == ham.e_offset


def determinant_energy(sys_, occupied):
    """Closed-shell determinant energy directly from the raw integrals."""
    h = sys_.one_body.array
    g = sys_.two_body.array
    e = sys_.e_nuclear
    for j in occupied:
        e += 2.0 * h[j, j]
        for k in occupied:
            e += 2.0 * g[j, j, k, k] - g[j, k, k, j]
    return e


def test_embedded_determinant_energy_identity():
    # HF determinant of the active space: embedded expression equals the
    # direct determinant energy computed from the raw integrals.
    sys_ = random_molecular_system(5, seed=10, nelec=6)
    as_ = ActiveSpace.from_counts(5, 6, 2, 3)
    ham = assemble_active_hamiltonian(sys_, as_)
    nact = len(as_.active)
    n_occ_act = as_.n_active_electrons // 2
    d1 = np.zeros((nact, nact))
    d1[:n_occ_act, :n_occ_act] = 2.0 * np.eye(n_occ_act)
    d2 = np.einsum("uv,xy->uvxy", d1, d1) - 0.5 * np.einsum("uy,xv->uvxy", d1, d1)
    e_emb = embedded_energy(
        ham, DensityMatrix(matrix=d1), TwoParticleDensityMatrix(d2)
    )
    occupied = list(as_.inactive) + list(as_.active[:n_occ_act])
    assert e_emb == pytest.approx(determinant_energy(sys_, occupied), abs=1e-10)


def test_full_active_space_reproduces_raw_fci():
    # embedding with AS = all orbitals collapses to the raw problem
    sys_ = random_molecular_system(3, seed=12, nelec=2, e_nuc=0.37)
    as_ = ActiveSpace.from_counts(3, 2, 2, 3)
    ham = assemble_active_hamiltonian(sys_, as_)
    e_emb = fci_ground_energy(
        ham.h_eff, ham.g_active.array, as_.n_active_alpha, as_.n_active_beta,
        e_offset=ham.e_offset,
    )
    e_raw = fci_ground_energy(
        sys_.one_body.array, sys_.two_body.array, 1, 1, e_offset=sys_.e_nuclear
    )
    assert e_emb == pytest.approx(e_raw, abs=1e-10)


def test_embedded_spectrum_invariant_under_active_rotation():
    # rotating the active orbitals consistently leaves the spectrum unchanged
    sys_ = random_molecular_system(4, seed=13, nelec=4)
    as_ = ActiveSpace.from_counts(4, 4, 2, 3)
    ham = assemble_active_hamiltonian(sys_, as_)
    rng = np.random.default_rng(14)
    q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    h_rot = q.T @ ham.h_eff @ q
    g_rot = np.einsum(
        "pi,qj,rk,sl,pqrs->ijkl", q, q, q, q, ham.g_active.array, optimize=True
    )
    e0 = fci_ground_energy(ham.h_eff, ham.g_active.array, 1, 1)
    e1 = fci_ground_energy(h_rot, g_rot, 1, 1)
    assert e1 == pytest.approx(e0, abs=1e-10)
