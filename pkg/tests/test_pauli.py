import numpy as np
import pytest

from asqem.pauli import PauliOperator

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = {"I": I2, "X": X, "Y": Y, "Z": Z}


def dense_from_label(label, coeff=1.0):
    """Kronecker oracle: qubit 0 = leftmost label char = least-significant bit."""
    mat = np.array([[coeff]], dtype=complex)
    for ch in label:
        mat = np.kron(PAULIS[ch], mat)
    return mat


def random_operator(n_qubits, n_terms, seed, hermitian=False):
    rng = np.random.default_rng(seed)
    op = PauliOperator.zero(n_qubits)
    for _ in range(n_terms):
        label = "".join(rng.choice(list("IXYZ"), size=n_qubits))
        c = complex(rng.standard_normal(), 0 if hermitian else rng.standard_normal())
        op = op + PauliOperator.from_label(label, c)
    return op


@pytest.mark.parametrize("label", ["X", "ZY", "IXYZ", "YYXZ"])
def test_single_string_matrix_matches_kron_oracle(label):
    op = PauliOperator.from_label(label, 0.7 - 0.2j)
    np.testing.assert_allclose(
        op.to_matrix(), dense_from_label(label, 0.7 - 0.2j), atol=1e-14
    )


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_product_matches_dense_product(seed):
    a = random_operator(4, 5, seed)
    b = random_operator(4, 5, seed + 100)
    prod = a * b
    np.testing.assert_allclose(
        prod.to_matrix(), a.to_matrix() @ b.to_matrix(), atol=1e-12
    )


def test_product_six_qubits_dense_oracle():
    a = random_operator(6, 8, seed=7)
    b = random_operator(6, 8, seed=8)
    np.testing.assert_allclose(
        (a * b).to_matrix(), a.to_matrix() @ b.to_matrix(), atol=1e-12
    )


def test_addition_and_scalar():
    a = PauliOperator.from_label("XZ", 1.0)
    b = PauliOperator.from_label("XZ", -1.0) + PauliOperator.from_label("YY", 2.0)
    s = a + b
    assert s.n_terms == 1
    assert s.coefficient(*_mask("YY")) == 2.0
    np.testing.assert_allclose((2.5 * a).to_matrix(), 2.5 * a.to_matrix())


def _mask(label):
    op = PauliOperator.from_label(label)
    ((x, z),) = [k for k in op._terms]
    return x, z


def test_hermitian_operator_has_real_coefficients():
    op = random_operator(3, 6, seed=5, hermitian=True)
    assert op.is_hermitian()
    mat = op.to_matrix()
    np.testing.assert_allclose(mat, mat.conj().T, atol=1e-12)


def test_adjoint_matches_dense_adjoint():
    op = random_operator(3, 6, seed=9)
    np.testing.assert_allclose(
        op.adjoint().to_matrix(), op.to_matrix().conj().T, atol=1e-13
    )


def test_prune_drops_zero_terms():
    op = PauliOperator.from_label("XX", 1e-15) + PauliOperator.from_label("ZZ", 1.0)
    assert op.prune().n_terms == 1


def test_dump_parse_round_trip():
    op = random_operator(4, 6, seed=11)
    back = PauliOperator.parse(op.dump())
    diff = op - back
    assert diff.prune(1e-15).n_terms == 0


def test_dense_limit_enforced():
    op = PauliOperator.identity(20)
    with pytest.raises(ValueError):
        op.to_matrix()


def test_zero_qubit_identity():
    op = PauliOperator.identity(0, 2.5)
    assert op.to_matrix().shape == (1, 1)
    assert op.to_matrix()[0, 0] == 2.5
