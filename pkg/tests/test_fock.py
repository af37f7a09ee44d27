import numpy as np
import pytest

from timeflow import fock
from timeflow.errors import (
    BasisMismatchError,
    NormalizationError,
    TruncationError,
    ValidationError,
)


def test_basis_rejects_small_dim():
    with pytest.raises(ValidationError):
        fock.FockBasis(1)


def test_ladder_dim2_single_entry():
    a, _, _ = fock.ladder_operators(fock.FockBasis(2))
    expected = np.zeros((2, 2))
    expected[0, 1] = 1.0
    assert np.array_equal(a.matrix, expected)


def test_number_operator_diagonal():
    _, _, n = fock.ladder_operators(fock.FockBasis(4))
    assert np.allclose(n.matrix, np.diag([0, 1, 2, 3]))


@pytest.mark.parametrize("dim", [4, 8, 32])
def test_truncated_commutator_defect(dim):
    # [a, a+] = I - dim * |dim-1><dim-1| in the truncated space
    a, adag, _ = fock.ladder_operators(fock.FockBasis(dim))
    c = fock.commutator(a, adag).matrix
    expected = np.eye(dim)
    expected[dim - 1, dim - 1] = 1.0 - dim
    assert np.max(np.abs(c - expected)) < 1e-12


def test_hamiltonian_levels():
    H = fock.oscillator_hamiltonian(fock.FockBasis(3), 1.0)
    assert np.allclose(np.diag(H.matrix), [0.5, 1.5, 2.5])
    assert H.hermitian


def test_hamiltonian_ladder_commutator_below_edge():
    basis = fock.FockBasis(16)
    a, _, _ = fock.ladder_operators(basis)
    H = fock.oscillator_hamiltonian(basis, 2.0)
    resid = fock.commutator(H, a).matrix + 2.0 * a.matrix
    assert np.max(np.abs(resid[:14, :14])) < 1e-12


def test_hamiltonian_rejects_nonpositive_omega():
    with pytest.raises(ValidationError):
        fock.oscillator_hamiltonian(fock.FockBasis(3), 0.0)


def test_commutator_antisymmetry_and_diagonal():
    basis = fock.FockBasis(8)
    a, adag, n = fock.ladder_operators(basis)
    H = fock.oscillator_hamiltonian(basis, 1.0)
    assert np.max(np.abs(fock.commutator(a, a).matrix)) == 0.0
    assert np.max(np.abs(fock.commutator(H, n).matrix)) == 0.0
    resid = fock.commutator(H, adag).matrix - adag.matrix
    assert np.max(np.abs(resid[:6, :6])) < 1e-12


def test_commutator_basis_mismatch():
    a1, _, _ = fock.ladder_operators(fock.FockBasis(4))
    a2, _, _ = fock.ladder_operators(fock.FockBasis(5))
    with pytest.raises(BasisMismatchError):
        fock.commutator(a1, a2)


def test_expectation_vacuum_and_eigenstate():
    basis = fock.FockBasis(8)
    _, _, n = fock.ladder_operators(basis)
    H = fock.oscillator_hamiltonian(basis, 1.0)
    vac = np.zeros(8, dtype=complex)
    vac[0] = 1.0
    assert fock.expectation(n, fock.StateVector(basis, vac)) == 0.0
    three = np.zeros(8, dtype=complex)
    three[3] = 1.0
    assert fock.expectation(H, fock.StateVector(basis, three)) == pytest.approx(3.5)


def test_expectation_coherent_mean_occupation():
    basis = fock.FockBasis(32)
    _, _, n = fock.ladder_operators(basis)
    psi = fock.coherent_state(2.0, basis)
    assert fock.expectation(n, psi).real == pytest.approx(4.0, abs=1e-8)


def test_expectation_rejects_unnormalized():
    basis = fock.FockBasis(4)
    _, _, n = fock.ladder_operators(basis)
    psi = fock.StateVector(basis, [0.5, 0, 0, 0])
    with pytest.raises(NormalizationError):
        fock.expectation(n, psi)


def test_coherent_vacuum():
    psi = fock.coherent_state(0.0, fock.FockBasis(4))
    assert psi.amplitudes[0] == 1.0
    assert np.all(psi.amplitudes[1:] == 0.0)


def test_coherent_eigenvalue_property():
    basis = fock.FockBasis(32)
    a, _, _ = fock.ladder_operators(basis)
    psi = fock.coherent_state(2.0, basis)
    assert abs(fock.expectation(a, psi) - 2.0) < 1e-8


def test_coherent_truncation_guard():
    with pytest.raises(TruncationError, match="need dim"):
        fock.coherent_state(3.0, fock.FockBasis(12))


def test_evolve_identity_at_zero():
    basis = fock.FockBasis(16)
    H = fock.oscillator_hamiltonian(basis, 1.0)
    psi = fock.coherent_state(1.0, basis)
    out = fock.evolve(H, psi, 0.0)
    assert np.allclose(out.amplitudes, psi.amplitudes)


def test_evolve_eigenstate_phase():
    basis = fock.FockBasis(8)
    H = fock.oscillator_hamiltonian(basis, 1.0)
    amp = np.zeros(8, dtype=complex)
    amp[2] = 1.0
    out = fock.evolve(H, fock.StateVector(basis, amp), 0.7)
    assert out.amplitudes[2] == pytest.approx(np.exp(-1j * 2.5 * 0.7))


def test_evolve_coherent_rotation():
    # alpha(t) = alpha * exp(-i omega t); quarter period sends 2 -> -2i
    basis = fock.FockBasis(32)
    a, _, _ = fock.ladder_operators(basis)
    H = fock.oscillator_hamiltonian(basis, 1.0)
    out = fock.evolve(H, fock.coherent_state(2.0, basis), np.pi / 2)
    assert abs(fock.expectation(a, out) - (-2j)) < 1e-8


def test_evolve_requires_hermitian():
    basis = fock.FockBasis(16)
    a, _, _ = fock.ladder_operators(basis)
    psi = fock.coherent_state(0.5, basis)
    with pytest.raises(ValidationError):
        fock.evolve(a, psi, 1.0)


def test_evolve_unitarity_and_group_law():
    rng = np.random.default_rng(42)
    basis = fock.FockBasis(12)
    H = fock.oscillator_hamiltonian(basis, 1.3)
    for _ in range(10):
        amp = rng.normal(size=12) + 1j * rng.normal(size=12)
        psi = fock.StateVector(basis, amp / np.linalg.norm(amp))
        t1, t2 = rng.uniform(-5, 5, 2)
        once = fock.evolve(H, psi, t1 + t2)
        twice = fock.evolve(H, fock.evolve(H, psi, t1), t2)
        assert abs(twice.norm - 1.0) < 1e-12
        assert np.max(np.abs(once.amplitudes - twice.amplitudes)) < 1e-10


def test_hermitian_expectations_real():
    rng = np.random.default_rng(7)
    basis = fock.FockBasis(10)
    _, _, n = fock.ladder_operators(basis)
    for _ in range(10):
        amp = rng.normal(size=10) + 1j * rng.normal(size=10)
        psi = fock.StateVector(basis, amp / np.linalg.norm(amp))
        assert abs(fock.expectation(n, psi).imag) < 1e-12


def test_hermitian_tag_is_checked():
    basis = fock.FockBasis(3)
    with pytest.raises(ValidationError):
        fock.OperatorMatrix(basis, np.triu(np.ones((3, 3))), hermitian=True)
