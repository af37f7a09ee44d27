"""Truncated Fock-space linear algebra.

Ladder operators, the oscillator Hamiltonian H = w(N + 1/2), coherent
states with an explicit truncation guard, and exact unitary evolution by
eigendecomposition.  Units hbar = 1 throughout; the oscillator is
normalized so that [a, a+] = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import (
    BasisMismatchError,
    NormalizationError,
    TruncationError,
    ValidationError,
)

HERMITIAN_TOL = 1e-14
NORM_TOL = 1e-9
COHERENT_TAIL_BOUND = 1e-10


@dataclass(frozen=True)
class FockBasis:
    """Number-state basis |0>, ..., |dim-1> of a single oscillator mode."""

    dim: int

    def __post_init__(self):
        if not isinstance(self.dim, (int, np.integer)) or self.dim < 2:
            raise ValidationError(f"Fock basis needs integer dim >= 2, got {self.dim!r}")


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex amplitude vector over the number states of ``basis``."""

    basis: object
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.array(self.amplitudes, dtype=complex)
        if amp.shape != (self.basis.dim,):
            raise ValidationError(
                f"amplitude vector of length {amp.shape} does not match dim {self.basis.dim}"
            )
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        n = self.norm
        if n == 0.0:
            raise ValidationError("cannot normalize the zero vector")
        return StateVector(self.basis, self.amplitudes / n)


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Dense square matrix tagged with its basis.

    ``hermitian=True`` asserts entry-wise conjugate symmetry within 1e-14
    and is checked at construction.
    """

    basis: object
    matrix: np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        d = self.basis.dim
        if m.shape != (d, d):
            raise ValidationError(f"matrix shape {m.shape} does not match dim {d}")
        if self.hermitian and np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise ValidationError("operator tagged Hermitian is not conjugate-symmetric")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def adjoint(self) -> "OperatorMatrix":
        return OperatorMatrix(self.basis, self.matrix.conj().T, hermitian=self.hermitian)

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        _check_same_basis(self.basis, other.basis)
        return OperatorMatrix(self.basis, self.matrix @ other.matrix)


def _check_same_basis(b1, b2):
    if b1 != b2:
        raise BasisMismatchError(f"basis mismatch: {b1!r} vs {b2!r}")


def ladder_operators(basis: FockBasis):
    """Return (a, a+, N) on the truncated basis.

    a|n> = sqrt(n)|n-1>, a+ is the matrix adjoint, N = a+ a.  The
    truncation puts the single commutation defect of [a, a+] at the top
    level dim-1.
    """
    d = basis.dim
    a = np.diag(np.sqrt(np.arange(1, d, dtype=float)), k=1).astype(complex)
    a_op = OperatorMatrix(basis, a)
    adag_op = a_op.adjoint()
    n_op = OperatorMatrix(basis, a.conj().T @ a, hermitian=True)
    return a_op, adag_op, n_op


def oscillator_hamiltonian(basis: FockBasis, omega: float) -> OperatorMatrix:
    """Diagonal oscillator Hamiltonian with levels omega * (n + 1/2)."""
    if omega <= 0:
        raise ValidationError(f"omega must be positive, got {omega}")
    diag = omega * (np.arange(basis.dim) + 0.5)
    return OperatorMatrix(basis, np.diag(diag.astype(complex)), hermitian=True)


def commutator(A: OperatorMatrix, B: OperatorMatrix) -> OperatorMatrix:
    _check_same_basis(A.basis, B.basis)
    return OperatorMatrix(A.basis, A.matrix @ B.matrix - B.matrix @ A.matrix)


def expectation(A: OperatorMatrix, psi: StateVector) -> complex:
    """<psi|A|psi> for a normalized state on the same basis."""
    _check_same_basis(A.basis, psi.basis)
    if abs(psi.norm - 1.0) > NORM_TOL:
        raise NormalizationError(f"state norm {psi.norm} deviates from 1 beyond {NORM_TOL}")
    return complex(np.vdot(psi.amplitudes, A.matrix @ psi.amplitudes))


def coherent_state(alpha: complex, basis: FockBasis) -> StateVector:
    """Truncated coherent state with amplitudes ~ alpha^n / sqrt(n!).

    Rejects truncations whose Poisson tail beyond dim-1 at mean |alpha|^2
    exceeds 1e-10, reporting the minimum dim that would be accepted.
    """
    mean = abs(alpha) ** 2
    tail = float(stats.poisson.sf(basis.dim - 1, mean)) if mean > 0 else 0.0
    if tail >= COHERENT_TAIL_BOUND:
        required = int(stats.poisson.isf(COHERENT_TAIL_BOUND, mean)) + 2
        raise TruncationError(
            f"dim {basis.dim} truncates |alpha|^2 = {mean:g} with tail weight "
            f"{tail:.3e} >= {COHERENT_TAIL_BOUND:g}; need dim >= {required}"
        )
    amp = np.empty(basis.dim, dtype=complex)
    amp[0] = 1.0
    for n in range(1, basis.dim):
        amp[n] = amp[n - 1] * alpha / np.sqrt(n)
    amp /= np.linalg.norm(amp)
    return StateVector(basis, amp)


def evolve(H: OperatorMatrix, psi: StateVector, t: float) -> StateVector:
    """Apply exp(-i H t) by eigendecomposition (diagonal fast path)."""
    _check_same_basis(H.basis, psi.basis)
    if not H.hermitian:
        raise ValidationError("evolution requires a Hermitian-tagged Hamiltonian")
    m = H.matrix
    diag = np.diag(m)
    if np.count_nonzero(m - np.diag(diag)) == 0:
        amp = np.exp(-1j * diag.real * t) * psi.amplitudes
    else:
        w, v = np.linalg.eigh(m)
        amp = v @ (np.exp(-1j * w * t) * (v.conj().T @ psi.amplitudes))
    return StateVector(psi.basis, amp)
