"""Exponential phase operator and its unitary extension.

On the standard truncated Fock space the lowering shift E|n> = |n-1> is
isometric except at the vacuum (E+E - I = -|0><0|).  On a doubled,
cyclically closed two-sided index set the analogous shift is an exact
permutation, hence unitary, and the mirrored block Hamiltonian drives
phase flow with opposite signs in the two halves.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    MixedSupportError,
    UndefinedPhaseError,
    UnsupportedConfigurationError,
    ValidationError,
)
from .fock import (
    FockBasis,
    OperatorMatrix,
    StateVector,
    coherent_state,
    evolve,
)

PHASE_MAGNITUDE_TOL = 1e-12
SUPPORT_TOL = 1e-12


@dataclass(frozen=True)
class DoubledBasis:
    """Two-sided index set -N..N-1 with the non-negative indices forming
    the plus half and the negative ones the minus half.

    ``cyclic=True`` closes the shift by wrapping index -N to N-1; only the
    cyclic form supports an exactly unitary shift at finite dimension.
    """

    half_dim: int
    cyclic: bool = True

    def __post_init__(self):
        if not isinstance(self.half_dim, (int, np.integer)) or self.half_dim < 2:
            raise ValidationError(f"doubled basis needs half_dim >= 2, got {self.half_dim!r}")

    @property
    def dim(self) -> int:
        return 2 * self.half_dim

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.half_dim, self.half_dim)

    def position(self, index: int) -> int:
        """Array position of two-sided index ``index``."""
        if not -self.half_dim <= index < self.half_dim:
            raise ValidationError(f"index {index} outside -{self.half_dim}..{self.half_dim - 1}")
        return index + self.half_dim

    @property
    def plus_mask(self) -> np.ndarray:
        return self.indices >= 0

    @property
    def minus_mask(self) -> np.ndarray:
        return self.indices < 0

    def projector(self, subspace: str) -> OperatorMatrix:
        mask = self.plus_mask if subspace == "plus" else self.minus_mask
        return OperatorMatrix(self, np.diag(mask.astype(complex)), hermitian=True)


@dataclass(frozen=True)
class DefectReport:
    """Where and how strongly E+E deviates from the identity."""

    norm: float
    rank: int
    support: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class PhaseTrajectory:
    times: np.ndarray
    phase_values: np.ndarray  # each in [0, 2*pi)
    subspace_label: str

    def unwrapped(self) -> np.ndarray:
        return np.unwrap(self.phase_values)

    def fit_slope(self) -> float:
        """Least-squares slope of the unwrapped phase versus time."""
        slope, _ = np.polyfit(self.times, self.unwrapped(), 1)
        return float(slope)


def sg_phase_operator(basis: FockBasis) -> OperatorMatrix:
    """One-sided lowering shift E|n> = |n-1>, E|0> = 0."""
    return OperatorMatrix(basis, np.eye(basis.dim, k=1, dtype=complex))


def isometry_defect(E: OperatorMatrix, tol: float = 1e-10) -> DefectReport:
    """Report norm, rank, and support of E+E - I."""
    d = E.matrix.conj().T @ E.matrix - np.eye(E.basis.dim)
    norm = float(np.linalg.norm(d, ord=2))
    rank = int(np.linalg.matrix_rank(d, tol=tol))
    col_norms = np.linalg.norm(d, axis=0)
    support = tuple(int(i) for i in np.nonzero(col_norms > tol)[0])
    return DefectReport(norm=norm, rank=rank, support=support)


def extended_phase_operator(dbasis: DoubledBasis) -> OperatorMatrix:
    """Two-sided shift index n -> n-1 with cyclic wrap -N -> N-1.

    A permutation matrix, hence exactly unitary; it carries the plus-half
    vacuum (index 0) into the minus half (index -1), linking the vacua.
    """
    if not dbasis.cyclic:
        raise UnsupportedConfigurationError(
            "extended phase operator requires a cyclic doubled basis"
        )
    d = dbasis.dim
    m = np.zeros((d, d), dtype=complex)
    for n in dbasis.indices:
        target = n - 1 if n - 1 >= -dbasis.half_dim else dbasis.half_dim - 1
        m[dbasis.position(target), dbasis.position(int(n))] = 1.0
    return OperatorMatrix(dbasis, m)


def extended_hamiltonian(dbasis: DoubledBasis, omega: float) -> OperatorMatrix:
    """Block-diagonal Hamiltonian with mirrored positive ladder spectrum.

    Level omega*(n + 1/2) for n >= 0 and omega*(-n - 1/2) for n < 0; the
    spectrum stays bounded below by omega/2 while the two halves carry
    opposite phase flow.
    """
    if omega <= 0:
        raise ValidationError(f"omega must be positive, got {omega}")
    n = dbasis.indices
    diag = np.where(n >= 0, omega * (n + 0.5), omega * (-n - 0.5))
    return OperatorMatrix(dbasis, np.diag(diag.astype(complex)), hermitian=True)


def phase_expectation(psi: StateVector, E: OperatorMatrix) -> float:
    """arg <psi|E+|psi> mapped to [0, 2*pi).

    With the lowering-shift convention the oscillator advances this value
    as +omega*t on the plus half.  Vanishing <E+> (e.g. number states)
    means no phase can be assigned.
    """
    val = complex(np.vdot(psi.amplitudes, E.matrix.conj().T @ psi.amplitudes))
    if abs(val) <= PHASE_MAGNITUDE_TOL:
        raise UndefinedPhaseError(
            f"|<E+>| = {abs(val):.3e} below {PHASE_MAGNITUDE_TOL:g}; phase undefined"
        )
    return float(np.angle(val) % (2.0 * np.pi))


def half_angle_tangent(phase: float) -> float:
    """Read-out tan(phase/2) of a phase value in [0, 2*pi)."""
    return float(np.tan(0.5 * phase))


def subspace_of(psi: StateVector, dbasis: DoubledBasis) -> str:
    """Label 'plus' or 'minus'; reject states straddling both halves."""
    amp = psi.amplitudes
    plus_w = float(np.linalg.norm(amp[dbasis.plus_mask]))
    minus_w = float(np.linalg.norm(amp[dbasis.minus_mask]))
    if plus_w > SUPPORT_TOL and minus_w > SUPPORT_TOL:
        raise MixedSupportError(
            f"state has weight in both halves (plus {plus_w:.3e}, minus {minus_w:.3e}); "
            "evolution never links them, so mixed initial support is rejected"
        )
    return "plus" if plus_w > minus_w else "minus"


def coherent_like_state(dbasis: DoubledBasis, alpha: complex, subspace: str = "plus") -> StateVector:
    """Coherent-profile probe supported in a single half of the basis.

    The plus form puts the truncated coherent amplitudes on indices
    0..N-1; the minus form is its index mirror n -> -1-n.
    """
    if subspace not in ("plus", "minus"):
        raise ValidationError(f"subspace must be 'plus' or 'minus', got {subspace!r}")
    core = coherent_state(alpha, FockBasis(dbasis.half_dim)).amplitudes
    amp = np.zeros(dbasis.dim, dtype=complex)
    for n in range(dbasis.half_dim):
        index = n if subspace == "plus" else -1 - n
        amp[dbasis.position(index)] = core[n]
    return StateVector(dbasis, amp)


def phase_trajectory(
    dbasis: DoubledBasis,
    omega: float,
    psi0: StateVector,
    times,
) -> PhaseTrajectory:
    """Evolve under the extended Hamiltonian and record the phase.

    The unwrapped phase is affine in t with slope +omega for plus-half
    support and -omega for minus-half support (mirrored spectrum).
    """
    label = subspace_of(psi0, dbasis)
    H = extended_hamiltonian(dbasis, omega)
    E = extended_phase_operator(dbasis)
    times = np.asarray(times, dtype=float)
    phases = np.empty_like(times)
    for i, t in enumerate(times):
        psi_t = evolve(H, psi0, float(t))
        try:
            phases[i] = phase_expectation(psi_t, E)
        except UndefinedPhaseError as exc:
            raise UndefinedPhaseError(f"phase undefined at sample {i} (t={t:g}): {exc}") from exc
    return PhaseTrajectory(times=times, phase_values=phases, subspace_label=label)
