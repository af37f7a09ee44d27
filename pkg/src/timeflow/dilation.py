"""Free-particle wavepackets and dilation-operator trajectories.

One relative coordinate in the CMS with reduced mass m.  Propagation is
spectral (FFT to momentum space, phase multiply, back), hence exactly
unitary on the grid.  The expectation of R = (qp + pq)/2 grows linearly
with slope 2<H> under free evolution and classifies states as incoming
(<R> < 0) or outgoing (<R> >= 0) outside the interaction window.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BoundaryViolationError, MomentumAliasingError, ValidationError

NORM_TOL = 1e-10
BOUNDARY_RATIO = 1e-8

LABEL_IN = "in"
LABEL_INTERACTION = "interaction"
LABEL_OUT = "out"


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform grid on [-extent, extent) with a paired FFT momentum grid."""

    n_points: int
    extent: float
    mass: float

    def __post_init__(self):
        n = self.n_points
        if n < 256 or (n & (n - 1)) != 0:
            raise ValidationError(f"n_points must be a power of two >= 256, got {n}")
        if self.extent <= 0:
            raise ValidationError(f"extent must be positive, got {self.extent}")
        if self.mass <= 0:
            raise ValidationError(f"mass must be positive, got {self.mass}")

    @property
    def spacing(self) -> float:
        return 2.0 * self.extent / self.n_points

    @property
    def positions(self) -> np.ndarray:
        return -self.extent + self.spacing * np.arange(self.n_points)

    @property
    def momenta(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.spacing)


@dataclass(frozen=True, eq=False)
class WavepacketGrid:
    """Normalized complex amplitudes on a spatial grid.

    Construction enforces discrete norm 1 (within 1e-10) and that the
    boundary amplitude stays below 1e-8 of the peak.
    """

    grid: SpatialGrid
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.array(self.amplitudes, dtype=complex)
        if amp.shape != (self.grid.n_points,):
            raise ValidationError("amplitude length does not match grid")
        norm = np.sqrt(np.sum(np.abs(amp) ** 2) * self.grid.spacing)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValidationError(f"discrete norm {norm} deviates from 1 beyond {NORM_TOL}")
        peak = float(np.max(np.abs(amp)))
        edge = float(max(abs(amp[0]), abs(amp[-1])))
        if edge > BOUNDARY_RATIO * peak:
            raise BoundaryViolationError(
                f"boundary amplitude {edge:.3e} exceeds {BOUNDARY_RATIO:g} of peak {peak:.3e}"
            )
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2) * self.grid.spacing))


@dataclass(frozen=True, eq=False)
class TrajectoryRecord:
    times: np.ndarray
    r_values: np.ndarray
    h_values: np.ndarray
    q_values: np.ndarray
    p_values: np.ndarray
    labels: tuple[str, ...]


def gaussian_packet(grid: SpatialGrid, q0: float, p0: float, sigma: float) -> WavepacketGrid:
    """Minimum-uncertainty Gaussian with <q> = q0, <p> = p0, spread sigma."""
    if sigma <= 0:
        raise ValidationError(f"sigma must be positive, got {sigma}")
    if abs(q0) + 6.0 * sigma >= grid.extent:
        raise BoundaryViolationError(
            f"packet at q0={q0} with sigma={sigma} does not fit inside extent {grid.extent}"
        )
    k_max = np.pi / grid.spacing
    sigma_p = 1.0 / (2.0 * sigma)
    if abs(p0) + 6.0 * sigma_p >= k_max:
        raise MomentumAliasingError(
            f"momentum support |p0|+6/(2 sigma) = {abs(p0) + 6 * sigma_p:g} "
            f"exceeds grid momentum cutoff {k_max:g}"
        )
    x = grid.positions
    amp = np.exp(-((x - q0) ** 2) / (4.0 * sigma**2) + 1j * p0 * x)
    amp /= np.sqrt(np.sum(np.abs(amp) ** 2) * grid.spacing)
    return WavepacketGrid(grid, amp)


def free_evolve(packet: WavepacketGrid, t: float) -> WavepacketGrid:
    """Spectral propagation under H = p^2 / 2m; exactly unitary."""
    g = packet.grid
    spectrum = np.fft.fft(packet.amplitudes)
    spectrum *= np.exp(-1j * g.momenta**2 * t / (2.0 * g.mass))
    amp = np.fft.ifft(spectrum)
    try:
        return WavepacketGrid(g, amp)
    except BoundaryViolationError as exc:
        raise BoundaryViolationError(f"at t={t:g}: {exc}") from exc


def _momentum_apply(packet: WavepacketGrid) -> np.ndarray:
    g = packet.grid
    return np.fft.ifft(g.momenta * np.fft.fft(packet.amplitudes))


def position_expectation(packet: WavepacketGrid) -> float:
    g = packet.grid
    dens = np.abs(packet.amplitudes) ** 2
    return float(np.sum(g.positions * dens) * g.spacing)


def momentum_expectation(packet: WavepacketGrid) -> float:
    g = packet.grid
    val = np.vdot(packet.amplitudes, _momentum_apply(packet)) * g.spacing
    return float(val.real)


def energy_expectation(packet: WavepacketGrid) -> float:
    """<p^2>/2m evaluated in the momentum representation."""
    g = packet.grid
    spectrum = np.fft.fft(packet.amplitudes)
    weights = np.abs(spectrum) ** 2
    return float(np.sum(g.momenta**2 * weights) / (2.0 * g.mass * np.sum(weights)))


def r_expectation(packet: WavepacketGrid) -> float:
    """<(qp + pq)/2> = Re <psi| q (p psi)> with p applied spectrally."""
    g = packet.grid
    val = np.vdot(packet.amplitudes, g.positions * _momentum_apply(packet)) * g.spacing
    return float(val.real)


def classify(packet: WavepacketGrid, interaction_halfwidth: float) -> str:
    """Lax-Phillips label: interaction window by |<q>|, else sign of <R>.

    The tie <R> = 0 goes to 'out' (measure-zero boundary, deterministic).
    """
    if interaction_halfwidth <= 0:
        raise ValidationError("interaction_halfwidth must be positive")
    if abs(position_expectation(packet)) < interaction_halfwidth:
        return LABEL_INTERACTION
    return LABEL_IN if r_expectation(packet) < 0 else LABEL_OUT


def trace_trajectory(packet: WavepacketGrid, times, interaction_halfwidth: float) -> TrajectoryRecord:
    """Record <R>, <H>, <q>, <p> and the in/interaction/out label over times."""
    times = np.asarray(times, dtype=float)
    r = np.empty_like(times)
    h = np.empty_like(times)
    q = np.empty_like(times)
    p = np.empty_like(times)
    labels = []
    for i, t in enumerate(times):
        pk = free_evolve(packet, float(t))
        r[i] = r_expectation(pk)
        h[i] = energy_expectation(pk)
        q[i] = position_expectation(pk)
        p[i] = momentum_expectation(pk)
        labels.append(classify(pk, interaction_halfwidth))
    return TrajectoryRecord(times=times, r_values=r, h_values=h, q_values=q, p_values=p, labels=tuple(labels))
