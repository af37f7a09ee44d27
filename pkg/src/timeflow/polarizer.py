"""Hidden-variable polarizer-pair model.

A single-polarizer transmission profile p1(lambda) on one period pi
determines the pair transmission m(alpha) as the circular correlation of
p1 with itself.  The module provides the literal quadrature, its
closed-form Fourier oracle, Belinfante's cos^2 choice and its failure
against the generalized Malus law, and a box-constrained projected
gradient fit of a profile approximating Malus.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

DEFAULT_GRID_SIZE = 512
DEFAULT_ALPHA_COUNT = 181
BOX_TOL = 1e-12
FOURIER_ROUNDTRIP_TOL = 1e-12


def lambda_grid(grid_size: int) -> np.ndarray:
    """Uniform period-pi grid lambda_j = -pi/2 + j*pi/M, j = 0..M-1."""
    return -np.pi / 2 + np.pi * np.arange(grid_size) / grid_size


def default_alpha_grid(count: int = DEFAULT_ALPHA_COUNT) -> np.ndarray:
    return np.linspace(-np.pi / 2, np.pi / 2, count)


def sample_cosine_series(coeffs, grid_size: int) -> np.ndarray:
    """Evaluate b0 + sum_k b_k cos(2 k lambda) on the lambda grid."""
    coeffs = np.asarray(coeffs, dtype=float)
    lam = lambda_grid(grid_size)
    k = np.arange(1, coeffs.size)
    return coeffs[0] + np.cos(2.0 * np.outer(lam, k)) @ coeffs[1:]


@dataclass(frozen=True, eq=False)
class TransmissionProfile:
    """Sampled transmission probability on the uniform period-pi grid.

    ``fourier``, when present, is the even-cosine coefficient tuple
    (b0, b1, ...) whose resampling must reproduce ``samples``.
    """

    samples: np.ndarray
    fourier: tuple[float, ...] | None = None

    def __post_init__(self):
        s = np.array(self.samples, dtype=float)
        if s.ndim != 1 or s.size < 8 or s.size % 2 != 0:
            raise ValidationError("profile needs an even-length 1-D sample vector, >= 8 points")
        if np.min(s) < -BOX_TOL or np.max(s) > 1.0 + BOX_TOL:
            raise ValidationError(
                f"samples outside [0, 1]: min {np.min(s):g}, max {np.max(s):g}"
            )
        s = np.clip(s, 0.0, 1.0)
        if self.fourier is not None:
            f = tuple(float(b) for b in self.fourier)
            resampled = sample_cosine_series(f, s.size)
            if np.max(np.abs(resampled - s)) > FOURIER_ROUNDTRIP_TOL:
                raise ValidationError("fourier coefficients do not reproduce the samples")
            object.__setattr__(self, "fourier", f)
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def grid_size(self) -> int:
        return int(self.samples.size)

    @property
    def grid(self) -> np.ndarray:
        return lambda_grid(self.grid_size)

    @classmethod
    def from_fourier(cls, coeffs, grid_size: int = DEFAULT_GRID_SIZE) -> "TransmissionProfile":
        coeffs = tuple(float(b) for b in coeffs)
        return cls(samples=sample_cosine_series(coeffs, grid_size), fourier=coeffs)

    def evaluate(self, lams) -> np.ndarray:
        """Trigonometric-interpolant value of p1 at arbitrary angles.

        Periodic with period pi; exact at the grid nodes and for profiles
        that are genuinely band-limited.
        """
        lams = np.atleast_1d(np.asarray(lams, dtype=float))
        if self.fourier is not None:
            coeffs = np.asarray(self.fourier)
            k = np.arange(1, coeffs.size)
            out = coeffs[0] + np.cos(2.0 * np.outer(lams, k)) @ coeffs[1:]
            return out
        m = self.grid_size
        c = np.fft.rfft(self.samples) / m
        u = (lams + np.pi / 2) / np.pi  # fraction of the period
        out = np.full(lams.shape, c[0].real)
        chunk = 1 << 16
        for start in range(0, lams.size, chunk):
            sl = slice(start, start + chunk)
            phase = np.exp(2j * np.pi * np.outer(u[sl], np.arange(1, m // 2)))
            out[sl] += 2.0 * (phase @ c[1 : m // 2]).real
            out[sl] += c[m // 2].real * np.cos(np.pi * m * u[sl])
        return out


def shifted_samples(values: np.ndarray, alpha: float) -> np.ndarray:
    """Samples of the trig interpolant of ``values`` shifted by alpha.

    Spectral fractional shift with period pi; exact circular roll when
    alpha is a multiple of the grid spacing.
    """
    m = values.size
    freqs = np.fft.fftfreq(m) * m
    phase = np.exp(-2j * np.pi * freqs * (alpha / np.pi))
    return np.fft.ifft(np.fft.fft(values) * phase).real


def pair_transmission(p1: TransmissionProfile, alpha: float) -> float:
    """m(alpha) = integral over one period of p1(l) p1(l - alpha) dl.

    Periodic trapezoid rule on the uniform grid; exact for band-limited
    profiles once the grid resolves twice the top harmonic.
    """
    s = p1.samples
    return float(np.sum(s * shifted_samples(s, alpha)) * np.pi / p1.grid_size)


def pair_curve(p1: TransmissionProfile, alphas) -> np.ndarray:
    alphas = np.asarray(alphas, dtype=float)
    s = p1.samples
    m = p1.grid_size
    freqs = np.fft.fftfreq(m) * m
    spectrum = np.fft.fft(s)
    power = (spectrum * spectrum.conj()).real
    # correlation theorem: m(alpha) = (pi/M^2) * sum_k |F_k|^2 e^{2 pi i f_k alpha/pi}
    phase = np.exp(2j * np.pi * np.outer(alphas, freqs) / np.pi)
    return (phase @ power).real * np.pi / m**2


def malus_target(epsilon: float, alpha) -> np.ndarray | float:
    """Generalized Malus law (1 - eps) cos^2(alpha) + eps."""
    if not 0.0 <= epsilon < 1.0:
        raise ValidationError(f"epsilon must lie in [0, 1), got {epsilon}")
    return (1.0 - epsilon) * np.cos(alpha) ** 2 + epsilon


def belinfante_profile(grid_size: int = DEFAULT_GRID_SIZE) -> TransmissionProfile:
    """p1(lambda) = cos^2(lambda), i.e. cosine coefficients (1/2, 1/2)."""
    if grid_size < 64:
        raise ValidationError(f"grid_size must be >= 64, got {grid_size}")
    return TransmissionProfile.from_fourier((0.5, 0.5), grid_size)


def fourier_pair_transmission(coeffs, alpha) -> np.ndarray | float:
    """Closed-form circular correlation of b0 + sum_k b_k cos(2 k lambda):
    pi b0^2 + (pi/2) sum_k b_k^2 cos(2 k alpha)."""
    coeffs = np.asarray(coeffs, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    k = np.arange(1, coeffs.size)
    out = np.pi * coeffs[0] ** 2 + (np.pi / 2.0) * (
        np.cos(2.0 * np.multiply.outer(alpha, k)) @ coeffs[1:] ** 2
    )
    return float(out) if out.ndim == 0 else out


def exact_two_mode_coefficients(epsilon: float) -> tuple[float, float]:
    """The unique (up to b1 sign) two-mode coefficients whose pair curve
    equals the Malus target exactly; infeasible whenever b0 - b1 < 0."""
    if not 0.0 <= epsilon < 1.0:
        raise ValidationError(f"epsilon must lie in [0, 1), got {epsilon}")
    b0 = np.sqrt((1.0 + epsilon) / (2.0 * np.pi))
    b1 = np.sqrt((1.0 - epsilon) / np.pi)
    return float(b0), float(b1)


def clipped_two_mode_profile(epsilon: float, grid_size: int = DEFAULT_GRID_SIZE) -> TransmissionProfile:
    """Feasible benchmark: the exact two-mode profile clipped into [0, 1]."""
    b0, b1 = exact_two_mode_coefficients(epsilon)
    samples = np.clip(sample_cosine_series((b0, b1), grid_size), 0.0, 1.0)
    return TransmissionProfile(samples=samples)


def profile_rms(p1: TransmissionProfile, epsilon: float, alphas=None) -> float:
    """RMS of malus - m over the alpha grid (raw, unnormalized)."""
    if alphas is None:
        alphas = default_alpha_grid()
    residual = malus_target(epsilon, alphas) - pair_curve(p1, alphas)
    return float(np.sqrt(np.mean(residual**2)))


@dataclass(frozen=True, eq=False)
class FitResult:
    profile: TransmissionProfile
    coefficients: tuple[float, ...]
    rms_residual: float
    max_residual: float
    iterations: int
    converged: bool
    objective_history: tuple[float, ...]


@dataclass(frozen=True, eq=False)
class CurveReport:
    alphas: np.ndarray
    m_values: np.ndarray
    malus_values: np.ndarray
    residuals: np.ndarray


def _project_box(coeffs: np.ndarray, grid_size: int) -> np.ndarray:
    """Clip the sampled profile into [0, 1], then refit the cosine
    coefficients (the cosine columns are orthogonal on the grid)."""
    samples = sample_cosine_series(coeffs, grid_size)
    clipped = np.clip(samples, 0.0, 1.0)
    lam = lambda_grid(grid_size)
    out = np.empty_like(coeffs)
    out[0] = np.mean(clipped)
    for k in range(1, coeffs.size):
        out[k] = 2.0 * np.mean(clipped * np.cos(2.0 * k * lam))
    return out


def _objective_and_gradient(coeffs: np.ndarray, target: np.ndarray, alphas: np.ndarray):
    k = np.arange(1, coeffs.size)
    cos_table = np.cos(2.0 * np.outer(alphas, k))
    m = np.pi * coeffs[0] ** 2 + (np.pi / 2.0) * (cos_table @ coeffs[1:] ** 2)
    r = m - target
    obj = float(np.mean(r**2))
    grad = np.empty_like(coeffs)
    grad[0] = 4.0 * np.pi * coeffs[0] * np.mean(r)
    grad[1:] = 2.0 * np.pi * coeffs[1:] * (cos_table.T @ r) / alphas.size
    return obj, grad


def fit_profile(
    target_epsilon: float,
    n_modes: int,
    grid_size: int = DEFAULT_GRID_SIZE,
    max_iter: int = 2000,
    tol: float = 1e-14,
) -> FitResult:
    """Projected-gradient fit of a box-feasible profile approximating
    the Malus pair curve.

    Coefficients move along the negative gradient of the closed-form
    objective; after every step the sampled profile is clipped into
    [0, 1] and the coefficients refit.  Step-halving makes the accepted
    objective history non-increasing.
    """
    if n_modes < 2:
        raise ValidationError(f"n_modes must be >= 2, got {n_modes}")
    if grid_size < 8 * n_modes:
        raise ValidationError(f"grid_size must be >= 8*n_modes, got {grid_size}")
    if max_iter < 1:
        raise ValidationError("max_iter must be positive")
    alphas = default_alpha_grid()
    target = malus_target(target_epsilon, alphas)

    b0, b1 = exact_two_mode_coefficients(target_epsilon)
    coeffs = np.zeros(n_modes + 1)
    coeffs[0], coeffs[1] = b0, b1
    coeffs = _project_box(coeffs, grid_size)

    obj, grad = _objective_and_gradient(coeffs, target, alphas)
    history = [obj]
    step = 0.05
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        accepted = False
        for _ in range(60):
            trial = _project_box(coeffs - step * grad, grid_size)
            trial_obj, trial_grad = _objective_and_gradient(trial, target, alphas)
            if trial_obj <= obj:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            converged = True
            break
        decrease = obj - trial_obj
        coeffs, obj, grad = trial, trial_obj, trial_grad
        history.append(obj)
        step *= 1.25
        if decrease < tol:
            converged = True
            break

    raw = sample_cosine_series(coeffs, grid_size)
    samples = np.clip(raw, 0.0, 1.0)
    fourier = tuple(coeffs) if np.max(np.abs(raw - samples)) <= FOURIER_ROUNDTRIP_TOL else None
    profile = TransmissionProfile(samples=samples, fourier=fourier)
    residual = malus_target(target_epsilon, alphas) - pair_curve(profile, alphas)
    return FitResult(
        profile=profile,
        coefficients=tuple(float(c) for c in coeffs),
        rms_residual=float(np.sqrt(np.mean(residual**2))),
        max_residual=float(np.max(np.abs(residual))),
        iterations=iterations,
        converged=converged,
        objective_history=tuple(history),
    )


def curve_report(p1: TransmissionProfile, epsilon: float, alphas=None) -> CurveReport:
    """The three curves of the pair-transmission comparison as a table."""
    if alphas is None:
        alphas = default_alpha_grid()
    alphas = np.atleast_1d(np.asarray(alphas, dtype=float))
    m = pair_curve(p1, alphas)
    malus = malus_target(epsilon, alphas)
    return CurveReport(alphas=alphas, m_values=m, malus_values=malus, residuals=malus - m)
