"""CHSH evaluation: factorizable polarizer model versus quantum mechanics.

The hidden-variable correlation shares one polarization angle lambda
between the two sides, each transmitting independently with probability
p1(lambda - setting); outcomes are +1 (pass) / -1 (absorb).  Such a
model is Bell-local, so |S| <= 2, in contrast with the quantum
correlation cos 2(a - b) reaching 2*sqrt(2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .polarizer import TransmissionProfile, sample_cosine_series, shifted_samples

CANONICAL_ANGLES = (0.0, np.pi / 4, np.pi / 8, 3 * np.pi / 8)


@dataclass(frozen=True)
class ChshSetting:
    """Polarizer-axis angles (a, a', b, b') reduced mod pi."""

    a: float
    a_prime: float
    b: float
    b_prime: float

    def __post_init__(self):
        for name in ("a", "a_prime", "b", "b_prime"):
            object.__setattr__(self, name, float(getattr(self, name)) % np.pi)


CANONICAL_SETTING = ChshSetting(*CANONICAL_ANGLES)


@dataclass(frozen=True)
class CorrelationEstimate:
    value: float
    std_error: float = 0.0
    n_events: int = 0

    def __post_init__(self):
        if self.std_error < 0:
            raise ValidationError("std_error must be non-negative")
        if abs(self.value) > 1.0 + 3.0 * self.std_error + 1e-12:
            raise ValidationError(
                f"correlation {self.value} outside [-1, 1] beyond 3 standard errors"
            )


@dataclass(frozen=True, eq=False)
class SweepResult:
    max_abs_s: float
    s_values: np.ndarray
    n_profiles: int
    n_modes: int
    seed: int


def hv_correlation(p1: TransmissionProfile, a: float, b: float) -> CorrelationEstimate:
    """E(a, b) = (1/pi) * integral (2 p1(l-a) - 1)(2 p1(l-b) - 1) dl.

    Depends on the settings only through (a - b) mod pi; evaluated by the
    same exact periodic quadrature as the pair transmission.
    """
    f = 2.0 * p1.samples - 1.0
    g = shifted_samples(f, b - a)
    return CorrelationEstimate(value=float(np.mean(f * g)), std_error=0.0, n_events=0)


def qm_correlation(a: float, b: float) -> CorrelationEstimate:
    """Two-photon polarization correlation cos 2(a - b)."""
    return CorrelationEstimate(value=float(np.cos(2.0 * (a - b))), std_error=0.0, n_events=0)


def chsh(e_ab: CorrelationEstimate, e_abp: CorrelationEstimate,
         e_apb: CorrelationEstimate, e_apbp: CorrelationEstimate) -> float:
    """S = E(a,b) - E(a,b') + E(a',b) + E(a',b')."""
    return e_ab.value - e_abp.value + e_apb.value + e_apbp.value


def chsh_for_model(correlation, setting: ChshSetting = CANONICAL_SETTING) -> float:
    """S for a correlation function of two settings."""
    return chsh(
        correlation(setting.a, setting.b),
        correlation(setting.a, setting.b_prime),
        correlation(setting.a_prime, setting.b),
        correlation(setting.a_prime, setting.b_prime),
    )


def chsh_for_profile(p1: TransmissionProfile, setting: ChshSetting = CANONICAL_SETTING) -> float:
    return chsh_for_model(lambda x, y: hv_correlation(p1, x, y), setting)


def mc_simulate(p1: TransmissionProfile, a: float, b: float,
                n_events: int, seed: int) -> CorrelationEstimate:
    """Event-level Monte Carlo of the factorizable model.

    Per event: lambda uniform over one period, each side transmits
    independently with probability p1(lambda - setting).  Deterministic
    given the seed.
    """
    if n_events < 1000:
        raise ValidationError(f"n_events must be >= 1000, got {n_events}")
    if p1.samples.size == 0:
        raise ValidationError("empty profile")
    rng = np.random.default_rng(seed)
    lam = rng.uniform(-np.pi / 2, np.pi / 2, n_events)
    prob_a = np.clip(p1.evaluate(lam - a), 0.0, 1.0)
    prob_b = np.clip(p1.evaluate(lam - b), 0.0, 1.0)
    side_a = np.where(rng.random(n_events) < prob_a, 1.0, -1.0)
    side_b = np.where(rng.random(n_events) < prob_b, 1.0, -1.0)
    product = side_a * side_b
    value = float(np.mean(product))
    std_error = float(np.std(product, ddof=1) / np.sqrt(n_events))
    return CorrelationEstimate(value=value, std_error=std_error, n_events=n_events)


def random_profile(rng: np.random.Generator, n_modes: int,
                   grid_size: int = 512, deterministic: bool = False) -> TransmissionProfile:
    """Random box-feasible profile from clipped cosine modes.

    ``deterministic=True`` thresholds the draw into a {0, 1} step profile
    (a classical deterministic strategy).
    """
    coeffs = np.empty(n_modes + 1)
    coeffs[0] = rng.uniform(0.0, 1.0)
    coeffs[1:] = rng.normal(0.0, 0.5, n_modes) / np.arange(1, n_modes + 1)
    samples = np.clip(sample_cosine_series(coeffs, grid_size), 0.0, 1.0)
    if deterministic:
        samples = (samples >= 0.5).astype(float)
    return TransmissionProfile(samples=samples)


def local_bound_sweep(n_profiles: int, n_modes: int, seed: int,
                      setting: ChshSetting = CANONICAL_SETTING,
                      include_deterministic: bool = True) -> SweepResult:
    """Max |S| over random admissible profiles; always <= 2 (Bell bound).

    Every other profile is optionally thresholded into a deterministic
    {0, 1} strategy so the sweep probes the extreme points of the box.
    """
    if n_profiles < 1:
        raise ValidationError("n_profiles must be positive")
    if n_modes < 1:
        raise ValidationError("n_modes must be positive")
    rng = np.random.default_rng(seed)
    s_values = np.empty(n_profiles)
    for i in range(n_profiles):
        det = include_deterministic and i % 2 == 1
        p1 = random_profile(rng, n_modes, deterministic=det)
        s_values[i] = chsh_for_profile(p1, setting)
    return SweepResult(
        max_abs_s=float(np.max(np.abs(s_values))),
        s_values=s_values,
        n_profiles=n_profiles,
        n_modes=n_modes,
        seed=seed,
    )
