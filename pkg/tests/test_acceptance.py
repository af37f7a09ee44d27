"""Acceptance suite.

One test per criterion; each prints a PASS line once its assertions hold
(run pytest with -s to see them).
"""

import itertools

import numpy as np
import pytest

from timeflow import bell, dilation, fock, phase, polarizer


def report(name):
    print(f"ACCEPTANCE {name}: PASS")


def test_criterion_1_phase_operator_defect():
    dim = 64
    E = phase.sg_phase_operator(fock.FockBasis(dim))
    defect = E.matrix.conj().T @ E.matrix - np.eye(dim)
    expected = np.zeros((dim, dim))
    expected[0, 0] = -1.0
    assert np.max(np.abs(defect - expected)) < 1e-14

    ext = phase.extended_phase_operator(phase.DoubledBasis(dim))
    assert phase.isometry_defect(ext).norm < 1e-14
    report("1 (isometry defect and unitary extension)")


def test_criterion_2_positive_spectrum_with_time_flow():
    omega = 1.0
    db = phase.DoubledBasis(48)
    H = phase.extended_hamiltonian(db, omega)
    assert np.min(np.diag(H.matrix).real) >= omega / 2

    rng = np.random.default_rng(2718)
    times = np.linspace(-8.0, 8.0, 20)
    for mask in (db.plus_mask, db.minus_mask):
        other = ~mask
        for _ in range(100):
            amp = np.zeros(db.dim, dtype=complex)
            block = rng.normal(size=db.half_dim) + 1j * rng.normal(size=db.half_dim)
            amp[mask] = block / np.linalg.norm(block)
            psi = fock.StateVector(db, amp)
            for t in times:
                out = fock.evolve(H, psi, float(t))
                assert np.linalg.norm(out.amplitudes[other]) < 1e-12

    probe_times = np.linspace(0.0, 2 * np.pi, 101)
    plus = phase.phase_trajectory(db, omega, phase.coherent_like_state(db, 2.0, "plus"), probe_times)
    minus = phase.phase_trajectory(db, omega, phase.coherent_like_state(db, 2.0, "minus"), probe_times)
    assert abs(plus.fit_slope() - omega) < 2e-3
    assert abs(minus.fit_slope() + omega) < 2e-3
    report("2 (positive spectrum, no leakage, phase slope +/- omega)")


def test_criterion_3_dilation_flow():
    grid = dilation.SpatialGrid(4096, 100.0, 1.0)
    packet = dilation.gaussian_packet(grid, -20.0, 2.0, 2.0)
    rec = dilation.trace_trajectory(packet, np.linspace(0.0, 25.0, 101), 5.0)

    slope = np.gradient(rec.r_values, rec.times)
    inner = slice(1, -1)
    assert np.max(np.abs(slope[inner] / (2.0 * rec.h_values[inner]) - 1.0)) < 1e-6

    collapsed = [k for k, _ in itertools.groupby(rec.labels)]
    assert collapsed == ["in", "interaction", "out"]

    for t in np.linspace(0.0, 25.0, 11):
        assert abs(dilation.free_evolve(packet, float(t)).norm - 1.0) < 1e-12
    report("3 (monotone dilation flow d<R>/dt = 2<H>)")


def test_criterion_4_belinfante_refutation():
    p = polarizer.belinfante_profile()
    alphas = polarizer.default_alpha_grid()
    closed_form = (np.pi / 8) * (2.0 + np.cos(2.0 * alphas))
    assert np.max(np.abs(polarizer.pair_curve(p, alphas) - closed_form)) < 1e-10

    epsilon = 0.0
    normalized = polarizer.pair_transmission(p, np.pi / 2) / polarizer.pair_transmission(p, 0.0)
    assert abs(normalized - 1.0 / 3.0) < 1e-10
    assert normalized - polarizer.malus_target(epsilon, np.pi / 2) >= 0.33 - epsilon
    report("4 (Belinfante cos^2 profile misses Malus by >= 0.33)")


def test_criterion_5_constrained_malus_fit():
    for eps in (0.0, 0.02, 0.05, 0.1):
        b0, b1 = polarizer.exact_two_mode_coefficients(eps)
        assert b0 - b1 < 0.0  # exact reproduction leaves the probability box

    result = polarizer.fit_profile(0.02, 6)
    assert np.min(result.profile.samples) >= 0.0
    assert np.max(result.profile.samples) <= 1.0
    history = np.array(result.objective_history)
    assert np.all(np.diff(history) <= 0)

    benchmark = polarizer.profile_rms(polarizer.clipped_two_mode_profile(0.02), 0.02)
    assert result.rms_residual <= benchmark
    assert result.rms_residual == pytest.approx(0.022705898118078726, abs=1e-9)
    report("5 (box-feasible Malus fit beats the clipped two-mode benchmark)")


def test_criterion_6_chsh_contrast():
    assert abs(bell.chsh_for_model(bell.qm_correlation) - 2.0 * np.sqrt(2.0)) < 1e-9

    belinfante = polarizer.belinfante_profile()
    assert abs(bell.chsh_for_profile(belinfante) - np.sqrt(2.0)) < 1e-9

    sweep = bell.local_bound_sweep(1000, 8, seed=1)
    assert sweep.max_abs_s <= 2.0 + 1e-8

    exact = bell.hv_correlation(belinfante, 0.0, np.pi / 8).value
    hits = 0
    for seed in range(30):
        est = bell.mc_simulate(belinfante, 0.0, np.pi / 8, 10**6, seed=seed)
        if abs(est.value - exact) <= 3.0 * est.std_error:
            hits += 1
    assert hits >= 28
    report("6 (QM 2*sqrt(2) vs local bound 2; Monte Carlo consistent)")


def test_criterion_7_oracle_equivalence():
    rng = np.random.default_rng(777)
    alphas = polarizer.default_alpha_grid()
    for _ in range(100):
        n_modes = int(rng.integers(1, 17))
        b0 = rng.uniform(0.35, 0.65)
        raw = rng.normal(size=n_modes)
        raw *= 0.9 * min(b0, 1.0 - b0) / np.sum(np.abs(raw))
        coeffs = np.concatenate([[b0], raw])
        p = polarizer.TransmissionProfile.from_fourier(coeffs)
        quad = polarizer.pair_curve(p, alphas)
        oracle = polarizer.fourier_pair_transmission(coeffs, alphas)
        assert np.max(np.abs(quad - oracle)) < 1e-10
    report("7 (quadrature agrees with the Fourier closed form)")
