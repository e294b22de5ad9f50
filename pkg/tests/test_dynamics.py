import dataclasses
import logging

import numpy as np
import pytest
from scipy import linalg

from mollowsim.analysis.spectral import rabi_spectrum
from mollowsim.errors import StepTooLarge
from mollowsim.models import BlochState, RabiRun
from mollowsim.physics.dynamics import (bloch_derivative, check_step, decay_envelope_rate, halve_step_check,
                                        integrate_batch, integrate_rabi, modulation_waveform,
                                        phase_averaged_trace, propagate)

OMEGA_R = 2 * np.pi * 6.29e6


def resonant_run(**overrides) -> RabiRun:
    params = dict(rabi_frequency=OMEGA_R, drive_frequency=OMEGA_R, duration=10e-6, dt=1e-9)
    params.update(overrides)
    return RabiRun(**params)


def test_pure_rabi_matches_analytic_solution():
    run = resonant_run(dt=0.25e-9)
    trace = integrate_rabi(run)
    assert len(trace.times) == 40001
    np.testing.assert_allclose(trace.sz, np.cos(OMEGA_R * trace.times), atol=1e-6)
    np.testing.assert_allclose(trace.sy, -np.sin(OMEGA_R * trace.times), atol=1e-6)
    np.testing.assert_allclose(trace.sx, 0.0, atol=1e-12)


def test_norm_conserved_without_decay():
    run = resonant_run(modulation_depth=2 * np.pi * 2e6, dt=0.5e-9, phase=0.4,
                       initial_state=BlochState(0.6, 0.0, 0.8))
    trace = integrate_rabi(run)
    norms = np.linalg.norm(trace.states, axis=1)
    assert np.max(np.abs(norms - 1.0)) < 1e-6


def test_damped_rabi_matches_matrix_exponential():
    gamma = 2 * np.pi * 100e3
    run = resonant_run(decay_rate=100e3, duration=5e-6, dt=0.5e-9, sample_stride=10)
    trace = integrate_rabi(run)
    A = np.array([[-gamma, 0.0, 0.0],
                  [0.0, -gamma, -OMEGA_R],
                  [0.0, OMEGA_R, -gamma]])
    b = np.array([0.0, 0.0, gamma])
    steady = np.linalg.solve(A, -b)
    s0 = np.array([0.0, 0.0, 1.0])
    for t, state in list(zip(trace.times, trace.states))[::50]:
        expected = steady + linalg.expm(A * t) @ (s0 - steady)
        np.testing.assert_allclose(state, expected, atol=1e-6)
    # resonant envelope decays at (Γ1 + Γ2)/2
    assert decay_envelope_rate(run) == pytest.approx(gamma)


def test_decay_rate_overrides():
    run = resonant_run(decay_rate=100e3, relaxation_rate=2e5, dephasing_rate=6e5)
    assert run.gamma1 == 2e5
    assert run.gamma2 == 6e5
    assert decay_envelope_rate(run) == pytest.approx(4e5)
    default = resonant_run(decay_rate=100e3)
    assert default.gamma1 == default.gamma2 == pytest.approx(2 * np.pi * 100e3)


def test_modulation_waveform():
    run = resonant_run(modulation_depth=3.0, detuning=1.5, phase=np.pi / 3)
    assert float(modulation_waveform(run, 0.0)) == pytest.approx(1.5 + 3.0 * 0.5)
    t = np.linspace(0.0, 1e-6, 7)
    np.testing.assert_allclose(modulation_waveform(run, t), 1.5 + 3.0 * np.cos(OMEGA_R * t + np.pi / 3))


def test_bloch_derivative_components():
    run = resonant_run(modulation_depth=2.0, detuning=1.0, relaxation_rate=0.3, dephasing_rate=0.2,
                       equilibrium_sz=0.5)
    state = BlochState(0.1, -0.2, 0.4)
    delta = 1.0 + 2.0 * np.cos(OMEGA_R * 1e-7)
    expected = [-delta * -0.2 - 0.2 * 0.1,
                delta * 0.1 - OMEGA_R * 0.4 - 0.2 * -0.2,
                OMEGA_R * -0.2 - 0.3 * (0.4 - 0.5)]
    np.testing.assert_allclose(bloch_derivative(state, run, 1e-7), expected, rtol=1e-12)


def test_halve_step_error_is_small_at_fine_step():
    run = resonant_run(modulation_depth=2 * np.pi * 2e6, decay_rate=100e3, dt=0.5e-9)
    assert halve_step_check(run) < 1e-5


def test_halve_step_error_scales_as_fourth_power():
    run = resonant_run(modulation_depth=2 * np.pi * 2e6, decay_rate=100e3, duration=5e-6, dt=2.5e-9)
    coarse = halve_step_check(run)
    fine = halve_step_check(dataclasses.replace(run, dt=run.dt / 2))
    assert 1 / 25 < fine / coarse < 1 / 10


def test_halve_step_of_empty_window():
    assert halve_step_check(resonant_run(duration=0.0)) == 0.0


def test_time_reversal_without_decay():
    run = resonant_run(modulation_depth=2 * np.pi * 1.5e6, phase=0.3)
    start = np.array([0.0, 0.6, 0.8])
    forward = propagate(start, run, 0.0, 2000, 0.5e-9)
    back = propagate(forward, run, 2000 * 0.5e-9, 2000, -0.5e-9)
    np.testing.assert_allclose(back, start, atol=1e-6)


def test_step_too_large():
    with pytest.raises(StepTooLarge):
        integrate_rabi(resonant_run(dt=1e-8, duration=1e-7))
    # exactly 50 steps per cycle is accepted
    check_step(resonant_run(dt=1 / (50 * 6.29e6)))


def test_batch_matches_individual_runs():
    runs = [resonant_run(modulation_depth=2 * np.pi * d, duration=2e-6, phase=p, decay_rate=1e5)
            for d, p in [(1e6, 0.0), (2e6, 1.0), (0.0, 2.0)]]
    times, samples = integrate_batch(runs)
    for run, batch in zip(runs, samples):
        single = integrate_rabi(run)
        np.testing.assert_allclose(times, single.times)
        np.testing.assert_allclose(batch, single.states, rtol=1e-13, atol=1e-14)


def test_batch_requires_shared_grid():
    with pytest.raises(ValueError):
        integrate_batch([resonant_run(), resonant_run(dt=0.5e-9)])
    with pytest.raises(ValueError):
        integrate_batch([])


def test_sample_stride_spacing():
    trace = integrate_rabi(resonant_run(duration=1e-6, sample_stride=4))
    assert len(trace.times) == 251
    np.testing.assert_allclose(np.diff(trace.times), 4e-9)


def test_phase_average_is_phase_independent_without_modulation():
    run = resonant_run(duration=2e-6, decay_rate=1e5)
    averaged = phase_averaged_trace(run)
    single = integrate_rabi(run)
    np.testing.assert_allclose(averaged.states, single.states, atol=1e-14)


def test_phase_average_is_mean_of_phase_runs():
    run = resonant_run(duration=2e-6, modulation_depth=2 * np.pi * 2e6)
    plus = integrate_rabi(dataclasses.replace(run, phase=0.0))
    minus = integrate_rabi(dataclasses.replace(run, phase=np.pi))
    averaged = phase_averaged_trace(run, phases=(0.0, np.pi))
    np.testing.assert_allclose(averaged.sz, 0.5 * (plus.sz + minus.sz), atol=1e-14)


def test_modulation_waveform_averages_to_detuning_over_whole_periods():
    run = resonant_run(modulation_depth=2 * np.pi * 2e6, detuning=2 * np.pi * 0.3e6, phase=0.7)
    period = 2 * np.pi / OMEGA_R
    t = np.arange(7 * 64) * period / 64
    assert modulation_waveform(run, t).mean() == pytest.approx(run.detuning, abs=1e-9 * run.modulation_depth)


def test_free_precession_is_static_in_the_co_rotating_frame():
    delta = 2 * np.pi * 3e6
    run = RabiRun(rabi_frequency=0.0, drive_frequency=0.0, detuning=delta, duration=5e-6, dt=1e-9,
                  initial_state=BlochState(0.6, 0.0, 0.8))
    trace = integrate_rabi(run)
    np.testing.assert_allclose(trace.sz, 0.8, atol=1e-12)
    np.testing.assert_allclose(trace.sx, 0.6 * np.cos(delta * trace.times), atol=1e-6)
    np.testing.assert_allclose(trace.sy, 0.6 * np.sin(delta * trace.times), atol=1e-6)

    c, s = np.cos(delta * trace.times), np.sin(delta * trace.times)
    co_rotating = np.stack([c * trace.sx + s * trace.sy, -s * trace.sx + c * trace.sy, trace.sz], axis=1)
    resting = integrate_rabi(dataclasses.replace(run, detuning=0.0))
    np.testing.assert_allclose(co_rotating, resting.states, atol=1e-6)


def test_modulated_spin_locks_to_the_drive():
    run = resonant_run(modulation_depth=2 * np.pi * 2e6, decay_rate=100e3, duration=10e-6, dt=2e-9)
    trace = phase_averaged_trace(run)
    spectrum = rabi_spectrum(trace.times, trace.sz)
    peak = spectrum.frequencies[np.argmax(spectrum.magnitude)]
    assert peak == pytest.approx(6.29e6, abs=spectrum.resolution)


def test_only_a_driven_steady_state_outlives_the_transients():
    # Γ₁ = Γ₂ = Γ relaxes every transient as e^{-Γt}; after 10/Γ only the
    # steady state is left
    gamma = 2 * np.pi * 100e3
    depth = 2 * np.pi * 2e6
    runs = [resonant_run(decay_rate=100e3, duration=20e-6, dt=2e-9, modulation_depth=d, phase=p)
            for d, p in [(0.0, 0.0), (depth, 0.0), (depth, np.pi / 2)]]
    times, samples = integrate_batch(runs)
    late = times >= 16e-6

    static = np.array([0.0, -OMEGA_R * gamma, gamma ** 2]) / (OMEGA_R ** 2 + gamma ** 2)
    assert np.abs(samples[0, late] - static).max() < 1e-4

    # first order in δω₀: s_x follows the drive with amplitude δω₀·Γ/Ω_d²
    expected = depth * gamma / OMEGA_R ** 2
    for modulated in samples[1:]:
        sx = modulated[late, 0]
        assert 0.6 * expected < np.abs(sx).max() < 1.5 * expected
        spectrum = rabi_spectrum(times[late], sx)
        peak = spectrum.frequencies[np.argmax(spectrum.magnitude)]
        assert peak == pytest.approx(6.29e6, abs=2 * spectrum.resolution)


def test_short_window_is_reported(caplog):
    with caplog.at_level(logging.WARNING, logger='mollowsim.physics.dynamics'):
        integrate_rabi(resonant_run(duration=1e-6))
    assert any('fewer than 10 drive periods' in r.getMessage() for r in caplog.records)
    caplog.clear()
    with caplog.at_level(logging.WARNING, logger='mollowsim.physics.dynamics'):
        integrate_rabi(resonant_run(duration=2e-6))
    assert not caplog.records
