#!/usr/bin/env python3
"""
Rotating-frame Bloch dynamics under parametric modulation

The qubit is MW-driven at Rabi frequency Ω_R while the mechanical motion
modulates its detuning, δ(t) = Δ_mw + δω₀·cos(Ω_d t + φ). Integration is
fixed-step RK4 so that every run lands on the same sample grid, and it is
vectorised over a batch of runs sharing dt and duration (phase averages,
sweep points).
"""

import dataclasses
import logging
from typing import Sequence, Tuple, Union

import numpy as np

from ..errors import StepTooLarge
from ..models import BlochState, RabiRun, RabiTrace

logger = logging.getLogger(__name__)

# at least 50 steps per cycle of the fastest rate
MAX_CYCLES_PER_STEP = 0.02

DEFAULT_PHASES = (0.0, np.pi / 2, np.pi, 3 * np.pi / 2)


@dataclasses.dataclass
class _BatchParams:
    rabi: np.ndarray
    detuning: np.ndarray
    depth: np.ndarray
    drive: np.ndarray
    phase: np.ndarray
    gamma1: np.ndarray
    gamma2: np.ndarray
    sz_eq: np.ndarray

    @classmethod
    def from_runs(cls, runs: Sequence[RabiRun]) -> '_BatchParams':
        def column(getter):
            return np.array([getter(run) for run in runs], dtype=float)
        return cls(rabi=column(lambda r: r.rabi_frequency),
                   detuning=column(lambda r: r.detuning),
                   depth=column(lambda r: r.modulation_depth),
                   drive=column(lambda r: r.drive_frequency),
                   phase=column(lambda r: r.phase),
                   gamma1=column(lambda r: r.gamma1),
                   gamma2=column(lambda r: r.gamma2),
                   sz_eq=column(lambda r: r.equilibrium_sz))


def _detuning(p: _BatchParams, t: float) -> np.ndarray:
    return p.detuning + p.depth * np.cos(p.drive * t + p.phase)


def _derivative(state: np.ndarray, t: float, p: _BatchParams) -> np.ndarray:
    sx, sy, sz = state[:, 0], state[:, 1], state[:, 2]
    delta = _detuning(p, t)
    return np.stack([
        -delta * sy - p.gamma2 * sx,
        delta * sx - p.rabi * sz - p.gamma2 * sy,
        p.rabi * sy - p.gamma1 * (sz - p.sz_eq),
    ], axis=1)


def _rk4_step(state: np.ndarray, t: float, dt: float, p: _BatchParams) -> np.ndarray:
    half = dt / 2.0
    k1 = _derivative(state, t, p)
    k2 = _derivative(state + half * k1, t + half, p)
    k3 = _derivative(state + half * k2, t + half, p)
    k4 = _derivative(state + dt * k3, t + dt, p)
    return state + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _as_array(state: Union[BlochState, Sequence[float], np.ndarray]) -> np.ndarray:
    if isinstance(state, BlochState):
        return state.as_array()
    return np.asarray(state, dtype=float).reshape(3)


def modulation_waveform(run: RabiRun, t) -> np.ndarray:
    """δ(t) = Δ_mw + δω₀·cos(Ω_d t + φ) in rad/s"""
    t = np.asarray(t, dtype=float)
    return run.detuning + run.modulation_depth * np.cos(run.drive_frequency * t + run.phase)


def bloch_derivative(state, run: RabiRun, t: float) -> np.ndarray:
    """d(s_x, s_y, s_z)/dt of the rotating-frame Bloch equations"""
    p = _BatchParams.from_runs([run])
    return _derivative(_as_array(state)[None, :], t, p)[0]


def decay_envelope_rate(run: RabiRun) -> float:
    """Decay rate (rad/s) of resonant Rabi oscillations, (Γ₁ + Γ₂)/2"""
    return 0.5 * (run.gamma1 + run.gamma2)


def check_step(run: RabiRun):
    """Raise StepTooLarge unless dt resolves the fastest rate with 50 steps per cycle"""
    cycles = run.dt * run.fastest_rate / (2 * np.pi)
    if cycles > MAX_CYCLES_PER_STEP * (1 + 1e-9):
        raise StepTooLarge(
            f"dt={run.dt:.3e} s covers {cycles:.4f} cycles of the fastest rate "
            f"({run.fastest_rate / (2 * np.pi):.4e} Hz); limit is {MAX_CYCLES_PER_STEP}"
        )
    if run.drive_frequency > 0 and run.duration < 10 * 2 * np.pi / run.drive_frequency:
        logger.warning("run of %.3e s covers fewer than 10 drive periods; spectra will be coarse", run.duration)


def propagate(state, run: RabiRun, t_start: float, n_steps: int, dt: float) -> np.ndarray:
    """Advance one state by n_steps of signed size dt; no sampling, no step check"""
    p = _BatchParams.from_runs([run])
    y = _as_array(state)[None, :].copy()
    for i in range(n_steps):
        y = _rk4_step(y, t_start + i * dt, dt, p)
    return y[0]


def integrate_batch(runs: Sequence[RabiRun]) -> Tuple[np.ndarray, np.ndarray]:
    """Integrate runs that share dt, duration and sample_stride

    Returns the sample times (n,) and states (n_runs, n, 3). Each run starts
    from its own initial state at t = 0.
    """
    if not runs:
        raise ValueError("no runs to integrate")
    first = runs[0]
    for run in runs:
        if (run.dt, run.n_steps, run.sample_stride) != (first.dt, first.n_steps, first.sample_stride):
            raise ValueError("batched runs must share dt, duration and sample_stride")
        check_step(run)

    dt, n_steps, stride = first.dt, first.n_steps, first.sample_stride
    p = _BatchParams.from_runs(runs)
    y = np.stack([_as_array(run.initial_state) for run in runs])
    n_samples = n_steps // stride + 1
    samples = np.empty((len(runs), n_samples, 3))
    samples[:, 0] = y
    for i in range(n_steps):
        y = _rk4_step(y, i * dt, dt, p)
        if (i + 1) % stride == 0:
            samples[:, (i + 1) // stride] = y
    times = np.arange(n_samples) * (stride * dt)
    logger.debug("integrated %d run(s): %d steps, %d samples", len(runs), n_steps, n_samples)
    return times, samples


def integrate_rabi(run: RabiRun) -> RabiTrace:
    """Fixed-step RK4 trajectory of one run, sampled every sample_stride steps"""
    times, samples = integrate_batch([run])
    return RabiTrace(times=times, states=samples[0])


def phase_averaged_trace(run: RabiRun, phases: Sequence[float] = DEFAULT_PHASES) -> RabiTrace:
    """Bloch trajectory averaged over modulation phases at the window start"""
    runs = [dataclasses.replace(run, phase=float(phase)) for phase in phases]
    times, samples = integrate_batch(runs)
    return RabiTrace(times=times, states=samples.mean(axis=0))


def halve_step_check(run: RabiRun) -> float:
    """Max |s_z| difference between integrations at dt and dt/2"""
    if run.n_steps == 0:
        return 0.0
    coarse = integrate_rabi(run)
    fine = integrate_rabi(dataclasses.replace(run, dt=run.dt / 2, sample_stride=2 * run.sample_stride))
    n = min(len(coarse.times), len(fine.times))
    return float(np.max(np.abs(coarse.sz[:n] - fine.sz[:n])))
