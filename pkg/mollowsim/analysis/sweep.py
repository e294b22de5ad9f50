#!/usr/bin/env python3
"""
Triplet recipes and the bimodal drive sweep

Each simulated point is an independent unit (one phase-averaged Rabi window)
handed to the SweepRunner; results come back in grid order.
"""

import dataclasses
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import signal

from ..models import (CouplingVector, DriveSpec, ModeParams, PlanePhasor, RabiRun, RabiTrace,
                      Spectrum, SweepPoint, TripletFit, TripletSettings)
from ..physics.dynamics import phase_averaged_trace
from ..physics.mechanics import ellipse_geometry, projected_amplitude, response_sweep
from ..runner import SweepRunner
from .spectral import detect_triplet, mollow_splitting, modulation_depth_sweep, rabi_spectrum

logger = logging.getLogger(__name__)

FORCE_POLICIES = ('constant', 'target_peak')


def simulate_triplet(run: RabiRun, settings: TripletSettings) -> Tuple[RabiTrace, Spectrum, TripletFit]:
    """Phase-averaged trace, its spectrum and the extracted triplet"""
    trace = phase_averaged_trace(run, settings.phases)
    spectrum = rabi_spectrum(trace.times, trace.sz, settings.pad_factor)
    fit = detect_triplet(spectrum, run.drive_frequency / (2 * np.pi), settings.search_band,
                         lock_tolerance=settings.lock_tolerance,
                         min_prominence=settings.min_prominence,
                         symmetry_tolerance=settings.symmetry_tolerance,
                         mirror_single_sideband=settings.mirror_single_sideband)
    return trace, spectrum, fit


def fit_unit(unit: Tuple[RabiRun, TripletSettings]) -> TripletFit:
    """Standalone worker function for multiprocessing"""
    run, settings = unit
    return simulate_triplet(run, settings)[2]


def _runner(runner: Optional[SweepRunner]) -> SweepRunner:
    return runner if runner is not None else SweepRunner(max_workers=1)


def triplet_scan(template: RabiRun, depths: Sequence[float], settings: TripletSettings,
                 runner: Optional[SweepRunner] = None) -> List[TripletFit]:
    """Triplet fit for each modulation depth δω₀ (rad/s) at fixed Ω_R, Ω_d"""
    units = [(dataclasses.replace(template, modulation_depth=float(depth)), settings) for depth in depths]
    return _runner(runner).map(fit_unit, units)


def detuning_scan(template: RabiRun, detunings: Sequence[float], settings: TripletSettings,
                  runner: Optional[SweepRunner] = None) -> List[TripletFit]:
    """Triplet fit for each Rabi detuning Ω_R − Ω_d (rad/s) at fixed Ω_d, δω₀

    Detuning leaves one phase-averaged sideband below the prominence
    threshold, so the strong one is always mirrored through the center here.
    """
    settings = dataclasses.replace(settings, mirror_single_sideband=True)
    units = [(dataclasses.replace(template, rabi_frequency=template.drive_frequency + float(d)), settings)
             for d in detunings]
    return _runner(runner).map(fit_unit, units)


def _coupling_orientation(coupling) -> Optional[np.ndarray]:
    vector = coupling.vector if isinstance(coupling, CouplingVector) else np.asarray(coupling, dtype=float)
    norm = np.linalg.norm(vector)
    return vector / norm if norm > 0 else None


def bimodal_sweep(modes: Sequence[ModeParams], drive: DriveSpec, coupling: CouplingVector,
                  drive_frequencies: Sequence[float], force_policy: str = 'constant',
                  target_depth: Optional[float] = None, rabi_detuning: float = 0.0,
                  template: Optional[RabiRun] = None, settings: Optional[TripletSettings] = None,
                  runner: Optional[SweepRunner] = None, simulate_every: int = 1) -> List[SweepPoint]:
    """Modulation depth and predicted sidebands across a drive-frequency grid (Hz)

    The force keeps the orientation and phase of ``drive``. With the
    ``target_peak`` policy its magnitude is rescaled so the largest δω₀/2π on
    the grid equals ``target_depth`` (Hz). Each point also carries the
    trajectory ellipse and its shadow on e_λ. Ω_R tracks the drive,
    Ω_R = Ω_d + 2π·rabi_detuning. Passing a RabiRun ``template`` also runs the
    full Bloch simulation on every ``simulate_every``-th point and attaches
    its TripletFit; the template only contributes dt, duration, decay rates
    and the initial state.
    """
    if force_policy not in FORCE_POLICIES:
        raise ValueError(f"force_policy must be one of {FORCE_POLICIES}, got {force_policy!r}")
    frequencies = np.asarray(drive_frequencies, dtype=float)
    if frequencies.ndim != 1 or frequencies.size == 0 or np.any(frequencies <= 0):
        raise ValueError("drive frequencies must be a nonempty list of positive values")

    omegas = 2 * np.pi * frequencies
    depths = modulation_depth_sweep(modes, drive, coupling, omegas) / (2 * np.pi)
    phasors = response_sweep(modes, drive, omegas)
    if force_policy == 'target_peak':
        if target_depth is None or not target_depth > 0:
            raise ValueError("target_peak policy needs a positive target_depth")
        peak = depths.max()
        if peak == 0:
            raise ValueError("drive does not modulate the qubit anywhere on the grid")
        depths = depths * (target_depth / peak)
        phasors = phasors * (target_depth / peak)

    e_lambda = _coupling_orientation(coupling)
    points = []
    for f_d, depth, components in zip(frequencies, depths, phasors):
        splitting = mollow_splitting(f_d, f_d + rabi_detuning, depth)
        phasor = PlanePhasor(components)
        semi_major, semi_minor, tilt = ellipse_geometry(phasor)
        shadow = projected_amplitude(phasor, e_lambda) if e_lambda is not None else 0.0
        points.append(SweepPoint(drive_frequency=float(f_d), modulation_depth=float(depth),
                                 sideband_lo=f_d - splitting, sideband_hi=f_d + splitting,
                                 semi_major=semi_major, semi_minor=semi_minor, tilt=tilt,
                                 projected_amplitude=shadow))

    if template is not None:
        settings = settings or TripletSettings()
        if simulate_every < 1:
            raise ValueError("simulate_every must be >= 1")
        simulated = points[::simulate_every]
        units = []
        for point in simulated:
            omega_d = 2 * np.pi * point.drive_frequency
            run = dataclasses.replace(template, drive_frequency=omega_d,
                                      rabi_frequency=omega_d + 2 * np.pi * rabi_detuning,
                                      modulation_depth=2 * np.pi * point.modulation_depth)
            units.append((run, settings))
        fits = _runner(runner).map(fit_unit, units)
        for point, fit in zip(simulated, fits):
            point.fit = fit
        logger.debug("simulated %d of %d sweep points", len(simulated), len(points))
    return points


def sweep_maxima(points: Sequence[SweepPoint]) -> np.ndarray:
    """Drive frequencies (Hz) of the interior local maxima of δω₀ along the sweep"""
    depths = np.array([p.modulation_depth for p in points])
    peaks, _ = signal.find_peaks(depths)
    return np.array([points[i].drive_frequency for i in peaks])
