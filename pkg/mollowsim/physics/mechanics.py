#!/usr/bin/env python3
"""
Two-mode nanowire mechanics

Complex susceptibilities, the vectorial driven response, trajectory
synthesis and the thermal / zero-point displacement scales. Time dependence
follows δr(t) = Re(δr[Ω]·e^{−iΩt}), so a resonant mode lags the force by
+π/2 in arg χ.
"""

import logging
from typing import Sequence, Tuple

import numpy as np
from scipy import constants

from ..models import DriveSpec, ModeParams, PlanePhasor

logger = logging.getLogger(__name__)


def susceptibility(mode: ModeParams, omega) -> np.ndarray:
    """χ_m[Ω] = 1/[M_eff(Ω_m² − Ω² − iΩΓ_m)] in m/N"""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise ValueError("frequency must be >= 0")
    return 1.0 / (mode.m_eff * (mode.omega ** 2 - omega ** 2 - 1j * omega * mode.gamma))


def _mode_weights(modes: Sequence[ModeParams], drive: DriveSpec, omega) -> np.ndarray:
    """χ_m[Ω]·δF·e^{iφ}·(e_F·e_m), shape (..., n_modes)"""
    force = drive.force * np.exp(1j * drive.phase)
    return np.stack([susceptibility(mode, omega) * force * (drive.orientation @ mode.orientation)
                     for mode in modes], axis=-1)


def driven_response(modes: Sequence[ModeParams], drive: DriveSpec) -> PlanePhasor:
    """δr[Ω_d] = Σ_m χ_m[Ω_d]·(δF e^{iφ} e_F·e_m)·e_m"""
    weights = _mode_weights(modes, drive, drive.omega)
    orientations = np.stack([mode.orientation for mode in modes])
    return PlanePhasor(weights @ orientations)


def response_sweep(modes: Sequence[ModeParams], drive: DriveSpec, omegas) -> np.ndarray:
    """Driven response at each angular frequency, shape (n, 2) complex"""
    weights = _mode_weights(modes, drive, np.asarray(omegas, dtype=float))
    orientations = np.stack([mode.orientation for mode in modes])
    return weights @ orientations


def force_for_amplitude(modes: Sequence[ModeParams], drive: DriveSpec, amplitude: float) -> float:
    """Force magnitude giving |δr[Ω_d]| = amplitude for the drive's orientation and frequency"""
    if not amplitude >= 0:
        raise ValueError("amplitude must be >= 0")
    unit = DriveSpec(force=1.0, orientation=drive.orientation, omega=drive.omega, phase=drive.phase)
    compliance = driven_response(modes, unit).amplitude
    if compliance == 0:
        raise ValueError("drive orientation excites no mode")
    return amplitude / compliance


def trajectory_samples(phasor: PlanePhasor, omega: float, times) -> np.ndarray:
    """δr(t) = Re(δr[Ω_d]·e^{−iΩ_d t}), shape (n, 2) in m"""
    times = np.asarray(times, dtype=float)
    if times.size == 0:
        raise ValueError("times must be nonempty")
    carrier = np.exp(-1j * omega * times)
    return np.real(carrier[:, None] * phasor.components[None, :])


def ellipse_geometry(phasor: PlanePhasor) -> Tuple[float, float, float]:
    """Semi-major axis, semi-minor axis (m) and tilt of the major axis from e₁ (rad)"""
    z = phasor.components
    # δr(t) = Re(z)cos(Ωt) + Im(z)sin(Ωt); axes from the real 2x2 shape matrix
    shape = np.stack([z.real, z.imag], axis=1)
    u, s, _ = np.linalg.svd(shape)
    tilt = float(np.arctan2(u[1, 0], u[0, 0]))
    # axis direction is defined modulo π
    if tilt <= -np.pi / 2:
        tilt += np.pi
    elif tilt > np.pi / 2:
        tilt -= np.pi
    return float(s[0]), float(s[1]), tilt


def projected_amplitude(phasor: PlanePhasor, direction) -> float:
    """Amplitude of δr(t)·e, the half-length of the ellipse's shadow on e"""
    direction = np.asarray(direction, dtype=float)
    direction = direction / np.linalg.norm(direction)
    return abs(phasor.project(direction))


def thermal_spread(mode: ModeParams, temperature: float) -> float:
    """Δx_th = (k_B·T / M_eff·Ω_m²)^{1/2} in m"""
    if not temperature >= 0:
        raise ValueError("temperature must be >= 0")
    return float(np.sqrt(constants.k * temperature / (mode.m_eff * mode.omega ** 2)))


def zero_point(mode: ModeParams) -> float:
    """Δx_q = (ħ / 2·M_eff·Ω_m)^{1/2} in m"""
    return float(np.sqrt(constants.hbar / (2 * mode.m_eff * mode.omega)))


def thermal_psd(mode: ModeParams, temperature: float, frequencies) -> np.ndarray:
    """One-sided Brownian displacement PSD in m²/Hz; integrates to Δx_th² over f"""
    if not temperature >= 0:
        raise ValueError("temperature must be >= 0")
    chi = susceptibility(mode, 2 * np.pi * np.asarray(frequencies, dtype=float))
    return 4 * constants.k * temperature * mode.m_eff * mode.gamma * np.abs(chi) ** 2
