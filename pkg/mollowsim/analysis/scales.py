#!/usr/bin/env python3
"""
Derived coupling scales

Single-phonon coupling, the thermal-motion equivalent modulation and the
minimum oscillation amplitude that resolves the triplet.
"""

from dataclasses import dataclass
from typing import List

import numpy as np

from ..errors import DivisionByZeroCoupling
from ..models import CouplingVector, ModeParams, QubitModel
from ..physics.mechanics import thermal_spread, zero_point
from ..physics.spin import equivalent_gradient


def _magnitude(coupling) -> float:
    if isinstance(coupling, CouplingVector):
        return coupling.magnitude
    return abs(float(coupling))


def quantum_coupling_rate(coupling, mode: ModeParams) -> float:
    """g_z = |λ|·Δx_q in rad/s"""
    return _magnitude(coupling) * zero_point(mode)


def thermal_modulation(coupling, mode: ModeParams, temperature: float) -> float:
    """δω₀^th = |λ|·Δx_th in rad/s"""
    return _magnitude(coupling) * thermal_spread(mode, temperature)


def mollow_resolution_length(decay_rate: float, coupling) -> float:
    """δr_Mollow = 2π·Γ_spin/|λ| in m, with Γ_spin in Hz and λ in rad·s⁻¹/m"""
    magnitude = _magnitude(coupling)
    if magnitude <= 0:
        raise DivisionByZeroCoupling("mollow resolution length needs |λ| > 0")
    return 2 * np.pi * decay_rate / magnitude


@dataclass
class ScaleRow:
    """One line of the derived-scales table"""
    name: str
    value: float
    unit: str
    reference: str = ''


def scales_table(qubit: QubitModel, mode: ModeParams, coupling, temperature: float) -> List[ScaleRow]:
    """All derived scales for one mode, in reporting units"""
    magnitude = _magnitude(coupling)
    return [
        ScaleRow('thermal_spread', thermal_spread(mode, temperature), 'm', '52 pm'),
        ScaleRow('zero_point', zero_point(mode), 'm', '36 fm'),
        ScaleRow('coupling_strength', magnitude / (2 * np.pi) * 1e-15, 'MHz/nm', '0.5 MHz/nm'),
        ScaleRow('equivalent_gradient', equivalent_gradient(magnitude, qubit.gyromagnetic_ratio), 'T/m',
                 '20000 T/m'),
        ScaleRow('thermal_modulation', thermal_modulation(magnitude, mode, temperature) / (2 * np.pi), 'Hz',
                 '25 kHz'),
        ScaleRow('mollow_resolution_length', mollow_resolution_length(qubit.decay_rate, magnitude), 'm',
                 '200 pm'),
        ScaleRow('quantum_coupling_rate', quantum_coupling_rate(magnitude, mode) / (2 * np.pi), 'Hz', ''),
    ]
