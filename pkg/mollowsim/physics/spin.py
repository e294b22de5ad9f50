#!/usr/bin/env python3
"""
Ground-state spin Hamiltonian of the NV qubit

H/h = D·S_z² + γ·B·S in the spin-1 basis (|+1>, |0>, |-1>) quantized along the
qubit axis. Diagonalization is batched over any stack of fields, so maps are
evaluated in one call.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..models import (Branch, CouplingVector, GridSpec, MagnetModel, PlaneSpec,
                      QubitModel, ScalarMap, WorkingPoint)
from .magnetostatics import dipole_field

logger = logging.getLogger(__name__)

_SQRT2 = np.sqrt(2.0)
SX = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex) / _SQRT2
SY = np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]], dtype=complex) / _SQRT2
SZ = np.diag([1.0, 0.0, -1.0]).astype(complex)

# row of each m_s state in the basis above
_ROW_PLUS, _ROW_ZERO, _ROW_MINUS = 0, 1, 2


def qubit_frame(axis) -> np.ndarray:
    """Rows (e_x', e_y', e_z') of a right-handed frame with e_z' along axis"""
    ez = np.asarray(axis, dtype=float)
    ez = ez / np.linalg.norm(ez)
    helper = np.array([1.0, 0.0, 0.0]) if abs(ez[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    ex = helper - (helper @ ez) * ez
    ex = ex / np.linalg.norm(ex)
    ey = np.cross(ez, ex)
    return np.stack([ex, ey, ez])


def hamiltonian(qubit: QubitModel, B) -> np.ndarray:
    """Stacked 3x3 Hamiltonians in Hz for fields of shape (..., 3)"""
    B = np.asarray(B, dtype=float)
    local = B @ qubit_frame(qubit.quantization_axis).T
    gamma = qubit.gyromagnetic_ratio
    H = qubit.zero_field_splitting * (SZ @ SZ)
    return (H
            + gamma * local[..., 0, None, None] * SX
            + gamma * local[..., 1, None, None] * SY
            + gamma * local[..., 2, None, None] * SZ)


def _take(arr: np.ndarray, index: np.ndarray) -> np.ndarray:
    return np.take_along_axis(arr, index[..., None], axis=-1)[..., 0]


def _diagonalize(qubit: QubitModel, B) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Energies of the states connected to |0>, |-1>, |+1> and the |0> population"""
    energies, vectors = np.linalg.eigh(hamiltonian(qubit, B))
    pop_zero = np.abs(vectors[..., _ROW_ZERO, :]) ** 2
    k_zero = np.asarray(np.argmax(pop_zero, axis=-1))
    pop_minus = np.abs(vectors[..., _ROW_MINUS, :]) ** 2
    pop_minus = np.where(np.arange(3) == k_zero[..., None], -1.0, pop_minus)
    k_minus = np.asarray(np.argmax(pop_minus, axis=-1))
    k_plus = 3 - k_zero - k_minus
    return (_take(energies, k_zero), _take(energies, k_minus),
            _take(energies, k_plus), _take(pop_zero, k_zero))


def spin_hamiltonian_frequencies(qubit: QubitModel, B) -> np.ndarray:
    """The two ESR transition frequencies (lower, upper) in Hz, shape (..., 2)"""
    B = np.asarray(B, dtype=float)
    if not np.all(np.isfinite(B)):
        raise ValueError("magnetic field must be finite")
    e_zero, e_minus, e_plus, _ = _diagonalize(qubit, B)
    transitions = np.stack([e_minus - e_zero, e_plus - e_zero], axis=-1)
    return np.sort(transitions, axis=-1)


def qubit_frequency(qubit: QubitModel, B) -> np.ndarray:
    """ω₀/2π in Hz on the configured branch"""
    e_zero, e_minus, e_plus, _ = _diagonalize(qubit, np.asarray(B, dtype=float))
    if qubit.branch is Branch.MINUS:
        return e_minus - e_zero
    return e_plus - e_zero


def readout_contrast(qubit: QubitModel, B) -> np.ndarray:
    """Quenching factor |<0~|0>|⁴ of the state adiabatically connected to m_s = 0"""
    B = np.asarray(B, dtype=float)
    if not np.all(np.isfinite(B)):
        raise ValueError("magnetic field must be finite")
    _, _, _, pop_zero = _diagonalize(qubit, B)
    return pop_zero ** 2


def lorentzian(detuning, linewidth: float) -> np.ndarray:
    """Unit-peak Lorentzian of full width at half maximum ``linewidth``"""
    half = linewidth / 2.0
    return half ** 2 / (np.asarray(detuning, dtype=float) ** 2 + half ** 2)


def qubit_frequency_map(qubit: QubitModel, magnet: MagnetModel,
                        plane: PlaneSpec, grid: GridSpec) -> ScalarMap:
    """ω₀(r)/2π over a scan plane"""
    B = dipole_field(magnet, grid.points(plane))
    return ScalarMap(plane=plane, grid=grid, values=qubit_frequency(qubit, B),
                     quantity='qubit_frequency', unit='Hz')


def contrast_map(qubit: QubitModel, magnet: MagnetModel,
                 plane: PlaneSpec, grid: GridSpec) -> ScalarMap:
    B = dipole_field(magnet, grid.points(plane))
    return ScalarMap(plane=plane, grid=grid, values=readout_contrast(qubit, B),
                     quantity='readout_contrast', unit='1')


def resonance_image(qubit: QubitModel, magnet: MagnetModel, plane: PlaneSpec, grid: GridSpec,
                    mw_frequency: float, linewidth: float, esr_contrast: float = 0.3,
                    base_rate: float = 1.0) -> ScalarMap:
    """Simulated fluorescence under one MW tone

    rate = R₀·[1 − C·L(ω₀ − ω_mw)]·Q with Q the readout contrast and the dip
    depth C limited to Q.
    """
    if not linewidth > 0:
        raise ValueError("linewidth must be > 0")
    B = dipole_field(magnet, grid.points(plane))
    quench = readout_contrast(qubit, B)
    depth = np.minimum(esr_contrast, quench)
    dip = lorentzian(qubit_frequency(qubit, B) - mw_frequency, linewidth)
    rate = base_rate * (1.0 - depth * dip) * quench
    return ScalarMap(plane=plane, grid=grid, values=rate,
                     quantity=f'fluorescence@{mw_frequency:.6e}Hz', unit='a.u.')


def esr_spectrum(qubit: QubitModel, B, frequencies, linewidth: float = 4e6,
                 esr_contrast: float = 0.3, base_rate: float = 1.0) -> np.ndarray:
    """CW-ESR fluorescence versus MW frequency with dips at both transitions"""
    if not linewidth > 0:
        raise ValueError("linewidth must be > 0")
    frequencies = np.asarray(frequencies, dtype=float)
    lower, upper = spin_hamiltonian_frequencies(qubit, B)
    quench = float(readout_contrast(qubit, B))
    depth = min(esr_contrast, quench)
    spectrum = ((1.0 - depth * lorentzian(frequencies - lower, linewidth))
                * (1.0 - depth * lorentzian(frequencies - upper, linewidth)))
    return base_rate * quench * spectrum


def _stencil_positions(r0: np.ndarray, basis: np.ndarray, step: float) -> np.ndarray:
    """r0 ± step·e_i, shape (..., 2 directions, 2 signs, 3)"""
    offsets = step * np.stack([basis, -basis], axis=1)
    return r0[..., None, None, :] + offsets


def coupling_vector_at(qubit: QubitModel, magnet: MagnetModel, r0=None,
                       basis: Sequence = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0)),
                       step: float = 10e-9) -> CouplingVector:
    """λ = ∇ω₀ projected on (e₁, e₂) by central differences, rad·s⁻¹/m"""
    if not step > 0:
        raise ValueError("step must be > 0")
    r0 = qubit.rest_position if r0 is None else np.asarray(r0, dtype=float)
    basis = np.asarray(basis, dtype=float)
    freqs = qubit_frequency(qubit, dipole_field(magnet, _stencil_positions(r0, basis, step)))
    gradient = 2 * np.pi * (freqs[:, 0] - freqs[:, 1]) / (2 * step)
    return CouplingVector(gradient)


def coupling_map(qubit: QubitModel, magnet: MagnetModel, plane: PlaneSpec, grid: GridSpec,
                 basis: Optional[Sequence] = None, step: float = 10e-9) -> np.ndarray:
    """Per-pixel coupling vector, shape (v_points, u_points, 2), rad·s⁻¹/m

    ``basis`` defaults to the scan plane's own (u, v) directions.
    """
    basis = np.stack([plane.u, plane.v]) if basis is None else np.asarray(basis, dtype=float)
    stencil = _stencil_positions(grid.points(plane), basis, step)
    freqs = qubit_frequency(qubit, dipole_field(magnet, stencil))
    return 2 * np.pi * (freqs[..., 0] - freqs[..., 1]) / (2 * step)


def equivalent_gradient(coupling: float, gyromagnetic_ratio: float) -> float:
    """Field gradient (T/m) that would give the angular coupling |λ|"""
    return abs(coupling) / (2 * np.pi * gyromagnetic_ratio)


def find_working_points(qubit: QubitModel, magnet: MagnetModel, plane: PlaneSpec,
                        grid: GridSpec, basis: Sequence, target_direction,
                        min_contrast: float = 0.9,
                        field_window: Tuple[float, float] = (40e-3, 60e-3),
                        step: float = 10e-9, limit: int = 10) -> List[WorkingPoint]:
    """Pixels with good readout and a field near the ESLAC, ranked by |λ·e_target|

    ``basis`` spans the oscillation plane; ``target_direction`` is a unit
    2-vector in that basis (usually the orientation of the driven mode).
    """
    points = grid.points(plane)
    B = dipole_field(magnet, points)
    field = np.linalg.norm(B, axis=-1)
    contrast = readout_contrast(qubit, B)
    couplings = coupling_map(qubit, magnet, plane, grid, basis=basis, step=step)
    target = np.asarray(target_direction, dtype=float)
    target = target / np.linalg.norm(target)
    projected = np.abs(couplings @ target)
    mask = (contrast >= min_contrast) & (field >= field_window[0]) & (field <= field_window[1])
    candidates = np.argwhere(mask)
    order = np.argsort(-projected[mask], kind='stable')[:limit]
    logger.debug("working point search: %d of %d pixels eligible", len(candidates), field.size)
    result = []
    for idx in order:
        row, col = candidates[idx]
        result.append(WorkingPoint(position=points[row, col], field=float(field[row, col]),
                                   contrast=float(contrast[row, col]),
                                   coupling=CouplingVector(couplings[row, col]),
                                   projected_coupling=float(projected[row, col])))
    return result
