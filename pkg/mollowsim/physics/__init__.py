"""
Physical models: magnet field, NV spin, nanowire mechanics and Bloch dynamics
"""

from .magnetostatics import calibrate_moment, dipole_field, dipole_gradient, field_map
from .spin import (coupling_vector_at, qubit_frequency_map, readout_contrast,
                   resonance_image, spin_hamiltonian_frequencies)
from .mechanics import driven_response, susceptibility, thermal_spread, trajectory_samples, zero_point
from .dynamics import halve_step_check, integrate_rabi, phase_averaged_trace

__all__ = ['calibrate_moment', 'dipole_field', 'dipole_gradient', 'field_map',
           'coupling_vector_at', 'qubit_frequency_map', 'readout_contrast', 'resonance_image',
           'spin_hamiltonian_frequencies', 'driven_response', 'susceptibility', 'thermal_spread',
           'trajectory_samples', 'zero_point', 'halve_step_check', 'integrate_rabi',
           'phase_averaged_trace']
