"""
Spectral analysis, derived scales and sweep recipes
"""

from .spectral import detect_triplet, linear_fit, modulation_depth, mollow_splitting, rabi_spectrum
from .scales import mollow_resolution_length, quantum_coupling_rate, thermal_modulation
from .sweep import bimodal_sweep, detuning_scan, triplet_scan

__all__ = ['detect_triplet', 'linear_fit', 'modulation_depth', 'mollow_splitting', 'rabi_spectrum',
           'mollow_resolution_length', 'quantum_coupling_rate', 'thermal_modulation',
           'bimodal_sweep', 'detuning_scan', 'triplet_scan']
