#!/usr/bin/env python3
"""
Spectral analysis of Rabi traces

FFT magnitude spectra, triplet extraction with sub-bin peak refinement, the
dressed-state splitting law and the vectorial modulation depth.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import signal, stats

from ..errors import NonUniformSampling, PeaksNotFound
from ..models import CouplingVector, DriveSpec, ModeParams, Spectrum, TripletFit, TripletQuality
from ..physics.mechanics import driven_response, susceptibility

logger = logging.getLogger(__name__)

MIN_SAMPLES = 64


def rabi_spectrum(times, values, pad_factor: int = 8) -> Spectrum:
    """One-sided |DFT| of the mean-subtracted series, zero padded by pad_factor

    Rectangular window; magnitude normalised by the number of samples.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if times.shape != values.shape or times.ndim != 1:
        raise NonUniformSampling("times and values must be 1-D arrays of equal length")
    n = len(values)
    if n < MIN_SAMPLES:
        raise NonUniformSampling(f"need at least {MIN_SAMPLES} samples, got {n}")
    steps = np.diff(times)
    dt = steps[0]
    if not dt > 0 or np.max(np.abs(steps - dt)) > 1e-6 * dt:
        raise NonUniformSampling("time series is not uniformly sampled")
    if pad_factor < 1:
        raise ValueError("pad_factor must be >= 1")

    n_fft = int(pad_factor) * n
    centered = values - values.mean()
    magnitude = np.abs(np.fft.rfft(centered, n=n_fft)) / n
    frequencies = np.fft.rfftfreq(n_fft, d=dt)
    return Spectrum(frequencies=frequencies, magnitude=magnitude)


def _refine(frequencies: np.ndarray, magnitude: np.ndarray, i: int) -> Tuple[float, float]:
    """3-point quadratic interpolation around bin i"""
    if i <= 0 or i >= len(magnitude) - 1:
        return float(frequencies[i]), float(magnitude[i])
    a, b, c = magnitude[i - 1], magnitude[i], magnitude[i + 1]
    denom = a - 2.0 * b + c
    if denom == 0:
        return float(frequencies[i]), float(b)
    p = 0.5 * (a - c) / denom
    df = frequencies[1] - frequencies[0]
    return float(frequencies[i] + p * df), float(b - 0.25 * (a - c) * p)


def find_spectral_peaks(spectrum: Spectrum, f_min: float, f_max: float,
                        min_prominence: float = 0.02) -> List[Tuple[float, float]]:
    """Refined (frequency, amplitude) of local maxima in [f_min, f_max]

    Peaks must stand out by ``min_prominence`` times the band maximum.
    """
    freqs, mag = spectrum.frequencies, spectrum.magnitude
    band = np.flatnonzero((freqs >= f_min) & (freqs <= f_max))
    if band.size < 3:
        return []
    peak_max = float(mag[band].max())
    if peak_max <= 0:
        return []
    local, _ = signal.find_peaks(mag[band], prominence=min_prominence * peak_max)
    return [_refine(freqs, mag, int(band[0] + i)) for i in local]


def detect_triplet(spectrum: Spectrum, drive_frequency: float, search_band: float,
                   lock_tolerance: Optional[float] = None, min_prominence: float = 0.02,
                   symmetry_tolerance: float = 0.1, mirror_single_sideband: bool = False,
                   strict: bool = False) -> TripletFit:
    """Locate the central line near Ω_d and the strongest symmetric sideband pair

    ``search_band`` is the half-width (Hz) of the window around Ω_d. The center
    is the local maximum nearest Ω_d if it lies within ``lock_tolerance``
    (default eight sub-bins). Without a symmetric pair the fit is
    ``peaks_not_found`` with separation 0, unless ``mirror_single_sideband``
    is set: then the strongest sideband next to a locked center is mirrored
    through it (quality ``mirrored``). With ``strict`` an unresolved triplet
    raises PeaksNotFound instead.
    """
    freqs = spectrum.frequencies
    if drive_frequency - search_band < freqs[0] or drive_frequency + search_band > freqs[-1]:
        raise ValueError("search band extends outside the spectrum support")
    resolution = spectrum.resolution
    if lock_tolerance is None:
        lock_tolerance = 8 * resolution

    peaks = find_spectral_peaks(spectrum, drive_frequency - search_band,
                                drive_frequency + search_band, min_prominence)
    center: Optional[Tuple[float, float]] = None
    if peaks:
        nearest = min(peaks, key=lambda pk: abs(pk[0] - drive_frequency))
        if abs(nearest[0] - drive_frequency) <= lock_tolerance:
            center = nearest
    reference = center[0] if center else drive_frequency
    sides = [pk for pk in peaks if pk is not center]
    lower = [pk for pk in sides if pk[0] < reference]
    upper = [pk for pk in sides if pk[0] > reference]

    best = None
    for lo in lower:
        for hi in upper:
            off_lo, off_hi = reference - lo[0], hi[0] - reference
            slack = symmetry_tolerance * max(off_lo, off_hi) + 2 * resolution
            if abs(off_hi - off_lo) <= slack:
                score = lo[1] + hi[1]
                if best is None or score > best[0]:
                    best = (score, lo, hi)

    center_amp = center[1] if center else 0.0
    if best is not None:
        _, lo, hi = best
        quality = TripletQuality.OK if center else TripletQuality.NO_CENTER
        return TripletFit(center=reference, separation=hi[0] - lo[0], lower=lo[0], upper=hi[0],
                          amplitudes=(lo[1], center_amp, hi[1]), quality=quality)

    if mirror_single_sideband and center and sides:
        strongest = max(sides, key=lambda pk: pk[1])
        offset = abs(strongest[0] - reference)
        lo_amp = strongest[1] if strongest[0] < reference else 0.0
        hi_amp = strongest[1] if strongest[0] > reference else 0.0
        return TripletFit(center=reference, separation=2 * offset, lower=reference - offset,
                          upper=reference + offset, amplitudes=(lo_amp, center_amp, hi_amp),
                          quality=TripletQuality.MIRRORED)

    if strict:
        raise PeaksNotFound(
            f"fewer than three resolvable maxima within ±{search_band:.3e} Hz of {drive_frequency:.6e} Hz"
        )
    logger.debug("no triplet near %.6e Hz (%d peaks in band)", drive_frequency, len(peaks))
    return TripletFit(center=reference, separation=0.0, lower=reference, upper=reference,
                      amplitudes=(0.0, center_amp, 0.0), quality=TripletQuality.PEAKS_NOT_FOUND)


def mollow_splitting(drive_frequency: float, rabi_frequency: float, modulation_depth: float) -> float:
    """Δ_Mollow = ((Ω_d − Ω_R)² + δω₀²/4)^{1/2}, in the units of the inputs

    Sidebands sit at Ω_d ± Δ_Mollow; the full separation is 2·Δ_Mollow.
    """
    return float(np.sqrt((drive_frequency - rabi_frequency) ** 2 + modulation_depth ** 2 / 4.0))


def _coupling_array(coupling) -> np.ndarray:
    if isinstance(coupling, CouplingVector):
        return coupling.vector
    return np.asarray(coupling, dtype=float).reshape(2)


def modulation_depth_sweep(modes: Sequence[ModeParams], drive: DriveSpec, coupling, omegas) -> np.ndarray:
    """δω₀[Ω] = |Σ_m χ_m[Ω]·(δF·e_m)·(e_m·λ)| in rad/s for each Ω"""
    lam = _coupling_array(coupling)
    omegas = np.asarray(omegas, dtype=float)
    force = drive.force * np.exp(1j * drive.phase)
    total = np.zeros(omegas.shape, dtype=complex)
    for mode in modes:
        total = total + (susceptibility(mode, omegas) * force
                         * (drive.orientation @ mode.orientation) * (mode.orientation @ lam))
    return np.abs(total)


def modulation_depth(modes: Sequence[ModeParams], drive: DriveSpec, coupling) -> float:
    """Parametric modulation depth at the drive frequency, rad/s"""
    return float(modulation_depth_sweep(modes, drive, coupling, drive.omega))


def projected_modulation(modes: Sequence[ModeParams], drive: DriveSpec, coupling) -> float:
    """|δr[Ω_d]·λ| computed from the driven phasor (identical to modulation_depth)"""
    return abs(driven_response(modes, drive).project(_coupling_array(coupling)))


def linear_fit(x, y) -> Tuple[float, float, float]:
    """Least-squares slope, intercept and r²"""
    result = stats.linregress(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    return float(result.slope), float(result.intercept), float(result.rvalue ** 2)
