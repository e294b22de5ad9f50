#!/usr/bin/env python3
"""
Data Models for the hybrid spin-oscillator simulator

Shared data classes for the magnet, qubit, mechanical modes, Bloch dynamics
and spectral analysis. SI units throughout; angular quantities in rad/s
unless a field name ends in ``_hz``.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional, Tuple

import numpy as np

from .errors import GridSpecError

# T·m/A, exact by construction of the dipole formula used here
MU0_OVER_4PI = 1e-7
MU0 = 4 * np.pi * MU0_OVER_4PI


def _vector(value, size: int, name: str, dtype=float) -> np.ndarray:
    arr = np.asarray(value, dtype=dtype).reshape(-1)
    if arr.shape != (size,):
        raise ValueError(f"{name} must have {size} components, got shape {np.shape(value)}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    return arr


def _unit(value, size: int, name: str) -> np.ndarray:
    arr = _vector(value, size, name)
    norm = np.linalg.norm(arr)
    if norm == 0:
        raise ValueError(f"{name} must be a nonzero direction")
    return arr / norm


@dataclass
class MagnetModel:
    """Point dipole at the center of a hard magnetic sphere"""
    moment: np.ndarray
    position: np.ndarray = field(default_factory=lambda: np.zeros(3))
    radius: float = 9e-6

    def __post_init__(self):
        self.moment = _vector(self.moment, 3, 'moment')
        self.position = _vector(self.position, 3, 'position')
        if not self.radius > 0:
            raise ValueError(f"radius must be > 0, got {self.radius}")


class Branch(str, Enum):
    """Which ESR transition defines the qubit frequency"""
    MINUS = 'minus'   # m_s = 0 -> -1
    PLUS = 'plus'     # m_s = 0 -> +1


@dataclass
class QubitModel:
    """Ground-state spin-1 qubit with a single addressed transition"""
    zero_field_splitting: float = 2.870e9
    gyromagnetic_ratio: float = 28.0e9
    quantization_axis: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))
    branch: Branch = Branch.MINUS
    rest_position: np.ndarray = field(default_factory=lambda: np.zeros(3))
    decay_rate: float = 100e3

    def __post_init__(self):
        if not self.zero_field_splitting > 0:
            raise ValueError("zero_field_splitting must be > 0")
        if not self.gyromagnetic_ratio > 0:
            raise ValueError("gyromagnetic_ratio must be > 0")
        if not self.decay_rate >= 0:
            raise ValueError("decay_rate must be >= 0")
        self.quantization_axis = _unit(self.quantization_axis, 3, 'quantization_axis')
        self.rest_position = _vector(self.rest_position, 3, 'rest_position')
        self.branch = Branch(self.branch)


@dataclass
class CouplingVector:
    """In-plane gradient of the qubit angular frequency, rad·s⁻¹/m"""
    vector: np.ndarray

    def __post_init__(self):
        self.vector = _vector(self.vector, 2, 'coupling vector')

    @classmethod
    def from_mhz_per_nm(cls, magnitude: float, angle: float) -> 'CouplingVector':
        """Build from |λ|/2π in MHz/nm and the in-plane angle from e₁ (rad)"""
        scale = 2 * np.pi * magnitude * 1e15
        return cls(scale * np.array([np.cos(angle), np.sin(angle)]))

    @property
    def magnitude(self) -> float:
        return float(np.linalg.norm(self.vector))

    @property
    def orientation(self) -> np.ndarray:
        norm = self.magnitude
        if norm == 0:
            return np.zeros(2)
        return self.vector / norm

    @property
    def mhz_per_nm(self) -> float:
        """|λ|/2π expressed in MHz/nm"""
        return self.magnitude / (2 * np.pi) * 1e-15


@dataclass
class PlaneSpec:
    """Scan plane: origin plus two orthonormal in-plane directions"""
    origin: np.ndarray
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        self.origin = _vector(self.origin, 3, 'plane origin')
        self.u = _unit(self.u, 3, 'plane u')
        self.v = _unit(self.v, 3, 'plane v')
        if abs(float(self.u @ self.v)) > 1e-9:
            raise ValueError("plane directions u and v must be orthogonal")


@dataclass
class GridSpec:
    """Rectangular grid of in-plane coordinates (m), row-major over v then u"""
    u_min: float
    u_max: float
    u_points: int
    v_min: float
    v_max: float
    v_points: int

    def __post_init__(self):
        if self.u_points < 2 or self.v_points < 2:
            raise GridSpecError(
                f"grid needs at least 2x2 points, got {self.u_points}x{self.v_points}"
            )
        if not (self.u_max > self.u_min and self.v_max > self.v_min):
            raise GridSpecError("grid extents must satisfy max > min")

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.v_points, self.u_points)

    def axes(self) -> Tuple[np.ndarray, np.ndarray]:
        return (np.linspace(self.u_min, self.u_max, self.u_points),
                np.linspace(self.v_min, self.v_max, self.v_points))

    def points(self, plane: PlaneSpec) -> np.ndarray:
        """Lab-frame positions, shape (v_points, u_points, 3)"""
        us, vs = self.axes()
        uu, vv = np.meshgrid(us, vs)
        return plane.origin + uu[..., None] * plane.u + vv[..., None] * plane.v


@dataclass
class FieldMap:
    """Vector map over a scan grid (field in T or any 3-vector quantity)"""
    plane: PlaneSpec
    grid: GridSpec
    points: np.ndarray
    values: np.ndarray


@dataclass
class ScalarMap:
    """Scalar map over a scan grid"""
    plane: PlaneSpec
    grid: GridSpec
    values: np.ndarray
    quantity: str
    unit: str


@dataclass
class WorkingPoint:
    """Candidate qubit rest position ranked by projected coupling"""
    position: np.ndarray
    field: float
    contrast: float
    coupling: CouplingVector
    projected_coupling: float


@dataclass
class ModeParams:
    """One flexural eigenmode of the nanowire"""
    omega: float
    gamma: float
    m_eff: float
    orientation: np.ndarray

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError("mode frequency must be > 0")
        if not self.gamma > 0:
            raise ValueError("mode damping must be > 0")
        if not self.m_eff > 0:
            raise ValueError("m_eff must be > 0")
        self.orientation = _unit(self.orientation, 2, 'mode orientation')

    @classmethod
    def from_hz(cls, frequency: float, damping: float, m_eff: float, angle: float) -> 'ModeParams':
        """Mode from config units: frequency and damping in Hz, angle from e₁ in rad"""
        return cls(omega=2 * np.pi * frequency,
                   gamma=2 * np.pi * damping,
                   m_eff=m_eff,
                   orientation=np.array([np.cos(angle), np.sin(angle)]))

    @property
    def frequency(self) -> float:
        return self.omega / (2 * np.pi)


@dataclass
class DriveSpec:
    """Coherent force applied in the oscillation plane"""
    force: float
    orientation: np.ndarray
    omega: float
    phase: float = 0.0

    def __post_init__(self):
        if not self.force >= 0:
            raise ValueError("drive force must be >= 0")
        if not self.omega >= 0:
            raise ValueError("drive frequency must be >= 0")
        self.orientation = _unit(self.orientation, 2, 'drive orientation')


@dataclass
class PlanePhasor:
    """Complex in-plane displacement δr[Ω] on the (e₁, e₂) basis, m"""
    components: np.ndarray

    def __post_init__(self):
        self.components = _vector(self.components, 2, 'phasor', dtype=complex)

    def project(self, vector: np.ndarray) -> complex:
        return complex(self.components @ np.asarray(vector, dtype=float))

    @property
    def amplitude(self) -> float:
        return float(np.linalg.norm(self.components))


@dataclass
class BlochState:
    """Qubit expectation values (s_x, s_y, s_z)"""
    sx: float = 0.0
    sy: float = 0.0
    sz: float = 1.0

    def as_array(self) -> np.ndarray:
        return np.array([self.sx, self.sy, self.sz], dtype=float)

    @property
    def norm(self) -> float:
        return float(np.sqrt(self.sx ** 2 + self.sy ** 2 + self.sz ** 2))


@dataclass
class RabiRun:
    """One rotating-frame Rabi window under parametric modulation

    Rates are angular (rad/s) except ``decay_rate`` which is Γ_spin in Hz.
    ``relaxation_rate``/``dephasing_rate`` override Γ₁/Γ₂ (rad/s); both
    default to 2π·Γ_spin.
    """
    rabi_frequency: float
    drive_frequency: float
    modulation_depth: float = 0.0
    detuning: float = 0.0
    phase: float = 0.0
    decay_rate: float = 0.0
    duration: float = 10e-6
    dt: float = 1e-9
    sample_stride: int = 1
    initial_state: BlochState = field(default_factory=BlochState)
    relaxation_rate: Optional[float] = None
    dephasing_rate: Optional[float] = None
    equilibrium_sz: float = 1.0

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be > 0")
        if not self.duration >= 0:
            raise ValueError("duration must be >= 0")
        if self.sample_stride < 1:
            raise ValueError("sample_stride must be >= 1")

    @property
    def gamma1(self) -> float:
        if self.relaxation_rate is not None:
            return self.relaxation_rate
        return 2 * np.pi * self.decay_rate

    @property
    def gamma2(self) -> float:
        if self.dephasing_rate is not None:
            return self.dephasing_rate
        return 2 * np.pi * self.decay_rate

    @property
    def n_steps(self) -> int:
        return int(round(self.duration / self.dt))

    @property
    def fastest_rate(self) -> float:
        return max(abs(self.rabi_frequency), abs(self.drive_frequency),
                   abs(self.modulation_depth), abs(self.detuning))


@dataclass
class RabiTrace:
    """Sampled Bloch trajectory; states has shape (n_samples, 3)"""
    times: np.ndarray
    states: np.ndarray

    @property
    def sx(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def sy(self) -> np.ndarray:
        return self.states[:, 1]

    @property
    def sz(self) -> np.ndarray:
        return self.states[:, 2]


@dataclass
class Spectrum:
    """One-sided magnitude spectrum on a uniform frequency grid (Hz)"""
    frequencies: np.ndarray
    magnitude: np.ndarray

    @property
    def resolution(self) -> float:
        return float(self.frequencies[1] - self.frequencies[0])


class TripletQuality(str, Enum):
    OK = 'ok'
    MIRRORED = 'mirrored'
    NO_CENTER = 'no_center'
    PEAKS_NOT_FOUND = 'peaks_not_found'


@dataclass
class TripletFit:
    """Extracted triplet features, frequencies in Hz"""
    center: float
    separation: float
    lower: float
    upper: float
    amplitudes: Tuple[float, float, float]
    quality: TripletQuality = TripletQuality.OK

    @property
    def resolved(self) -> bool:
        return self.quality is not TripletQuality.PEAKS_NOT_FOUND


@dataclass
class TripletSettings:
    """Spectrum and peak-search parameters, frequencies in Hz"""
    pad_factor: int = 8
    search_band: float = 3e6
    lock_tolerance: Optional[float] = None
    min_prominence: float = 0.02
    symmetry_tolerance: float = 0.1
    mirror_single_sideband: bool = False
    phases: Tuple[float, ...] = (0.0, np.pi / 2, np.pi, 3 * np.pi / 2)

    def __post_init__(self):
        if self.pad_factor < 1:
            raise ValueError("pad_factor must be >= 1")
        if not self.search_band > 0:
            raise ValueError("search_band must be > 0")
        if not self.phases:
            raise ValueError("at least one modulation phase is needed")
        self.phases = tuple(float(p) for p in self.phases)


@dataclass
class SweepPoint:
    """One drive frequency of the bimodal sweep"""
    drive_frequency: float
    modulation_depth: float
    sideband_lo: float
    sideband_hi: float
    semi_major: float = 0.0
    semi_minor: float = 0.0
    tilt: float = 0.0
    projected_amplitude: float = 0.0
    fit: Optional[TripletFit] = None


@dataclass
class RunManifest:
    """Provenance of one CLI invocation"""
    config_hash: str
    tool_version: str
    subcommand: str
    input_digests: Dict[str, str] = field(default_factory=dict)
    outputs: Dict[str, str] = field(default_factory=dict)
    started: str = ''
    finished: str = ''
