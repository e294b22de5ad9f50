#!/usr/bin/env python3
"""
Configuration for mollowsim

JSON config files map onto one dataclass per section. Every value is given in
Hz, m, s, K, T or N (angles in degrees); radian conversion happens when the
section builds its domain objects. Loading collects every violation before
failing, so one run reports all problems at once.
"""

import json
import logging
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from .analysis.spectral import modulation_depth as spectral_depth
from .errors import ParseError, ValidationError
from .models import (BlochState, Branch, CouplingVector, DriveSpec, GridSpec, MagnetModel,
                     ModeParams, PlaneSpec, QubitModel, RabiRun, TripletSettings)
from .physics.magnetostatics import calibrate_moment, moment_for_field
from .physics.mechanics import force_for_amplitude
from .physics.spin import coupling_vector_at
from .utils import get_digest, load_json_file, to_jsonable

logger = logging.getLogger(__name__)

# qubit sits on the magnet axis where the dipole of the default sphere gives 50 mT
DEFAULT_STANDOFF = 2.3871e-5

Violations = List[Tuple[str, str]]


def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _check_number(violations: Violations, path: str, value, minimum: Optional[float] = None,
                  strict: bool = False, optional: bool = False) -> bool:
    if value is None and optional:
        return True
    if not _is_number(value) or not np.isfinite(value):
        violations.append((path, f"must be a finite number, got {value!r}"))
        return False
    if minimum is not None:
        if strict and not value > minimum:
            violations.append((path, f"must be > {minimum:g}, got {value!r}"))
            return False
        if not strict and not value >= minimum:
            violations.append((path, f"must be >= {minimum:g}, got {value!r}"))
            return False
    return True


def _check_int(violations: Violations, path: str, value, minimum: int) -> bool:
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        violations.append((path, f"must be an integer >= {minimum}, got {value!r}"))
        return False
    return True


def _check_vector(violations: Violations, path: str, value, size: int = 3,
                  nonzero: bool = False, optional: bool = False) -> bool:
    if value is None and optional:
        return True
    if (not isinstance(value, list) or len(value) != size
            or not all(_is_number(v) and np.isfinite(v) for v in value)):
        violations.append((path, f"must be a list of {size} finite numbers, got {value!r}"))
        return False
    if nonzero and not any(value):
        violations.append((path, "must be a nonzero direction"))
        return False
    return True


def _check_choice(violations: Violations, path: str, value, choices) -> bool:
    if value not in choices:
        violations.append((path, f"must be one of {list(choices)}, got {value!r}"))
        return False
    return True


def _check_list(violations: Violations, path: str, value, minimum: Optional[float] = None) -> bool:
    if not isinstance(value, list) or not value:
        violations.append((path, "must be a nonempty list of numbers"))
        return False
    ok = True
    for i, item in enumerate(value):
        ok = _check_number(violations, f"{path}[{i}]", item, minimum=minimum) and ok
    return ok


def _build(cls, data, path: str, violations: Violations):
    """Instantiate a section dataclass, rejecting unknown keys"""
    if data is None:
        return cls()
    if not isinstance(data, dict):
        violations.append((path, f"must be an object, got {type(data).__name__}"))
        return cls()
    names = {f.name for f in fields(cls)}
    for key in data:
        if key not in names:
            violations.append((f"{path}.{key}", "unknown key"))
    return cls(**{k: v for k, v in data.items() if k in names})


@dataclass
class MagnetSection:
    """Hard magnetic sphere; moment explicit, fitted to target_field, or from remanence"""
    radius: float = 9e-6
    remanence: float = 1.4
    easy_axis: List[float] = field(default_factory=lambda: [0.0, 0.0, 1.0])
    position: List[float] = field(default_factory=lambda: [0.0, 0.0, 0.0])
    moment: Optional[List[float]] = None
    target_field: Optional[float] = None

    def validate(self, path: str, violations: Violations):
        _check_number(violations, f"{path}.radius", self.radius, 0, strict=True)
        _check_number(violations, f"{path}.remanence", self.remanence, 0)
        _check_vector(violations, f"{path}.easy_axis", self.easy_axis, nonzero=True)
        _check_vector(violations, f"{path}.position", self.position)
        _check_vector(violations, f"{path}.moment", self.moment, optional=True)
        _check_number(violations, f"{path}.target_field", self.target_field, 0, strict=True, optional=True)
        if self.moment is not None and self.target_field is not None:
            violations.append((path, "give either moment or target_field, not both"))


@dataclass
class QubitSection:
    zero_field_splitting: float = 2.870e9
    gyromagnetic_ratio: float = 28.0e9
    quantization_axis: List[float] = field(default_factory=lambda: [0.0, 0.0, 1.0])
    branch: str = 'minus'
    rest_position: List[float] = field(default_factory=lambda: [0.0, 0.0, DEFAULT_STANDOFF])
    decay_rate: float = 100e3
    esr_contrast: float = 0.3
    linewidth: float = 4e6

    def validate(self, path: str, violations: Violations):
        _check_number(violations, f"{path}.zero_field_splitting", self.zero_field_splitting, 0, strict=True)
        _check_number(violations, f"{path}.gyromagnetic_ratio", self.gyromagnetic_ratio, 0, strict=True)
        _check_vector(violations, f"{path}.quantization_axis", self.quantization_axis, nonzero=True)
        _check_choice(violations, f"{path}.branch", self.branch, [b.value for b in Branch])
        _check_vector(violations, f"{path}.rest_position", self.rest_position)
        _check_number(violations, f"{path}.decay_rate", self.decay_rate, 0)
        if _check_number(violations, f"{path}.esr_contrast", self.esr_contrast, 0) and self.esr_contrast > 1:
            violations.append((f"{path}.esr_contrast", "must be <= 1"))
        _check_number(violations, f"{path}.linewidth", self.linewidth, 0, strict=True)


@dataclass
class ModeSection:
    """One flexural mode; m_eff falls back to the shared mechanics.m_eff"""
    frequency: Optional[float] = None
    damping: Optional[float] = None
    angle_deg: float = 0.0
    m_eff: Optional[float] = None

    def validate(self, path: str, violations: Violations):
        _check_number(violations, f"{path}.frequency", self.frequency, 0, strict=True)
        _check_number(violations, f"{path}.damping", self.damping, 0, strict=True)
        _check_number(violations, f"{path}.angle_deg", self.angle_deg)
        _check_number(violations, f"{path}.m_eff", self.m_eff, 0, strict=True, optional=True)


def _default_modes() -> List[ModeSection]:
    return [ModeSection(frequency=5.99e6, damping=180e3, angle_deg=0.0),
            ModeSection(frequency=6.29e6, damping=190e3, angle_deg=90.0)]


@dataclass
class MechanicsSection:
    m_eff: float = 1e-15
    temperature: float = 300.0
    plane_basis: List[List[float]] = field(default_factory=lambda: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    modes: List[ModeSection] = field(default_factory=_default_modes)

    def validate(self, path: str, violations: Violations):
        _check_number(violations, f"{path}.m_eff", self.m_eff, 0, strict=True)
        _check_number(violations, f"{path}.temperature", self.temperature, 0)
        if not isinstance(self.plane_basis, list) or len(self.plane_basis) != 2:
            violations.append((f"{path}.plane_basis", "must hold two 3-vectors"))
        else:
            ok = all(_check_vector(violations, f"{path}.plane_basis[{i}]", vec, nonzero=True)
                     for i, vec in enumerate(self.plane_basis))
            if ok:
                e1, e2 = (np.asarray(v, dtype=float) / np.linalg.norm(v) for v in self.plane_basis)
                if abs(e1 @ e2) > 1e-9:
                    violations.append((f"{path}.plane_basis", "directions must be orthogonal"))
        if len(self.modes) != 2:
            violations.append((f"{path}.modes", f"exactly two modes are required, got {len(self.modes)}"))
        for i, mode in enumerate(self.modes):
            mode.validate(f"{path}.modes[{i}]", violations)
        if len(self.modes) == 2 and all(_is_number(m.angle_deg) for m in self.modes):
            first, second = self.modes
            if abs(np.cos(np.deg2rad(first.angle_deg - second.angle_deg))) > 1e-9:
                violations.append((f"{path}.modes", "mode orientations must be orthogonal"))


@dataclass
class SweepSection:
    """Drive-frequency grid of the bimodal sweep and the mechanical response"""
    start: float = 5.7e6
    stop: float = 6.6e6
    points: int = 91
    force_policy: str = 'constant'
    target_depth: Optional[float] = None
    simulate: bool = False
    simulate_every: int = 1
    rabi_detuning: float = 0.0

    def validate(self, path: str, violations: Violations):
        ok = _check_number(violations, f"{path}.start", self.start, 0, strict=True)
        ok = _check_number(violations, f"{path}.stop", self.stop, 0, strict=True) and ok
        if ok and not self.stop > self.start:
            violations.append((f"{path}.stop", "must be > start"))
        _check_int(violations, f"{path}.points", self.points, 2)
        _check_choice(violations, f"{path}.force_policy", self.force_policy, ['constant', 'target_peak'])
        if self.force_policy == 'target_peak':
            _check_number(violations, f"{path}.target_depth", self.target_depth, 0, strict=True)
        if not isinstance(self.simulate, bool):
            violations.append((f"{path}.simulate", "must be true or false"))
        _check_int(violations, f"{path}.simulate_every", self.simulate_every, 1)
        _check_number(violations, f"{path}.rabi_detuning", self.rabi_detuning)

    def frequencies(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


@dataclass
class DriveSection:
    """Coherent force: magnitude given directly (N) or as the displacement amplitude it produces (m)"""
    frequency: float = 6.29e6
    angle_deg: float = 90.0
    phase_deg: float = 0.0
    force: Optional[float] = None
    amplitude: Optional[float] = None
    sweep: SweepSection = field(default_factory=SweepSection)

    def validate(self, path: str, violations: Violations):
        _check_number(violations, f"{path}.frequency", self.frequency, 0, strict=True)
        _check_number(violations, f"{path}.angle_deg", self.angle_deg)
        _check_number(violations, f"{path}.phase_deg", self.phase_deg)
        if (self.force is None) == (self.amplitude is None):
            violations.append((path, "give exactly one of force or amplitude"))
        _check_number(violations, f"{path}.force", self.force, 0, optional=True)
        _check_number(violations, f"{path}.amplitude", self.amplitude, 0, optional=True)
        self.sweep.validate(f"{path}.sweep", violations)


@dataclass
class CouplingSection:
    """Where λ comes from: the magnet gradient at the rest position, or explicit values"""
    source: str = 'magnet'
    magnitude: Optional[float] = None
    angle_deg: float = 0.0
    step: float = 10e-9

    def validate(self, path: str, violations: Violations):
        if _check_choice(violations, f"{path}.source", self.source, ['magnet', 'explicit']):
            if self.source == 'explicit':
                _check_number(violations, f"{path}.magnitude", self.magnitude, 0)
        _check_number(violations, f"{path}.angle_deg", self.angle_deg)
        _check_number(violations, f"{path}.step", self.step, 0, strict=True)


@dataclass
class DynamicsSection:
    """Rabi window; rates in Hz, Ω_R either tracking the drive or fixed"""
    rabi_policy: str = 'track'
    rabi_frequency: Optional[float] = None
    rabi_detuning: float = 0.0
    detuning: float = 0.0
    phase_deg: float = 0.0
    modulation_depth: Optional[float] = None
    duration: float = 20e-6
    dt: float = 2e-9
    sample_stride: int = 1
    relaxation_rate: Optional[float] = None
    dephasing_rate: Optional[float] = None
    initial_state: List[float] = field(default_factory=lambda: [0.0, 0.0, 1.0])

    def validate(self, path: str, violations: Violations):
        if _check_choice(violations, f"{path}.rabi_policy", self.rabi_policy, ['track', 'fixed']):
            if self.rabi_policy == 'fixed':
                _check_number(violations, f"{path}.rabi_frequency", self.rabi_frequency, 0)
        _check_number(violations, f"{path}.rabi_detuning", self.rabi_detuning)
        _check_number(violations, f"{path}.detuning", self.detuning)
        _check_number(violations, f"{path}.phase_deg", self.phase_deg)
        _check_number(violations, f"{path}.modulation_depth", self.modulation_depth, 0, optional=True)
        _check_number(violations, f"{path}.duration", self.duration, 0, strict=True)
        _check_number(violations, f"{path}.dt", self.dt, 0, strict=True)
        _check_int(violations, f"{path}.sample_stride", self.sample_stride, 1)
        _check_number(violations, f"{path}.relaxation_rate", self.relaxation_rate, 0, optional=True)
        _check_number(violations, f"{path}.dephasing_rate", self.dephasing_rate, 0, optional=True)
        _check_vector(violations, f"{path}.initial_state", self.initial_state)


@dataclass
class AnalysisSection:
    """Triplet extraction and the reproduction recipes run by ``report``"""
    pad_factor: int = 8
    search_band: float = 3e6
    lock_tolerance: Optional[float] = None
    min_prominence: float = 0.02
    symmetry_tolerance: float = 0.1
    mirror_single_sideband: bool = False
    phases_deg: List[float] = field(default_factory=lambda: [0.0, 90.0, 180.0, 270.0])
    amplitudes: List[float] = field(default_factory=lambda: [n * 1e-9 for n in range(1, 10)])
    detunings: List[float] = field(default_factory=lambda: [-2e6, -1e6, 0.0, 1e6, 2e6])
    detuning_depth: float = 2e6

    def validate(self, path: str, violations: Violations):
        _check_int(violations, f"{path}.pad_factor", self.pad_factor, 1)
        _check_number(violations, f"{path}.search_band", self.search_band, 0, strict=True)
        _check_number(violations, f"{path}.lock_tolerance", self.lock_tolerance, 0, strict=True, optional=True)
        _check_number(violations, f"{path}.min_prominence", self.min_prominence, 0)
        _check_number(violations, f"{path}.symmetry_tolerance", self.symmetry_tolerance, 0)
        if not isinstance(self.mirror_single_sideband, bool):
            violations.append((f"{path}.mirror_single_sideband", "must be true or false"))
        _check_list(violations, f"{path}.phases_deg", self.phases_deg)
        _check_list(violations, f"{path}.amplitudes", self.amplitudes, minimum=0)
        _check_list(violations, f"{path}.detunings", self.detunings)
        _check_number(violations, f"{path}.detuning_depth", self.detuning_depth, 0)

    def triplet_settings(self) -> TripletSettings:
        return TripletSettings(pad_factor=self.pad_factor, search_band=self.search_band,
                               lock_tolerance=self.lock_tolerance, min_prominence=self.min_prominence,
                               symmetry_tolerance=self.symmetry_tolerance,
                               mirror_single_sideband=self.mirror_single_sideband,
                               phases=tuple(np.deg2rad(self.phases_deg)))


@dataclass
class MapsSection:
    """Scan plane and grid for field/ESR maps plus the working-point search"""
    origin: List[float] = field(default_factory=lambda: [0.0, 0.0, DEFAULT_STANDOFF])
    u: List[float] = field(default_factory=lambda: [1.0, 0.0, 0.0])
    v: List[float] = field(default_factory=lambda: [0.0, 1.0, 0.0])
    u_min: float = -20e-6
    u_max: float = 20e-6
    u_points: int = 41
    v_min: float = -20e-6
    v_max: float = 20e-6
    v_points: int = 41
    mw_frequencies: List[float] = field(default_factory=lambda: [1.47e9])
    min_contrast: float = 0.9
    field_window: List[float] = field(default_factory=lambda: [0.04, 0.06])
    working_points: int = 10

    def validate(self, path: str, violations: Violations):
        _check_vector(violations, f"{path}.origin", self.origin)
        ok = _check_vector(violations, f"{path}.u", self.u, nonzero=True)
        ok = _check_vector(violations, f"{path}.v", self.v, nonzero=True) and ok
        if ok:
            u, v = np.asarray(self.u, dtype=float), np.asarray(self.v, dtype=float)
            if abs(u @ v) > 1e-9 * np.linalg.norm(u) * np.linalg.norm(v):
                violations.append((f"{path}.v", "must be orthogonal to u"))
        for axis in ('u', 'v'):
            lo = _check_number(violations, f"{path}.{axis}_min", getattr(self, f"{axis}_min"))
            hi = _check_number(violations, f"{path}.{axis}_max", getattr(self, f"{axis}_max"))
            if lo and hi and not getattr(self, f"{axis}_max") > getattr(self, f"{axis}_min"):
                violations.append((f"{path}.{axis}_max", f"must be > {axis}_min"))
            _check_int(violations, f"{path}.{axis}_points", getattr(self, f"{axis}_points"), 2)
        _check_list(violations, f"{path}.mw_frequencies", self.mw_frequencies, minimum=0)
        _check_number(violations, f"{path}.min_contrast", self.min_contrast, 0)
        if (isinstance(self.field_window, list) and len(self.field_window) == 2
                and all(_is_number(x) for x in self.field_window)):
            if not self.field_window[1] > self.field_window[0] >= 0:
                violations.append((f"{path}.field_window", "must satisfy 0 <= low < high"))
        else:
            violations.append((f"{path}.field_window", "must be [low, high] in T"))
        _check_int(violations, f"{path}.working_points", self.working_points, 1)

    def plane(self) -> PlaneSpec:
        return PlaneSpec(origin=self.origin, u=self.u, v=self.v)

    def grid(self) -> GridSpec:
        return GridSpec(self.u_min, self.u_max, self.u_points, self.v_min, self.v_max, self.v_points)


@dataclass
class OutputSection:
    """Output location and worker pool; not part of the config hash"""
    directory: str = 'out'
    use_multiprocessing: bool = True
    workers: Optional[int] = None

    def validate(self, path: str, violations: Violations):
        if not isinstance(self.directory, str) or not self.directory:
            violations.append((f"{path}.directory", "must be a nonempty path"))
        if not isinstance(self.use_multiprocessing, bool):
            violations.append((f"{path}.use_multiprocessing", "must be true or false"))
        if self.workers is not None:
            _check_int(violations, f"{path}.workers", self.workers, 1)


SECTIONS = {
    'magnet': MagnetSection,
    'qubit': QubitSection,
    'mechanics': MechanicsSection,
    'drive': DriveSection,
    'coupling': CouplingSection,
    'dynamics': DynamicsSection,
    'analysis': AnalysisSection,
    'maps': MapsSection,
    'output': OutputSection,
}


@dataclass
class SystemConfig:
    """Validated configuration plus the factories for every domain object"""
    magnet: MagnetSection = field(default_factory=MagnetSection)
    qubit: QubitSection = field(default_factory=QubitSection)
    mechanics: MechanicsSection = field(default_factory=MechanicsSection)
    drive: DriveSection = field(default_factory=lambda: DriveSection(amplitude=0.0))
    coupling: CouplingSection = field(default_factory=CouplingSection)
    dynamics: DynamicsSection = field(default_factory=DynamicsSection)
    analysis: AnalysisSection = field(default_factory=AnalysisSection)
    maps: MapsSection = field(default_factory=MapsSection)
    output: OutputSection = field(default_factory=OutputSection)

    def validate(self) -> Violations:
        violations: Violations = []
        for name in SECTIONS:
            getattr(self, name).validate(name, violations)
        return violations

    @property
    def config_hash(self) -> str:
        """Digest of everything that influences results (the output section is excluded)"""
        data = {name: asdict(getattr(self, name)) for name in SECTIONS if name != 'output'}
        return get_digest(data)

    def to_dict(self) -> Dict[str, Any]:
        return {name: to_jsonable(getattr(self, name)) for name in SECTIONS}

    def magnet_model(self) -> MagnetModel:
        section = self.magnet
        if section.moment is not None:
            moment = section.moment
        elif section.target_field is not None:
            offset = np.asarray(self.qubit.rest_position) - np.asarray(section.position)
            moment = moment_for_field(offset, section.target_field, section.easy_axis)
        else:
            moment = calibrate_moment(section.radius, section.remanence, section.easy_axis)
        return MagnetModel(moment=moment, position=section.position, radius=section.radius)

    def qubit_model(self) -> QubitModel:
        q = self.qubit
        return QubitModel(zero_field_splitting=q.zero_field_splitting,
                          gyromagnetic_ratio=q.gyromagnetic_ratio,
                          quantization_axis=q.quantization_axis, branch=Branch(q.branch),
                          rest_position=q.rest_position, decay_rate=q.decay_rate)

    def plane_basis(self) -> np.ndarray:
        basis = np.asarray(self.mechanics.plane_basis, dtype=float)
        return basis / np.linalg.norm(basis, axis=1, keepdims=True)

    def modes(self) -> List[ModeParams]:
        shared = self.mechanics.m_eff
        return [ModeParams.from_hz(m.frequency, m.damping, m.m_eff if m.m_eff is not None else shared,
                                   np.deg2rad(m.angle_deg))
                for m in self.mechanics.modes]

    def drive_spec(self, frequency: Optional[float] = None) -> DriveSpec:
        """Drive at ``frequency`` (Hz, default drive.frequency); amplitude form is inverted at that frequency"""
        d = self.drive
        angle = np.deg2rad(d.angle_deg)
        omega = 2 * np.pi * (d.frequency if frequency is None else frequency)
        spec = DriveSpec(force=0.0, orientation=[np.cos(angle), np.sin(angle)],
                         omega=omega, phase=np.deg2rad(d.phase_deg))
        if d.force is not None:
            spec.force = d.force
        else:
            spec.force = force_for_amplitude(self.modes(), spec, d.amplitude)
        return spec

    def coupling_vector(self) -> CouplingVector:
        c = self.coupling
        if c.source == 'explicit':
            return CouplingVector.from_mhz_per_nm(c.magnitude, np.deg2rad(c.angle_deg))
        return coupling_vector_at(self.qubit_model(), self.magnet_model(),
                                  basis=self.plane_basis(), step=c.step)

    def rabi_frequency(self, drive_frequency: float) -> float:
        """Ω_R in rad/s for a drive at ``drive_frequency`` Hz"""
        dyn = self.dynamics
        if dyn.rabi_policy == 'fixed':
            return 2 * np.pi * dyn.rabi_frequency
        return 2 * np.pi * (drive_frequency + dyn.rabi_detuning)

    def rabi_run(self, drive_frequency: Optional[float] = None,
                 modulation_depth: Optional[float] = None) -> RabiRun:
        """RabiRun for the configured window; depth in rad/s (default from dynamics or mechanics)"""
        dyn = self.dynamics
        f_d = self.drive.frequency if drive_frequency is None else drive_frequency
        if modulation_depth is None:
            if dyn.modulation_depth is not None:
                modulation_depth = 2 * np.pi * dyn.modulation_depth
            else:
                modulation_depth = spectral_depth(self.modes(), self.drive_spec(f_d), self.coupling_vector())
        return RabiRun(rabi_frequency=self.rabi_frequency(f_d),
                       drive_frequency=2 * np.pi * f_d,
                       modulation_depth=modulation_depth,
                       detuning=2 * np.pi * dyn.detuning,
                       phase=np.deg2rad(dyn.phase_deg),
                       decay_rate=self.qubit.decay_rate,
                       duration=dyn.duration, dt=dyn.dt, sample_stride=dyn.sample_stride,
                       initial_state=BlochState(*dyn.initial_state),
                       relaxation_rate=None if dyn.relaxation_rate is None else 2 * np.pi * dyn.relaxation_rate,
                       dephasing_rate=None if dyn.dephasing_rate is None else 2 * np.pi * dyn.dephasing_rate)


def parse_config(data: Any) -> SystemConfig:
    """Build and validate a SystemConfig from decoded JSON"""
    if not isinstance(data, dict):
        raise ParseError("config root must be a JSON object")
    violations: Violations = []
    for key in data:
        if key not in SECTIONS:
            violations.append((key, "unknown section"))

    sections = {}
    for name, cls in SECTIONS.items():
        raw = data.get(name)
        if isinstance(raw, dict):
            raw = dict(raw)
            if name == 'mechanics' and 'modes' in raw:
                modes = raw['modes']
                if isinstance(modes, list):
                    raw['modes'] = [_build(ModeSection, m, f"mechanics.modes[{i}]", violations)
                                    for i, m in enumerate(modes)]
                else:
                    violations.append(("mechanics.modes", "must be a list of mode objects"))
                    raw.pop('modes')
            if name == 'drive' and 'sweep' in raw:
                raw['sweep'] = _build(SweepSection, raw['sweep'], "drive.sweep", violations)
        sections[name] = _build(cls, raw, name, violations)
    if 'drive' not in data:
        sections['drive'] = DriveSection(amplitude=0.0)

    config = SystemConfig(**sections)
    violations.extend(config.validate())
    if violations:
        raise ValidationError(violations)
    return config


def load_config(path) -> SystemConfig:
    """Read a JSON config file; raises ParseError or an aggregated ValidationError"""
    path = Path(path)
    if not path.is_file():
        raise ParseError(f"config file not found: {path}")
    try:
        data = load_json_file(path)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from e
    except (OSError, UnicodeDecodeError) as e:
        raise ParseError(f"{path}: {e}") from e
    config = parse_config(data)
    logger.debug("loaded config %s (hash %s)", path, config.config_hash)
    return config
