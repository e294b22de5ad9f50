#!/usr/bin/env python3
"""
Simulator orchestrator

Routes each subcommand to the physics and analysis modules, writes CSV and
JSON results into the output directory and records a manifest. Only
manifest.json carries timestamps, so repeated runs of one config produce
identical result files whatever the worker count.
"""

import dataclasses
import json
import logging
import sys
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .analysis.scales import scales_table
from .analysis.spectral import linear_fit, mollow_splitting, modulation_depth
from .analysis.sweep import bimodal_sweep, detuning_scan, simulate_triplet, sweep_maxima, triplet_scan
from .config import SystemConfig
from .errors import ConfigError, MollowSimError
from .models import RunManifest, TripletFit
from .physics.dynamics import halve_step_check, integrate_rabi
from .physics.magnetostatics import dipole_field, field_map, gradient_map
from .physics.mechanics import (driven_response, ellipse_geometry, projected_amplitude, response_sweep,
                                susceptibility, thermal_psd, thermal_spread, zero_point)
from .physics.spin import (contrast_map, coupling_map, coupling_vector_at, find_working_points,
                           qubit_frequency, qubit_frequency_map, readout_contrast, resonance_image,
                           spin_hamiltonian_frequencies)
from .runner import SweepRunner
from .utils import get_digest, print_run_summary, save_json_file, to_jsonable, write_csv

logger = logging.getLogger(__name__)

SUBCOMMANDS = ('field-map', 'esr-map', 'mech-response', 'rabi', 'triplet', 'mollow-sweep', 'scales', 'report')


def _fit_record(fit: Optional[TripletFit]) -> Optional[Dict[str, Any]]:
    return None if fit is None else to_jsonable(fit)


class MollowSimulator:
    """Runs one subcommand against a validated config"""

    def __init__(self, config: SystemConfig, out_dir: Optional[Path] = None,
                 workers: Optional[int] = None, seed: Optional[int] = None, quiet: bool = False):
        self.config = config
        self.out_dir = Path(out_dir if out_dir is not None else config.output.directory)
        self.config_hash = config.config_hash
        self.quiet = quiet
        # reserved for stochastic extensions; every current path is deterministic
        self.seed = seed
        self.runner = SweepRunner(max_workers=workers if workers is not None else config.output.workers,
                                  use_multiprocessing=config.output.use_multiprocessing,
                                  show_progress=not quiet, description="Bloch runs")
        self.outputs: Dict[str, Path] = {}
        self.input_digests: Dict[str, str] = {'config': self.config_hash}
        self._handlers: Dict[str, Callable[[], None]] = {
            'field-map': self.field_map,
            'esr-map': self.esr_map,
            'mech-response': self.mech_response,
            'rabi': self.rabi,
            'triplet': self.triplet,
            'mollow-sweep': self.mollow_sweep,
            'scales': self.scales,
            'report': self.report,
        }

    def _status(self, message: str):
        if not self.quiet:
            print(message)

    def _emit_csv(self, label: str, filename: str, columns: Sequence[str], rows,
                  comments: Optional[Dict[str, Any]] = None):
        self.outputs[label] = write_csv(self.out_dir / filename, columns, rows, self.config_hash, comments)

    def _emit_json(self, label: str, filename: str, data: Dict[str, Any]):
        path = self.out_dir / filename
        payload = {'config_hash': self.config_hash, **data}
        if save_json_file(path, payload):
            self.outputs[label] = path

    def run_subcommand(self, name: str) -> Dict[str, Path]:
        """Execute one subcommand and write manifest.json; returns label -> file"""
        if name not in self._handlers:
            raise ValueError(f"unknown subcommand {name!r}; choose from {', '.join(SUBCOMMANDS)}")
        self.out_dir.mkdir(parents=True, exist_ok=True)
        started = datetime.now(timezone.utc).isoformat()
        start = time.time()
        self._status(f"🧲 mollowsim {__version__}: {name} (config {self.config_hash})")
        if self.seed is not None:
            logger.info("seed %s accepted but unused: all paths are deterministic", self.seed)

        self._handlers[name]()

        manifest = RunManifest(config_hash=self.config_hash, tool_version=__version__, subcommand=name,
                               input_digests=dict(self.input_digests),
                               outputs={label: path.name for label, path in self.outputs.items()},
                               started=started, finished=datetime.now(timezone.utc).isoformat())
        save_json_file(self.out_dir / 'manifest.json', manifest)
        if not self.quiet:
            print_run_summary(name, self.outputs, time.time() - start)
        return dict(self.outputs)

    # maps

    def _grid_rows(self, grid, *columns) -> List[Tuple]:
        us, vs = grid.axes()
        uu, vv = np.meshgrid(us, vs)
        flat = [np.reshape(c, (grid.v_points * grid.u_points, -1)) for c in columns]
        return [(u, v, *np.concatenate([c[i] for c in flat]))
                for i, (u, v) in enumerate(zip(uu.ravel(), vv.ravel()))]

    def field_map(self):
        """Dipole field and gradient over the scan plane"""
        cfg = self.config
        magnet = cfg.magnet_model()
        plane, grid = cfg.maps.plane(), cfg.maps.grid()
        fm = field_map(magnet, plane, grid)
        self._status(f"🗺️  Field map {grid.u_points}x{grid.v_points}")
        points = fm.points.reshape(-1, 3)
        values = fm.values.reshape(-1, 3)
        self._emit_csv('field_map', 'field_map.csv', ['x', 'y', 'z', 'Bx', 'By', 'Bz'],
                       [(*p, *b) for p, b in zip(points, values)])
        tensors = gradient_map(magnet, plane, grid).reshape(-1, 9)
        components = [f"dB{a}_d{b}" for a in 'xyz' for b in 'xyz']
        self._emit_csv('gradient_map', 'gradient_map.csv', ['x', 'y', 'z'] + components,
                       [(*p, *g) for p, g in zip(points, tensors)])
        self._emit_json('field_map_header', 'field_map.json', {
            'grid': grid, 'plane': plane, 'moment_Am2': magnet.moment,
            'magnet_position_m': magnet.position, 'magnet_radius_m': magnet.radius,
            'units': {'position': 'm', 'field': 'T', 'gradient': 'T/m'},
        })

    def esr_map(self):
        """Qubit frequency, readout contrast, resonance images and coupling over the scan plane"""
        cfg = self.config
        qubit, magnet = cfg.qubit_model(), cfg.magnet_model()
        plane, grid, maps = cfg.maps.plane(), cfg.maps.grid(), cfg.maps
        basis = cfg.plane_basis()

        freq = qubit_frequency_map(qubit, magnet, plane, grid)
        self._emit_csv('qubit_frequency', 'qubit_frequency.csv', ['x', 'y', 'value'],
                       self._grid_rows(grid, freq.values), {'unit': 'Hz'})
        contrast = contrast_map(qubit, magnet, plane, grid)
        self._emit_csv('readout_contrast', 'readout_contrast.csv', ['x', 'y', 'value'],
                       self._grid_rows(grid, contrast.values), {'unit': '1'})
        for i, mw in enumerate(maps.mw_frequencies):
            image = resonance_image(qubit, magnet, plane, grid, mw, cfg.qubit.linewidth,
                                    esr_contrast=cfg.qubit.esr_contrast)
            self._emit_csv(f'resonance_{i}', f'resonance_{i:02d}.csv', ['x', 'y', 'value'],
                           self._grid_rows(grid, image.values), {'mw_frequency_Hz': f"{mw:.12e}"})
        lam = coupling_map(qubit, magnet, plane, grid, basis=basis, step=cfg.coupling.step)
        self._emit_csv('coupling_map', 'coupling_map.csv', ['x', 'y', 'lambda_1', 'lambda_2'],
                       self._grid_rows(grid, lam / (2 * np.pi)), {'unit': 'Hz/m'})
        self._status(f"🔬 ESR maps {grid.u_points}x{grid.v_points}, {len(maps.mw_frequencies)} MW tone(s)")

        target = cfg.modes()[-1].orientation
        candidates = find_working_points(qubit, magnet, plane, grid, basis, target,
                                         min_contrast=maps.min_contrast,
                                         field_window=tuple(maps.field_window),
                                         step=cfg.coupling.step, limit=maps.working_points)
        self._emit_json('working_points', 'working_points.json', {'working_points': [
            {'position_m': wp.position, 'field_T': wp.field, 'contrast': wp.contrast,
             'coupling_MHz_per_nm': wp.coupling.mhz_per_nm,
             'projected_coupling_MHz_per_nm': wp.projected_coupling / (2 * np.pi) * 1e-15}
            for wp in candidates]})

        B0 = dipole_field(magnet, qubit.rest_position)
        rest_coupling = coupling_vector_at(qubit, magnet, basis=basis, step=cfg.coupling.step)
        self._emit_json('esr_map_header', 'esr_map.json', {
            'grid': grid, 'plane': plane, 'linewidth_Hz': cfg.qubit.linewidth,
            'esr_contrast': cfg.qubit.esr_contrast, 'mw_frequencies_Hz': maps.mw_frequencies,
            'rest_position': {
                'position_m': qubit.rest_position, 'field_T': B0,
                'field_magnitude_T': float(np.linalg.norm(B0)),
                'transitions_Hz': spin_hamiltonian_frequencies(qubit, B0),
                'qubit_frequency_Hz': float(qubit_frequency(qubit, B0)),
                'readout_contrast': float(readout_contrast(qubit, B0)),
                'coupling_MHz_per_nm': rest_coupling.mhz_per_nm,
                'coupling_vector_rad_per_s_m': rest_coupling.vector,
            },
            'units': {'position': 'm', 'frequency': 'Hz', 'fluorescence': 'a.u.'},
        })

    # mechanics

    def mech_response(self):
        """Driven response sweep, Brownian PSDs and the trajectory ellipse at the drive"""
        cfg = self.config
        modes = cfg.modes()
        drive = cfg.drive_spec()
        freqs = cfg.drive.sweep.frequencies()
        response = response_sweep(modes, drive, 2 * np.pi * freqs)
        rows = [(f, r[0].real, r[0].imag, r[1].real, r[1].imag, np.linalg.norm(r))
                for f, r in zip(freqs, response)]
        self._emit_csv('response', 'mech_response.csv',
                       ['f_Hz', 're_dr1', 'im_dr1', 're_dr2', 'im_dr2', 'abs_dr'], rows,
                       {'force_N': f"{drive.force:.12e}"})
        temperature = cfg.mechanics.temperature
        psds = np.stack([thermal_psd(mode, temperature, freqs) for mode in modes], axis=1)
        self._emit_csv('thermal_psd', 'thermal_psd.csv',
                       ['f_Hz'] + [f"psd_mode{i + 1}" for i in range(len(modes))],
                       [(f, *p) for f, p in zip(freqs, psds)], {'unit': 'm^2/Hz'})

        phasor = driven_response(modes, drive)
        semi_major, semi_minor, tilt = ellipse_geometry(phasor)
        coupling = cfg.coupling_vector()
        along = projected_amplitude(phasor, coupling.orientation) if coupling.magnitude > 0 else 0.0
        self._status(f"〰️  Response at {cfg.drive.frequency / 1e6:.3f} MHz: |δr| = {phasor.amplitude:.3e} m")
        self._emit_json('mech_summary', 'mech_response.json', {
            'drive': {'frequency_Hz': cfg.drive.frequency, 'force_N': drive.force,
                      'orientation': drive.orientation, 'phase_rad': drive.phase},
            'phasor_m': phasor.components,
            'ellipse': {'semi_major_m': semi_major, 'semi_minor_m': semi_minor, 'tilt_rad': tilt},
            'projected_amplitude_along_coupling_m': along,
            'modes': [{'frequency_Hz': m.frequency, 'damping_Hz': m.gamma / (2 * np.pi), 'm_eff_kg': m.m_eff,
                       'orientation': m.orientation,
                       'thermal_spread_m': thermal_spread(m, temperature), 'zero_point_m': zero_point(m),
                       'phase_at_resonance_rad': float(np.angle(susceptibility(m, m.omega)))}
                      for m in modes],
        })

    # dynamics

    def rabi(self):
        """Single Rabi window under the configured modulation"""
        run = self.config.rabi_run()
        self.input_digests['rabi_run'] = get_digest(run)
        trace = integrate_rabi(run)
        self._status(f"🌀 Rabi window: {run.n_steps} steps, δω₀/2π = {run.modulation_depth / (2 * np.pi):.4e} Hz")
        self._emit_csv('rabi', 'rabi.csv', ['t_s', 's_x', 's_y', 's_z'],
                       [(t, *s) for t, s in zip(trace.times, trace.states)])
        self._emit_json('rabi_summary', 'rabi.json', {
            'rabi_frequency_Hz': run.rabi_frequency / (2 * np.pi),
            'drive_frequency_Hz': run.drive_frequency / (2 * np.pi),
            'modulation_depth_Hz': run.modulation_depth / (2 * np.pi),
            'detuning_Hz': run.detuning / (2 * np.pi), 'phase_rad': run.phase,
            'decay_rate_Hz': run.decay_rate, 'duration_s': run.duration, 'dt_s': run.dt,
            'halve_step_error': halve_step_check(run),
        })

    def triplet(self):
        """Phase-averaged spectrum and triplet fit at the configured drive"""
        cfg = self.config
        run = cfg.rabi_run()
        settings = cfg.analysis.triplet_settings()
        self.input_digests['rabi_run'] = get_digest(run)
        trace, spectrum, fit = simulate_triplet(run, settings)
        f_d = run.drive_frequency / (2 * np.pi)
        keep = spectrum.frequencies <= f_d + 2 * settings.search_band
        self._emit_csv('spectrum', 'spectrum.csv', ['f_Hz', 'magnitude'],
                       zip(spectrum.frequencies[keep], spectrum.magnitude[keep]))
        self._emit_csv('trace', 'triplet_trace.csv', ['t_s', 's_z'], zip(trace.times, trace.sz),
                       {'phases_rad': ' '.join(f"{p:.12e}" for p in settings.phases)})
        predicted = 2 * mollow_splitting(f_d, run.rabi_frequency / (2 * np.pi),
                                         run.modulation_depth / (2 * np.pi))
        self._status(f"🔺 Triplet ({fit.quality.value}): separation {fit.separation / 1e6:.4f} MHz, "
                     f"predicted {predicted / 1e6:.4f} MHz")
        self._emit_json('triplet_fit', 'triplet.json', {
            'drive_frequency_Hz': f_d, 'rabi_frequency_Hz': run.rabi_frequency / (2 * np.pi),
            'modulation_depth_Hz': run.modulation_depth / (2 * np.pi),
            'predicted_separation_Hz': predicted, 'fit': _fit_record(fit),
            'spectral_resolution_Hz': spectrum.resolution,
        })

    # sweeps

    def _sweep_points(self, simulate: bool):
        cfg = self.config
        sweep = cfg.drive.sweep
        template = cfg.rabi_run(modulation_depth=0.0) if simulate else None
        return bimodal_sweep(cfg.modes(), cfg.drive_spec(), cfg.coupling_vector(), sweep.frequencies(),
                             force_policy=sweep.force_policy, target_depth=sweep.target_depth,
                             rabi_detuning=sweep.rabi_detuning, template=template,
                             settings=cfg.analysis.triplet_settings(), runner=self.runner,
                             simulate_every=sweep.simulate_every)

    def mollow_sweep(self):
        """Modulation depth and sidebands across the drive grid, optionally simulated"""
        cfg = self.config
        points = self._sweep_points(cfg.drive.sweep.simulate)
        rows = []
        for p in points:
            fitted = (('', '', 'not_simulated') if p.fit is None
                      else (p.fit.center, p.fit.separation, p.fit.quality))
            rows.append((p.drive_frequency, p.modulation_depth, p.sideband_lo, p.sideband_hi,
                         p.semi_major, p.semi_minor, p.tilt, p.projected_amplitude, *fitted))
        self._emit_csv('sweep', 'mollow_sweep.csv',
                       ['f_drive_Hz', 'delta_omega0_Hz', 'sideband_lo_Hz', 'sideband_hi_Hz',
                        'semi_major_m', 'semi_minor_m', 'tilt_rad', 'projected_amplitude_m',
                        'fitted_center_Hz', 'fitted_separation_Hz', 'quality'], rows)
        maxima = sweep_maxima(points)
        self._status(f"📈 Sweep of {len(points)} drive frequencies, maxima at "
                     + ", ".join(f"{m / 1e6:.3f} MHz" for m in maxima))
        self._emit_json('sweep_summary', 'mollow_sweep.json', {
            'maxima_Hz': maxima, 'mode_frequencies_Hz': [m.frequency for m in cfg.modes()],
            'force_policy': cfg.drive.sweep.force_policy,
            'peak_modulation_depth_Hz': max(p.modulation_depth for p in points),
        })

    # scales

    def _scales(self) -> Dict[str, Any]:
        cfg = self.config
        qubit, coupling = cfg.qubit_model(), cfg.coupling_vector()
        return {f"mode{i + 1}": scales_table(qubit, mode, coupling, cfg.mechanics.temperature)
                for i, mode in enumerate(cfg.modes())}

    def scales(self):
        """Thermal, zero-point and resolution scales for every mode"""
        tables = self._scales()
        rows = [(mode, row.name, row.value, row.unit, row.reference)
                for mode, table in tables.items() for row in table]
        self._emit_csv('scales', 'scales.csv', ['mode', 'name', 'value', 'unit', 'reference'], rows)
        self._emit_json('scales_summary', 'scales.json', {'scales': tables})
        for mode, table in tables.items():
            self._status(f"📏 {mode}: " + ", ".join(f"{r.name}={r.value:.4g} {r.unit}" for r in table[:2]))

    # report

    def _linearity(self) -> Dict[str, Any]:
        cfg = self.config
        coupling = cfg.coupling_vector()
        template = cfg.rabi_run(modulation_depth=0.0)
        template = dataclasses.replace(template, rabi_frequency=template.drive_frequency)
        amplitudes = np.asarray(cfg.analysis.amplitudes, dtype=float)
        depths = amplitudes * coupling.magnitude
        fits = triplet_scan(template, depths, cfg.analysis.triplet_settings(), self.runner)
        separations = np.array([f.separation for f in fits])
        depths_hz = depths / (2 * np.pi)
        resolved = np.array([f.resolved for f in fits])
        slope, intercept, r2 = (linear_fit(amplitudes[resolved] * 1e9, separations[resolved] / 1e6)
                                if resolved.sum() >= 2 else (float('nan'),) * 3)
        return {
            'amplitudes_m': amplitudes, 'modulation_depth_Hz': depths_hz,
            'separation_Hz': separations, 'quality': [f.quality for f in fits],
            'separation_over_depth': np.where(depths_hz > 0, separations / np.maximum(depths_hz, 1e-300), 0.0),
            'slope_MHz_per_nm': slope, 'intercept_MHz': intercept, 'r2': r2,
            'coupling_MHz_per_nm': coupling.mhz_per_nm,
        }

    def _detuning_law(self) -> Dict[str, Any]:
        cfg = self.config
        depth = 2 * np.pi * cfg.analysis.detuning_depth
        template = cfg.rabi_run(modulation_depth=depth)
        detunings = np.asarray(cfg.analysis.detunings, dtype=float)
        settings = cfg.analysis.triplet_settings()
        fits = detuning_scan(template, 2 * np.pi * detunings, settings, self.runner)
        f_d = template.drive_frequency / (2 * np.pi)
        predicted = np.array([2 * mollow_splitting(f_d, f_d + d, cfg.analysis.detuning_depth) for d in detunings])
        separations = np.array([f.separation for f in fits])
        return {
            'detunings_Hz': detunings, 'modulation_depth_Hz': cfg.analysis.detuning_depth,
            'separation_Hz': separations, 'predicted_separation_Hz': predicted,
            'ratio': np.divide(separations, predicted, out=np.full_like(separations, np.nan), where=predicted > 0),
            'quality': [f.quality for f in fits],
            'center_offset_Hz': [f.center - f_d for f in fits],
        }

    def report(self):
        """Every reproduction quantity in one machine-readable file"""
        cfg = self.config
        qubit = cfg.qubit_model()
        axis = qubit.quantization_axis
        self._status("🧪 Linearity scan...")
        linearity = self._linearity()
        self._status("🧪 Detuning scan...")
        detuning = self._detuning_law()
        self._status("🧪 Bimodal sweep...")
        points = self._sweep_points(cfg.drive.sweep.simulate)
        simulated = [p for p in points if p.fit is not None]
        self._emit_json('report', 'report.json', {
            'tool_version': __version__,
            'linearity': linearity,
            'detuning_law': detuning,
            'bimodal_sweep': {
                'maxima_Hz': sweep_maxima(points),
                'mode_frequencies_Hz': [m.frequency for m in cfg.modes()],
                'mode_damping_Hz': [m.gamma / (2 * np.pi) for m in cfg.modes()],
                'simulated': [{'f_drive_Hz': p.drive_frequency, 'modulation_depth_Hz': p.modulation_depth,
                               'predicted_separation_Hz': p.sideband_hi - p.sideband_lo,
                               'fit': _fit_record(p.fit)} for p in simulated],
            },
            'scales': self._scales(),
            'esr': {
                'transitions_at_50mT_Hz': spin_hamiltonian_frequencies(qubit, 0.05 * axis),
                'transitions_at_zero_field_Hz': spin_hamiltonian_frequencies(qubit, np.zeros(3)),
            },
        })
        self._status(f"✅ Linearity slope {linearity['slope_MHz_per_nm']:.4f} MHz/nm "
                     f"(r² = {linearity['r2']:.6f})")


def run_subcommand(name: str, config: SystemConfig, out_dir: Optional[Path] = None,
                   workers: Optional[int] = None, seed: Optional[int] = None,
                   quiet: bool = True) -> Tuple[int, Dict[str, Path]]:
    """Run a subcommand; returns the exit code and the files written

    Domain errors become their family's exit code plus an error.json record in
    the output directory.
    """
    simulator = MollowSimulator(config, out_dir=out_dir, workers=workers, seed=seed, quiet=quiet)
    try:
        return 0, simulator.run_subcommand(name)
    except MollowSimError as e:
        record = e.to_record()
    except ValueError as e:
        # inconsistent inputs that slipped past config validation
        record = {'error': 'ValueError', 'message': str(e), 'exit_code': ConfigError.exit_code}
    record['config_hash'] = config.config_hash
    logger.error("%s failed: %s", name, record['message'])
    print(json.dumps(record), file=sys.stderr)
    simulator.out_dir.mkdir(parents=True, exist_ok=True)
    save_json_file(simulator.out_dir / 'error.json', record)
    return record['exit_code'], dict(simulator.outputs)
