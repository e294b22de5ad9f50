import numpy as np
import pytest

from mollowsim.errors import DivisionByZeroCoupling
from mollowsim.models import CouplingVector, QubitModel
from mollowsim.analysis.scales import (mollow_resolution_length, quantum_coupling_rate, scales_table,
                                       thermal_modulation)


def test_mollow_resolution_length(coupling):
    assert mollow_resolution_length(100e3, coupling) == pytest.approx(200e-12, rel=1e-9)
    assert mollow_resolution_length(100e3, coupling.magnitude) == pytest.approx(200e-12, rel=1e-9)


def test_zero_coupling_cannot_resolve():
    with pytest.raises(DivisionByZeroCoupling):
        mollow_resolution_length(100e3, CouplingVector([0.0, 0.0]))
    with pytest.raises(DivisionByZeroCoupling):
        mollow_resolution_length(100e3, 0.0)


def test_thermal_and_quantum_rates(modes, coupling):
    mode = modes[1]
    assert 20e3 <= thermal_modulation(coupling, mode, 300.0) / (2 * np.pi) <= 30e3
    assert 15.0 <= quantum_coupling_rate(coupling, mode) / (2 * np.pi) <= 22.0
    assert thermal_modulation(coupling, mode, 0.0) == 0.0


def test_scales_table_reports_working_point(modes, coupling):
    rows = {row.name: row for row in scales_table(QubitModel(), modes[1], coupling, 300.0)}
    assert list(rows) == ['thermal_spread', 'zero_point', 'coupling_strength', 'equivalent_gradient',
                          'thermal_modulation', 'mollow_resolution_length', 'quantum_coupling_rate']
    assert 47e-12 <= rows['thermal_spread'].value <= 57e-12
    assert 33e-15 <= rows['zero_point'].value <= 40e-15
    assert rows['coupling_strength'].value == pytest.approx(0.5)
    assert rows['coupling_strength'].unit == 'MHz/nm'
    assert 17e3 <= rows['equivalent_gradient'].value <= 19e3
    assert 20e3 <= rows['thermal_modulation'].value <= 30e3
    assert rows['mollow_resolution_length'].value == pytest.approx(200e-12, rel=1e-9)
    assert rows['quantum_coupling_rate'].unit == 'Hz'


def test_scales_table_with_zero_coupling(modes):
    with pytest.raises(DivisionByZeroCoupling):
        scales_table(QubitModel(), modes[1], CouplingVector([0.0, 0.0]), 300.0)
