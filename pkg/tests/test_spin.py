import hypothesis as hyp
import hypothesis.strategies as st
import numpy as np
import pytest

from mollowsim.models import Branch, GridSpec, MagnetModel, PlaneSpec, QubitModel
from mollowsim.physics.magnetostatics import dipole_field
from mollowsim.physics.spin import (contrast_map, coupling_map, coupling_vector_at, equivalent_gradient,
                                    esr_spectrum, find_working_points, hamiltonian, lorentzian,
                                    qubit_frequency, qubit_frequency_map, readout_contrast,
                                    resonance_image, spin_hamiltonian_frequencies)

from conftest import STANDOFF

field_component = st.floats(min_value=-0.2, max_value=0.2, allow_nan=False)


def test_axial_50mT_transitions():
    lower, upper = spin_hamiltonian_frequencies(QubitModel(), [0.0, 0.0, 0.05])
    assert lower == pytest.approx(1.470e9, abs=1e6)
    assert upper == pytest.approx(4.270e9, abs=1e6)


def test_zero_field_is_degenerate_at_D():
    lower, upper = spin_hamiltonian_frequencies(QubitModel(), np.zeros(3))
    assert lower == pytest.approx(2.870e9, abs=1.0)
    assert upper == pytest.approx(2.870e9, abs=1.0)


def test_non_finite_field_rejected():
    with pytest.raises(ValueError):
        spin_hamiltonian_frequencies(QubitModel(), [np.nan, 0.0, 0.0])


@hyp.settings(max_examples=100, deadline=None)
@hyp.given(bx=field_component, by=field_component, bz=field_component)
def test_hamiltonian_is_hermitian_and_contrast_bounded(bx, by, bz):
    qubit = QubitModel()
    H = hamiltonian(qubit, [bx, by, bz])
    np.testing.assert_allclose(H, H.conj().T, atol=1e-3)
    q = readout_contrast(qubit, [bx, by, bz])
    assert 0.0 <= q <= 1.0 + 1e-12
    lower, upper = spin_hamiltonian_frequencies(qubit, [bx, by, bz])
    assert lower <= upper


def test_branches_follow_axial_field():
    B = [0.0, 0.0, 0.03]
    minus = QubitModel(branch=Branch.MINUS)
    plus = QubitModel(branch='plus')
    assert qubit_frequency(minus, B) == pytest.approx(2.870e9 - 28e9 * 0.03, rel=1e-12)
    assert qubit_frequency(plus, B) == pytest.approx(2.870e9 + 28e9 * 0.03, rel=1e-12)


def test_axial_field_keeps_full_contrast():
    assert readout_contrast(QubitModel(), [0.0, 0.0, 0.05]) == pytest.approx(1.0, abs=1e-12)


def test_transverse_field_quenches_contrast():
    qubit = QubitModel()
    weak = readout_contrast(qubit, [0.01, 0.0, 0.0])
    strong = readout_contrast(qubit, [0.1, 0.0, 0.0])
    assert 0.0 < strong < weak < 1.0


def test_lorentzian_shape():
    assert lorentzian(0.0, 4e6) == pytest.approx(1.0)
    assert lorentzian(2e6, 4e6) == pytest.approx(0.5)
    assert lorentzian(-2e6, 4e6) == pytest.approx(0.5)


def test_esr_spectrum_dips_at_transitions():
    qubit = QubitModel()
    B = [0.0, 0.0, 0.05]
    freqs = np.linspace(1.0e9, 4.5e9, 3501)
    spectrum = esr_spectrum(qubit, B, freqs, linewidth=4e6, esr_contrast=0.3)
    lower_window = (freqs > 1.3e9) & (freqs < 1.6e9)
    assert freqs[lower_window][np.argmin(spectrum[lower_window])] == pytest.approx(1.47e9, abs=1e6)
    upper_window = freqs > 4.0e9
    assert freqs[upper_window][np.argmin(spectrum[upper_window])] == pytest.approx(4.27e9, abs=1e6)
    assert spectrum.min() == pytest.approx(0.7, rel=1e-3)
    with pytest.raises(ValueError):
        esr_spectrum(qubit, B, freqs, linewidth=0.0)


def test_axial_coupling_matches_field_gradient(qubit, magnet):
    lam = coupling_vector_at(qubit, magnet, basis=((0.0, 0.0, 1.0), (1.0, 0.0, 0.0)), step=10e-9)
    Bz = np.linalg.norm(dipole_field(magnet, qubit.rest_position))
    # on axis dBz/dz = -3 Bz / z and ω₀ = D - γ|B|
    expected = 2 * np.pi * qubit.gyromagnetic_ratio * 3 * Bz / STANDOFF
    assert lam.vector[0] == pytest.approx(expected, rel=1e-4)
    assert abs(lam.vector[1]) < 1e-6 * abs(lam.vector[0])
    assert lam.mhz_per_nm == pytest.approx(0.176, rel=1e-2)


def test_in_plane_coupling_vanishes_on_axis(qubit, magnet):
    lam = coupling_vector_at(qubit, magnet)
    assert lam.magnitude < 1e-6 * 2 * np.pi * 1e15


def test_coupling_map_matches_pointwise_vector(qubit, magnet):
    plane = PlaneSpec(origin=[0.0, 0.0, STANDOFF], u=[1, 0, 0], v=[0, 1, 0])
    grid = GridSpec(-10e-6, 10e-6, 3, -10e-6, 10e-6, 3)
    lam = coupling_map(qubit, magnet, plane, grid)
    assert lam.shape == (3, 3, 2)
    point = grid.points(plane)[0, 2]
    single = coupling_vector_at(qubit, magnet, r0=point)
    np.testing.assert_allclose(lam[0, 2], single.vector, rtol=1e-9)


def test_equivalent_gradient_of_reference_coupling():
    assert equivalent_gradient(2 * np.pi * 0.5e15, 28e9) == pytest.approx(17857.14, rel=1e-5)


def test_scalar_maps(qubit, magnet):
    plane = PlaneSpec(origin=[0.0, 0.0, STANDOFF], u=[1, 0, 0], v=[0, 1, 0])
    grid = GridSpec(-15e-6, 15e-6, 7, -15e-6, 15e-6, 5)
    freq = qubit_frequency_map(qubit, magnet, plane, grid)
    contrast = contrast_map(qubit, magnet, plane, grid)
    assert freq.values.shape == (5, 7)
    assert freq.unit == 'Hz'
    assert freq.values[2, 3] == pytest.approx(1.47e9, rel=1e-3)
    assert contrast.values[2, 3] == pytest.approx(1.0, abs=1e-9)
    assert np.all((contrast.values >= 0) & (contrast.values <= 1 + 1e-12))


def test_resonance_image_darkens_resonant_pixels(qubit, magnet):
    plane = PlaneSpec(origin=[0.0, 0.0, STANDOFF], u=[1, 0, 0], v=[0, 1, 0])
    grid = GridSpec(-15e-6, 15e-6, 7, -15e-6, 15e-6, 7)
    center = qubit_frequency_map(qubit, magnet, plane, grid).values[3, 3]
    on = resonance_image(qubit, magnet, plane, grid, center, 4e6, esr_contrast=0.3)
    off = resonance_image(qubit, magnet, plane, grid, center + 500e6, 4e6, esr_contrast=0.3)
    assert on.values[3, 3] == pytest.approx(0.7, rel=1e-6)
    assert off.values[3, 3] > 0.99
    with pytest.raises(ValueError):
        resonance_image(qubit, magnet, plane, grid, center, 0.0)


def test_working_points_are_ranked_and_filtered(qubit, magnet):
    plane = PlaneSpec(origin=[0.0, 0.0, STANDOFF], u=[1, 0, 0], v=[0, 1, 0])
    grid = GridSpec(-8e-6, 8e-6, 9, -8e-6, 8e-6, 9)
    basis = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0))
    points = find_working_points(qubit, magnet, plane, grid, basis, target_direction=[0.0, 1.0],
                                 min_contrast=0.5, field_window=(0.03, 0.07), limit=5)
    assert 0 < len(points) <= 5
    ranked = [p.projected_coupling for p in points]
    assert ranked == sorted(ranked, reverse=True)
    for p in points:
        assert 0.03 <= p.field <= 0.07
        assert p.contrast >= 0.5
        assert p.projected_coupling == pytest.approx(abs(p.coupling.vector[1]), rel=1e-12)


@hyp.settings(max_examples=100, deadline=None)
@hyp.given(bx=field_component, by=field_component,
           bz=st.floats(min_value=-0.08, max_value=0.08, allow_nan=False),
           angle=st.floats(min_value=0.0, max_value=2 * np.pi))
def test_contrast_is_invariant_under_rotation_about_the_axis(bx, by, bz, angle):
    # axial fields stay below the ground-state level crossing at D/γ
    qubit = QubitModel()
    c, s = np.cos(angle), np.sin(angle)
    rotated = [c * bx - s * by, s * bx + c * by, bz]
    assert readout_contrast(qubit, rotated) == pytest.approx(readout_contrast(qubit, [bx, by, bz]), abs=1e-9)


@hyp.settings(max_examples=100, deadline=None)
@hyp.given(bx=field_component, by=field_component, bz=field_component)
def test_eigenvalue_sum_equals_trace(bx, by, bz):
    qubit = QubitModel(quantization_axis=[0.3, -0.2, 1.0])
    H = hamiltonian(qubit, [bx, by, bz])
    trace = np.trace(H).real
    assert trace == pytest.approx(2 * qubit.zero_field_splitting, rel=1e-12)
    assert np.linalg.eigvalsh(H).sum() == pytest.approx(trace, rel=1e-12)


def test_transverse_field_shift_matches_perturbation_theory():
    qubit = QubitModel()
    D, gamma = qubit.zero_field_splitting, qubit.gyromagnetic_ratio
    for b in (0.5e-3, 1e-3):
        shift = (gamma * b) ** 2 / D
        lower, upper = spin_hamiltonian_frequencies(qubit, [b, 0.0, 0.0])
        assert lower - D == pytest.approx(shift, rel=1e-3)
        assert upper - D == pytest.approx(2 * shift, rel=1e-3)
        assert upper - lower == pytest.approx(shift, rel=1e-3)


def test_zero_moment_map_is_constant_at_D():
    plane = PlaneSpec(origin=[0.0, 0.0, STANDOFF], u=[1, 0, 0], v=[0, 1, 0])
    grid = GridSpec(-10e-6, 10e-6, 4, -10e-6, 10e-6, 3)
    freq = qubit_frequency_map(QubitModel(), MagnetModel(moment=np.zeros(3)), plane, grid)
    np.testing.assert_allclose(freq.values, 2.870e9, atol=1e-3)


OFF_AXIS = np.array([5e-6, 3e-6, STANDOFF])


def test_coupling_vector_matches_gradient_of_frequency_map(qubit, magnet):
    plane = PlaneSpec(origin=OFF_AXIS, u=[1, 0, 0], v=[0, 1, 0])
    grid = GridSpec(-100e-9, 100e-9, 11, -100e-9, 100e-9, 11)
    freq = qubit_frequency_map(qubit, magnet, plane, grid)
    us, vs = grid.axes()
    d_dv, d_du = np.gradient(2 * np.pi * freq.values, vs, us)
    from_map = np.array([d_du[5, 5], d_dv[5, 5]])
    lam = coupling_vector_at(qubit, magnet, r0=OFF_AXIS)
    assert lam.vector[0] != 0.0 and lam.vector[1] != 0.0
    np.testing.assert_allclose(lam.vector, from_map, rtol=1e-3, atol=1e-3 * lam.magnitude)


def test_halving_the_stencil_step_barely_changes_coupling(qubit, magnet):
    coarse = coupling_vector_at(qubit, magnet, r0=OFF_AXIS, step=20e-9)
    fine = coupling_vector_at(qubit, magnet, r0=OFF_AXIS, step=10e-9)
    assert np.linalg.norm(coarse.vector - fine.vector) < 1e-4 * fine.magnitude
