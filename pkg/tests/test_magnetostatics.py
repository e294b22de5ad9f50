import hypothesis as hyp
import hypothesis.strategies as st
import numpy as np
import pytest

from mollowsim.errors import EvaluationInsideMagnet, GridSpecError
from mollowsim.models import GridSpec, MagnetModel, PlaneSpec
from mollowsim.physics.magnetostatics import (calibrate_moment, dipole_field, dipole_gradient, field_map,
                                              gradient_map, moment_for_field, standoff_for_field)

from conftest import STANDOFF


def test_calibrated_moment_of_reference_sphere():
    m = calibrate_moment(9e-6, 1.4)
    np.testing.assert_allclose(m[:2], 0.0)
    assert m[2] == pytest.approx(3.40197e-9, rel=1e-4)


def test_calibrate_moment_rejects_bad_inputs():
    with pytest.raises(ValueError):
        calibrate_moment(0.0, 1.4)
    with pytest.raises(ValueError):
        calibrate_moment(9e-6, -1.0)


def test_on_axis_and_equatorial_field(magnet):
    m = magnet.moment[2]
    d = 30e-6
    on_axis = dipole_field(magnet, [0.0, 0.0, d])
    equator = dipole_field(magnet, [d, 0.0, 0.0])
    np.testing.assert_allclose(on_axis, [0.0, 0.0, 2e-7 * m / d ** 3], rtol=1e-12, atol=1e-18)
    np.testing.assert_allclose(equator, [0.0, 0.0, -1e-7 * m / d ** 3], rtol=1e-12, atol=1e-18)


def test_reference_working_field(magnet):
    B = dipole_field(magnet, [0.0, 0.0, STANDOFF])
    assert np.linalg.norm(B) == pytest.approx(0.05, rel=1e-4)


def test_field_decays_as_inverse_cube(magnet):
    near = np.linalg.norm(dipole_field(magnet, [12e-6, 5e-6, 20e-6]))
    far = np.linalg.norm(dipole_field(magnet, [24e-6, 10e-6, 40e-6]))
    assert near / far == pytest.approx(8.0, rel=1e-12)


@hyp.settings(max_examples=50, deadline=None)
@hyp.given(scale=st.floats(min_value=-10.0, max_value=10.0, allow_nan=False),
           x=st.floats(min_value=-50e-6, max_value=50e-6),
           y=st.floats(min_value=-50e-6, max_value=50e-6))
def test_field_is_linear_in_moment(scale, x, y):
    r = [x, y, 60e-6]
    base = MagnetModel(moment=[1e-9, 2e-9, 3e-9])
    scaled = MagnetModel(moment=scale * base.moment)
    np.testing.assert_allclose(dipole_field(scaled, r), scale * dipole_field(base, r),
                               rtol=1e-12, atol=1e-20)


def test_gradient_symmetric_and_traceless_at_many_points():
    rng = np.random.default_rng(7)
    magnet = MagnetModel(moment=[1e-9, -2e-9, 3e-9], radius=9e-6)
    for _ in range(10):
        directions = rng.normal(size=(100_000, 3))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        radii = rng.uniform(10e-6, 100e-6, size=(100_000, 1))
        G = dipole_gradient(magnet, directions * radii)
        scale = np.max(np.abs(G), axis=(1, 2))
        asym = np.max(np.abs(G - np.swapaxes(G, 1, 2)), axis=(1, 2))
        trace = np.abs(np.trace(G, axis1=1, axis2=2))
        assert np.all(asym <= 1e-9 * scale)
        assert np.all(trace <= 1e-9 * scale)


@pytest.mark.parametrize('r', [
    [0.0, 0.0, 25e-6],
    [10e-6, -5e-6, 20e-6],
    [-30e-6, 12e-6, -4e-6],
    [15e-6, 15e-6, 15e-6],
])
def test_analytic_gradient_matches_central_differences(r):
    magnet = MagnetModel(moment=[0.5e-9, 1e-9, 3.4e-9])
    r = np.asarray(r)
    h = 1e-4 * np.linalg.norm(r)
    fd = np.empty((3, 3))
    for j in range(3):
        step = np.zeros(3)
        step[j] = h
        fd[:, j] = (dipole_field(magnet, r + step) - dipole_field(magnet, r - step)) / (2 * h)
    analytic = dipole_gradient(magnet, r)
    np.testing.assert_allclose(fd, analytic, rtol=1e-5, atol=1e-5 * np.max(np.abs(analytic)))


def test_evaluation_inside_magnet(magnet):
    with pytest.raises(EvaluationInsideMagnet):
        dipole_field(magnet, [0.0, 0.0, 5e-6])
    with pytest.raises(EvaluationInsideMagnet):
        dipole_gradient(magnet, [9e-6, 0.0, 0.0])


def test_map_reports_first_offending_grid_index(magnet):
    plane = PlaneSpec(origin=[0.0, 0.0, 0.0], u=[1, 0, 0], v=[0, 1, 0])
    grid = GridSpec(-20e-6, 20e-6, 5, -20e-6, 20e-6, 5)
    with pytest.raises(EvaluationInsideMagnet) as info:
        field_map(magnet, plane, grid)
    assert info.value.grid_index == (2, 2)
    assert info.value.to_record()['grid_index'] == [2, 2]


def test_field_map_is_row_major(magnet):
    plane = PlaneSpec(origin=[0.0, 0.0, STANDOFF], u=[1, 0, 0], v=[0, 1, 0])
    grid = GridSpec(-10e-6, 10e-6, 4, -5e-6, 5e-6, 3)
    fm = field_map(magnet, plane, grid)
    assert fm.values.shape == (3, 4, 3)
    us, vs = grid.axes()
    np.testing.assert_allclose(fm.points[2, 1], [us[1], vs[2], STANDOFF])
    np.testing.assert_allclose(fm.values[2, 1], dipole_field(magnet, fm.points[2, 1]))
    assert gradient_map(magnet, plane, grid).shape == (3, 4, 3, 3)


def test_two_by_two_map_obeys_mirror_symmetry(magnet):
    # x -> -x flips Bx only; y -> -y flips By only
    plane = PlaneSpec(origin=[0.0, 0.0, STANDOFF], u=[1, 0, 0], v=[0, 1, 0])
    fm = field_map(magnet, plane, GridSpec(-6e-6, 6e-6, 2, -4e-6, 4e-6, 2))
    flip_x = np.array([-1.0, 1.0, 1.0])
    flip_y = np.array([1.0, -1.0, 1.0])
    scale = np.abs(fm.values).max()
    np.testing.assert_allclose(fm.values[:, 1], fm.values[:, 0] * flip_x, rtol=0, atol=1e-12 * scale)
    np.testing.assert_allclose(fm.values[1], fm.values[0] * flip_y, rtol=0, atol=1e-12 * scale)


def test_degenerate_grid_rejected():
    with pytest.raises(GridSpecError):
        GridSpec(0.0, 1e-6, 1, 0.0, 1e-6, 5)
    with pytest.raises(GridSpecError):
        GridSpec(1e-6, 0.0, 5, 0.0, 1e-6, 5)


def test_standoff_for_working_field(magnet):
    d = standoff_for_field(magnet, [0.0, 0.0, 1.0], 0.05)
    assert d == pytest.approx(STANDOFF, rel=1e-3)
    assert np.linalg.norm(dipole_field(magnet, [0.0, 0.0, d])) == pytest.approx(0.05, rel=1e-10)

    lateral = standoff_for_field(magnet, [1.0, 0.0, 0.0], 0.05)
    assert np.linalg.norm(dipole_field(magnet, [lateral, 0.0, 0.0])) == pytest.approx(0.05, rel=1e-10)


def test_moment_for_field_inverts_field_magnitude():
    offset = np.array([5e-6, -3e-6, 20e-6])
    moment = moment_for_field(offset, 0.08, easy_axis=[0.0, 0.0, 1.0])
    magnet = MagnetModel(moment=moment)
    assert np.linalg.norm(dipole_field(magnet, offset)) == pytest.approx(0.08, rel=1e-10)
    np.testing.assert_allclose(moment[:2], 0.0)
