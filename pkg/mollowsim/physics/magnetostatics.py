#!/usr/bin/env python3
"""
Point-dipole field model of the magnetic microsphere

Field, analytic gradient tensor and scan maps. All functions accept a single
position (3,) or any stack of positions (..., 3) and are pure.
"""

import logging
from typing import Tuple

import numpy as np

from ..errors import EvaluationInsideMagnet
from ..models import MU0, MU0_OVER_4PI, FieldMap, GridSpec, MagnetModel, PlaneSpec

logger = logging.getLogger(__name__)


def _offsets(magnet: MagnetModel, r) -> Tuple[np.ndarray, np.ndarray]:
    """Separation vectors and distances, rejecting points inside the sphere"""
    r = np.asarray(r, dtype=float)
    if r.shape[-1:] != (3,):
        raise ValueError(f"positions must have a trailing axis of 3, got shape {r.shape}")
    d = r - magnet.position
    dist = np.linalg.norm(d, axis=-1)
    inside = dist <= magnet.radius
    if np.any(inside):
        if dist.ndim == 0:
            raise EvaluationInsideMagnet(float(dist), magnet.radius)
        index = tuple(int(i) for i in np.argwhere(inside)[0])
        raise EvaluationInsideMagnet(float(dist[index]), magnet.radius, grid_index=index)
    return d, dist


def dipole_field(magnet: MagnetModel, r) -> np.ndarray:
    """B(r) = (μ₀/4π)·[3(m·r̂)r̂ − m]/|r|³ in tesla"""
    d, dist = _offsets(magnet, r)
    n = dist[..., None]
    m = magnet.moment
    m_dot_d = np.sum(d * m, axis=-1)[..., None]
    return MU0_OVER_4PI * (3.0 * m_dot_d * d / n ** 5 - m / n ** 3)


def dipole_gradient(magnet: MagnetModel, r) -> np.ndarray:
    """Analytic ∂B_i/∂x_j of the dipole field in T/m, shape (..., 3, 3)

    G_ij = 3(μ₀/4π)/|r|⁵ · [(m·r)δ_ij + m_i r_j + m_j r_i − 5(m·r) r_i r_j/|r|²]
    """
    d, dist = _offsets(magnet, r)
    n = dist[..., None, None]
    m = magnet.moment
    m_dot_d = np.sum(d * m, axis=-1)[..., None, None]
    outer_md = m[..., :, None] * d[..., None, :]
    sym = outer_md + np.swapaxes(outer_md, -1, -2)
    dd = d[..., :, None] * d[..., None, :]
    eye = np.eye(3)
    return 3.0 * MU0_OVER_4PI / n ** 5 * (m_dot_d * eye + sym - 5.0 * m_dot_d * dd / n ** 2)


def field_map(magnet: MagnetModel, plane: PlaneSpec, grid: GridSpec) -> FieldMap:
    """Row-major grid of dipole_field values over a scan plane"""
    points = grid.points(plane)
    values = dipole_field(magnet, points)
    logger.debug("field map %sx%s, |B| max %.3e T", grid.v_points, grid.u_points,
                 float(np.max(np.linalg.norm(values, axis=-1))))
    return FieldMap(plane=plane, grid=grid, points=points, values=values)


def gradient_map(magnet: MagnetModel, plane: PlaneSpec, grid: GridSpec) -> np.ndarray:
    """Gradient tensors over a scan plane, shape (v_points, u_points, 3, 3)"""
    return dipole_gradient(magnet, grid.points(plane))


def calibrate_moment(radius: float, remanence: float, easy_axis=(0.0, 0.0, 1.0)) -> np.ndarray:
    """Moment of a uniformly magnetised sphere: |m| = B_r·(4/3)πr³/μ₀ along the easy axis"""
    if not radius > 0:
        raise ValueError(f"radius must be > 0, got {radius}")
    if not remanence >= 0:
        raise ValueError(f"remanence must be >= 0, got {remanence}")
    axis = np.asarray(easy_axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    volume = 4.0 / 3.0 * np.pi * radius ** 3
    return remanence * volume / MU0 * axis


def _angular_factor(moment_axis: np.ndarray, direction: np.ndarray) -> float:
    cos_theta = float(moment_axis @ direction)
    return float(np.sqrt(3.0 * cos_theta ** 2 + 1.0))


def standoff_for_field(magnet: MagnetModel, direction, target_field: float) -> float:
    """Distance from the dipole along ``direction`` where |B| equals target_field"""
    if not target_field > 0:
        raise ValueError("target_field must be > 0")
    strength = float(np.linalg.norm(magnet.moment))
    if strength == 0:
        raise ValueError("a zero moment produces no field")
    direction = np.asarray(direction, dtype=float)
    direction = direction / np.linalg.norm(direction)
    factor = _angular_factor(magnet.moment / strength, direction)
    return float((MU0_OVER_4PI * strength * factor / target_field) ** (1.0 / 3.0))


def moment_for_field(offset, target_field: float, easy_axis=(0.0, 0.0, 1.0)) -> np.ndarray:
    """Moment along easy_axis whose field magnitude at ``offset`` equals target_field"""
    if not target_field >= 0:
        raise ValueError("target_field must be >= 0")
    offset = np.asarray(offset, dtype=float)
    distance = float(np.linalg.norm(offset))
    if distance == 0:
        raise ValueError("offset must be nonzero")
    axis = np.asarray(easy_axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    factor = _angular_factor(axis, offset / distance)
    return target_field * distance ** 3 / (MU0_OVER_4PI * factor) * axis
