import json
from pathlib import Path

import numpy as np
import pytest

from mollowsim.models import CouplingVector, MagnetModel, ModeParams, QubitModel
from mollowsim.physics.magnetostatics import calibrate_moment

REPO_ROOT = Path(__file__).resolve().parent.parent
WORKING_POINT_CONFIG = REPO_ROOT / 'configs' / 'working_point.json'

# on-axis distance where the 9 µm, 1.4 T sphere gives 50 mT
STANDOFF = 2.3871e-5


@pytest.fixture
def magnet():
    return MagnetModel(moment=calibrate_moment(9e-6, 1.4))


@pytest.fixture
def qubit():
    return QubitModel(rest_position=[0.0, 0.0, STANDOFF])


@pytest.fixture
def modes():
    return [ModeParams.from_hz(5.99e6, 180e3, 1e-15, 0.0),
            ModeParams.from_hz(6.29e6, 190e3, 1e-15, np.pi / 2)]


@pytest.fixture
def coupling():
    return CouplingVector.from_mhz_per_nm(0.5, np.pi / 3)


@pytest.fixture
def working_point_data():
    with open(WORKING_POINT_CONFIG, 'r', encoding='utf-8') as f:
        return json.load(f)


@pytest.fixture
def write_config(tmp_path):
    """Write a config dict to a JSON file and return its path"""
    def write(data, name='config.json'):
        path = tmp_path / name
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(data, f)
        return path
    return write
