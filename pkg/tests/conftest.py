import numpy as np
import pytest

from horoslice import EuclideanSpace, HyperbolicPlane, RegularTree


@pytest.fixture
def rng():
    return np.random.default_rng(20240713)


def all_model_spaces():
    return [
        EuclideanSpace(1),
        EuclideanSpace(2),
        HyperbolicPlane(),
        RegularTree(3),
        RegularTree(4),
    ]


def pytest_make_parametrize_id(config, val, argname):
    if hasattr(val, "describe"):
        return val.describe()
    return None
