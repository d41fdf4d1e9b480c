# -*- coding: utf-8 -*-

import numpy as np
import pytest

from tdsolve.config import config as tdconfig
from tdsolve.tensor.core import DenseTensor3
from tdsolve.tensor.decomp import Paratuck2Factors, paratuck2_reconstruct


def no_logging(*args, **kwargs):
    pass


def pytest_addoption(parser):
    parser.addoption(
        "--runslow",
        action="store_true",
        default=False,
        help="run the long benchmark reproduction tests",
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running benchmark test")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def no_config(monkeypatch):
    monkeypatch.setattr(tdconfig, "get_config", tdconfig.get_default_config)
    monkeypatch.setattr(tdconfig, "configure_logging", no_logging)


@pytest.fixture
def exact_factors():
    """Integer-valued non-negative Paratuck2 factors of a 4x3x2 tensor"""
    return Paratuck2Factors(
        a=np.array([[1.0, 2.0], [0.0, 1.0], [3.0, 1.0], [1.0, 1.0]]),
        da=np.array([[1.0, 2.0], [2.0, 1.0]]),
        h=np.array([[1.0, 0.0, 2.0], [1.0, 1.0, 0.0]]),
        db=np.array([[1.0, 1.0, 2.0], [2.0, 1.0, 1.0]]),
        b=np.array([[1.0, 0.0, 1.0], [2.0, 1.0, 0.0], [0.0, 1.0, 1.0]]),
    )


@pytest.fixture
def exact_target(exact_factors):
    """Tensor reconstructed exactly by :func:`exact_factors`"""
    return paratuck2_reconstruct(exact_factors)


@pytest.fixture
def small_tensor():
    """Random positive 4x3x2 tensor"""
    rng = np.random.default_rng(42)
    return DenseTensor3(rng.uniform(0.5, 2.0, size=(4, 3, 2)))
