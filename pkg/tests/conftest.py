import numpy as np
import pytest

import wlcifo.detector_configs as dc


@pytest.fixture(scope="session")
def adligo_cfg():
    return dc.adligo_preset()


@pytest.fixture(scope="session")
def adligo_det(adligo_cfg):
    return dc.reduce(adligo_cfg)


@pytest.fixture(scope="session")
def detuned_cfg(adligo_cfg):
    return dc.detune(adligo_cfg, 25.2)


@pytest.fixture(scope="session")
def detuned_det(detuned_cfg):
    return dc.reduce(detuned_cfg)


@pytest.fixture(scope="session")
def log_grid_50():
    return np.logspace(0.0, np.log10(2e4), 50)
