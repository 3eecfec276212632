import numpy as np
import pytest

from qsubset.datagen import SimScenario, gen_linear
from qsubset.regress import Dataset


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def tiny_sample():
    """Small, easy train/test pair: 3 strong signals out of 5 columns."""
    return gen_linear(SimScenario(n=60, p=5, s=3, rho=0.25, snr=4.0, seed=7))


def random_dataset(rng, n=30, p=4):
    X = rng.standard_normal((n, p))
    y = rng.standard_normal(n)
    return Dataset(X, y)
