import numpy as np
import pytest

from hne import DataMatrix, build_hierarchic


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_instance(rng, n, k, D):
    """Random dataset plus its hierarchic neighbor index."""
    data = DataMatrix(rng.standard_normal((n, D)))
    return data, build_hierarchic(data, k)
