import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from config import DEFAULT_IRIS_PATH  # noqa: E402
from quantum.state import AmplitudeVector  # noqa: E402


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="运行 5000 次迭代的复现测试")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: 长时间复现测试，需要 --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="需要 --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


def random_unit(rng: np.random.Generator, dim: int) -> AmplitudeVector:
    vec = rng.normal(size=dim)
    return AmplitudeVector(vec / np.linalg.norm(vec))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def iris_path():
    return DEFAULT_IRIS_PATH


@pytest.fixture(scope="session")
def iris_samples(iris_path):
    from dataset import load_iris
    return load_iris(iris_path)


@pytest.fixture(scope="session")
def iris_split(iris_samples):
    from dataset import split
    return split(iris_samples, seed=0)
