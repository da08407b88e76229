import random

import pytest

from gcompat.bounds import Bounds


@pytest.fixture
def rng():
    return random.Random(20240801)


@pytest.fixture
def bounds():
    return Bounds()


def pytest_addoption(parser):
    parser.addoption("--run-stretch", action="store_true", default=False,
                     help="run the generator-based stretch suite")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-stretch"):
        return
    skip = pytest.mark.skip(reason="stretch suite: run with --run-stretch")
    for item in items:
        if "stretch" in item.keywords:
            item.add_marker(skip)


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "stretch: generator-based large-order end-to-end runs")
