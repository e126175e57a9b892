import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


def pytest_collection_modifyitems(config, items):
    # oracle checks run before the optimized paths they guard
    def rank(item):
        path = str(item.fspath)
        if path.endswith("test_oracles.py"):
            return 0
        if path.endswith("test_acceptance.py"):
            return 2
        return 1

    items.sort(key=rank)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
