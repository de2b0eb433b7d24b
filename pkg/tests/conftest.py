import pytest

from gradedjordan import models


@pytest.fixture(scope="session")
def registry():
    cache = {}

    def get(name, window=None):
        key = (name, window)
        if key not in cache:
            cache[key] = models.registry(name, window)
        return cache[key]

    return get
