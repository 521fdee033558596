import json
import random

import pytest

from app.catalog.entries import default_catalog, instantiate
from app.extension.instances import diagonal_spec
from app.storage.local_storage import LocalStorage
from app.triangular.basis import build_T


@pytest.fixture(scope="session")
def catalog():
    """The shipped catalog, loaded once."""
    return default_catalog()


@pytest.fixture(scope="session")
def t4():
    return build_T(4)


@pytest.fixture
def entry_spec(catalog):
    """Instantiate a catalog entry: entry_spec("T1-1", a=2, s11=1)."""
    def make(entry_id, **params):
        return instantiate(catalog.get(entry_id), params)
    return make


@pytest.fixture
def zero_extension():
    """n = 4, f = 1 with A = B = sigma = 0."""
    return diagonal_spec(4, [[0, 0, 0]])


@pytest.fixture
def rng():
    """Seeded random source; the seed is part of the test's identity."""
    return random.Random(20240611)


@pytest.fixture
def tmp_storage(tmp_path):
    """Create a LocalStorage writing under a temporary directory"""
    return LocalStorage(tmp_path)


@pytest.fixture
def write_json(tmp_path):
    """Write a JSON document to a temporary file and return its path."""
    def write(name, document):
        path = tmp_path / name
        path.write_text(json.dumps(document))
        return str(path)
    return write
