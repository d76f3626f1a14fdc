import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from paramodular.cache import DiskCache
from paramodular.harder import level1_traces
from paramodular.trace import PrimeContext

_CONTEXTS = {}
_CACHE = DiskCache()  # memory only, shared across the session


def get_context(p):
    if p not in _CONTEXTS:
        _CONTEXTS[p] = PrimeContext(p, cache=_CACHE)
    return _CONTEXTS[p]


@pytest.fixture(scope="session")
def ctx():
    return get_context


@pytest.fixture(scope="session")
def l1():
    return level1_traces()
