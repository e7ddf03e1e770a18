"""Shared fixtures.

Real-world datasets other than the embedded karate-club graph must be
fetched first (scripts/fetch_datasets.py); tests that need a missing
dataset skip with a notice instead of failing.
"""

import pytest

from scorekit import datasets

_CACHE = {}


def load_or_skip(name, directory=None):
    """Return a verified dataset, or skip the calling test if absent."""
    key = (name, directory)
    if key not in _CACHE:
        if not datasets.is_available(name, directory):
            pytest.skip(f"dataset '{name}' not fetched "
                        "(run scripts/fetch_datasets.py)")
        _CACHE[key] = datasets.load_dataset(name, directory)
    return _CACHE[key]


@pytest.fixture(scope="session")
def karate():
    return datasets.karate_graph()
