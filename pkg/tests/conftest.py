"""Shared pytest fixtures."""

import sys
from pathlib import Path

import numpy as np
import pytest

ROOT_DIR = Path(__file__).resolve().parents[1]
if str(ROOT_DIR) not in sys.path:
    sys.path.insert(0, str(ROOT_DIR))

import config  # noqa: E402
from groupoid_qm.services.groupoid_core import (  # noqa: E402
    build_from_graph,
    build_pair_groupoid,
    build_pair_times_group,
)
from groupoid_qm.services.qubit import qubit  # noqa: E402


@pytest.fixture(autouse=True)
def library_profile():
    """Every test starts from the library profile with a fresh config."""
    config.set_config_name("library")
    yield
    config.set_config_name("library")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def qubit_groupoid():
    return qubit()


@pytest.fixture
def pair3():
    return build_pair_groupoid(3)


@pytest.fixture
def ptg22():
    return build_pair_times_group(2, 2)


@pytest.fixture
def split_graph():
    """Events {0, 1} connected, event 2 isolated."""
    return build_from_graph(3, [(0, 1)])
