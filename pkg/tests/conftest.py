"""Shared fixtures; the repository root holds the flat modules."""
from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from graph_core import complete_graph, cycle_graph, named_graph, tree_ball  # noqa: E402


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0)


@pytest.fixture
def k2():
    return complete_graph(2)


@pytest.fixture
def k3():
    return complete_graph(3)


@pytest.fixture
def c5():
    return cycle_graph(5)


@pytest.fixture
def petersen():
    return named_graph("petersen")


@pytest.fixture
def labeled_tree():
    """Radius-2 ball of the 3-regular tree as an acyclic edge-labeled graph."""

    return tree_ball(3, 2).labeled
