"""Pytest configuration and shared fixtures."""

import os

import pytest

from core.models.scc_poset import SccPoset
from core.models.simulation import SimulationConfig
from core.models.weight_matrix import WeightMatrix
from core.services.graph_service import four_component_network, strongly_connected_components

# === Networks ===

PAIR = [[0.5, 0.5], [0.5, 0.5]]
TRIANGLE = [[0.5, 0.25, 0.25], [0.25, 0.5, 0.25], [0.25, 0.25, 0.5]]


@pytest.fixture(autouse=True)
def clean_herdlab_env(monkeypatch):
    """Tests never see HERDLAB_* variables from the developer's shell or .env."""
    for key in list(os.environ):
        if key.startswith("HERDLAB_"):
            monkeypatch.delenv(key, raising=False)


@pytest.fixture
def pair() -> WeightMatrix:
    """Two agents that trust each other and themselves equally."""
    return WeightMatrix(PAIR)


@pytest.fixture
def triangle() -> WeightMatrix:
    return WeightMatrix(TRIANGLE)


@pytest.fixture
def four_component() -> WeightMatrix:
    """7 agents, components {0}, {1, 2}, {3, 4}, {5, 6}."""
    return four_component_network()


@pytest.fixture
def four_component_scc(four_component) -> SccPoset:
    return strongly_connected_components(four_component)


@pytest.fixture
def triangle_config(triangle) -> SimulationConfig:
    return SimulationConfig(W=triangle, alpha=0.3, x1=[0.2, 0.5, 0.8], t_max=120, seed=7)
