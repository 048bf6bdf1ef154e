import numpy as np
import pytest

from ezytamp.mission import RunConfig
from ezytamp.planner.context import Mission
from ezytamp.scene.graph import SceneGraph
from ezytamp.world.config import WorldConfig
from ezytamp.world.world import World

from tests.utils import make_house_scene, make_house_world, make_mission_doc


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0)


@pytest.fixture
def house_graph() -> SceneGraph:
    return SceneGraph.from_dict(make_house_scene())


@pytest.fixture
def house_world_config() -> WorldConfig:
    return WorldConfig.from_dict(make_house_world())


@pytest.fixture
def house_world(house_graph: SceneGraph, house_world_config: WorldConfig) -> World:
    return World(house_graph, house_world_config)


@pytest.fixture
def cup_mission() -> Mission:
    return Mission.from_dict(make_mission_doc([[("cup", "table")]]))


@pytest.fixture
def config() -> RunConfig:
    return RunConfig(n_l=2)
