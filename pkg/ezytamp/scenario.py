import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Union

import numpy as np

from ezytamp import fields as fld
from ezytamp import utils
from ezytamp import validators as vld
from ezytamp.errors import InputError
from ezytamp.planner.context import Mission
from ezytamp.scene.graph import SceneGraph
from ezytamp.scene.grid import OccupancyGrid
from ezytamp.world.config import DifficultyProfile, WorldConfig

logger = logging.getLogger(__name__)

DEFAULT_LAYOUT_PATH = Path(__file__).parent / "data" / "train1_like.json"

SCENE_FILE = "scene.json"
WORLD_FILE = "world.json"
MISSION_FILE = "mission.json"


def load_layout(source: Union[str, Path, dict, None] = None) -> dict:
    """Compact household layout, the bundled 9-room house by default."""
    layout = utils.read_json(source if source is not None else DEFAULT_LAYOUT_PATH)
    vld.check_keys(
        layout,
        ("width", "height", "rooms", "doors", "furniture", "objects", "commands"),
        "layout",
    )
    return layout


def _rect_cells(rect: List[int]) -> List[utils.Cell]:
    x, y, w, h = rect
    return [(i, j) for j in range(y, y + h) for i in range(x, x + w)]


def build_grid(layout: dict) -> OccupancyGrid:
    """Rasterize rooms, doors and furniture blocks into an occupancy grid.

    Everything starts occupied; room rectangles are carved free, doors become
    door cells and furniture rectangles are occupied again.
    """
    width, height = layout["width"], layout["height"]
    wall = fld.CELL_LABEL_MAP[fld.CELL_OCCUPIED]
    chars = [[wall] * width for _ in range(height)]

    room_regions = {}
    for room in layout["rooms"]:
        cells = _rect_cells(room["rect"])
        room_regions[room["name"]] = cells
        for x, y in cells:
            chars[y][x] = fld.CELL_LABEL_MAP[fld.CELL_FREE]
    for x, y in layout["doors"]:
        chars[y][x] = fld.CELL_LABEL_MAP[fld.CELL_DOOR]

    furniture_regions = {}
    for f in layout["furniture"]:
        cells = _rect_cells(f["rect"])
        furniture_regions[f["name"]] = cells
        for x, y in cells:
            chars[y][x] = fld.CELL_LABEL_MAP[fld.CELL_OCCUPIED]

    return OccupancyGrid(
        rows=["".join(i) for i in chars],
        cell_size=float(layout.get("cell_size_m", fld.DEFAULT_CELL_SIZE)),
        furniture_regions=furniture_regions,
        room_regions=room_regions,
    )


def build_scene_graph(layout: dict) -> SceneGraph:
    return SceneGraph.from_dict(
        {
            "rooms": [
                {"name": i["name"], "attributes": i.get("attributes")}
                for i in layout["rooms"]
            ],
            "furniture": [
                {"name": i["name"], "room": i["room"], "attributes": i["attributes"]}
                for i in layout["furniture"]
            ],
            "objects": layout["objects"],
        }
    )


def build_mission(layout: dict) -> Mission:
    return Mission.from_dict(
        {
            "commands": [
                {"text": i["text"], "goal": i["goal"]} for i in layout["commands"]
            ]
        }
    )


def _sample_profile(entry: dict, rng: np.random.Generator) -> DifficultyProfile:
    success = entry["success_prob"]
    if isinstance(success, list):
        success = float(rng.uniform(success[0], success[1]))
    return DifficultyProfile(
        success_prob=float(success),
        time_mean=float(entry["time_mean"]),
        time_jitter=float(entry.get("time_jitter", 0.0)),
    )


def build_world_config(
    layout: dict, grid: OccupancyGrid, graph: SceneGraph, seed: int
) -> WorldConfig:
    """Seeded difficulty profiles and door hazards.

    Per command ``n_hard_per_command`` decoys get a hard profile and the rest a
    medium one; which decoys are hard, the success probabilities and the
    door collision probabilities are drawn from ``seed``.
    """
    rng = np.random.default_rng(seed)
    profiles_spec = layout.get("profiles", {})
    n_hard = int(layout.get("n_hard_per_command", 0))

    profiles: Dict[tuple, DifficultyProfile] = {}
    for command in layout["commands"]:
        decoys = list(command.get("decoys", []))
        hard = set(rng.permutation(len(decoys))[:n_hard].tolist())
        for i, name in enumerate(decoys):
            level = "hard" if i in hard else "medium"
            furniture = graph.object_node(name).on_furniture
            profiles[(name, furniture)] = _sample_profile(profiles_spec[level], rng)

    door_risk = {}
    for k, (low, high) in sorted(layout.get("door_risk", {}).items()):
        door_risk[utils.to_cell(k, "door_risk key")] = float(rng.uniform(low, high))

    default = profiles_spec.get("default")
    start = layout.get("start")
    return WorldConfig(
        grid=grid,
        door_risk=door_risk,
        profiles=profiles,
        default_profile=_sample_profile(default, rng) if default else None,
        rng_seed=seed,
        start=utils.to_cell(start, "start") if start is not None else None,
    )


@dataclass
class Scenario:
    seed: int
    graph: SceneGraph
    world_config: WorldConfig
    mission: Mission

    def to_documents(self) -> Dict[str, dict]:
        return {
            SCENE_FILE: self.graph.to_dict(),
            WORLD_FILE: self.world_config.to_dict(),
            MISSION_FILE: self.mission.to_dict(),
        }


def make_scenario(seed: int, layout: Union[str, Path, dict, None] = None) -> Scenario:
    """Synthetic household scenario for one seed.

    Parameters
    ----------
    seed: int
        Seeds difficulty profiles, door hazards and the world's random streams.
    layout: Union[str, Path, dict, None]
        Compact layout document, the bundled house when None.
    """
    if seed < 0:
        msg = f"seed must be non-negative, got {seed}"
        raise InputError(msg)
    layout = load_layout(layout)
    graph = build_scene_graph(layout)
    grid = build_grid(layout)
    grid.check_against(graph)
    world_config = build_world_config(layout, grid, graph, seed)
    world_config.check_against(graph)
    mission = build_mission(layout)
    mission.check_against(graph)
    world_config.check_mission(mission, graph)
    return Scenario(seed=seed, graph=graph, world_config=world_config, mission=mission)


def write_scenario(scenario: Scenario, out_dir: Union[str, Path]) -> List[Path]:
    """Write scene.json, world.json and mission.json into out_dir."""
    out_dir = Path(out_dir)
    written = [
        utils.write_text(out_dir / name, utils.to_canonical_json(doc))
        for name, doc in scenario.to_documents().items()
    ]
    logger.info("Wrote scenario seed %d to %s", scenario.seed, out_dir)
    return written


def find_scenarios(suite: Union[str, Path]) -> List[Path]:
    """Scenario directories of a suite, sorted by name.

    A directory holding scene.json, world.json and mission.json is itself a
    scenario; otherwise its sub-directories that do are.
    """
    suite = Path(suite)
    if not suite.is_dir():
        msg = f"{suite} is not a directory"
        raise InputError(msg)

    def is_scenario(p: Path) -> bool:
        return all((p / i).is_file() for i in (SCENE_FILE, WORLD_FILE, MISSION_FILE))

    if is_scenario(suite):
        return [suite]
    found = sorted(p for p in suite.iterdir() if p.is_dir() and is_scenario(p))
    if not found:
        msg = f"No scenario found in {suite}"
        raise InputError(msg)
    return found


def scenario_paths(directory: Union[str, Path]) -> Dict[str, Path]:
    directory = Path(directory)
    return {
        "scene": directory / SCENE_FILE,
        "world": directory / WORLD_FILE,
        "mission": directory / MISSION_FILE,
    }
