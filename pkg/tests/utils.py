from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import lil_matrix
from scipy.sparse.csgraph import dijkstra

from ezytamp import fields as fld
from ezytamp.scene.graph import SceneGraph
from ezytamp.scene.grid import OccupancyGrid
from ezytamp.scene.state import Navigate, Pickup, Place, TaskPlan
from ezytamp.utils import Cell

"""
Scene documents
"""


def make_attributes(
    category: str = "thing", usage: str = "use", location: str = "house"
) -> dict:
    return {"location": location, "category": category, "usage": usage}


def make_scene_doc(
    furniture: Dict[str, str],
    objects: Dict[str, Optional[str]],
    categories: Optional[Dict[str, str]] = None,
    usages: Optional[Dict[str, str]] = None,
) -> dict:
    """Scene graph document; rooms are taken from the furniture mapping."""
    categories = categories or {}
    usages = usages or {}
    rooms = list(dict.fromkeys(furniture.values()))
    return {
        "rooms": [{"name": r, "attributes": make_attributes(r, r)} for r in rooms],
        "furniture": [
            {
                "name": f,
                "room": r,
                "attributes": make_attributes(
                    categories.get(f, "furniture"), usages.get(f, "holding"), r
                ),
            }
            for f, r in furniture.items()
        ],
        "objects": [
            {
                "name": o,
                "on_furniture": f,
                "attributes": make_attributes(
                    categories.get(o, o.rsplit("_", 1)[0]), usages.get(o, "use")
                ),
            }
            for o, f in objects.items()
        ],
    }


def _rect(x0: int, y0: int, x1: int, y1: int) -> List[List[int]]:
    return [[x, y] for y in range(y0, y1 + 1) for x in range(x0, x1 + 1)]


"""
House: kitchen and living room joined by a door at (4, 2).

    #########
    ##..#..##     counter (1,1)   shelf (7,1)
    #...D...#
    #...#..##                     table (7,3)
    #########
"""

HOUSE_ROWS = [
    "#########",
    "##..#..##",
    "#...D...#",
    "#...#..##",
    "#########",
]
HOUSE_DOOR = (4, 2)
HOUSE_START = (3, 2)


def make_house_scene(objects: Optional[Dict[str, Optional[str]]] = None) -> dict:
    if objects is None:
        objects = {"cup_1": "counter", "cup_2": "shelf", "apple_1": "counter"}
    return make_scene_doc(
        furniture={"counter": "kitchen", "shelf": "living_room", "table": "living_room"},
        objects=objects,
    )


def make_house_grid() -> dict:
    return {
        "cell_size_m": 0.25,
        "rows": HOUSE_ROWS,
        "furniture_regions": {
            "counter": [[1, 1]],
            "shelf": [[7, 1]],
            "table": [[7, 3]],
        },
        "room_regions": {
            "kitchen": _rect(1, 1, 3, 3),
            "living_room": _rect(5, 1, 7, 3),
        },
    }


def make_house_world(
    door_risk: float = 0.0,
    profiles: Optional[Dict[str, dict]] = None,
    default_profile: Optional[dict] = None,
    rng_seed: int = 0,
) -> dict:
    return {
        "grid": make_house_grid(),
        "door_risk": {"4,2": door_risk} if door_risk else {},
        "profiles": profiles or {},
        "default_profile": default_profile
        or {"success_prob": 1.0, "time_mean": 2.0, "time_jitter": 0.0},
        "rng_seed": rng_seed,
        "start": list(HOUSE_START),
    }


def make_mission_doc(commands: Sequence[Sequence[Tuple[str, str]]]) -> dict:
    return {
        "commands": [
            {
                "text": f"command {i}",
                "goal": [
                    {"category_or_object": k, "destination": d} for k, d in goal
                ],
            }
            for i, goal in enumerate(commands)
        ]
    }


"""
Line: two shelves left and right of a table, robot above the table.

    #######
    #.....#       start (3,1)
    ##.#.##       shelf_b (1,2)  table (3,2)  shelf_a (5,2)
    #.....#
    #######

The canonical stand cell of shelf_a, (4,2), is adjacent to the table, so
without cost knowledge a plan fetching from shelf_a looks cheaper.
"""

LINE_ROWS = [
    "#######",
    "#.....#",
    "##.#.##",
    "#.....#",
    "#######",
]


def make_line_scene() -> dict:
    return make_scene_doc(
        furniture={"shelf_b": "room", "table": "room", "shelf_a": "room"},
        objects={"cup_1": "shelf_a", "cup_2": "shelf_b"},
    )


def make_line_world(
    p_cup_1: float = 0.0, p_cup_2: float = 1.0, rng_seed: int = 0
) -> dict:
    return {
        "grid": {
            "cell_size_m": 0.25,
            "rows": LINE_ROWS,
            "furniture_regions": {
                "shelf_b": [[1, 2]],
                "table": [[3, 2]],
                "shelf_a": [[5, 2]],
            },
            "room_regions": {"room": _rect(1, 1, 5, 3)},
        },
        "profiles": {
            "cup_1@shelf_a": {"success_prob": p_cup_1, "time_mean": 4.0},
            "cup_2@shelf_b": {"success_prob": p_cup_2, "time_mean": 2.0},
        },
        "default_profile": {"success_prob": 1.0, "time_mean": 2.0},
        "rng_seed": rng_seed,
        "start": [3, 1],
    }


def make_line_ledger(hard: float = 100.0, easy: float = 3.0) -> dict:
    return {
        "nav": [],
        "man": [
            {"kind": "pickup", "object": "cup_1", "furniture": "shelf_a", "cost": hard},
            {"kind": "pickup", "object": "cup_2", "furniture": "shelf_b", "cost": easy},
        ],
    }


"""
Random graphs and plans
"""


def make_random_graph(
    rng: np.random.Generator, n_rooms: int = 3, n_furniture: int = 5, n_objects: int = 8
) -> SceneGraph:
    rooms = [f"room_{i}" for i in range(n_rooms)]
    furniture = {f"furniture_{i}": rooms[i % n_rooms] for i in range(n_furniture)}
    names = list(furniture)
    kinds = ["cup", "book", "apple", "pen"]
    objects = {
        f"{kinds[i % len(kinds)]}_{i}": names[int(rng.integers(n_furniture))]
        for i in range(n_objects)
    }
    return SceneGraph.from_dict(make_scene_doc(furniture, objects))


def make_valid_plan(
    graph: SceneGraph, rng: np.random.Generator, n_chains: int = 2
) -> Tuple[TaskPlan, List[str]]:
    """Navigate, pickup, navigate, place chains moving distinct objects."""
    location = {i.name: i.on_furniture for i in graph.objects}
    furniture = [i.name for i in graph.furniture]
    chosen = [str(i) for i in rng.choice(sorted(location), n_chains, replace=False)]

    actions = []
    for o in chosen:
        src = location[o]
        dest = str(rng.choice([f for f in furniture if f != src]))
        actions += [
            Navigate(src, graph.room_of(src)),
            Pickup(o, src),
            Navigate(dest, graph.room_of(dest)),
            Place(o, dest),
        ]
        location[o] = dest
    return TaskPlan(actions), chosen


def inject_fault(
    plan: TaskPlan,
    chosen: Sequence[str],
    graph: SceneGraph,
    rule: str,
    rng: np.random.Generator,
) -> Tuple[TaskPlan, int]:
    """Inject a single fault of the given rule; return the plan and its index."""
    actions = list(plan.actions)
    chain = int(rng.integers(len(actions) // 4)) * 4
    nav_src, pickup, nav_dest, place = actions[chain : chain + 4]

    def other_furniture(f: str) -> str:
        return str(rng.choice([i.name for i in graph.furniture if i.name != f]))

    if rule == fld.RULE_OBJECT_MISSING:
        index = chain + 3
        actions[index] = Place("ghost_object", place.furniture)
    elif rule == fld.RULE_FURNITURE_MISSING:
        if rng.random() < 0.5:
            index = chain
            actions[index] = Navigate("ghost_furniture", nav_src.room)
        else:
            index = chain + 1
            actions[index] = Pickup(pickup.obj, "ghost_furniture")
    elif rule == fld.RULE_ROOM_MISSING:
        index = chain
        actions[index] = Navigate(nav_src.furniture, "ghost_room")
    elif rule == fld.RULE_PICKUP_WRONG_FURNITURE:
        f = other_furniture(pickup.furniture)
        actions[chain] = Navigate(f, graph.room_of(f))
        index = chain + 1
    elif rule == fld.RULE_PLACE_WRONG_FURNITURE:
        f = other_furniture(place.furniture)
        actions[chain + 2] = Navigate(f, graph.room_of(f))
        index = chain + 3
    elif rule == fld.RULE_OBJECT_NOT_HELD:
        spare = sorted(i.name for i in graph.objects if i.name not in chosen)
        index = chain + 3
        actions[index] = Place(str(rng.choice(spare)), place.furniture)
    elif rule == fld.RULE_PRECONDITION:
        rooms = [i.name for i in graph.rooms if i.name != graph.room_of(nav_dest.furniture)]
        index = chain + 2
        actions[index] = Navigate(nav_dest.furniture, str(rng.choice(rooms)))
    else:
        raise ValueError(rule)
    return TaskPlan(actions), index


"""
Grids
"""


def make_random_grid(
    rng: np.random.Generator, width: int = 20, height: int = 20, p: float = 0.25
) -> OccupancyGrid:
    blocked = rng.random((height, width)) < p
    rows = ["".join("#" if b else "." for b in row) for row in blocked]
    return OccupancyGrid(rows=rows, cell_size=1.0)


def dijkstra_cost(grid: OccupancyGrid, start: Cell, goals: Sequence[Cell]) -> float:
    """Shortest 8-connected cost from start to any goal, inf when unreachable."""
    width, height = grid.width, grid.height
    n = width * height
    adjacency = lil_matrix((n, n))
    for y in range(height):
        for x in range(width):
            if not grid.is_traversable((x, y)):
                continue
            for nx, ny in grid.neighbors8((x, y)):
                w = np.sqrt(2.0) if nx != x and ny != y else 1.0
                adjacency[y * width + x, ny * width + nx] = w
    dist = dijkstra(adjacency.tocsr(), indices=start[1] * width + start[0])
    return float(min(dist[g[1] * width + g[0]] for g in goals))
