import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from ezytamp import fields as fld
from ezytamp import utils
from ezytamp.errors import InputError, PreconditionError
from ezytamp.scene.graph import SceneGraph
from ezytamp.scene.state import HighLevelAction, HighLevelState, Navigate, Pickup
from ezytamp.utils import Cell
from ezytamp.world.config import WorldConfig

logger = logging.getLogger(__name__)


@dataclass
class ExecutionOutcome:
    succeeded: bool
    time_s: float = 0.0
    distance_m: float = 0.0
    collisions: int = 0
    executed_path: List[Cell] = field(default_factory=list)
    attempts: int = 0
    """Manipulation attempts made (navigation: 0)."""

    def __post_init__(self):
        if self.time_s < 0 or self.distance_m < 0 or self.collisions < 0:
            msg = "outcome quantities must be non-negative"
            raise ValueError(msg)
        if self.attempts < 0:
            msg = "attempts must be non-negative"
            raise ValueError(msg)

    @property
    def is_navigation(self) -> bool:
        return bool(self.executed_path)


def check_preconditions(
    state: HighLevelState, action: HighLevelAction, graph: SceneGraph
) -> None:
    """Raise PreconditionError when action is not applicable at state."""

    def fail(detail: str):
        msg = f"{action}: {detail}"
        raise PreconditionError(msg)

    if isinstance(action, Navigate):
        if not graph.has_furniture(action.furniture) or not graph.has_room(action.room):
            fail("unknown node")
        if graph.room_of(action.furniture) != action.room:
            fail(f"{action.furniture} is not in {action.room}")
        return

    if not graph.has_object(action.obj) or not graph.has_furniture(action.furniture):
        fail("unknown node")
    if state.at_furniture != action.furniture:
        fail(f"robot is at {state.at_furniture}, not {action.furniture}")

    if isinstance(action, Pickup):
        if not state.hand_free:
            fail(f"hand is holding {state.holding}")
        if graph.object_node(action.obj).on_furniture != action.furniture:
            fail(f"{action.obj} is not on {action.furniture}")
    elif state.holding != action.obj:
        fail(f"{action.obj} is not held")


def step_dynamics(
    state: HighLevelState,
    action: HighLevelAction,
    outcome: ExecutionOutcome,
    graph: SceneGraph,
) -> HighLevelState:
    """Successor high-level state; object moves are applied to graph in place.

    Navigation moves the robot regardless of collisions. A failed pickup or
    place leaves state and graph unchanged.
    """
    check_preconditions(state, action, graph)

    if isinstance(action, Navigate):
        return HighLevelState(
            holding=state.holding, at_furniture=action.furniture, at_room=action.room
        )

    if not outcome.succeeded:
        return state

    if isinstance(action, Pickup):
        graph.move_object(action.obj, None)
        return HighLevelState(
            holding=action.obj, at_furniture=state.at_furniture, at_room=state.at_room
        )

    graph.move_object(action.obj, action.furniture)
    return HighLevelState(
        holding=None, at_furniture=state.at_furniture, at_room=state.at_room
    )


def execute_navigation(
    from_cell: Cell,
    path: Sequence[Cell],
    config: WorldConfig,
    rng: np.random.Generator,
) -> ExecutionOutcome:
    """Drive along path and draw one collision per risky door cell, in path order.

    Collisions add ``collision_detour_m`` to the distance and
    ``collision_time_penalty`` to the time. Travel time uses the planned
    distance only.
    """
    cells = list(path)
    if not cells or cells[0] != tuple(from_cell):
        cells = [tuple(from_cell), *cells]
    grid = config.grid

    for i, c in enumerate(cells):
        if not grid.is_traversable(c):
            msg = f"Path crosses occupied cell {c}"
            raise InputError(msg)
        if i and max(abs(c[0] - cells[i - 1][0]), abs(c[1] - cells[i - 1][1])) != 1:
            msg = f"Path cells {cells[i - 1]} and {c} are not 8-adjacent"
            raise InputError(msg)

    travel_m = utils.path_length_m(cells, grid.cell_size)
    turns = utils.count_turns(cells)

    collisions = 0
    for c in cells[1:]:
        p = config.door_risk.get(c, 0.0)
        if p > 0 and rng.random() < p:
            collisions += 1
            logger.debug("Collision at door %s", c)

    return ExecutionOutcome(
        succeeded=True,
        time_s=travel_m / config.robot_speed
        + turns * config.turn_time
        + collisions * config.collision_time_penalty,
        distance_m=travel_m + collisions * config.collision_detour_m,
        collisions=collisions,
        executed_path=cells,
    )


def execute_manipulation(
    kind: str,
    obj: str,
    furniture: str,
    stand_cell: Cell,
    config: WorldConfig,
    rng: np.random.Generator,
) -> ExecutionOutcome:
    """One pickup or place attempt resolved by the difficulty profile."""
    if kind not in fld.MANIPULATION_LIST:
        msg = f"Unknown manipulation kind {kind}"
        raise InputError(msg)
    if not config.grid.is_adjacent(tuple(stand_cell), furniture):
        msg = f"Stand cell {stand_cell} is not adjacent to {furniture}"
        raise InputError(msg)

    profile = config.profile(obj, furniture)
    succeeded = bool(rng.random() < profile.success_prob)
    time_s = float(
        rng.uniform(
            profile.time_mean - profile.time_jitter,
            profile.time_mean + profile.time_jitter,
        )
    )
    return ExecutionOutcome(succeeded=succeeded, time_s=time_s, attempts=1)


class World:
    """Mutable ground truth of one mission run.

    Owns the scene graph it is given (dynamics mutate it in place), the
    robot cell and three random streams split from
    ``(config.rng_seed, run_seed)``: navigation, manipulation and stand-cell
    sampling.
    """

    def __init__(self, graph: SceneGraph, config: WorldConfig, run_seed: int = 0):
        config.check_against(graph)

        self.graph = graph
        self.config = config
        self.run_seed = run_seed
        self.robot_cell: Cell = config.start  # type: ignore
        self.nav_rng, self.man_rng, self.sample_rng = utils.split_rng(
            config.rng_seed, run_seed
        )
        self.clock_s = 0.0
        self.n_manipulation_calls = 0

    @property
    def grid(self):
        return self.config.grid

    def initial_state(self) -> HighLevelState:
        held = [i.name for i in self.graph.objects if i.on_furniture is None]
        return HighLevelState(holding=held[0] if held else None)

    def navigate(self, path: Sequence[Cell]) -> ExecutionOutcome:
        outcome = execute_navigation(self.robot_cell, path, self.config, self.nav_rng)
        self.robot_cell = outcome.executed_path[-1]
        self.clock_s += outcome.time_s
        return outcome

    def manipulate(
        self, kind: str, obj: str, furniture: str, stand_cell: Cell
    ) -> ExecutionOutcome:
        outcome = execute_manipulation(
            kind, obj, furniture, stand_cell, self.config, self.man_rng
        )
        self.robot_cell = tuple(stand_cell)  # type: ignore
        self.n_manipulation_calls += 1
        self.clock_s += outcome.time_s
        return outcome

    def probe(
        self, kind: str, obj: str, furniture: str, stand_cells: Sequence[Cell]
    ) -> List[ExecutionOutcome]:
        """Simulated cost-probe trials; consume random numbers, change nothing else."""
        return [
            execute_manipulation(kind, obj, furniture, c, self.config, self.man_rng)
            for c in stand_cells
        ]

    def step(
        self,
        state: HighLevelState,
        action: HighLevelAction,
        outcome: ExecutionOutcome,
    ) -> HighLevelState:
        return step_dynamics(state, action, outcome, self.graph)

    def where_is(self, obj: str) -> Optional[str]:
        return self.graph.object_node(obj).on_furniture
