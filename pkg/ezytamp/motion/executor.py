import logging
from typing import List, Optional, Sequence, Tuple

from ezytamp import fields as fld
from ezytamp import utils
from ezytamp.motion.astar import astar
from ezytamp.motion.cost import EmpiricalCost, empirical_man_cost, empirical_nav_cost
from ezytamp.motion.sampling import sample_stand_cells
from ezytamp.scene.state import (
    FORWARD,
    TURN_LEFT_45,
    TURN_RIGHT_45,
    HighLevelAction,
    HighLevelState,
    LowLevelControl,
    Navigate,
)
from ezytamp.utils import Cell
from ezytamp.world.world import ExecutionOutcome, World, check_preconditions

logger = logging.getLogger(__name__)


def expand_controls(
    cells: Sequence[Cell],
    manipulation: Optional[str] = None,
    cell_size: float = fld.DEFAULT_CELL_SIZE,
) -> List[LowLevelControl]:
    """Expand a path into low-level controls.

    Each step turns toward the next cell (the first step sets the heading
    without turning) and then moves forward in 0.05 m controls. A manipulation
    kind appends a PickAt/PlaceAt at the last cell.
    """
    out: List[LowLevelControl] = []
    heading = None
    for a, b in zip(cells, cells[1:]):
        h = utils.heading_of(a, b)
        if heading is not None:
            d = utils.heading_delta(heading, h)
            out.extend([TURN_LEFT_45 if d > 0 else TURN_RIGHT_45] * abs(d))
        heading = h
        step_m = utils.path_length_m([a, b], cell_size)
        out.extend([FORWARD] * int(round(step_m / fld.FORWARD_STEP_M)))

    if manipulation is not None and cells:
        kind = (
            fld.CONTROL_PICK_AT
            if manipulation == fld.ACTION_PICKUP
            else fld.CONTROL_PLACE_AT
        )
        out.append(LowLevelControl(kind, tuple(cells[-1])))  # type: ignore
    return out


def execute_action(
    action: HighLevelAction,
    state: HighLevelState,
    world: World,
    retry_budget: int = 1,
    n_l: int = fld.DEFAULT_N_L,
    gamma_nav: float = fld.DEFAULT_GAMMA_NAV,
    gamma_man: float = fld.DEFAULT_GAMMA_MAN,
) -> Tuple[ExecutionOutcome, EmpiricalCost, HighLevelState]:
    """Execute one high-level action against the world.

    Navigation plans with A* to the furniture and drives the path.
    Manipulation first runs ``n_l`` cost-probe trials at sampled stand cells,
    which give the empirical cost, then makes up to ``retry_budget`` real
    attempts from one stand cell.

    Parameters
    ----------
    action: HighLevelAction
        Feasibility-checked action.
    state: HighLevelState
        Current high-level state.
    world: World
        World owning graph, grid, robot cell and random streams.
    retry_budget: int
        Maximum manipulation attempts.
    n_l: int
        Number of cost-probe trials.
    gamma_nav: float
        Collision weight.
    gamma_man: float
        Manipulation failure weight.

    Returns
    -------
    Tuple[ExecutionOutcome, EmpiricalCost, HighLevelState]
        Outcome, empirical cost and successor state.
    """
    check_preconditions(state, action, world.graph)
    grid = world.grid

    if isinstance(action, Navigate):
        path = astar(grid, world.robot_cell, grid.furniture_region(action.furniture))
        outcome = world.navigate(path.cells)
        if logger.isEnabledFor(logging.DEBUG):
            controls = expand_controls(path.cells, cell_size=grid.cell_size)
            logger.debug("%s: %d controls", action, len(controls))
        cost = empirical_nav_cost(
            outcome, gamma_nav, action=action, state=state, cell_size=grid.cell_size
        )
        return outcome, cost, world.step(state, action, outcome)

    if grid.is_adjacent(world.robot_cell, action.furniture):
        stand = world.robot_cell
    else:
        stand = sample_stand_cells(grid, action.furniture, 1, world.sample_rng)[0]

    probe_cells = sample_stand_cells(grid, action.furniture, n_l, world.sample_rng)
    trials = world.probe(action.kind, action.obj, action.furniture, probe_cells)
    cost = empirical_man_cost(trials, gamma_man, action=action, state=state)

    succeeded = False
    time_s = 0.0
    attempts = 0
    for _ in range(max(retry_budget, 1)):
        attempt = world.manipulate(action.kind, action.obj, action.furniture, stand)
        attempts += 1
        time_s += attempt.time_s
        if attempt.succeeded:
            succeeded = True
            break
    logger.debug("%s: %d attempt(s), succeeded=%s", action, attempts, succeeded)

    outcome = ExecutionOutcome(succeeded=succeeded, time_s=time_s, attempts=attempts)
    return outcome, cost, world.step(state, action, outcome)
