import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import pandas as pd

from ezytamp import fields as fld
from ezytamp.codec import decode_label, encode_cost
from ezytamp.errors import BackendError, InputError, UnreachableError
from ezytamp.estimator.oracle import AttributeBundle, SemanticOracle
from ezytamp.estimator.overlap import OverlapParams, path_overlap
from ezytamp.ledger import CostLedger
from ezytamp.motion.astar import Path, astar
from ezytamp.scene.graph import SceneGraph
from ezytamp.scene.grid import OccupancyGrid
from ezytamp.scene.state import (
    HighLevelAction,
    HighLevelState,
    Navigate,
    Pickup,
    TaskPlan,
)
from ezytamp.utils import Cell

logger = logging.getLogger(__name__)

PathCache = Dict[Tuple[Cell, str], Path]


@dataclass
class PlanEstimate:
    plan_index: int
    nav_estimates: List[float] = field(default_factory=list)
    man_estimates: List[float] = field(default_factory=list)
    n_man_valid: int = 0
    total: float = 0.0
    man_labels: List[str] = field(default_factory=list)

    def __post_init__(self):
        if self.n_man_valid > len(self.man_estimates):
            msg = "n_man_valid must not exceed the number of manipulation estimates"
            raise ValueError(msg)

    def recompute_total(self) -> float:
        return plan_total(self.nav_estimates, self.man_estimates, self.n_man_valid)


def plan_total(
    nav_estimates: Sequence[float], man_estimates: Sequence[float], n_man_valid: int
) -> float:
    """``sum(nav) + sum(man) * n_man_valid / n_man``, man term 0 without man actions."""
    total = float(sum(nav_estimates))
    if man_estimates:
        total += float(sum(man_estimates)) * n_man_valid / len(man_estimates)
    return total


def presumed_start(
    state: HighLevelState, grid: OccupancyGrid, start_cell: Optional[Cell] = None
) -> Cell:
    """Canonical stand cell of the current furniture, else the given start cell."""
    if state.at_furniture is not None:
        return grid.stand_cell(state.at_furniture)
    if start_cell is not None:
        return start_cell
    return grid.first_free_cell()


def presumed_path(
    grid: OccupancyGrid,
    start: Cell,
    furniture: str,
    cache: Optional[PathCache] = None,
) -> Path:
    key = (start, furniture)
    if cache is not None and key in cache:
        return cache[key]
    path = astar(grid, start, grid.furniture_region(furniture))
    if cache is not None:
        cache[key] = path
    return path


def combine_nav_estimate(
    costs: Sequence[float],
    overlaps: Sequence[float],
    fallback: float,
    mode: str = fld.NAV_MODE_NORMALIZED,
) -> float:
    """Combine known navigation costs weighted by path overlap.

    ``literal`` returns ``sum(c * overlap / 100)``; ``normalized`` the
    convex combination with weights ``overlap / 200``. Both return fallback
    when no record overlaps.
    """
    weights = [i / 200.0 for i in overlaps]
    if not costs or sum(weights) <= 0:
        return fallback
    if mode == fld.NAV_MODE_LITERAL:
        return float(sum(c * o / 100.0 for c, o in zip(costs, overlaps)))
    return float(sum(c * w for c, w in zip(costs, weights)) / sum(weights))


def estimate_nav_cost(
    action: Navigate,
    state: HighLevelState,
    ledger: CostLedger,
    grid: OccupancyGrid,
    params: OverlapParams = OverlapParams(),  # noqa: B008
    robot_speed: float = fld.DEFAULT_ROBOT_SPEED,
    start_cell: Optional[Cell] = None,
    cache: Optional[PathCache] = None,
) -> float:
    """Estimated navigation cost from the overlap of the presumed path with
    known navigated paths.

    Without overlapping records the estimate is the presumed path length plus
    its travel time.

    Raises
    ------
    UnreachableError
        When no presumed path reaches the furniture.
    """
    start = presumed_start(state, grid, start_cell)
    path = presumed_path(grid, start, action.furniture, cache)
    fallback = path.length_m + path.length_m / robot_speed

    costs = [i.cost for i in ledger.nav_records]
    overlaps = [
        path_overlap(path, i.path, params, grid.cell_size) for i in ledger.nav_records
    ]
    return combine_nav_estimate(costs, overlaps, fallback, params.nav_estimator_mode)


def estimate_man_cost(
    action: HighLevelAction,
    graph: SceneGraph,
    ledger: CostLedger,
    oracle: SemanticOracle,
) -> Tuple[float, str]:
    """Estimated manipulation cost and label inferred by the semantic oracle."""
    if isinstance(action, Navigate):
        msg = "estimate_man_cost requires a pickup or place action"
        raise InputError(msg)
    query = AttributeBundle.from_graph(graph, action.kind, action.obj, action.furniture)

    known = []
    for i in ledger.man_records:
        if not (graph.has_object(i.obj) and graph.has_furniture(i.furniture)):
            continue
        bundle = AttributeBundle.from_graph(graph, i.kind, i.obj, i.furniture)
        known.append((bundle, encode_cost(i.cost)))
    if not known:
        return 0.0, fld.LABEL_UNKNOWN

    try:
        label = oracle.infer(query, known)
    except BackendError as e:
        logger.warning("Semantic oracle failed for %s: %s", action, e)
        label = fld.LABEL_UNKNOWN
    return decode_label(label), label


def _advance(state: HighLevelState, action: HighLevelAction, graph: SceneGraph):
    if isinstance(action, Navigate):
        room = action.room
        if graph.has_furniture(action.furniture):
            room = graph.room_of(action.furniture)
        return HighLevelState(state.holding, action.furniture, room)
    if isinstance(action, Pickup):
        return HighLevelState(action.obj, state.at_furniture, state.at_room)
    return HighLevelState(None, state.at_furniture, state.at_room)


def score_plan(
    plan: TaskPlan,
    state: HighLevelState,
    graph: SceneGraph,
    ledger: CostLedger,
    grid: OccupancyGrid,
    params: OverlapParams,
    oracle: SemanticOracle,
    plan_index: int = 0,
    robot_speed: float = fld.DEFAULT_ROBOT_SPEED,
    start_cell: Optional[Cell] = None,
    cache: Optional[PathCache] = None,
) -> PlanEstimate:
    """Estimated total cost of a feasibility-checked plan.

    The state is advanced symbolically through the plan so each navigation
    estimate starts from the furniture reached by the previous one. A
    navigation to unreachable furniture is estimated as infinite.
    """
    nav_estimates: List[float] = []
    man_estimates: List[float] = []
    man_labels: List[str] = []

    for action in plan:
        if isinstance(action, Navigate):
            try:
                value = estimate_nav_cost(
                    action,
                    state,
                    ledger,
                    grid,
                    params,
                    robot_speed=robot_speed,
                    start_cell=start_cell,
                    cache=cache,
                )
            except UnreachableError as e:
                logger.warning("Plan %d: %s", plan_index, e)
                value = float("inf")
            nav_estimates.append(value)
        else:
            value, label = estimate_man_cost(action, graph, ledger, oracle)
            man_estimates.append(value)
            man_labels.append(label)
        state = _advance(state, action, graph)

    n_man_valid = sum(1 for i in man_estimates if i != 0)
    return PlanEstimate(
        plan_index=plan_index,
        nav_estimates=nav_estimates,
        man_estimates=man_estimates,
        n_man_valid=n_man_valid,
        total=plan_total(nav_estimates, man_estimates, n_man_valid),
        man_labels=man_labels,
    )


def select_best(estimates: Sequence[PlanEstimate]) -> int:
    """plan_index of the lowest total, lowest plan_index on ties."""
    if not estimates:
        msg = "no plan estimate to select from"
        raise InputError(msg)
    return min(estimates, key=lambda i: (i.total, i.plan_index)).plan_index


def estimate_breakdown(plan: TaskPlan, estimate: PlanEstimate) -> pd.DataFrame:
    """Per-action breakdown of one plan estimate.

    Returns
    -------
    pd.DataFrame
        - index
        - action
        - kind
        - estimate
        - label
    """
    nav = iter(estimate.nav_estimates)
    man = iter(zip(estimate.man_estimates, estimate.man_labels))
    rows = []
    for i, action in enumerate(plan):
        if isinstance(action, Navigate):
            rows.append((i, str(action), action.kind, next(nav), ""))
        else:
            value, label = next(man)
            rows.append((i, str(action), action.kind, value, label))
    return pd.DataFrame(rows, columns=["index", "action", "kind", "estimate", "label"])


def estimate_plan(
    plans: Sequence[TaskPlan],
    state: HighLevelState,
    graph: SceneGraph,
    ledger: CostLedger,
    grid: OccupancyGrid,
    params: OverlapParams,
    oracle: SemanticOracle,
    robot_speed: float = fld.DEFAULT_ROBOT_SPEED,
    start_cell: Optional[Cell] = None,
) -> pd.DataFrame:
    """Score every plan and stack the per-action breakdowns.

    Returns
    -------
    pd.DataFrame
        - plan_index
        - index
        - action
        - kind
        - estimate
        - label
        - total
        - selected
    """
    cache: PathCache = {}
    estimates = [
        score_plan(
            plan,
            state,
            graph,
            ledger,
            grid,
            params,
            oracle,
            plan_index=i,
            robot_speed=robot_speed,
            start_cell=start_cell,
            cache=cache,
        )
        for i, plan in enumerate(plans)
    ]
    best = select_best(estimates)

    dfs = []
    for plan, estimate in zip(plans, estimates):
        df = estimate_breakdown(plan, estimate)
        df.insert(0, "plan_index", estimate.plan_index)
        df["total"] = estimate.total
        df["selected"] = estimate.plan_index == best
        dfs.append(df)
    return pd.concat(dfs, ignore_index=True)
