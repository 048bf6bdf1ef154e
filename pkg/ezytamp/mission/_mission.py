import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

from ezytamp import fields as fld
from ezytamp.errors import InputError, PlanningExhaustedError, UnreachableError
from ezytamp.estimator.oracle import RuleOracle, SemanticOracle
from ezytamp.estimator.scoring import PathCache, score_plan, select_best
from ezytamp.ledger import CostLedger, snapshot_summary
from ezytamp.mission.config import RunConfig
from ezytamp.mission.tracker import MissionTracker
from ezytamp.motion.executor import execute_action
from ezytamp.planner.backend import PlannerBackend, ScriptedBackend
from ezytamp.planner.context import Command, Mission, PlanningContext
from ezytamp.planner.generate import generate_valid_candidates
from ezytamp.scene.graph import SceneGraph
from ezytamp.scene.state import (
    HighLevelAction,
    HighLevelState,
    Navigate,
    Place,
    TaskPlan,
)
from ezytamp.world.world import World

logger = logging.getLogger(__name__)


@dataclass
class PlanExecution:
    """What happened while executing one selected plan."""

    state: HighLevelState
    failed: bool = False
    ended: bool = False
    failed_bindings: List[Tuple[str, str]] = field(default_factory=list)


def attribute_actions(
    plan: TaskPlan, command: Command, goal_indices: List[int], graph: SceneGraph
) -> Tuple[List[int], Dict[int, str]]:
    """Goal index owning each action and the object each goal is bound to.

    A goal is bound by the first Place of a matching object on its destination.
    Navigations and stow actions belong to the next bound manipulation, trailing
    ones to the last goal.
    """
    bound: Dict[int, str] = {}
    owner: Dict[str, int] = {}
    for action in plan:
        if not isinstance(action, Place) or action.obj in owner:
            continue
        for g in goal_indices:
            goal = command.goal[g]
            if g in bound or action.furniture != goal.destination:
                continue
            if action.obj in {i.name for i in graph.match_objects(goal.key)}:
                bound[g] = action.obj
                owner[action.obj] = g
                break

    goal_of: List[int] = [goal_indices[-1]] * len(plan)
    pending: List[int] = []
    for i, action in enumerate(plan):
        g = None if isinstance(action, Navigate) else owner.get(action.obj)
        if g is None:
            pending.append(i)
            continue
        for j in pending + [i]:
            goal_of[j] = g
        pending = []
    return goal_of, bound


def _next_manipulation(plan: TaskPlan, index: int) -> Optional[HighLevelAction]:
    for action in list(plan)[index + 1 :]:
        if not isinstance(action, Navigate):
            return action
    return None


def execute_plan(
    plan: TaskPlan,
    state: HighLevelState,
    world: World,
    tracker: MissionTracker,
    config: RunConfig,
    command_index: int,
    command: Command,
    goal_indices: List[int],
    ledger: Optional[CostLedger] = None,
    stop_on_failure: bool = False,
) -> PlanExecution:
    """Execute a feasibility-checked plan action by action.

    A failed Pickup skips the rest of that object's chain, a failed Place ends
    the plan with the object still held and an unreachable furniture skips its
    chain (or ends the plan while holding). When ``ledger`` is given it is
    updated with the empirical cost of every executed action.
    """
    goal_of, bound = attribute_actions(plan, command, goal_indices, world.graph)
    for g, obj in bound.items():
        tracker.bind(command_index, g, obj)

    result = PlanExecution(state=state)

    def run(action: HighLevelAction, goal_index: int):
        outcome, cost, result.state = execute_action(
            action,
            result.state,
            world,
            retry_budget=config.attempt_budget,
            n_l=config.n_l,
            gamma_nav=config.gamma_nav,
            gamma_man=config.gamma_man,
        )
        tracker.record(command_index, goal_index, action, outcome, cost)
        if ledger is not None:
            ledger.update(cost)
        logger.debug("%s -> succeeded=%s", action, outcome.succeeded)
        return outcome

    skip: Optional[str] = None
    for i, action in enumerate(plan):
        if skip is not None:
            if isinstance(action, Place) and action.obj == skip:
                skip = None
            continue

        try:
            if (
                not isinstance(action, Navigate)
                and result.state.at_furniture != action.furniture
            ):
                room = world.graph.room_of(action.furniture)
                run(Navigate(action.furniture, room), goal_of[i])
            outcome = run(action, goal_of[i])
        except UnreachableError as e:
            logger.warning("Skipping %s: %s", action, e)
            result.failed = True
            if result.state.holding is not None or stop_on_failure:
                result.ended = True
                break
            nxt = _next_manipulation(plan, i)
            skip = nxt.obj if nxt is not None else None
            continue

        if outcome.succeeded:
            continue

        result.failed = True
        if isinstance(action, Place):
            result.ended = True
            break
        if not isinstance(action, Navigate):
            result.failed_bindings.append((action.obj, action.furniture))
            skip = action.obj
        if stop_on_failure:
            result.ended = True
            break
    return result


def _context(
    command: Command,
    goal_indices: List[int],
    state: HighLevelState,
    world: World,
    tracker: MissionTracker,
    config: RunConfig,
    ledger_summary: str = "",
    excluded: Optional[Set[Tuple[str, str]]] = None,
) -> PlanningContext:
    if len(goal_indices) == len(command.goal):
        sub = command
    else:
        sub = Command(command.text, [command.goal[g] for g in goal_indices])
    return PlanningContext(
        command=sub,
        state=state,
        graph=world.graph,
        ledger_summary=ledger_summary,
        m_candidates=config.m_candidates,
        reserved_objects=tracker.delivered_objects(world.graph),
        excluded_bindings=frozenset(excluded or ()),
    )


def _select_by_cost(
    plans: List[TaskPlan],
    state: HighLevelState,
    world: World,
    ledger: CostLedger,
    config: RunConfig,
    oracle: SemanticOracle,
    cache: PathCache,
) -> TaskPlan:
    estimates = [
        score_plan(
            plan,
            state,
            world.graph,
            ledger,
            world.grid,
            config.overlap,
            oracle,
            plan_index=i,
            robot_speed=world.config.robot_speed,
            start_cell=world.robot_cell,
            cache=cache,
        )
        for i, plan in enumerate(plans)
    ]
    best = select_best(estimates)
    logger.info(
        "Estimated totals %s, selected candidate %d",
        [round(i.total, 2) for i in estimates],
        best,
    )
    return plans[best]


def _run_mission(
    mission: Mission,
    graph: SceneGraph,
    world: World,
    config: RunConfig,
    backend: Optional[PlannerBackend] = None,
    oracle: Optional[SemanticOracle] = None,
    ledger: Optional[CostLedger] = None,
) -> Tuple[MissionTracker, Optional[CostLedger]]:
    """Run a mission without loading any document.

    The decision policy follows ``config.algorithm``:

    - inter_llm scores every valid candidate against the cost ledger, executes
      the cheapest and updates the ledger after every action.
    - open_loop executes the first valid candidate generated with an empty
      ledger summary and keeps no ledger.
    - reactive executes the first valid candidate and regenerates a plan for
      the remaining goals after a failure, up to ``retry_budget`` times per
      command.

    A command whose candidates are exhausted leaves its goals unfulfilled and
    is listed in ``tracker.planning_failures``; the mission goes on with the
    next command. Goals that already hold when a command starts are bound to
    the object on the destination without planning.

    Parameters
    ----------
    mission: Mission
        Commands to execute in order.
    graph: SceneGraph
        Scene graph owned by ``world``; mutated by execution.
    world: World
        Simulated world.
    config: RunConfig
        Hyperparameters.
    backend: Optional[PlannerBackend]
        Candidate generator, scripted by default.
    oracle: Optional[SemanticOracle]
        Manipulation label transfer, rule oracle at ``config.sigma`` by default.
    ledger: Optional[CostLedger]
        Initial cost ledger for inter_llm; updated in place.

    Returns
    -------
    Tuple[MissionTracker, Optional[CostLedger]]
        Finalized tracker and the final ledger (None unless inter_llm).

    """
    if graph is not world.graph:
        msg = "world must own the scene graph passed to the runner"
        raise InputError(msg)
    mission.check_against(graph)
    world.config.check_mission(mission, graph)

    algorithm = config.algorithm
    backend = backend or ScriptedBackend()
    if algorithm == fld.ALGO_INTER_LLM:
        ledger = ledger if ledger is not None else CostLedger()
        oracle = oracle or RuleOracle(config.sigma)
    else:
        ledger = None

    tracker = MissionTracker.for_mission(mission)
    state = world.initial_state()
    cache: PathCache = {}

    for c, command in enumerate(mission.commands):
        logger.info("Command %d: %s", c, command.text)
        satisfied = tracker.bind_satisfied(c, graph)
        if satisfied:
            logger.info("Goal(s) %s already hold", satisfied)
        goals = tracker.remaining_goals(c, graph)
        if not goals:
            tracker.snapshot(ledger.to_dict() if ledger is not None else None)
            continue

        summary = snapshot_summary(ledger) if ledger is not None else ""
        ctx = _context(command, goals, state, world, tracker, config, summary)
        try:
            plans = generate_valid_candidates(
                backend, ctx, max_retries=config.max_retries
            )
        except PlanningExhaustedError as e:
            logger.warning("Command %d left unfulfilled: %s", c, e)
            tracker.planning_failures.append(str(e))
            tracker.snapshot(ledger.to_dict() if ledger is not None else None)
            continue

        if ledger is not None:
            plan = _select_by_cost(plans, state, world, ledger, config, oracle, cache)
        else:
            plan = plans[0]
        logger.info("Executing %s", plan)

        reactive = algorithm == fld.ALGO_REACTIVE
        result = execute_plan(
            plan,
            state,
            world,
            tracker,
            config,
            c,
            command,
            goals,
            ledger=ledger,
            stop_on_failure=reactive,
        )
        state = result.state

        excluded = set(result.failed_bindings)
        regenerations = 0
        while reactive and result.failed:
            goals = tracker.remaining_goals(c, graph)
            if not goals or regenerations >= config.effective_retry_budget:
                break
            regenerations += 1
            logger.info("Replanning %d goal(s), attempt %d", len(goals), regenerations)
            ctx = _context(command, goals, state, world, tracker, config, "", excluded)
            try:
                plans = generate_valid_candidates(
                    backend, ctx, max_retries=config.max_retries
                )
            except PlanningExhaustedError as e:
                logger.warning("Replanning exhausted: %s", e)
                break
            result = execute_plan(
                plans[0],
                state,
                world,
                tracker,
                config,
                c,
                command,
                goals,
                stop_on_failure=True,
            )
            state = result.state
            excluded.update(result.failed_bindings)

        tracker.snapshot(ledger.to_dict() if ledger is not None else None)
        n_left = len(tracker.remaining_goals(c, graph))
        logger.info("Command %d done, %d goal(s) unfulfilled", c, n_left)

    tracker.finalize(graph)
    return tracker, ledger
