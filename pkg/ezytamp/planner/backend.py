import json
import logging
import re
from abc import ABC, abstractmethod
from itertools import permutations
from typing import Dict, List, Optional, Sequence, Set, Tuple

from ezytamp import utils
from ezytamp.connect import LLMClient
from ezytamp.errors import InputError
from ezytamp.planner.context import GoalItem, PlanningContext, Violation
from ezytamp.scene.graph import serialize_scene_graph
from ezytamp.scene.state import (
    HighLevelAction,
    Navigate,
    Pickup,
    Place,
    TaskPlan,
)

logger = logging.getLogger(__name__)


class PlannerBackend(ABC):
    """Source of task plan candidates."""

    @abstractmethod
    def generate(self, ctx: PlanningContext) -> List[TaskPlan]:
        """Return up to ``ctx.m_candidates`` plans for the command."""

    def repair(
        self,
        ctx: PlanningContext,
        index: int,
        plan: TaskPlan,
        violations: Sequence[Violation],
    ) -> TaskPlan:
        """Regenerate candidate index given the violations in ctx.feedback."""
        plans = self.generate(ctx)
        return plans[index] if index < len(plans) else plan


class ScriptedBackend(PlannerBackend):
    """Deterministic backend enumerating object bindings.

    For each goal the candidate objects are those matching the goal key that
    are not reserved by earlier commands, not excluded, and not already on the
    destination. Candidate ``r`` binds the ``r``-th candidate of every goal
    (wrapping, never using an object twice), and each binding becomes a
    navigate, pickup, navigate, place chain. When rotations give fewer than M
    distinct plans, goal-order permutations fill the rest.
    """

    def bindings(self, ctx: PlanningContext, goal: GoalItem) -> List[str]:
        out = []
        for o in ctx.graph.match_objects(goal.key):
            if o.name in ctx.reserved_objects:
                continue
            if o.on_furniture is None:
                if o.name == ctx.state.holding:
                    out.append(o.name)
                continue
            if o.on_furniture == goal.destination:
                continue
            if (o.name, o.on_furniture) in ctx.excluded_bindings:
                continue
            out.append(o.name)
        held = ctx.state.holding
        if held in out:
            out.remove(held)
            out.insert(0, held)  # type: ignore
        return out

    def generate(self, ctx: PlanningContext) -> List[TaskPlan]:
        goals = ctx.command.goal
        binding_list = [self.bindings(ctx, g) for g in goals]
        for g, b in zip(goals, binding_list):
            if not b:
                logger.warning("No object left for goal %s -> %s", g.key, g.destination)
        n_rotation = max((len(b) for b in binding_list), default=0)
        if not n_rotation:
            return []

        plans: List[TaskPlan] = []
        seen: Set[tuple] = set()

        def add(order: Sequence[int], rotation: int) -> bool:
            plan = self.build(ctx, order, binding_list, rotation)
            if plan.actions and plan.key() not in seen:
                seen.add(plan.key())
                plans.append(plan)
            return len(plans) >= ctx.m_candidates

        identity = list(range(len(goals)))
        for r in range(n_rotation):
            if add(identity, r):
                return plans
        for order in permutations(identity):
            if list(order) == identity:
                continue
            for r in range(n_rotation):
                if add(order, r):
                    return plans

        logger.warning(
            "Only %d distinct candidate(s) for %r, %d requested",
            len(plans),
            ctx.command.text,
            ctx.m_candidates,
        )
        return plans

    def build(
        self,
        ctx: PlanningContext,
        order: Sequence[int],
        binding_list: Sequence[Sequence[str]],
        rotation: int,
    ) -> TaskPlan:
        graph = ctx.graph
        state = ctx.state
        at = state.at_furniture
        actions: List[HighLevelAction] = []
        used: Set[str] = set()
        chains: Dict[int, Tuple[str, str]] = {}

        for g in order:
            b = binding_list[g]
            for j in range(len(b)):
                o = b[(rotation + j) % len(b)]
                if o not in used:
                    used.add(o)
                    chains[g] = (o, ctx.command.goal[g].destination)
                    break

        held = state.holding
        if held is not None and held not in used:
            dest = at or ctx.command.goal[order[0]].destination
            if at is None:
                actions.append(Navigate(dest, graph.room_of(dest)))
                at = dest
            actions.append(Place(held, dest))
            held = None

        # a held goal object is delivered before anything else is picked up
        sequence = sorted(
            order, key=lambda g: g not in chains or chains[g][0] != held
        )
        for g in sequence:
            if g not in chains:
                continue
            o, dest = chains[g]
            if o != held:
                src = graph.object_node(o).on_furniture
                if at != src:
                    actions.append(Navigate(src, graph.room_of(src)))  # type: ignore
                    at = src
                actions.append(Pickup(o, src))  # type: ignore
            held = None
            if at != dest:
                actions.append(Navigate(dest, graph.room_of(dest)))
                at = dest
            actions.append(Place(o, dest))

        return TaskPlan(actions=actions)


PLAN_INSTRUCTION = """\
Return {m} different task plans that fulfil the command as a JSON array of
plans. Each plan is an array of actions and each action is an array
["navigate", furniture, room], ["pickup", object, furniture] or
["place", object, furniture]. Only use nodes that exist in the scene graph.
Prefer actions with low known cost and avoid actions known to be hard.
Answer with the JSON array only."""

_json_array = re.compile(r"\[.*\]", re.DOTALL)


def parse_plans(text: str) -> List[TaskPlan]:
    """Parse a JSON array of plans, or of actions for a single plan."""
    match = _json_array.search(text)
    if match is None:
        logger.warning("Backend answer has no JSON array")
        return []
    try:
        data = json.loads(match.group(0))
    except json.JSONDecodeError as e:
        logger.warning("Backend answer is not valid JSON: %s", e)
        return []
    if data and isinstance(data[0], list) and data[0] and isinstance(data[0][0], str):
        data = [data]

    plans = []
    for i in data:
        try:
            plans.append(TaskPlan.from_list(i))
        except InputError as e:
            logger.warning("Dropping unparsable plan: %s", e)
    return plans


class LLMBackend(PlannerBackend):
    """Chat-completion backend grounding the free-text command itself."""

    def __init__(self, client: LLMClient, temperature: float = 0.0):
        self.client = client
        self.temperature = temperature

    def build_messages(
        self, ctx: PlanningContext, m: Optional[int] = None
    ) -> List[dict]:
        m = m or ctx.m_candidates
        state = utils.to_canonical_json(ctx.state.to_dict(), indent=None).strip()
        sections = [
            f"Command: {ctx.command.text}",
            f"Current state: {state}",
            f"Scene graph:\n{serialize_scene_graph(ctx.graph)}",
            f"Actions:\n{ctx.action_docs}",
            f"Known costs:\n{ctx.ledger_summary or '(none)'}",
        ]
        if ctx.feedback:
            sections.append(
                "Previous plan was infeasible:\n"
                + "\n".join(f"- {i}" for i in ctx.feedback)
            )
        sections.append(PLAN_INSTRUCTION.format(m=m))
        return [
            {"role": "system", "content": "You are a household robot task planner."},
            {"role": "user", "content": "\n\n".join(sections)},
        ]

    def generate(self, ctx: PlanningContext) -> List[TaskPlan]:
        text = self.client.chat(self.build_messages(ctx), self.temperature)
        return parse_plans(text)[: ctx.m_candidates]

    def repair(
        self,
        ctx: PlanningContext,
        index: int,
        plan: TaskPlan,
        violations: Sequence[Violation],
    ) -> TaskPlan:
        text = self.client.chat(self.build_messages(ctx, m=1), self.temperature)
        plans = parse_plans(text)
        return plans[0] if plans else plan

