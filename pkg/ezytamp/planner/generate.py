import logging
from typing import List, Set

from ezytamp.errors import PlanningExhaustedError
from ezytamp.planner.backend import PlannerBackend
from ezytamp.planner.checker import check_feasibility
from ezytamp.planner.context import PlanningContext, Violation
from ezytamp.scene.state import TaskPlan

logger = logging.getLogger(__name__)


def generate_candidates(
    backend: PlannerBackend, ctx: PlanningContext
) -> List[TaskPlan]:
    """At most M pairwise distinct candidates from backend."""
    out: List[TaskPlan] = []
    seen: Set[tuple] = set()
    for plan in backend.generate(ctx):
        if plan.key() in seen:
            continue
        seen.add(plan.key())
        out.append(plan)
        if len(out) >= ctx.m_candidates:
            break
    if len(out) < ctx.m_candidates:
        logger.warning(
            "Backend returned %d distinct candidate(s), %d requested",
            len(out),
            ctx.m_candidates,
        )
    return out


def generate_valid_candidates(
    backend: PlannerBackend, ctx: PlanningContext, max_retries: int = 5
) -> List[TaskPlan]:
    """Candidates that pass the feasibility checker.

    Every infeasible candidate is regenerated with its violations as feedback
    until it passes or ``max_retries`` regenerations are spent; exhausted
    candidates are dropped.

    Raises
    ------
    PlanningExhaustedError
        When no candidate survives.
    """
    if max_retries < 0:
        msg = "max_retries must be non-negative"
        raise ValueError(msg)

    valid: List[TaskPlan] = []
    seen: Set[tuple] = set()
    last: List[Violation] = []

    for index, plan in enumerate(generate_candidates(backend, ctx)):
        violations = check_feasibility(plan, ctx.state, ctx.graph)
        retries = 0
        while violations and retries < max_retries:
            logger.info(
                "Candidate %d infeasible (%s), regenerating", index, violations[0]
            )
            ctx.feedback = violations
            plan = backend.repair(ctx, index, plan, violations)
            retries += 1
            violations = check_feasibility(plan, ctx.state, ctx.graph)

        if violations:
            logger.warning("Candidate %d dropped after %d retries", index, retries)
            last = violations
            continue
        if plan.key() not in seen:
            seen.add(plan.key())
            valid.append(plan)

    ctx.feedback = []
    if not valid:
        detail = "; ".join(str(i) for i in last) or "backend returned no plan"
        msg = f"No feasible plan for {ctx.command.text!r}: {detail}"
        raise PlanningExhaustedError(msg, violations=last)
    return valid
