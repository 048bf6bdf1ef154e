from ezytamp.planner.backend import (
    LLMBackend,
    PlannerBackend,
    ScriptedBackend,
    parse_plans,
)
from ezytamp.planner.checker import check_feasibility
from ezytamp.planner.context import (
    ACTION_DOCS,
    Command,
    GoalItem,
    Mission,
    PlanningContext,
    Violation,
    load_mission,
    load_plan,
)
from ezytamp.planner.generate import generate_candidates, generate_valid_candidates
