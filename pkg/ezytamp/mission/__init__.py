from ezytamp.mission._mission import PlanExecution, attribute_actions, execute_plan
from ezytamp.mission.config import RunConfig
from ezytamp.mission.mission import (
    run_inter_llm,
    run_mission,
    run_open_loop,
    run_reactive,
)
from ezytamp.mission.tracker import ActionRecord, GoalRow, MissionTracker
