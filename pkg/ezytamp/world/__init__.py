from ezytamp.world.config import DifficultyProfile, WorldConfig, load_world_config
from ezytamp.world.world import (
    ExecutionOutcome,
    World,
    check_preconditions,
    execute_manipulation,
    execute_navigation,
    step_dynamics,
)
