from ezytamp.motion.astar import Path, astar
from ezytamp.motion.cost import EmpiricalCost, empirical_man_cost, empirical_nav_cost
from ezytamp.motion.executor import execute_action, expand_controls
from ezytamp.motion.sampling import sample_stand_cells
