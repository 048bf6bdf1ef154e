from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ezytamp import fields as fld
from ezytamp.errors import InputError
from ezytamp.motion.astar import Path
from ezytamp.scene.state import HighLevelAction, HighLevelState
from ezytamp.world.world import ExecutionOutcome


@dataclass
class EmpiricalCost:
    action: Optional[HighLevelAction]
    state_signature: str
    value: float
    kind: str
    path: Optional[Path] = None
    start_furniture: Optional[str] = None

    def __post_init__(self):
        if not self.value >= 0:
            msg = "value must be non-negative"
            raise ValueError(msg)
        if self.kind not in (fld.COST_KIND_NAV, fld.COST_KIND_MAN):
            msg = f"kind must be {fld.COST_KIND_NAV} or {fld.COST_KIND_MAN}"
            raise ValueError(msg)
        if (self.path is not None) != (self.kind == fld.COST_KIND_NAV):
            msg = "path must be present iff kind is nav"
            raise ValueError(msg)


def empirical_nav_cost(
    outcome: ExecutionOutcome,
    gamma_nav: float = fld.DEFAULT_GAMMA_NAV,
    action: Optional[HighLevelAction] = None,
    state: Optional[HighLevelState] = None,
    cell_size: float = fld.DEFAULT_CELL_SIZE,
) -> EmpiricalCost:
    """Navigation cost ``gamma_nav * collisions + time_s + distance_m``."""
    return EmpiricalCost(
        action=action,
        state_signature=state.signature() if state is not None else "",
        value=gamma_nav * outcome.collisions + outcome.time_s + outcome.distance_m,
        kind=fld.COST_KIND_NAV,
        path=Path.from_cells(outcome.executed_path, cell_size),
        start_furniture=state.at_furniture if state is not None else None,
    )


def empirical_man_cost(
    trials: Sequence[ExecutionOutcome],
    gamma_man: float = fld.DEFAULT_GAMMA_MAN,
    action: Optional[HighLevelAction] = None,
    state: Optional[HighLevelState] = None,
) -> EmpiricalCost:
    """Mean over trials of ``gamma_man * (1 - success) + time_s``."""
    if not trials:
        msg = "trials must be non-empty"
        raise InputError(msg)
    values = [gamma_man * (0.0 if i.succeeded else 1.0) + i.time_s for i in trials]
    return EmpiricalCost(
        action=action,
        state_signature=state.signature() if state is not None else "",
        value=float(np.mean(values)),
        kind=fld.COST_KIND_MAN,
    )
