from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Tuple

from ezytamp import fields as fld
from ezytamp.motion.cost import EmpiricalCost
from ezytamp.planner.context import Mission
from ezytamp.scene.graph import SceneGraph
from ezytamp.scene.state import HighLevelAction, Navigate
from ezytamp.world.world import ExecutionOutcome


@dataclass
class ActionRecord:
    command_index: int
    goal_index: int
    obj: str
    action: str
    kind: str
    succeeded: bool
    time_s: float
    distance_m: float
    collisions: int
    attempts: int
    successes: int
    empirical_cost: float
    path: List[List[int]] = field(default_factory=list)


@dataclass
class GoalRow:
    command_index: int
    goal_index: int
    key: str
    destination: str
    obj: str = ""
    fulfilled: bool = False


@dataclass
class MissionTracker:
    """Per-goal bookkeeping and the executed action log of one run."""

    goal_rows: List[GoalRow] = field(default_factory=list)
    action_records: List[ActionRecord] = field(default_factory=list)
    ledger_snapshots: List[dict] = field(default_factory=list)
    planning_failures: List[str] = field(default_factory=list)

    @classmethod
    def for_mission(cls, mission: Mission) -> "MissionTracker":
        return cls(
            goal_rows=[
                GoalRow(
                    command_index=c,
                    goal_index=g,
                    key=i.key,
                    destination=i.destination,
                )
                for c, command in enumerate(mission.commands)
                for g, i in enumerate(command.goal)
            ]
        )

    def row(self, command_index: int, goal_index: int) -> GoalRow:
        for i in self.goal_rows:
            if (i.command_index, i.goal_index) == (command_index, goal_index):
                return i
        msg = f"No goal row ({command_index}, {goal_index})"
        raise KeyError(msg)

    def bind(self, command_index: int, goal_index: int, obj: str):
        self.row(command_index, goal_index).obj = obj

    def is_delivered(self, row: GoalRow, graph: SceneGraph) -> bool:
        if not row.obj:
            return False
        return graph.object_node(row.obj).on_furniture == row.destination

    def delivered_objects(self, graph: SceneGraph) -> frozenset:
        return frozenset(i.obj for i in self.goal_rows if self.is_delivered(i, graph))

    def bind_satisfied(self, command_index: int, graph: SceneGraph) -> List[int]:
        """Bind unbound goals of a command whose destination already holds a
        matching object that no other goal owns; return their indices."""
        taken = {i.obj for i in self.goal_rows if i.obj}
        out = []
        for row in self.goal_rows:
            if row.command_index != command_index or row.obj:
                continue
            for o in graph.match_objects(row.key):
                if o.on_furniture == row.destination and o.name not in taken:
                    row.obj = o.name
                    taken.add(o.name)
                    out.append(row.goal_index)
                    break
        return out

    def remaining_goals(self, command_index: int, graph: SceneGraph) -> List[int]:
        return [
            i.goal_index
            for i in self.goal_rows
            if i.command_index == command_index and not self.is_delivered(i, graph)
        ]

    def record(
        self,
        command_index: int,
        goal_index: int,
        action: HighLevelAction,
        outcome: ExecutionOutcome,
        cost: EmpiricalCost,
    ) -> ActionRecord:
        row = self.row(command_index, goal_index)
        successes = int(outcome.succeeded) if outcome.attempts else 0
        path = []
        if isinstance(action, Navigate):
            path = [list(c) for c in outcome.executed_path]
        record = ActionRecord(
            command_index=command_index,
            goal_index=goal_index,
            obj=row.obj,
            action=str(action),
            kind=action.kind,
            succeeded=outcome.succeeded,
            time_s=outcome.time_s,
            distance_m=outcome.distance_m,
            collisions=outcome.collisions,
            attempts=outcome.attempts,
            successes=successes,
            empirical_cost=cost.value,
            path=path,
        )
        self.action_records.append(record)
        return record

    def finalize(self, graph: SceneGraph):
        for i in self.goal_rows:
            i.fulfilled = self.is_delivered(i, graph)
        # action records carry the object finally bound to their goal
        objects: Dict[Tuple[int, int], str] = {
            (i.command_index, i.goal_index): i.obj for i in self.goal_rows
        }
        for i in self.action_records:
            i.obj = objects[(i.command_index, i.goal_index)]

    def object_rows(self) -> List[dict]:
        out = []
        for row in self.goal_rows:
            records = [
                i
                for i in self.action_records
                if (i.command_index, i.goal_index) == (row.command_index, row.goal_index)
            ]
            attempts = sum(i.attempts for i in records)
            successes = sum(i.successes for i in records)
            out.append(
                {
                    "object": row.obj,
                    "key": row.key,
                    "destination": row.destination,
                    "command_index": row.command_index,
                    "goal_index": row.goal_index,
                    fld.METRIC_CC_NAV: sum(i.collisions for i in records),
                    fld.METRIC_D_NAV: sum(i.distance_m for i in records),
                    "man_attempts": attempts,
                    "man_successes": successes,
                    fld.METRIC_SR_MAN: successes / attempts if attempts else 0.0,
                    fld.METRIC_T_EXE: sum(i.time_s for i in records),
                    "fulfilled": row.fulfilled,
                    "j": sum(i.empirical_cost for i in records),
                }
            )
        return out

    def action_rows(self) -> List[dict]:
        out = []
        for i in self.action_records:
            data = asdict(i)
            data["object"] = data.pop("obj")
            out.append(data)
        return out

    def snapshot(self, ledger: Optional[dict]):
        self.ledger_snapshots.append(ledger or {"nav": [], "man": []})
