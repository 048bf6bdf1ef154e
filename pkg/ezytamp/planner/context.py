from dataclasses import dataclass, field
from pathlib import Path
from typing import FrozenSet, List, Tuple, Union

from ezytamp import fields as fld
from ezytamp import utils
from ezytamp import validators as vld
from ezytamp.errors import InputError
from ezytamp.scene.graph import SceneGraph
from ezytamp.scene.state import HighLevelState, TaskPlan

ACTION_DOCS = """\
navigate(furniture, room): move the robot to a furniture in a room. The room must
  be the room that contains the furniture.
pickup(object, furniture): pick an object up from a furniture. The robot must be
  at the furniture, the hand must be free and the object must be on it.
place(object, furniture): place the held object on a furniture. The robot must be
  at the furniture and hold the object."""


@dataclass(frozen=True)
class GoalItem:
    """Deliver an object, matched by id, kind or category, to a furniture."""

    key: str
    destination: str

    def __post_init__(self):
        if not self.key or not self.destination:
            msg = "goal key and destination must be non-empty"
            raise InputError(msg)


@dataclass
class Command:
    text: str
    goal: List[GoalItem]

    def __post_init__(self):
        if not self.goal:
            msg = f"Command {self.text!r} has an empty goal"
            raise InputError(msg)

    def check_against(self, graph: SceneGraph):
        for g in self.goal:
            if not graph.has_furniture(g.destination):
                msg = f"Goal destination {g.destination} is not in scene graph"
                raise InputError(msg)


@dataclass
class Mission:
    commands: List[Command] = field(default_factory=list)

    def __post_init__(self):
        if not self.commands:
            msg = "mission has no command"
            raise InputError(msg)

    def __len__(self) -> int:
        return len(self.commands)

    @property
    def n_objects(self) -> int:
        return sum(len(i.goal) for i in self.commands)

    def check_against(self, graph: SceneGraph):
        for i in self.commands:
            i.check_against(graph)

    def to_dict(self) -> dict:
        return {
            "commands": [
                {
                    "text": c.text,
                    "goal": [
                        {"category_or_object": g.key, "destination": g.destination}
                        for g in c.goal
                    ],
                }
                for c in self.commands
            ]
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Mission":
        vld.check_keys(data, ("commands",), "mission")
        commands = []
        for c in data["commands"]:
            vld.check_keys(c, ("text", "goal"), "command")
            goal = []
            for g in c["goal"]:
                vld.check_keys(g, ("category_or_object", "destination"), "goal")
                goal.append(GoalItem(g["category_or_object"], g["destination"]))
            commands.append(Command(text=c["text"], goal=goal))
        return cls(commands=commands)


@dataclass(frozen=True)
class Violation:
    action_index: int
    rule: str
    detail: str = ""

    def __post_init__(self):
        vld.check_choice(self.rule, fld.RULE_LIST, "rule")

    def __str__(self) -> str:
        return f"action {self.action_index}: {self.rule} ({self.detail})"


@dataclass
class PlanningContext:
    """Everything a backend sees when generating plan candidates.

    ``reserved_objects`` were delivered by earlier commands and are never
    re-bound. ``excluded_bindings`` are (object, furniture) pairs that failed
    during this command.
    """

    command: Command
    state: HighLevelState
    graph: SceneGraph
    action_docs: str = ACTION_DOCS
    ledger_summary: str = ""
    feedback: List[Violation] = field(default_factory=list)
    m_candidates: int = fld.DEFAULT_M_CANDIDATES
    reserved_objects: FrozenSet[str] = frozenset()
    excluded_bindings: FrozenSet[Tuple[str, str]] = frozenset()

    def __post_init__(self):
        if not self.m_candidates >= 1:
            msg = "m_candidates must be at least 1"
            raise InputError(msg)


def load_mission(
    document: Union[str, Path, dict], graph: Union[SceneGraph, None] = None
) -> Mission:
    mission = Mission.from_dict(utils.read_json(document))
    if graph is not None:
        mission.check_against(graph)
    return mission


def load_plan(document: Union[str, Path, dict, list]) -> TaskPlan:
    """Load a plan from ``{"actions": [...]}`` or a bare list of actions."""
    data = document if isinstance(document, list) else utils.read_json(document)
    if isinstance(data, dict):
        vld.check_keys(data, ("actions",), "plan")
        data = data["actions"]
    return TaskPlan.from_list(data)
