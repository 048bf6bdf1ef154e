from dataclasses import dataclass, field
from typing import Any, ClassVar, Iterator, List, Optional, Tuple, Union

from ezytamp import fields as fld
from ezytamp.errors import InputError
from ezytamp.scene.graph import SceneGraph
from ezytamp.utils import Cell


@dataclass(frozen=True)
class HighLevelState:
    holding: Optional[str] = None
    at_furniture: Optional[str] = None
    at_room: Optional[str] = None

    def __post_init__(self):
        if self.at_furniture is not None and self.at_room is None:
            msg = f"at_room must be set when at_furniture is {self.at_furniture}"
            raise InputError(msg)

    @property
    def hand_free(self) -> bool:
        return self.holding is None

    def check(self, graph: SceneGraph):
        """Check the state against a scene graph."""
        if self.at_furniture is not None:
            room = graph.room_of(self.at_furniture)
            if room != self.at_room:
                msg = f"at_room {self.at_room} is not the room of {self.at_furniture} ({room})"
                raise InputError(msg)
        if self.holding is not None and graph.object_node(self.holding).on_furniture:
            msg = f"Held object {self.holding} is also on a furniture"
            raise InputError(msg)

    def signature(self) -> str:
        return (
            f"holding={self.holding or '-'};"
            f"at={self.at_furniture or '-'}@{self.at_room or '-'}"
        )

    def to_dict(self) -> dict:
        return {
            "holding": self.holding,
            "at_furniture": self.at_furniture,
            "at_room": self.at_room,
        }


@dataclass(frozen=True)
class Navigate:
    furniture: str
    room: str

    kind: ClassVar[str] = fld.ACTION_NAVIGATE

    def params(self) -> Tuple[str, str]:
        return (self.furniture, self.room)

    def __str__(self) -> str:
        return f"Navigate({self.furniture}, {self.room})"


@dataclass(frozen=True)
class Pickup:
    obj: str
    furniture: str

    kind: ClassVar[str] = fld.ACTION_PICKUP

    def params(self) -> Tuple[str, str]:
        return (self.obj, self.furniture)

    def __str__(self) -> str:
        return f"Pickup({self.obj}, {self.furniture})"


@dataclass(frozen=True)
class Place:
    obj: str
    furniture: str

    kind: ClassVar[str] = fld.ACTION_PLACE

    def params(self) -> Tuple[str, str]:
        return (self.obj, self.furniture)

    def __str__(self) -> str:
        return f"Place({self.obj}, {self.furniture})"


HighLevelAction = Union[Navigate, Pickup, Place]

_action_cls = {i.kind: i for i in (Navigate, Pickup, Place)}
_param_names = {
    fld.ACTION_NAVIGATE: ("furniture", "room"),
    fld.ACTION_PICKUP: ("object", "furniture"),
    fld.ACTION_PLACE: ("object", "furniture"),
}


def action_to_list(action: HighLevelAction) -> List[str]:
    return [action.kind, *action.params()]


def parse_action(value: Any) -> HighLevelAction:
    """Parse ``["pickup", "cup_1", "counter_1"]`` or
    ``{"action": "pickup", "object": "cup_1", "furniture": "counter_1"}``."""
    if isinstance(value, dict):
        kind = str(value.get("action", "")).lower()
        if kind not in _action_cls:
            msg = f"Unknown action {value!r}"
            raise InputError(msg)
        try:
            params = [value[k] for k in _param_names[kind]]
        except KeyError as e:
            msg = f"Action {value!r} is missing {e}"
            raise InputError(msg) from None
    elif isinstance(value, (list, tuple)) and value:
        kind = str(value[0]).lower()
        params = list(value[1:])
        if kind not in _action_cls or len(params) != 2:  # noqa: PLR2004
            msg = f"Invalid action {value!r}"
            raise InputError(msg)
    else:
        msg = f"Invalid action {value!r}"
        raise InputError(msg)

    if not all(isinstance(i, str) and i for i in params):
        msg = f"Action parameters must be node identifiers: {value!r}"
        raise InputError(msg)
    return _action_cls[kind](*params)


@dataclass
class TaskPlan:
    actions: List[HighLevelAction] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.actions)

    def __iter__(self) -> Iterator[HighLevelAction]:
        return iter(self.actions)

    def __getitem__(self, i: int) -> HighLevelAction:
        return self.actions[i]

    def key(self) -> Tuple[Tuple[str, ...], ...]:
        """Canonical action-sequence key used for distinctness."""
        return tuple(tuple(action_to_list(i)) for i in self.actions)

    @property
    def nav_actions(self) -> List[Navigate]:
        return [i for i in self.actions if isinstance(i, Navigate)]

    @property
    def man_actions(self) -> List[Union[Pickup, Place]]:
        return [i for i in self.actions if not isinstance(i, Navigate)]

    def to_list(self) -> List[List[str]]:
        return [action_to_list(i) for i in self.actions]

    @classmethod
    def from_list(cls, data: List[Any]) -> "TaskPlan":
        if not isinstance(data, list):
            msg = "plan must be a list of actions"
            raise InputError(msg)
        return cls(actions=[parse_action(i) for i in data])

    def __str__(self) -> str:
        return " -> ".join(str(i) for i in self.actions)


@dataclass(frozen=True)
class LowLevelControl:
    """Forward moves 0.05 m along the current heading; turns are 45 degrees."""

    kind: str
    cell: Optional[Cell] = None

    def __post_init__(self):
        if self.kind not in fld.CONTROL_LIST:
            msg = f"Unknown control {self.kind}"
            raise InputError(msg)
        needs_cell = self.kind in (fld.CONTROL_PICK_AT, fld.CONTROL_PLACE_AT)
        if needs_cell != (self.cell is not None):
            msg = f"Control {self.kind} cell mismatch"
            raise InputError(msg)


FORWARD = LowLevelControl(fld.CONTROL_FORWARD)
TURN_LEFT_45 = LowLevelControl(fld.CONTROL_TURN_LEFT_45)
TURN_RIGHT_45 = LowLevelControl(fld.CONTROL_TURN_RIGHT_45)
