import copy
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Union

from ezytamp import utils
from ezytamp import validators as vld
from ezytamp.errors import InputError


@dataclass
class SemanticAttributes:
    location: str = ""
    category: str = ""
    usage: str = ""

    def __post_init__(self):
        for k in ("location", "category", "usage"):
            if not isinstance(getattr(self, k), str):
                msg = f"attribute {k} must be a string"
                raise InputError(msg)

    @classmethod
    def from_dict(cls, data: Optional[dict], where: str) -> "SemanticAttributes":
        if data is None:
            msg = f"{where} has no attributes"
            raise InputError(msg)
        vld.check_keys(data, ("location", "category", "usage"), f"{where}.attributes")
        return cls(
            location=data["location"],
            category=data["category"],
            usage=data["usage"],
        )

    def to_dict(self) -> Dict[str, str]:
        return {"location": self.location, "category": self.category, "usage": self.usage}


@dataclass
class RoomNode:
    name: str
    attributes: SemanticAttributes = field(default_factory=SemanticAttributes)

    def __post_init__(self):
        if not self.name:
            msg = "room name must be non-empty"
            raise InputError(msg)


@dataclass
class FurnitureNode:
    name: str
    room: str
    attributes: SemanticAttributes = field(default_factory=SemanticAttributes)

    def __post_init__(self):
        if not self.name:
            msg = "furniture name must be non-empty"
            raise InputError(msg)
        _check_filled(self.name, self.attributes)


@dataclass
class ObjectNode:
    name: str
    on_furniture: Optional[str]
    attributes: SemanticAttributes = field(default_factory=SemanticAttributes)

    def __post_init__(self):
        if not self.name:
            msg = "object name must be non-empty"
            raise InputError(msg)
        _check_filled(self.name, self.attributes)

    @property
    def kind(self) -> str:
        return utils.object_kind(self.name)


def _check_filled(name: str, attributes: SemanticAttributes):
    if not attributes.category or not attributes.usage:
        msg = f"{name} must have non-empty category and usage"
        raise InputError(msg)


@dataclass
class SceneGraph:
    """Rooms, furniture and objects with containment edges.

    Edges are the containment fields ``FurnitureNode.room`` and
    ``ObjectNode.on_furniture``. An object whose ``on_furniture`` is None is
    held by the robot.
    """

    rooms: List[RoomNode] = field(default_factory=list)
    furniture: List[FurnitureNode] = field(default_factory=list)
    objects: List[ObjectNode] = field(default_factory=list)

    def __post_init__(self):
        vld.check_duplicate(
            [i.name for i in self.rooms + self.furniture + self.objects],  # type: ignore
            what="node name",
        )

        self._room_dict = {i.name: i for i in self.rooms}
        self._furniture_dict = {i.name: i for i in self.furniture}
        self._object_dict = {i.name: i for i in self.objects}

        for f in self.furniture:
            if f.room not in self._room_dict:
                msg = f"Furniture {f.name} references missing room {f.room}"
                raise InputError(msg)

        n_held = 0
        for o in self.objects:
            if o.on_furniture is None:
                n_held += 1
            elif o.on_furniture not in self._furniture_dict:
                msg = f"Object {o.name} references missing furniture {o.on_furniture}"
                raise InputError(msg)
        if n_held > 1:
            msg = "At most one object can be held"
            raise InputError(msg)

    @property
    def n_rooms(self) -> int:
        return len(self.rooms)

    @property
    def n_furniture(self) -> int:
        return len(self.furniture)

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    def has_room(self, name: str) -> bool:
        return name in self._room_dict

    def has_furniture(self, name: str) -> bool:
        return name in self._furniture_dict

    def has_object(self, name: str) -> bool:
        return name in self._object_dict

    def room(self, name: str) -> RoomNode:
        try:
            return self._room_dict[name]
        except KeyError:
            msg = f"Room {name} not in scene graph"
            raise InputError(msg) from None

    def furniture_node(self, name: str) -> FurnitureNode:
        try:
            return self._furniture_dict[name]
        except KeyError:
            msg = f"Furniture {name} not in scene graph"
            raise InputError(msg) from None

    def object_node(self, name: str) -> ObjectNode:
        try:
            return self._object_dict[name]
        except KeyError:
            msg = f"Object {name} not in scene graph"
            raise InputError(msg) from None

    def room_of(self, furniture: str) -> str:
        return self.furniture_node(furniture).room

    def objects_on(self, furniture: str) -> List[ObjectNode]:
        return [i for i in self.objects if i.on_furniture == furniture]

    def match_objects(self, key: str) -> List[ObjectNode]:
        """Objects matching a goal key by id, kind or category, in graph order."""
        if key in self._object_dict:
            return [self._object_dict[key]]
        return [
            i for i in self.objects if i.kind == key or i.attributes.category == key
        ]

    def move_object(self, name: str, furniture: Optional[str]):
        """Put object on furniture, or into the robot hand when furniture is None."""
        node = self.object_node(name)
        if furniture is not None and furniture not in self._furniture_dict:
            msg = f"Furniture {furniture} not in scene graph"
            raise InputError(msg)
        node.on_furniture = furniture

    def copy(self) -> "SceneGraph":
        return copy.deepcopy(self)

    def to_dict(self) -> dict:
        return {
            "rooms": [
                {"name": i.name, "attributes": i.attributes.to_dict()}
                for i in self.rooms
            ],
            "furniture": [
                {"name": i.name, "room": i.room, "attributes": i.attributes.to_dict()}
                for i in self.furniture
            ],
            "objects": [
                {
                    "name": i.name,
                    "on_furniture": i.on_furniture,
                    "attributes": i.attributes.to_dict(),
                }
                for i in self.objects
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SceneGraph":
        vld.check_keys(data, ("rooms", "furniture", "objects"), "scene graph")

        rooms = []
        for i in data["rooms"]:
            vld.check_keys(i, ("name",), "room")
            attributes = i.get("attributes") or {}
            rooms.append(
                RoomNode(
                    name=i["name"],
                    attributes=SemanticAttributes(
                        location=attributes.get("location", ""),
                        category=attributes.get("category", ""),
                        usage=attributes.get("usage", ""),
                    ),
                )
            )

        furniture = []
        for i in data["furniture"]:
            vld.check_keys(i, ("name", "room"), "furniture")
            furniture.append(
                FurnitureNode(
                    name=i["name"],
                    room=i["room"],
                    attributes=SemanticAttributes.from_dict(
                        i.get("attributes"), i["name"]
                    ),
                )
            )

        objects = []
        for i in data["objects"]:
            vld.check_keys(i, ("name", "on_furniture"), "object")
            objects.append(
                ObjectNode(
                    name=i["name"],
                    on_furniture=i["on_furniture"],
                    attributes=SemanticAttributes.from_dict(
                        i.get("attributes"), i["name"]
                    ),
                )
            )

        return cls(rooms=rooms, furniture=furniture, objects=objects)


def load_scene_graph(document: Union[str, Path, dict]) -> SceneGraph:
    """Load scene graph from a JSON document.

    Parameters
    ----------
    document: Union[str, Path, dict]
        Path to a JSON file, JSON text or an already parsed dict.

    Returns
    -------
    SceneGraph
    """
    return SceneGraph.from_dict(utils.read_json(document))


def serialize_scene_graph(graph: SceneGraph) -> str:
    """Canonical JSON text of the graph, keys sorted."""
    return utils.to_canonical_json(graph.to_dict())
