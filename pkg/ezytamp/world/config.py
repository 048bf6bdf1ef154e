import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

from ezytamp import fields as fld
from ezytamp import utils
from ezytamp import validators as vld
from ezytamp.errors import InputError
from ezytamp.planner.context import Mission
from ezytamp.scene.graph import SceneGraph
from ezytamp.scene.grid import OccupancyGrid
from ezytamp.utils import Cell


@dataclass(frozen=True)
class DifficultyProfile:
    success_prob: float = 1.0
    time_mean: float = 1.0
    time_jitter: float = 0.0

    def __post_init__(self):
        vld.check_pct(self.success_prob, "success_prob")
        vld.check_positive(self.time_mean, "time_mean")
        vld.check_non_negative(self.time_jitter, "time_jitter")
        if self.time_mean - self.time_jitter < 0:
            msg = "time_mean - time_jitter must be non-negative"
            raise InputError(msg)

    @classmethod
    def from_dict(cls, data: dict, where: str = "profile") -> "DifficultyProfile":
        vld.check_keys(data, ("success_prob", "time_mean"), where)
        return cls(
            success_prob=float(data["success_prob"]),
            time_mean=float(data["time_mean"]),
            time_jitter=float(data.get("time_jitter", 0.0)),
        )

    def to_dict(self) -> dict:
        return {
            "success_prob": self.success_prob,
            "time_mean": self.time_mean,
            "time_jitter": self.time_jitter,
        }


@dataclass
class WorldConfig:
    """Ground truth of the proxy household world.

    Parameters
    ----------
    grid: OccupancyGrid
        Navigation substrate.
    door_risk: Dict[Cell, float]
        Collision probability of each door cell.
    profiles: Dict[Tuple[str, str], DifficultyProfile]
        Manipulation difficulty per (object, furniture).
    default_profile: Optional[DifficultyProfile]
        Used for pairs without an explicit profile.
    robot_speed: float
        Meters per second.
    turn_time: float
        Seconds per 45 degree turn.
    collision_time_penalty: float
        Replanning seconds added per collision.
    collision_detour_m: float
        Detour meters added per collision.
    rng_seed: int
        World seed, combined with the run seed.
    start: Optional[Cell]
        Robot start cell, first free cell when None.
    """

    grid: OccupancyGrid
    door_risk: Dict[Cell, float] = field(default_factory=dict)
    profiles: Dict[Tuple[str, str], DifficultyProfile] = field(default_factory=dict)
    default_profile: Optional[DifficultyProfile] = None
    robot_speed: float = fld.DEFAULT_ROBOT_SPEED
    turn_time: float = fld.DEFAULT_TURN_TIME
    collision_time_penalty: float = fld.DEFAULT_COLLISION_TIME_PENALTY
    collision_detour_m: float = fld.DEFAULT_COLLISION_DETOUR_M
    rng_seed: int = 0
    start: Optional[Cell] = None

    def __post_init__(self):
        vld.check_positive(self.robot_speed, "robot_speed")
        vld.check_non_negative(self.turn_time, "turn_time")
        vld.check_non_negative(self.collision_time_penalty, "collision_time_penalty")
        vld.check_non_negative(self.collision_detour_m, "collision_detour_m")

        for cell, p in self.door_risk.items():
            if not self.grid.is_door(cell):
                msg = f"door_risk cell {cell} is not a door cell"
                raise InputError(msg)
            vld.check_pct(p, f"door_risk {utils.cell_key(cell)}")

        if self.start is None:
            self.start = self.grid.first_free_cell()
        elif not self.grid.is_free(self.start):
            msg = f"start cell {self.start} is not free"
            raise InputError(msg)

    def profile(self, obj: str, furniture: str) -> DifficultyProfile:
        try:
            return self.profiles[(obj, furniture)]
        except KeyError:
            pass
        if self.default_profile is None:
            msg = f"No profile for {obj}@{furniture} and no default profile"
            raise InputError(msg)
        return self.default_profile

    def check_against(self, graph: SceneGraph):
        """Every (object, supporting furniture) pair must resolve a profile."""
        self.grid.check_against(graph)
        for o in graph.objects:
            if o.on_furniture is not None:
                self.profile(o.name, o.on_furniture)
        unused = sorted(
            f"{o}@{f}"
            for o, f in self.profiles
            if not graph.has_object(o) or not graph.has_furniture(f)
        )
        if unused:
            warnings.warn(
                f"Profiles {unused} name nodes missing from the scene graph.",
                stacklevel=2,
            )

    def check_mission(self, mission: Mission, graph: SceneGraph):
        """Every object a goal can bind must resolve a profile on its destination."""
        for command in mission.commands:
            for g in command.goal:
                for o in graph.match_objects(g.key):
                    self.profile(o.name, g.destination)

    def to_dict(self) -> dict:
        data = {
            "grid": self.grid.to_dict(),
            "door_risk": {utils.cell_key(k): v for k, v in self.door_risk.items()},
            "profiles": {f"{o}@{f}": v.to_dict() for (o, f), v in self.profiles.items()},
            "robot_speed": self.robot_speed,
            "turn_time": self.turn_time,
            "collision_time_penalty": self.collision_time_penalty,
            "collision_detour_m": self.collision_detour_m,
            "rng_seed": self.rng_seed,
            "start": list(self.start) if self.start else None,
        }
        if self.default_profile is not None:
            data["default_profile"] = self.default_profile.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "WorldConfig":
        vld.check_keys(data, ("grid",), "world config")

        profiles = {}
        for k, v in data.get("profiles", {}).items():
            obj, sep, furniture = k.partition("@")
            if not sep or not obj or not furniture:
                msg = f"Invalid profile key {k!r}, expected 'object@furniture'"
                raise InputError(msg)
            profiles[(obj, furniture)] = DifficultyProfile.from_dict(v, k)

        default_profile = data.get("default_profile")
        start = data.get("start")

        return cls(
            grid=OccupancyGrid.from_dict(data["grid"]),
            door_risk={
                utils.to_cell(k, "door_risk key"): float(v)
                for k, v in data.get("door_risk", {}).items()
            },
            profiles=profiles,
            default_profile=(
                DifficultyProfile.from_dict(default_profile, "default_profile")
                if default_profile is not None
                else None
            ),
            robot_speed=float(data.get("robot_speed", fld.DEFAULT_ROBOT_SPEED)),
            turn_time=float(data.get("turn_time", fld.DEFAULT_TURN_TIME)),
            collision_time_penalty=float(
                data.get("collision_time_penalty", fld.DEFAULT_COLLISION_TIME_PENALTY)
            ),
            collision_detour_m=float(
                data.get("collision_detour_m", fld.DEFAULT_COLLISION_DETOUR_M)
            ),
            rng_seed=int(data.get("rng_seed", 0)),
            start=utils.to_cell(start, "start") if start is not None else None,
        )


def load_world_config(
    document: Union[str, Path, dict], graph: Optional[SceneGraph] = None
) -> WorldConfig:
    """Load world config from a JSON document, checked against graph when given."""
    config = WorldConfig.from_dict(utils.read_json(document))
    if graph is not None:
        config.check_against(graph)
    return config
