import copy
import logging
from dataclasses import dataclass, field
from pathlib import Path as FilePath
from typing import List, Optional, Tuple, Union

from ezytamp import fields as fld
from ezytamp import utils
from ezytamp import validators as vld
from ezytamp.codec import encode_cost
from ezytamp.errors import InputError
from ezytamp.motion.astar import Path
from ezytamp.motion.cost import EmpiricalCost
from ezytamp.scene.state import Navigate

logger = logging.getLogger(__name__)


@dataclass
class NavRecord:
    path: Path
    cost: float
    start_furniture: str
    dest_furniture: str

    def __post_init__(self):
        if not self.cost >= 0:
            msg = "cost must be non-negative"
            raise ValueError(msg)

    @property
    def key(self) -> Tuple[str, str]:
        return (self.start_furniture, self.dest_furniture)


@dataclass
class ManRecord:
    kind: str
    obj: str
    furniture: str
    cost: float

    def __post_init__(self):
        if not self.cost >= 0:
            msg = "cost must be non-negative"
            raise ValueError(msg)
        vld.check_choice(self.kind, fld.MANIPULATION_LIST, "kind")

    @property
    def action_descriptor(self) -> Tuple[str, str, str]:
        return (self.kind, self.obj, self.furniture)


@dataclass
class CostLedger:
    """Known action costs.

    At most one record per navigation ``(start, dest)`` pair and per
    manipulation ``(kind, object, furniture)``.
    """

    nav_records: List[NavRecord] = field(default_factory=list)
    man_records: List[ManRecord] = field(default_factory=list)

    def __post_init__(self):
        vld.check_duplicate(
            [str(i.key) for i in self.nav_records], what="navigation record"
        )
        vld.check_duplicate(
            [str(i.action_descriptor) for i in self.man_records],
            what="manipulation record",
        )

    def __len__(self) -> int:
        return len(self.nav_records) + len(self.man_records)

    @property
    def is_empty(self) -> bool:
        return not self.nav_records and not self.man_records

    def nav_record(self, start: str, dest: str) -> Optional[NavRecord]:
        for i in self.nav_records:
            if i.key == (start, dest):
                return i
        return None

    def man_record(self, kind: str, obj: str, furniture: str) -> Optional[ManRecord]:
        for i in self.man_records:
            if i.action_descriptor == (kind, obj, furniture):
                return i
        return None

    def update(self, cost: EmpiricalCost) -> "CostLedger":
        """Fuse an empirical cost: average with the known record, or append.

        A navigation update also replaces the stored path with the newer one.
        """
        action = cost.action
        if action is None:
            msg = "empirical cost has no action"
            raise InputError(msg)

        if isinstance(action, Navigate):
            if cost.path is None:
                msg = "navigation cost has no path"
                raise InputError(msg)
            start = cost.start_furniture or fld.START_KEY
            record = self.nav_record(start, action.furniture)
            if record is None:
                self.nav_records.append(
                    NavRecord(
                        path=cost.path,
                        cost=cost.value,
                        start_furniture=start,
                        dest_furniture=action.furniture,
                    )
                )
            else:
                record.cost = (record.cost + cost.value) / 2
                record.path = cost.path
            return self

        record = self.man_record(action.kind, action.obj, action.furniture)
        if record is None:
            self.man_records.append(
                ManRecord(
                    kind=action.kind,
                    obj=action.obj,
                    furniture=action.furniture,
                    cost=cost.value,
                )
            )
        else:
            record.cost = (record.cost + cost.value) / 2
        return self

    def copy(self) -> "CostLedger":
        return copy.deepcopy(self)

    def to_dict(self) -> dict:
        return {
            "nav": [
                {
                    "start": i.start_furniture,
                    "dest": i.dest_furniture,
                    "cost": i.cost,
                    "path": utils.cells_to_list(i.path.cells),
                }
                for i in self.nav_records
            ],
            "man": [
                {
                    "kind": i.kind,
                    "object": i.obj,
                    "furniture": i.furniture,
                    "cost": i.cost,
                }
                for i in self.man_records
            ],
        }

    @classmethod
    def from_dict(cls, data: dict, cell_size: float = fld.DEFAULT_CELL_SIZE):
        nav_records = []
        for i in data.get("nav", []):
            vld.check_keys(i, ("start", "dest", "cost", "path"), "nav record")
            nav_records.append(
                NavRecord(
                    path=Path.from_cells(
                        [utils.to_cell(c) for c in i["path"]], cell_size
                    ),
                    cost=float(i["cost"]),
                    start_furniture=i["start"],
                    dest_furniture=i["dest"],
                )
            )
        man_records = []
        for i in data.get("man", []):
            vld.check_keys(i, ("kind", "object", "furniture", "cost"), "man record")
            man_records.append(
                ManRecord(
                    kind=i["kind"],
                    obj=i["object"],
                    furniture=i["furniture"],
                    cost=float(i["cost"]),
                )
            )
        return cls(nav_records=nav_records, man_records=man_records)


def update(ledger: CostLedger, cost: EmpiricalCost) -> CostLedger:
    """Fuse cost into ledger in place and return it."""
    return ledger.update(cost)


def snapshot_summary(ledger: CostLedger) -> str:
    """Compact listing used in planning prompts.

    Manipulation records become ``(object, furniture, label)`` and navigation
    records ``(start → dest, cost)``, one per line.
    """
    lines = [
        f"({i.obj}, {i.furniture}, {encode_cost(i.cost)})" for i in ledger.man_records
    ]
    lines += [
        f"({i.start_furniture} → {i.dest_furniture}, {round(i.cost, 2)})"
        for i in ledger.nav_records
    ]
    return "\n".join(lines)


def load_ledger(
    source: Union[str, FilePath, dict], cell_size: float = fld.DEFAULT_CELL_SIZE
) -> CostLedger:
    return CostLedger.from_dict(utils.read_json(source), cell_size=cell_size)


def save_ledger(ledger: CostLedger, path: Union[str, FilePath]) -> FilePath:
    logger.info("Saving ledger to %s", path)
    return utils.write_text(path, utils.to_canonical_json(ledger.to_dict()))
