from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Union

import numpy as np

from ezytamp import fields as fld
from ezytamp import utils
from ezytamp import validators as vld
from ezytamp.errors import InputError
from ezytamp.scene.graph import SceneGraph
from ezytamp.utils import Cell

_code_map = {fld.CELL_FREE: 0, fld.CELL_OCCUPIED: 1, fld.CELL_DOOR: 2}
_label_map = {v: k for k, v in _code_map.items()}

_offsets4 = [(1, 0), (-1, 0), (0, 1), (0, -1)]
_offsets8 = [(dx, dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1) if dx or dy]


@dataclass
class OccupancyGrid:
    """2D grid of free/occupied/door cells with furniture and room regions.

    Cells are ``(x, y)`` with ``x`` the column and ``y`` the row of the
    source document.
    """

    rows: List[str]
    cell_size: float = fld.DEFAULT_CELL_SIZE
    furniture_regions: Dict[str, FrozenSet[Cell]] = field(default_factory=dict)
    room_regions: Dict[str, FrozenSet[Cell]] = field(default_factory=dict)

    def __post_init__(self):
        vld.check_positive(self.cell_size, "cell_size")

        if not self.rows:
            msg = "grid has no rows"
            raise InputError(msg)
        width = len(self.rows[0])
        for y, row in enumerate(self.rows):
            if len(row) != width:
                msg = f"Ragged grid: row {y} has width {len(row)}, expected {width}"
                raise InputError(msg)
            for x, c in enumerate(row):
                if c not in fld.CELL_CHAR_MAP:
                    msg = f"Unknown cell character {c!r} at ({x},{y})"
                    raise InputError(msg)

        self.codes = np.array(
            [[_code_map[fld.CELL_CHAR_MAP[c]] for c in row] for row in self.rows],
            dtype=np.int8,
        )
        self.furniture_regions = {
            k: frozenset(utils.to_cell(c) for c in v)
            for k, v in self.furniture_regions.items()
        }
        self.room_regions = {
            k: frozenset(utils.to_cell(c) for c in v)
            for k, v in self.room_regions.items()
        }

        self._cell_room: Dict[Cell, str] = {}
        for room, cells in self.room_regions.items():
            for c in cells:
                self._check_in_bounds(c, f"room region {room}")
                if c in self._cell_room:
                    msg = f"Cell {c} belongs to rooms {self._cell_room[c]} and {room}"
                    raise InputError(msg)
                self._cell_room[c] = room

        for name, cells in self.furniture_regions.items():
            if not cells:
                msg = f"Furniture region {name} is empty"
                raise InputError(msg)
            for c in cells:
                self._check_in_bounds(c, f"furniture region {name}")
            if not self.free_neighbors(cells):
                msg = f"Furniture {name} has no adjacent free cell"
                raise InputError(msg)

        for c in self.door_cells if self.room_regions else []:
            touching = {self._cell_room.get(c)}
            touching.update(self._cell_room.get(n) for n in self._around(c, _offsets4))
            touching.discard(None)
            if len(touching) < 2:  # noqa: PLR2004
                msg = f"Door cell {c} does not connect two rooms"
                raise InputError(msg)

    @property
    def width(self) -> int:
        return self.codes.shape[1]

    @property
    def height(self) -> int:
        return self.codes.shape[0]

    @property
    def door_cells(self) -> List[Cell]:
        ys, xs = np.nonzero(self.codes == _code_map[fld.CELL_DOOR])
        return sorted(zip(xs.tolist(), ys.tolist()))

    def in_bounds(self, cell: Cell) -> bool:
        return 0 <= cell[0] < self.width and 0 <= cell[1] < self.height

    def label(self, cell: Cell) -> str:
        self._check_in_bounds(cell, "cell")
        return _label_map[int(self.codes[cell[1], cell[0]])]

    def is_free(self, cell: Cell) -> bool:
        return self.in_bounds(cell) and self.codes[cell[1], cell[0]] == 0

    def is_door(self, cell: Cell) -> bool:
        return self.in_bounds(cell) and self.codes[cell[1], cell[0]] == 2  # noqa: PLR2004

    def is_traversable(self, cell: Cell) -> bool:
        return self.in_bounds(cell) and self.codes[cell[1], cell[0]] != 1

    def room_of(self, cell: Cell) -> Optional[str]:
        return self._cell_room.get(cell)

    def neighbors8(self, cell: Cell) -> List[Cell]:
        """Traversable 8-neighbours; a diagonal move may not cut an occupied corner."""
        x, y = cell
        out = []
        for dx, dy in _offsets8:
            n = (x + dx, y + dy)
            if not self.is_traversable(n):
                continue
            if dx and dy and not (
                self.is_traversable((x + dx, y)) and self.is_traversable((x, y + dy))
            ):
                continue
            out.append(n)
        return out

    def free_neighbors(self, region: Iterable[Cell]) -> List[Cell]:
        """Free cells 8-adjacent to region and outside it, sorted by (x, y)."""
        region = set(region)
        out: Set[Cell] = set()
        for c in region:
            for n in self._around(c, _offsets8):
                if n not in region and self.is_free(n):
                    out.add(n)
        return sorted(out)

    def goal_cells(self, region: Iterable[Cell]) -> List[Cell]:
        """Cells that count as arriving at region.

        The traversable cells of the region when it has any, otherwise the
        free cells around it.
        """
        region = list(region)
        inside = sorted(c for c in region if self.is_traversable(c))
        return inside or self.free_neighbors(region)

    def furniture_region(self, furniture: str) -> FrozenSet[Cell]:
        try:
            return self.furniture_regions[furniture]
        except KeyError:
            msg = f"Furniture {furniture} has no region in occupancy grid"
            raise InputError(msg) from None

    def stand_cell(self, furniture: str) -> Cell:
        """Canonical stand cell: free neighbour closest to the region centroid."""
        region = self.furniture_region(furniture)
        centroid = np.mean(np.array(sorted(region), dtype=float), axis=0)
        return min(
            self.free_neighbors(region),
            key=lambda c: (float(np.hypot(c[0] - centroid[0], c[1] - centroid[1])), c),
        )

    def is_adjacent(self, cell: Cell, furniture: str) -> bool:
        return cell in self.free_neighbors(self.furniture_region(furniture))

    def reachable(self, start: Cell) -> Set[Cell]:
        """Flood fill of traversable cells from start."""
        if not self.is_traversable(start):
            return set()
        seen = {start}
        queue = deque([start])
        while queue:
            c = queue.popleft()
            for n in self.neighbors8(c):
                if n not in seen:
                    seen.add(n)
                    queue.append(n)
        return seen

    def first_free_cell(self) -> Cell:
        ys, xs = np.nonzero(self.codes == 0)
        if not len(xs):
            msg = "grid has no free cell"
            raise InputError(msg)
        return int(xs[0]), int(ys[0])

    def to_meters(self, cells: Sequence[Cell]) -> np.ndarray:
        return np.asarray(cells, dtype=float).reshape(-1, 2) * self.cell_size

    def check_against(self, graph: SceneGraph):
        """Check regions against the scene graph that owns them."""
        for name, cells in self.furniture_regions.items():
            if not graph.has_furniture(name):
                msg = f"Furniture region {name} is not in scene graph"
                raise InputError(msg)
            room = graph.room_of(name)
            if room not in self.room_regions:
                msg = f"Room {room} has no region in occupancy grid"
                raise InputError(msg)
            outside = sorted(cells - self.room_regions[room])
            if outside:
                msg = f"Furniture region {name} lies outside room {room} at {outside[0]}"
                raise InputError(msg)
        for name in self.room_regions:
            if not graph.has_room(name):
                msg = f"Room region {name} is not in scene graph"
                raise InputError(msg)
        for f in graph.furniture:
            if f.name not in self.furniture_regions:
                msg = f"Furniture {f.name} has no region in occupancy grid"
                raise InputError(msg)

    def to_dict(self) -> dict:
        return {
            "cell_size_m": self.cell_size,
            "rows": list(self.rows),
            "furniture_regions": {
                k: utils.cells_to_list(sorted(v))
                for k, v in self.furniture_regions.items()
            },
            "room_regions": {
                k: utils.cells_to_list(sorted(v)) for k, v in self.room_regions.items()
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "OccupancyGrid":
        vld.check_keys(data, ("rows",), "grid")
        return cls(
            rows=list(data["rows"]),
            cell_size=float(data.get("cell_size_m", fld.DEFAULT_CELL_SIZE)),
            furniture_regions=data.get("furniture_regions", {}),
            room_regions=data.get("room_regions", {}),
        )

    def _around(self, cell: Cell, offsets) -> List[Cell]:
        x, y = cell
        return [
            (x + dx, y + dy) for dx, dy in offsets if self.in_bounds((x + dx, y + dy))
        ]

    def _check_in_bounds(self, cell: Cell, where: str):
        if not self.in_bounds(cell):
            msg = f"{where} cell {cell} is outside the grid"
            raise InputError(msg)


def load_occupancy_grid(
    document: Union[str, Path, dict], graph: Optional[SceneGraph] = None
) -> OccupancyGrid:
    """Load occupancy grid from a JSON document.

    Parameters
    ----------
    document: Union[str, Path, dict]
        Path to a JSON file, JSON text or an already parsed dict.
    graph: Optional[SceneGraph]
        When given, regions are checked against it (furniture regions must lie
        inside the owning room's region).
    """
    grid = OccupancyGrid.from_dict(utils.read_json(document))
    if graph is not None:
        grid.check_against(graph)
    else:
        for name, cells in grid.furniture_regions.items():
            rooms = {grid.room_of(c) for c in cells}
            if grid.room_regions and (len(rooms) != 1 or None in rooms):
                msg = f"Furniture region {name} lies outside a single room region"
                raise InputError(msg)
    return grid


def serialize_occupancy_grid(grid: OccupancyGrid) -> str:
    return utils.to_canonical_json(grid.to_dict())
