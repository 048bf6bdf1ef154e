import heapq
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional

import numpy as np

from ezytamp import fields as fld
from ezytamp import utils
from ezytamp.errors import InputError, UnreachableError
from ezytamp.scene.grid import OccupancyGrid
from ezytamp.utils import Cell

logger = logging.getLogger(__name__)


@dataclass
class Path:
    cells: List[Cell] = field(default_factory=list)
    length_m: float = 0.0

    def __post_init__(self):
        self.cells = [tuple(i) for i in self.cells]  # type: ignore
        for a, b in zip(self.cells, self.cells[1:]):
            if max(abs(a[0] - b[0]), abs(a[1] - b[1])) != 1:
                msg = f"Path cells {a} and {b} are not 8-adjacent"
                raise InputError(msg)
        if self.length_m < 0:
            msg = "length_m must be non-negative"
            raise InputError(msg)

    @classmethod
    def from_cells(cls, cells: Iterable[Cell], cell_size: float) -> "Path":
        cells = [tuple(i) for i in cells]
        return cls(cells=cells, length_m=utils.path_length_m(cells, cell_size))  # type: ignore

    def __len__(self) -> int:
        return len(self.cells)

    def points_m(self, cell_size: float) -> np.ndarray:
        return np.asarray(self.cells, dtype=float).reshape(-1, 2) * cell_size

    @property
    def start(self) -> Cell:
        return self.cells[0]

    @property
    def end(self) -> Cell:
        return self.cells[-1]


def step_cost(a: Cell, b: Cell) -> float:
    return fld.SQRT2 if a[0] != b[0] and a[1] != b[1] else 1.0


def astar(grid: OccupancyGrid, start: Cell, goal_region: Iterable[Cell]) -> Path:
    """Shortest 8-connected path from start to the goal region.

    The goal is ``grid.goal_cells(goal_region)``: the traversable cells of the
    region, or the free cells around it when the region is fully occupied.
    Orthogonal steps cost 1, diagonal steps sqrt(2); door cells cost like
    free cells. The heuristic is the octile distance to the nearest goal cell.
    Ties are expanded in lexicographic ``(x, y)`` order.

    Parameters
    ----------
    grid: OccupancyGrid
        Occupancy grid.
    start: Cell
        Traversable start cell.
    goal_region: Iterable[Cell]
        Target region (e.g. a furniture region).

    Returns
    -------
    Path
        Cells from start to the first reached goal cell, length in meters.
    """
    start = (int(start[0]), int(start[1]))
    if not grid.is_traversable(start):
        msg = f"Start cell {start} is not traversable"
        raise InputError(msg)

    goals = set(grid.goal_cells(goal_region))
    if not goals:
        msg = "Goal region has no reachable cell"
        raise UnreachableError(msg)
    goal_list = sorted(goals)

    def h(c: Cell) -> float:
        return min(utils.octile(c, g) for g in goal_list)

    g_score: Dict[Cell, float] = {start: 0.0}
    came_from: Dict[Cell, Optional[Cell]] = {start: None}
    closed = set()
    heap = [(h(start), start)]

    while heap:
        _, current = heapq.heappop(heap)
        if current in closed:
            continue
        if current in goals:
            cells = [current]
            while came_from[cells[-1]] is not None:
                cells.append(came_from[cells[-1]])  # type: ignore
            cells.reverse()
            return Path.from_cells(cells, grid.cell_size)
        closed.add(current)

        g = g_score[current]
        for n in grid.neighbors8(current):
            if n in closed:
                continue
            tentative = g + step_cost(current, n)
            if tentative < g_score.get(n, float("inf")):
                g_score[n] = tentative
                came_from[n] = current
                heapq.heappush(heap, (tentative + h(n), n))

    msg = f"Goal region is unreachable from {start}"
    raise UnreachableError(msg)
