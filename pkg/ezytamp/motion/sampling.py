from typing import List

import numpy as np

from ezytamp.errors import InputError
from ezytamp.scene.grid import OccupancyGrid
from ezytamp.utils import Cell


def sample_stand_cells(
    grid: OccupancyGrid, furniture: str, n: int, rng: np.random.Generator
) -> List[Cell]:
    """Draw n stand cells uniformly from the free cells around a furniture.

    Distinct cells are drawn while there are enough of them; the remainder is
    drawn with replacement.
    """
    if n < 0:
        msg = "n must be non-negative"
        raise InputError(msg)
    candidates = grid.free_neighbors(grid.furniture_region(furniture))
    if not candidates:
        msg = f"Furniture {furniture} has no adjacent free cell"
        raise InputError(msg)

    k = len(candidates)
    idx = rng.permutation(k)[:n].tolist()
    if n > k:
        idx += rng.integers(0, k, size=n - k).tolist()
    return [candidates[i] for i in idx]
