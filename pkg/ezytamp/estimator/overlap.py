from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from scipy.spatial.distance import cdist

from ezytamp import fields as fld
from ezytamp import validators as vld
from ezytamp.errors import InputError
from ezytamp.motion.astar import Path

PathLike = Union[Path, Sequence[Sequence[float]], np.ndarray]


@dataclass(frozen=True)
class OverlapParams:
    epsilon_d: float = fld.DEFAULT_EPSILON_D
    nav_estimator_mode: str = fld.NAV_MODE_NORMALIZED

    def __post_init__(self):
        vld.check_positive(self.epsilon_d, "epsilon_d")
        vld.check_choice(self.nav_estimator_mode, fld.NAV_MODE_LIST, "nav_estimator_mode")


def _points(p: PathLike, cell_size: float) -> np.ndarray:
    if isinstance(p, Path):
        points = p.points_m(cell_size)
    else:
        points = np.asarray(p, dtype=float).reshape(-1, 2)
    if not len(points):
        msg = "path must be non-empty"
        raise InputError(msg)
    return points


def mean_closest_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Mean over points of a of the distance to the closest point of b."""
    return float(np.mean(np.min(cdist(a, b), axis=1)))


def path_overlap(
    p_i: PathLike,
    p_j: PathLike,
    params: OverlapParams = OverlapParams(),  # noqa: B008
    cell_size: float = fld.DEFAULT_CELL_SIZE,
) -> float:
    """Symmetric overlap score of two paths in [0, 200].

    Each direction contributes ``100 * (1 - d / epsilon_d)`` where ``d`` is the
    mean closest-point distance in meters, clamped at ``epsilon_d``.

    Parameters
    ----------
    p_i, p_j: PathLike
        Paths as ``Path`` (cells, scaled by cell_size) or point arrays in meters.
    params: OverlapParams
        Overlap threshold.
    cell_size: float
        Meters per cell for ``Path`` inputs.
    """
    a = _points(p_i, cell_size)
    b = _points(p_j, cell_size)
    eps = params.epsilon_d
    d_ij = min(mean_closest_distance(a, b), eps)
    d_ji = min(mean_closest_distance(b, a), eps)
    return 100.0 * (1.0 - d_ij / eps) + 100.0 * (1.0 - d_ji / eps)
