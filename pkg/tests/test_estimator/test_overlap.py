import numpy as np
import pytest

from ezytamp import fields as fld
from ezytamp.errors import InputError
from ezytamp.estimator.overlap import OverlapParams, mean_closest_distance, path_overlap
from ezytamp.motion.astar import Path

LINE = [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0]]


@pytest.mark.parametrize(
    ("p_i", "p_j", "expect_result"),
    [
        (LINE, LINE, 200.0),
        (LINE, [[x, y + 0.5] for x, y in LINE], 100.0),
        (LINE, [[x, y + 0.25] for x, y in LINE], 150.0),
        (LINE, [[x, y + 5.0] for x, y in LINE], 0.0),
        (LINE, [[x + 50.0, y] for x, y in LINE], 0.0),
    ],
    ids=["identical", "offset_half", "offset_quarter", "parallel_far", "disjoint"],
)
def test_path_overlap(p_i, p_j, expect_result):
    assert path_overlap(p_i, p_j) == pytest.approx(expect_result)


def test_epsilon_scales_overlap():
    shifted = [[x, y + 0.5] for x, y in LINE]
    assert path_overlap(LINE, shifted, OverlapParams(epsilon_d=2.0)) == pytest.approx(
        150.0
    )


def test_path_uses_cell_size():
    a = Path.from_cells([(0, 0), (1, 0), (2, 0)], 0.25)
    b = Path.from_cells([(0, 2), (1, 2), (2, 2)], 0.25)
    # two cells apart is 0.5 m at 0.25 m per cell
    assert path_overlap(a, b, cell_size=0.25) == pytest.approx(100.0)
    assert path_overlap(a, b, cell_size=1.0) == 0.0


def test_mean_closest_distance_is_directional():
    a = np.array([[0.0, 0.0]])
    b = np.array([[0.0, 0.0], [4.0, 0.0]])
    assert mean_closest_distance(a, b) == 0.0
    assert mean_closest_distance(b, a) == 2.0


@pytest.mark.parametrize("seed", range(10))
def test_symmetric_and_bounded(seed: int):
    rng = np.random.default_rng(seed)
    for _ in range(100):
        a = rng.uniform(0, 5, size=(int(rng.integers(1, 20)), 2))
        b = rng.uniform(0, 5, size=(int(rng.integers(1, 20)), 2))
        value = path_overlap(a, b)
        assert 0.0 <= value <= 200.0
        assert value == path_overlap(b, a)


def test_empty_path():
    with pytest.raises(InputError):
        path_overlap([], LINE)


@pytest.mark.parametrize(
    ("epsilon_d", "mode"), [(0.0, fld.NAV_MODE_NORMALIZED), (1.0, "other")]
)
def test_invalid_params(epsilon_d, mode):
    with pytest.raises(InputError):
        OverlapParams(epsilon_d=epsilon_d, nav_estimator_mode=mode)
