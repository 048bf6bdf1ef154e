import pytest

from ezytamp import fields as fld
from ezytamp.errors import InputError
from ezytamp.motion.astar import Path
from ezytamp.motion.cost import EmpiricalCost, empirical_man_cost, empirical_nav_cost
from ezytamp.scene.state import HighLevelState, Navigate, Pickup
from ezytamp.world.world import ExecutionOutcome


class TestNavCost:
    @pytest.mark.parametrize(
        ("collisions", "gamma_nav", "expect_result"),
        [(0, 10.0, 5.0), (1, 10.0, 15.0), (2, 0.0, 5.0), (2, 3.0, 11.0)],
    )
    def test_value(self, collisions, gamma_nav, expect_result):
        outcome = ExecutionOutcome(
            succeeded=True,
            time_s=3.0,
            distance_m=2.0,
            collisions=collisions,
            executed_path=[(0, 0), (1, 0)],
        )
        cost = empirical_nav_cost(outcome, gamma_nav)
        assert cost.value == expect_result
        assert cost.kind == fld.COST_KIND_NAV
        assert cost.path.cells == [(0, 0), (1, 0)]  # type: ignore

    def test_records_start(self):
        outcome = ExecutionOutcome(succeeded=True, executed_path=[(0, 0)])
        state = HighLevelState(at_furniture="counter", at_room="kitchen")
        cost = empirical_nav_cost(outcome, action=Navigate("table", "x"), state=state)
        assert cost.start_furniture == "counter"
        assert cost.state_signature == state.signature()


class TestManCost:
    def test_mean_over_trials(self):
        trials = [
            ExecutionOutcome(succeeded=True, time_s=2.0, attempts=1),
            ExecutionOutcome(succeeded=False, time_s=4.0, attempts=1),
        ]
        cost = empirical_man_cost(trials, gamma_man=100.0)
        assert cost.value == pytest.approx((2.0 + 104.0) / 2)
        assert cost.kind == fld.COST_KIND_MAN
        assert cost.path is None

    def test_empty(self):
        with pytest.raises(InputError):
            empirical_man_cost([])


class TestEmpiricalCost:
    def test_negative(self):
        with pytest.raises(ValueError, match="non-negative"):
            EmpiricalCost(None, "", -1.0, fld.COST_KIND_MAN)

    def test_nav_needs_path(self):
        with pytest.raises(ValueError, match="path"):
            EmpiricalCost(Navigate("a", "b"), "", 1.0, fld.COST_KIND_NAV)

    def test_man_has_no_path(self):
        with pytest.raises(ValueError, match="path"):
            EmpiricalCost(Pickup("a", "b"), "", 1.0, fld.COST_KIND_MAN, Path([(0, 0)]))

    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="kind"):
            EmpiricalCost(None, "", 1.0, "other")
