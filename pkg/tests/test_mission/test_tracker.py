import pytest

from ezytamp import fields as fld
from ezytamp.errors import InputError
from ezytamp.estimator.overlap import OverlapParams
from ezytamp.mission import MissionTracker, RunConfig, attribute_actions
from ezytamp.motion.astar import Path
from ezytamp.motion.cost import EmpiricalCost
from ezytamp.planner.context import Mission
from ezytamp.scene.graph import SceneGraph
from ezytamp.scene.state import Navigate, Pickup, Place, TaskPlan
from ezytamp.world.world import ExecutionOutcome
from tests import utils

CUP_CHAIN = [
    Navigate("counter", "kitchen"),
    Pickup("cup_1", "counter"),
    Navigate("table", "living_room"),
    Place("cup_1", "table"),
]
APPLE_CHAIN = [
    Navigate("counter", "kitchen"),
    Pickup("apple_1", "counter"),
    Navigate("shelf", "living_room"),
    Place("apple_1", "shelf"),
]


@pytest.fixture
def mission() -> Mission:
    commands = [[("cup", "table"), ("apple", "shelf")], [("cup", "shelf")]]
    return Mission.from_dict(utils.make_mission_doc(commands))


class TestAttributeActions:
    def test_chains(self, house_graph: SceneGraph, mission: Mission):
        plan = TaskPlan(CUP_CHAIN + APPLE_CHAIN)
        goal_of, bound = attribute_actions(plan, mission.commands[0], [0, 1], house_graph)
        assert goal_of == [0, 0, 0, 0, 1, 1, 1, 1]
        assert bound == {0: "cup_1", 1: "apple_1"}

    def test_stow_belongs_to_next_goal(self, mission: Mission):
        graph = SceneGraph.from_dict(
            utils.make_house_scene({"cup_1": "counter", "apple_1": None})
        )
        plan = TaskPlan([Place("apple_1", "counter")] + CUP_CHAIN[1:])
        goal_of, bound = attribute_actions(plan, mission.commands[0], [0], graph)
        assert goal_of == [0, 0, 0, 0]
        assert bound == {0: "cup_1"}

    def test_trailing_actions(self, house_graph: SceneGraph, mission: Mission):
        plan = TaskPlan(CUP_CHAIN + [Navigate("shelf", "living_room")])
        goal_of, bound = attribute_actions(plan, mission.commands[0], [0, 1], house_graph)
        assert goal_of == [0, 0, 0, 0, 1]
        assert bound == {0: "cup_1"}

    def test_goal_subset(self, house_graph: SceneGraph, mission: Mission):
        plan = TaskPlan(APPLE_CHAIN)
        goal_of, bound = attribute_actions(plan, mission.commands[0], [1], house_graph)
        assert goal_of == [1, 1, 1, 1]
        assert bound == {1: "apple_1"}

    def test_first_matching_place_binds(self, house_graph: SceneGraph, mission: Mission):
        plan = TaskPlan(
            CUP_CHAIN
            + [
                Navigate("shelf", "living_room"),
                Pickup("cup_2", "shelf"),
                Navigate("table", "living_room"),
                Place("cup_2", "table"),
            ]
        )
        _, bound = attribute_actions(plan, mission.commands[0], [0, 1], house_graph)
        assert bound == {0: "cup_1"}


class TestMissionTracker:
    @pytest.fixture
    def tracker(self, mission: Mission) -> MissionTracker:
        return MissionTracker.for_mission(mission)

    def test_rows(self, tracker: MissionTracker):
        assert [(i.command_index, i.goal_index, i.key) for i in tracker.goal_rows] == [
            (0, 0, "cup"),
            (0, 1, "apple"),
            (1, 0, "cup"),
        ]
        with pytest.raises(KeyError):
            tracker.row(2, 0)

    def test_delivery(self, tracker: MissionTracker, house_graph: SceneGraph):
        assert tracker.remaining_goals(0, house_graph) == [0, 1]
        tracker.bind(0, 0, "cup_1")
        house_graph.move_object("cup_1", "table")
        assert tracker.remaining_goals(0, house_graph) == [1]
        assert tracker.delivered_objects(house_graph) == frozenset({"cup_1"})

    def test_bind_satisfied(self, tracker: MissionTracker, house_graph: SceneGraph):
        assert tracker.bind_satisfied(0, house_graph) == []
        assert tracker.bind_satisfied(1, house_graph) == [0]
        assert tracker.row(1, 0).obj == "cup_2"
        assert tracker.remaining_goals(1, house_graph) == []

    def test_bind_satisfied_skips_owned(self, tracker: MissionTracker, house_graph):
        tracker.bind(0, 0, "cup_2")
        assert tracker.bind_satisfied(1, house_graph) == []
        assert tracker.row(1, 0).obj == ""

    def test_record_and_aggregate(self, tracker: MissionTracker, house_graph: SceneGraph):
        tracker.bind(0, 0, "cup_1")
        nav = ExecutionOutcome(
            True, time_s=9.5, distance_m=1.75, collisions=1, executed_path=[(3, 2), (4, 2)]
        )
        nav_cost = EmpiricalCost(
            CUP_CHAIN[0],
            "",
            21.25,
            fld.COST_KIND_NAV,
            path=Path.from_cells([(3, 2), (4, 2)], 0.25),
        )
        man = ExecutionOutcome(False, time_s=6.0, attempts=3)
        man_cost = EmpiricalCost(CUP_CHAIN[1], "", 104.0, fld.COST_KIND_MAN)

        record = tracker.record(0, 0, CUP_CHAIN[0], nav, nav_cost)
        tracker.record(0, 0, CUP_CHAIN[1], man, man_cost)
        tracker.finalize(house_graph)

        assert record.path == [[3, 2], [4, 2]]
        row = tracker.object_rows()[0]
        assert row["object"] == "cup_1"
        assert row[fld.METRIC_CC_NAV] == 1
        assert row[fld.METRIC_D_NAV] == 1.75
        assert row[fld.METRIC_T_EXE] == pytest.approx(15.5)
        assert row["man_attempts"] == 3
        assert row["man_successes"] == 0
        assert row[fld.METRIC_SR_MAN] == 0.0
        assert row["fulfilled"] is False
        assert row["j"] == pytest.approx(125.25)
        assert [i["object"] for i in tracker.action_rows()] == ["cup_1", "cup_1"]

    def test_finalize_rebinds_records(self, tracker: MissionTracker, house_graph):
        outcome = ExecutionOutcome(True, time_s=2.0, attempts=1)
        cost = EmpiricalCost(CUP_CHAIN[1], "", 2.0, fld.COST_KIND_MAN)
        tracker.bind(0, 0, "cup_1")
        tracker.record(0, 0, CUP_CHAIN[1], outcome, cost)
        tracker.bind(0, 0, "cup_2")
        tracker.finalize(house_graph)
        assert tracker.action_records[0].obj == "cup_2"

    def test_snapshot(self, tracker: MissionTracker):
        tracker.snapshot(None)
        tracker.snapshot({"nav": [], "man": [{"kind": "pickup"}]})
        assert tracker.ledger_snapshots[0] == {"nav": [], "man": []}
        assert len(tracker.ledger_snapshots) == 2


class TestRunConfig:
    @pytest.mark.parametrize(
        ("algorithm", "expect_result"),
        [("inter", 1), ("openloop", 1), ("reactive", 3)],
    )
    def test_retry_budget(self, algorithm: str, expect_result: int):
        config = RunConfig(algorithm=algorithm)
        assert config.effective_retry_budget == expect_result
        assert config.attempt_budget == (
            1 if config.algorithm == fld.ALGO_REACTIVE else expect_result
        )

    def test_explicit_retry_budget(self):
        assert RunConfig(retry_budget=4).attempt_budget == 4
        assert RunConfig(algorithm="reactive", retry_budget=4).attempt_budget == 1

    def test_round_trip(self):
        config = RunConfig(
            algorithm="reactive", seed=7, overlap=OverlapParams(epsilon_d=2.0)
        )
        data = config.to_dict()
        assert data["overlap"] == {"epsilon_d": 2.0, "nav_estimator_mode": "normalized"}
        assert data["retry_budget"] == 3
        assert RunConfig.from_dict(data).to_dict() == data

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"algorithm": "greedy"},
            {"backend": "remote"},
            {"sigma": 1.5},
            {"gamma_man": -1.0},
            {"m_candidates": 0},
            {"n_l": 0},
            {"max_retries": -1},
            {"retry_budget": 0},
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(InputError):
            RunConfig(**kwargs)
