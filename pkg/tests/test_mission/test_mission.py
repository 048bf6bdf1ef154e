from typing import Optional

import pytest

from ezytamp import fields as fld
from ezytamp.errors import InputError
from ezytamp.ledger import CostLedger
from ezytamp.mission import (
    RunConfig,
    run_inter_llm,
    run_mission,
    run_open_loop,
    run_reactive,
)
from ezytamp.planner.context import Mission
from ezytamp.report import MissionReport
from ezytamp.scene.graph import SceneGraph
from ezytamp.world.config import WorldConfig
from ezytamp.world.world import World
from tests import utils

RUNNER_MAP = {
    fld.ALGO_INTER_LLM: run_inter_llm,
    fld.ALGO_OPEN_LOOP: run_open_loop,
    fld.ALGO_REACTIVE: run_reactive,
}


def line_run(
    algorithm: str,
    ledger: Optional[CostLedger] = None,
    p_cup_1: float = 0.0,
    p_cup_2: float = 1.0,
    seed: int = 0,
) -> MissionReport:
    graph = SceneGraph.from_dict(utils.make_line_scene())
    world = World(
        graph, WorldConfig.from_dict(utils.make_line_world(p_cup_1, p_cup_2)), seed
    )
    mission = Mission.from_dict(utils.make_mission_doc([[("cup", "table")]]))
    config = RunConfig(n_l=2, seed=seed)
    if algorithm == fld.ALGO_INTER_LLM:
        return run_inter_llm(mission, graph, world, config, ledger=ledger)
    return RUNNER_MAP[algorithm](mission, graph, world, config)


def line_ledger() -> CostLedger:
    return CostLedger.from_dict(utils.make_line_ledger())


def pickups(report: MissionReport):
    return [
        (i["action"], i["succeeded"])
        for i in report.action_rows
        if i["kind"] == fld.ACTION_PICKUP
    ]


class TestInterLLM:
    def test_cheapest_without_knowledge(self):
        # the shelf_a plan has the shorter presumed path
        report = line_run(fld.ALGO_INTER_LLM)
        assert report.object_rows[0]["object"] == "cup_1"
        assert report.n_fulfilled == 0

    def test_ledger_steers_selection(self):
        ledger = line_ledger()
        report = line_run(fld.ALGO_INTER_LLM, ledger=ledger)
        assert report.object_rows[0]["object"] == "cup_2"
        assert report.n_fulfilled == 1
        assert pickups(report) == [("Pickup(cup_2, shelf_b)", True)]

    def test_ledger_updated(self):
        ledger = CostLedger()
        report = line_run(fld.ALGO_INTER_LLM, ledger=ledger)
        record = ledger.man_record(fld.ACTION_PICKUP, "cup_1", "shelf_a")
        assert record is not None
        # every probe at success probability 0 costs gamma_man plus 4 s
        assert record.cost == pytest.approx(104.0)
        assert ledger.nav_record(fld.START_KEY, "shelf_a") is not None
        assert report.ledger_snapshots == [ledger.to_dict()]

    def test_learns_across_commands(self):
        graph = SceneGraph.from_dict(
            utils.make_scene_doc(
                {"shelf_b": "room", "table": "room", "shelf_a": "room"},
                {"cup_1": "shelf_a", "cup_2": "shelf_b", "cup_3": "shelf_a"},
            )
        )
        doc = utils.make_line_world(p_cup_1=0.0)
        doc["profiles"]["cup_3@shelf_a"] = {"success_prob": 0.0, "time_mean": 4.0}
        world = World(graph, WorldConfig.from_dict(doc))
        mission = Mission.from_dict(
            utils.make_mission_doc([[("cup_1", "table")], [("cup", "table")]])
        )

        report = run_inter_llm(mission, graph, world, RunConfig(n_l=2))

        # cup_3 sits on the shelf where cup_1 turned out hard
        assert [i["object"] for i in report.object_rows] == ["cup_1", "cup_2"]
        assert [i["fulfilled"] for i in report.object_rows] == [False, True]


class TestBaselines:
    def test_open_loop_first_candidate(self):
        report = line_run(fld.ALGO_OPEN_LOOP)
        assert report.object_rows[0]["object"] == "cup_1"
        assert report.n_fulfilled == 0
        assert [i["kind"] for i in report.action_rows] == ["navigate", "pickup"]
        assert report.ledger_snapshots == [{"nav": [], "man": []}]

    def test_reactive_replans(self):
        report = line_run(fld.ALGO_REACTIVE)
        assert report.n_fulfilled == 1
        assert report.object_rows[0]["object"] == "cup_2"
        assert pickups(report) == [
            ("Pickup(cup_1, shelf_a)", False),
            ("Pickup(cup_2, shelf_b)", True),
        ]

    def test_reactive_exhausts(self):
        report = line_run(fld.ALGO_REACTIVE, p_cup_2=0.0)
        assert report.n_fulfilled == 0
        assert [ok for _, ok in pickups(report)] == [False, False]

    def test_reactive_single_attempt_per_action(self):
        report = line_run(fld.ALGO_REACTIVE, p_cup_2=0.0)
        assert all(
            i["attempts"] == 1
            for i in report.action_rows
            if i["kind"] == fld.ACTION_PICKUP
        )
        assert report.config["retry_budget"] == 3


class TestRun:
    def test_same_world_streams(self):
        # inter_llm without knowledge executes the open_loop plan
        inter = line_run(fld.ALGO_INTER_LLM)
        open_loop = line_run(fld.ALGO_OPEN_LOOP)
        assert inter.action_rows == open_loop.action_rows

    @pytest.mark.parametrize("algorithm", fld.ALGO_LIST)
    def test_deterministic(self, algorithm: str):
        a = line_run(algorithm, p_cup_1=0.5, p_cup_2=0.5, seed=3)
        b = line_run(algorithm, p_cup_1=0.5, p_cup_2=0.5, seed=3)
        assert a.to_json() == b.to_json()

    def test_seeds_change_outcomes_only(self):
        a = line_run(fld.ALGO_INTER_LLM, p_cup_1=1.0, seed=1)
        b = line_run(fld.ALGO_INTER_LLM, p_cup_1=1.0, seed=2)
        assert [i["action"] for i in a.action_rows] == [
            i["action"] for i in b.action_rows
        ]
        assert a.provenance["run_seed"] != b.provenance["run_seed"]

    def test_report_fields(self, house_graph, house_world, cup_mission, config):
        report = run_inter_llm(cup_mission, house_graph, house_world, config)
        assert report.algorithm == fld.ALGO_INTER_LLM
        assert report.n_objects == 1
        assert report.n_fulfilled == 1
        assert report.object_rows[0]["object"] == "cup_2"
        assert report.provenance["n_commands"] == 1
        assert report.j_total == pytest.approx(
            sum(i["empirical_cost"] for i in report.action_rows)
        )

    def test_missing_profile_checked_before_running(self, house_graph, cup_mission):
        doc = utils.make_house_world()
        del doc["default_profile"]
        keys = ["cup_1@counter", "cup_2@shelf", "apple_1@counter"]
        doc["profiles"] = {k: {"success_prob": 1, "time_mean": 1} for k in keys}
        world = World(house_graph, WorldConfig.from_dict(doc))
        with pytest.raises(InputError, match="No profile for cup_1@table"):
            run_open_loop(cup_mission, house_graph, world)
        assert house_graph.object_node("cup_1").on_furniture == "counter"

    def test_graph_not_owned(self, house_world_config, cup_mission):
        graph = SceneGraph.from_dict(utils.make_house_scene())
        world = World(graph.copy(), house_world_config)
        with pytest.raises(InputError, match="own"):
            run_open_loop(cup_mission, graph, world)

    @pytest.mark.parametrize("runner", list(RUNNER_MAP.values()))
    def test_no_feasible_plan_continues(self, house_graph, house_world, config, runner):
        mission = Mission.from_dict(
            utils.make_mission_doc([[("book", "table")], [("cup", "table")]])
        )
        report = runner(mission, house_graph, house_world, config)
        assert [i["fulfilled"] for i in report.object_rows] == [False, True]
        assert report.object_rows[0]["object"] == ""
        assert len(report.planning_failures) == 1
        assert "No feasible plan" in report.planning_failures[0]
        assert {i["command_index"] for i in report.action_rows} == {1}
        assert len(report.ledger_snapshots) == 2

    @pytest.mark.parametrize("runner", list(RUNNER_MAP.values()))
    def test_goal_already_holds(self, house_graph, house_world, config, runner):
        mission = Mission.from_dict(
            utils.make_mission_doc([[("cup", "table")], [("apple", "counter")]])
        )
        report = runner(mission, house_graph, house_world, config)
        assert report.n_fulfilled == 2
        assert report.object_rows[1]["object"] == "apple_1"
        assert report.planning_failures == []
        assert {i["command_index"] for i in report.action_rows} == {0}
        assert house_graph.object_node("apple_1").on_furniture == "counter"


class TestRunMission:
    def test_documents(self):
        report, ledger = run_mission(
            utils.make_line_scene(),
            utils.make_line_world(),
            utils.make_mission_doc([[("cup", "table")]]),
            RunConfig(n_l=2),
            ledger=utils.make_line_ledger(),
        )
        assert report.n_fulfilled == 1
        assert isinstance(ledger, CostLedger)

    @pytest.mark.parametrize("algorithm", ["openloop", "reactive"])
    def test_baseline_has_no_ledger(self, algorithm: str):
        report, ledger = run_mission(
            utils.make_line_scene(),
            utils.make_line_world(),
            utils.make_mission_doc([[("cup", "table")]]),
            RunConfig(algorithm=algorithm, n_l=2),
        )
        assert ledger is None
        assert report.algorithm == fld.ALGO_ALIAS_MAP[algorithm]

    def test_llm_backend_needs_environment(self):
        with pytest.raises(InputError, match="LLM_MODEL"):
            run_mission(
                utils.make_line_scene(),
                utils.make_line_world(),
                utils.make_mission_doc([[("cup", "table")]]),
                RunConfig(backend=fld.BACKEND_LLM),
            )

    def test_unknown_destination(self):
        with pytest.raises(InputError):
            run_mission(
                utils.make_line_scene(),
                utils.make_line_world(),
                utils.make_mission_doc([[("cup", "sofa")]]),
            )
