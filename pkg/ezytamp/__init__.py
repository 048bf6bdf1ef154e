from ezytamp._version import __version__
from ezytamp.connect import connect_llm
from ezytamp.ledger import CostLedger, load_ledger, save_ledger
from ezytamp.mission import (
    RunConfig,
    run_inter_llm,
    run_mission,
    run_open_loop,
    run_reactive,
)
from ezytamp.report import MissionReport, compute_overall_metric, emit_report
from ezytamp.scenario import make_scenario, write_scenario
from ezytamp.scene import SceneGraph, load_scene_graph
from ezytamp.world import World, load_world_config
