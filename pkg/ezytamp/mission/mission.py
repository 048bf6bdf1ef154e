import dataclasses
import logging
from pathlib import Path
from typing import Optional, Tuple, Union

from ezytamp import fields as fld
from ezytamp._version import __version__
from ezytamp.connect import connect_llm
from ezytamp.estimator.oracle import LLMOracle, SemanticOracle
from ezytamp.ledger import CostLedger, load_ledger
from ezytamp.mission._mission import _run_mission
from ezytamp.mission.config import RunConfig
from ezytamp.planner.backend import LLMBackend, PlannerBackend
from ezytamp.planner.context import Mission, load_mission
from ezytamp.report import MissionReport
from ezytamp.scene.graph import SceneGraph, load_scene_graph
from ezytamp.world.config import load_world_config
from ezytamp.world.world import World

logger = logging.getLogger(__name__)

Document = Union[str, Path, dict]


def _run(
    algorithm: str,
    mission: Mission,
    graph: SceneGraph,
    world: World,
    config: Optional[RunConfig],
    backend: Optional[PlannerBackend],
    oracle: Optional[SemanticOracle],
    ledger: Optional[CostLedger],
) -> MissionReport:
    config = dataclasses.replace(config or RunConfig(), algorithm=algorithm)
    tracker, _ = _run_mission(
        mission, graph, world, config, backend=backend, oracle=oracle, ledger=ledger
    )
    return MissionReport(
        config=config.to_dict(),
        object_rows=tracker.object_rows(),
        action_rows=tracker.action_rows(),
        ledger_snapshots=tracker.ledger_snapshots,
        provenance={
            "version": __version__,
            "run_seed": world.run_seed,
            "world_rng_seed": world.config.rng_seed,
            "n_commands": len(mission),
            "n_objects": mission.n_objects,
            "planning_failures": list(tracker.planning_failures),
        },
    )


def run_inter_llm(
    mission: Mission,
    graph: SceneGraph,
    world: World,
    config: Optional[RunConfig] = None,
    backend: Optional[PlannerBackend] = None,
    oracle: Optional[SemanticOracle] = None,
    ledger: Optional[CostLedger] = None,
) -> MissionReport:
    """Interleaved planning: every command's candidates are scored with the cost
    ledger and the cheapest is executed, updating the ledger after every action.

    Parameters
    ----------
    mission: Mission
        Commands to execute in order.
    graph: SceneGraph
        Scene graph owned by ``world``; mutated by execution.
    world: World
        Simulated world.
    config: Optional[RunConfig]
        Hyperparameters; the algorithm field is overridden.
    backend: Optional[PlannerBackend]
        Candidate generator, scripted by default.
    oracle: Optional[SemanticOracle]
        Semantic oracle, rule oracle at ``config.sigma`` by default.
    ledger: Optional[CostLedger]
        Initial cost ledger, updated in place. Empty when None.

    Returns
    -------
    MissionReport
    """
    return _run(
        fld.ALGO_INTER_LLM, mission, graph, world, config, backend, oracle, ledger
    )


def run_open_loop(
    mission: Mission,
    graph: SceneGraph,
    world: World,
    config: Optional[RunConfig] = None,
    backend: Optional[PlannerBackend] = None,
) -> MissionReport:
    """Sequence-first baseline: the first valid candidate of each command is
    executed without cost scoring or replanning."""
    return _run(fld.ALGO_OPEN_LOOP, mission, graph, world, config, backend, None, None)


def run_reactive(
    mission: Mission,
    graph: SceneGraph,
    world: World,
    config: Optional[RunConfig] = None,
    backend: Optional[PlannerBackend] = None,
) -> MissionReport:
    """Replanning baseline: after any failed action the remaining goals are
    replanned from the current state, up to ``retry_budget`` times per command."""
    return _run(fld.ALGO_REACTIVE, mission, graph, world, config, backend, None, None)


RUNNER_MAP = {
    fld.ALGO_INTER_LLM: run_inter_llm,
    fld.ALGO_OPEN_LOOP: run_open_loop,
    fld.ALGO_REACTIVE: run_reactive,
}


def run_mission(
    scene: Document,
    world: Document,
    mission: Document,
    config: Optional[RunConfig] = None,
    ledger: Union[Document, CostLedger, None] = None,
    backend: Optional[PlannerBackend] = None,
    oracle: Optional[SemanticOracle] = None,
) -> Tuple[MissionReport, Optional[CostLedger]]:
    """Load scene, world and mission documents and run the configured algorithm.

    Parameters
    ----------
    scene: Document
        Scene graph document (path, JSON text or dict).
    world: Document
        World config document including the occupancy grid.
    mission: Document
        Mission document.
    config: Optional[RunConfig]
        Hyperparameters; ``config.seed`` seeds the world's random streams.
    ledger: Union[Document, CostLedger, None]
        Initial cost ledger for inter_llm.
    backend: Optional[PlannerBackend]
        Candidate generator. With ``config.backend == "llm"`` and no backend
        given, an LLM backend is connected from the environment.
    oracle: Optional[SemanticOracle]
        Semantic oracle for inter_llm.

    Returns
    -------
    Tuple[MissionReport, Optional[CostLedger]]
        Report and final cost ledger (None for the baselines).
    """
    config = config or RunConfig()
    graph = load_scene_graph(scene)
    world_config = load_world_config(world, graph)
    mission_ = load_mission(mission, graph)
    sim = World(graph, world_config, run_seed=config.seed)

    if ledger is not None and not isinstance(ledger, CostLedger):
        ledger = load_ledger(ledger, cell_size=world_config.grid.cell_size)

    if config.backend == fld.BACKEND_LLM and backend is None:
        client = connect_llm()
        backend = LLMBackend(client)
        if oracle is None:
            oracle = LLMOracle(client, config.sigma)

    logger.info(
        "Running %s on %d command(s), seed %d",
        config.algorithm,
        len(mission_),
        config.seed,
    )
    if config.algorithm == fld.ALGO_INTER_LLM:
        ledger = ledger if ledger is not None else CostLedger()
        report = run_inter_llm(
            mission_, graph, sim, config, backend=backend, oracle=oracle, ledger=ledger
        )
        return report, ledger
    report = RUNNER_MAP[config.algorithm](mission_, graph, sim, config, backend=backend)
    return report, None
