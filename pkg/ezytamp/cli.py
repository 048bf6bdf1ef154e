import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence

import pandas as pd

from ezytamp import fields as fld
from ezytamp import utils
from ezytamp._version import __version__
from ezytamp.errors import BackendError, InputError
from ezytamp.estimator.oracle import RuleOracle
from ezytamp.estimator.overlap import OverlapParams
from ezytamp.estimator.scoring import estimate_plan
from ezytamp.ledger import CostLedger, load_ledger, save_ledger
from ezytamp.mission.config import RunConfig
from ezytamp.mission.mission import run_mission
from ezytamp.planner.checker import check_feasibility
from ezytamp.planner.context import load_plan
from ezytamp.report import MissionReport, aggregate_rows, emit_report, plot_reports
from ezytamp.scenario import (
    find_scenarios,
    make_scenario,
    scenario_paths,
    write_scenario,
)
from ezytamp.scene.graph import SceneGraph, load_scene_graph
from ezytamp.scene.state import HighLevelState, TaskPlan
from ezytamp.world.config import load_world_config

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID_PLAN = 1
EXIT_INPUT_ERROR = 2
EXIT_PLANNING_EXHAUSTED = 3
EXIT_BACKEND_ERROR = 4

bench_columns = [
    "scenario",
    "algorithm",
    "seed",
    fld.METRIC_M_OVERALL,
    fld.METRIC_J_TOTAL,
    fld.METRIC_CC_NAV,
    fld.METRIC_D_NAV,
    fld.METRIC_SR_MAN,
    fld.METRIC_T_EXE,
    fld.METRIC_SR_OBJ,
    "n_fulfilled",
    "n_objects",
    "planning_failures",
    "error",
]


def parse_seeds(text: str) -> List[int]:
    """``"1..10"`` (inclusive range), ``"1,2,5"`` or a single seed."""
    seeds: List[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                low, high = part.split("..", 1)
                seeds.extend(range(int(low), int(high) + 1))
            elif part:
                seeds.append(int(part))
    except ValueError:
        msg = f"Invalid seeds {text!r}"
        raise InputError(msg) from None
    if not seeds:
        msg = f"No seed in {text!r}"
        raise InputError(msg)
    return seeds


def parse_algos(text: str) -> List[str]:
    out = []
    for i in text.split(","):
        i = i.strip()
        algo = fld.ALGO_ALIAS_MAP.get(i, i)
        if algo not in fld.ALGO_LIST:
            choices = sorted(fld.ALGO_ALIAS_MAP)
            msg = f"Unknown algorithm {i!r}, expected one of {choices}"
            raise InputError(msg)
        out.append(algo)
    return out


def _initial_state(graph: SceneGraph, at: Optional[str] = None) -> HighLevelState:
    held = [i.name for i in graph.objects if i.on_furniture is None]
    return HighLevelState(
        holding=held[0] if held else None,
        at_furniture=at,
        at_room=graph.room_of(at) if at else None,
    )


def _overlap(args: argparse.Namespace) -> OverlapParams:
    return OverlapParams(epsilon_d=args.epsilon_d, nav_estimator_mode=args.nav_mode)


def _run_config(args: argparse.Namespace, algorithm: str, seed: int) -> RunConfig:
    return RunConfig(
        algorithm=algorithm,
        seed=seed,
        m_candidates=args.m_candidates,
        sigma=args.sigma,
        overlap=_overlap(args),
        retry_budget=args.retry_budget,
        backend=args.backend,
    )


def cmd_run(args: argparse.Namespace) -> int:
    config = _run_config(args, args.algo, args.seed)
    report, ledger = run_mission(
        args.scene, args.world, args.mission, config, ledger=args.ledger_in
    )
    emit_report(report, out=args.out, csv=args.csv, plot=args.plot, xlsx=args.xlsx)
    if args.ledger_out is not None:
        save_ledger(ledger if ledger is not None else CostLedger(), args.ledger_out)

    print(
        f"{report.algorithm}: {report.n_fulfilled}/{report.n_objects} fulfilled, "
        f"m_overall={report.m_overall:.3f}, j_total={report.j_total:.3f}"
    )
    for i in report.planning_failures:
        print(f"error: {i}", file=sys.stderr)
    if report.planning_failures:
        return EXIT_PLANNING_EXHAUSTED
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    graph = load_scene_graph(args.scene)
    plan = load_plan(args.plan)
    violations = check_feasibility(plan, _initial_state(graph, args.at), graph)
    for i in violations:
        print(i)
    if violations:
        return EXIT_INVALID_PLAN
    print("valid")
    return EXIT_OK


def _load_plans(document) -> List[TaskPlan]:
    data = utils.read_json(document)
    if isinstance(data, dict) and "plans" in data:
        return [load_plan(i) for i in data["plans"]]
    return [load_plan(data)]


def cmd_estimate(args: argparse.Namespace) -> int:
    graph = load_scene_graph(args.scene)
    world_config = load_world_config(args.world, graph)
    grid = world_config.grid
    ledger = load_ledger(args.ledger, cell_size=grid.cell_size)
    df = estimate_plan(
        _load_plans(args.plan),
        _initial_state(graph, args.at),
        graph,
        ledger,
        grid,
        _overlap(args),
        RuleOracle(args.sigma),
        robot_speed=world_config.robot_speed,
        start_cell=world_config.start,
    )
    with pd.option_context("display.width", 200, "display.max_rows", None):
        print(df.to_string(index=False))
    return EXIT_OK


def _bench_cell(cell: tuple) -> dict:
    """One (scenario, algorithm, seed) run; every cell loads its own documents."""
    directory, algorithm, seed, overrides, out_dir = cell
    row = {"scenario": Path(directory).name, "algorithm": algorithm, "seed": seed}
    try:
        config = RunConfig(algorithm=algorithm, seed=seed, **overrides)
        paths = scenario_paths(directory)
        report, _ = run_mission(
            paths["scene"], paths["world"], paths["mission"], config
        )
    except (InputError, BackendError) as e:
        row["error"] = f"{type(e).__name__}: {e}"
        return row

    report.to_json(Path(out_dir) / row["scenario"] / f"{algorithm}_seed{seed}.json")
    agg = aggregate_rows(report.object_rows)
    row.update({k: agg[k] for k in bench_columns if k in agg})
    row[fld.METRIC_M_OVERALL] = report.m_overall
    row[fld.METRIC_J_TOTAL] = report.j_total
    row["n_fulfilled"] = report.n_fulfilled
    row["n_objects"] = report.n_objects
    row["planning_failures"] = len(report.planning_failures)
    row["error"] = ""
    return row


def cmd_bench(args: argparse.Namespace) -> int:
    scenarios = find_scenarios(args.suite)
    algos = parse_algos(args.algos)
    seeds = parse_seeds(args.seeds)
    overrides = {
        "m_candidates": args.m_candidates,
        "sigma": args.sigma,
        "overlap": _overlap(args),
        "retry_budget": args.retry_budget,
    }
    out_dir = Path(args.out)
    cells = [
        (str(d), a, s, overrides, str(out_dir))
        for d in scenarios
        for a in algos
        for s in seeds
    ]
    logger.info("Running %d bench cell(s) with %s job(s)", len(cells), args.jobs)

    if args.jobs == 1:
        rows = [_bench_cell(i) for i in cells]
    else:
        with ProcessPoolExecutor(max_workers=args.jobs) as executor:
            rows = list(executor.map(_bench_cell, cells))

    df = pd.DataFrame(rows, columns=bench_columns)
    out_dir.mkdir(parents=True, exist_ok=True)
    df.to_csv(out_dir / "aggregate.csv", index=False)
    summary = df[df["error"] == ""].groupby("algorithm")[
        [fld.METRIC_M_OVERALL, fld.METRIC_J_TOTAL, fld.METRIC_SR_OBJ]
    ].mean()
    summary.to_csv(out_dir / "summary.csv")
    print(summary.to_string())

    if args.plot:
        for d in scenarios:
            _plot_scenario(out_dir / Path(d).name, algos, seeds[0])

    failed = df[df["error"] != ""]
    for _, i in failed.iterrows():
        where = f"{i['scenario']} {i['algorithm']} seed {i['seed']}"
        print(f"{where}: {i['error']}", file=sys.stderr)
    partial = df[df["planning_failures"].fillna(0) > 0]
    for _, i in partial.iterrows():
        where = f"{i['scenario']} {i['algorithm']} seed {i['seed']}"
        n = int(i["planning_failures"])
        print(f"{where}: {n} command(s) without a feasible plan", file=sys.stderr)
    return EXIT_OK


def _plot_scenario(directory: Path, algos: List[str], seed: int):
    paths = {a: directory / f"{a}_seed{seed}.json" for a in algos}
    reports = {a: MissionReport.from_json(p) for a, p in paths.items() if p.is_file()}
    if reports:
        plot_reports(reports, directory / f"m_overall_seed{seed}.svg")


def cmd_scenario(args: argparse.Namespace) -> int:
    seeds = parse_seeds(args.seeds) if args.seeds else [args.seed]
    out_dir = Path(args.out)
    for seed in seeds:
        target = out_dir / f"seed_{seed}" if args.seeds else out_dir
        for path in write_scenario(make_scenario(seed, args.layout), target):
            print(path)
    return EXIT_OK


def _add_overrides(parser: argparse.ArgumentParser):
    parser.add_argument("--sigma", type=float, default=fld.DEFAULT_SIGMA)
    parser.add_argument("--m-candidates", type=int, default=fld.DEFAULT_M_CANDIDATES)
    parser.add_argument("--retry-budget", type=int, default=None)
    parser.add_argument("--epsilon-d", type=float, default=fld.DEFAULT_EPSILON_D)
    parser.add_argument(
        "--nav-mode", choices=fld.NAV_MODE_LIST, default=fld.NAV_MODE_NORMALIZED
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tamp", description="Interleaved task and motion planning testbed."
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v info, -vv debug"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one mission")
    p.add_argument("--scene", required=True)
    p.add_argument("--world", required=True)
    p.add_argument("--mission", required=True)
    p.add_argument(
        "--algo",
        type=lambda s: fld.ALGO_ALIAS_MAP.get(s, s),
        choices=fld.ALGO_LIST,
        default=fld.ALGO_INTER_LLM,
    )
    p.add_argument("--backend", choices=fld.BACKEND_LIST, default=fld.BACKEND_SCRIPTED)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ledger-in")
    p.add_argument("--ledger-out")
    p.add_argument("--out")
    p.add_argument("--csv")
    p.add_argument("--plot")
    p.add_argument("--xlsx")
    _add_overrides(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("check", help="check a plan's feasibility")
    p.add_argument("--scene", required=True)
    p.add_argument("--plan", required=True)
    p.add_argument("--at", help="furniture the robot starts at")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("estimate", help="print the cost estimate of plans")
    p.add_argument("--scene", required=True)
    p.add_argument("--world", required=True)
    p.add_argument("--ledger", required=True)
    p.add_argument("--plan", required=True)
    p.add_argument("--at", help="furniture the robot starts at")
    _add_overrides(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("bench", help="compare algorithms over a scenario suite")
    p.add_argument("--suite", required=True)
    p.add_argument("--algos", default="inter,openloop,reactive")
    p.add_argument("--seeds", default="1..10")
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--plot", action="store_true")
    _add_overrides(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("scenario", help="write a synthetic household scenario")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--seeds", help="e.g. 1..10, one sub-directory per seed")
    p.add_argument("--layout", help="compact layout document")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_scenario)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(
        level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )

    try:
        return args.func(args)
    except BackendError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BACKEND_ERROR
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
