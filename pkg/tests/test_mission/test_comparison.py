from typing import Dict, List

import numpy as np
import pytest

from ezytamp import fields as fld
from ezytamp.mission import RunConfig, run_inter_llm, run_open_loop, run_reactive
from ezytamp.scenario import make_scenario
from ezytamp.world.world import World

SEEDS = range(1, 11)


def run_all(seed: int) -> Dict[str, float]:
    out = {}
    for algorithm, runner in [
        (fld.ALGO_INTER_LLM, run_inter_llm),
        (fld.ALGO_OPEN_LOOP, run_open_loop),
        (fld.ALGO_REACTIVE, run_reactive),
    ]:
        scenario = make_scenario(seed)
        world = World(scenario.graph, scenario.world_config, run_seed=seed)
        config = RunConfig(algorithm=algorithm, seed=seed)
        report = runner(scenario.mission, scenario.graph, world, config)
        out[algorithm] = report.m_overall
    return out


@pytest.fixture(scope="module")
def results() -> List[Dict[str, float]]:
    return [run_all(seed) for seed in SEEDS]


def test_inter_llm_beats_open_loop(results):
    inter = np.mean([i[fld.ALGO_INTER_LLM] for i in results])
    open_loop = np.mean([i[fld.ALGO_OPEN_LOOP] for i in results])
    assert inter <= 0.85 * open_loop

    wins = sum(i[fld.ALGO_INTER_LLM] < i[fld.ALGO_OPEN_LOOP] for i in results)
    assert wins >= 8


def test_inter_llm_not_worse_than_reactive(results):
    inter = np.mean([i[fld.ALGO_INTER_LLM] for i in results])
    reactive = np.mean([i[fld.ALGO_REACTIVE] for i in results])
    assert inter <= reactive
