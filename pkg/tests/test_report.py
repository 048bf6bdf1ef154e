import re
import zipfile
from pathlib import Path

import pandas as pd
import pytest

from ezytamp import fields as fld
from ezytamp.errors import InputError
from ezytamp.report import (
    MissionReport,
    aggregate_rows,
    compute_overall_metric,
    emit_report,
    overall_metric,
    plot_reports,
)


def make_object_row(
    obj: str,
    command_index: int = 0,
    cc_nav: int = 0,
    d_nav: float = 1.0,
    attempts: int = 1,
    successes: int = 1,
    t_exe: float = 5.0,
    fulfilled: bool = True,
) -> dict:
    return {
        "object": obj,
        "key": obj.rsplit("_", 1)[0],
        "destination": "table",
        "command_index": command_index,
        "goal_index": 0,
        fld.METRIC_CC_NAV: cc_nav,
        fld.METRIC_D_NAV: d_nav,
        "man_attempts": attempts,
        "man_successes": successes,
        fld.METRIC_SR_MAN: successes / attempts if attempts else 0.0,
        fld.METRIC_T_EXE: t_exe,
        "fulfilled": fulfilled,
        "j": 10.0,
    }


def make_action_row(obj: str, cost: float) -> dict:
    return {
        "command_index": 0,
        "goal_index": 0,
        "object": obj,
        "action": f"Pickup({obj}, shelf)",
        "kind": fld.ACTION_PICKUP,
        "succeeded": True,
        "time_s": cost,
        "distance_m": 0.0,
        "collisions": 0,
        "attempts": 1,
        "successes": 1,
        "empirical_cost": cost,
        "path": None,
    }


@pytest.fixture
def report() -> MissionReport:
    return MissionReport(
        config={"algorithm": fld.ALGO_INTER_LLM},
        object_rows=[
            make_object_row("cup_1", cc_nav=1, d_nav=2.0, t_exe=8.0),
            make_object_row(
                "cup_2", command_index=1, attempts=3, successes=0, fulfilled=False
            ),
        ],
        action_rows=[make_action_row("cup_1", 4.5), make_action_row("cup_2", 6.0)],
        provenance={"run_seed": 1},
    )


@pytest.mark.parametrize(
    ("kwargs", "expect_result"),
    [
        ({"cc_nav": 1, "t_exe": 30, "d_nav": 15, "sr_man": 0.4, "sr_obj": 1.0}, 115.0),
        ({"cc_nav": 0, "t_exe": 0, "d_nav": 0, "sr_man": 1.0, "sr_obj": 1.0}, 0.0),
        ({"cc_nav": 0, "t_exe": 0, "d_nav": 0, "sr_man": 0.0, "sr_obj": 0.0}, 200.0),
        (
            {
                "cc_nav": 2,
                "t_exe": 1,
                "d_nav": 1,
                "sr_man": 0.5,
                "sr_obj": 0.5,
                "gamma_nav": 1.0,
                "gamma_man": 2.0,
                "gamma_obj": 4.0,
            },
            7.0,
        ),
    ],
)
def test_overall_metric(kwargs, expect_result):
    assert overall_metric(**kwargs) == pytest.approx(expect_result)


class TestAggregateRows:
    def test_sums_and_rates(self):
        agg = aggregate_rows(
            [
                make_object_row("cup_1", cc_nav=1, d_nav=2.0, t_exe=8.0),
                make_object_row("cup_2", attempts=3, successes=0, fulfilled=False),
            ]
        )
        assert agg[fld.METRIC_CC_NAV] == 1
        assert agg[fld.METRIC_D_NAV] == 3.0
        assert agg[fld.METRIC_T_EXE] == 13.0
        # pooled over attempts, not averaged per object
        assert agg[fld.METRIC_SR_MAN] == pytest.approx(0.25)
        assert agg[fld.METRIC_SR_OBJ] == 0.5

    def test_empty(self):
        agg = aggregate_rows([])
        assert agg[fld.METRIC_SR_MAN] == 0.0
        assert agg[fld.METRIC_SR_OBJ] == 0.0

    def test_config_weights(self):
        rows = [make_object_row("cup_1", d_nav=0.0, t_exe=0.0, fulfilled=False)]
        assert compute_overall_metric(rows) == 100.0
        assert compute_overall_metric(rows, {"gamma_obj": 1.0}) == 1.0


class TestMissionReport:
    def test_totals(self, report: MissionReport):
        assert report.algorithm == fld.ALGO_INTER_LLM
        assert report.n_objects == 2
        assert report.n_fulfilled == 1
        assert report.j_total == 10.5
        # 10 * 1 + 13 + 3 + 100 * 0.75 + 100 * 0.5
        assert report.m_overall == pytest.approx(151.0)

    def test_cumulative(self, report: MissionReport):
        values = report.cumulative_m_overall()
        assert values[0] == pytest.approx(20.0)
        assert values[-1] == pytest.approx(report.m_overall)

    def test_frames(self, report: MissionReport):
        assert report.object_df["object"].tolist() == ["cup_1", "cup_2"]
        assert report.action_df["empirical_cost"].sum() == 10.5
        assert report.command_df.loc[1, "n_fulfilled"] == 0
        assert report.stat_df.loc[fld.METRIC_J_TOTAL, "value"] == 10.5

    def test_json_round_trip(self, report: MissionReport, tmp_path: Path):
        path = tmp_path / "report.json"
        text = report.to_json(path)
        loaded = MissionReport.from_json(path)
        assert loaded.to_json() == text
        assert loaded.provenance == {"run_seed": 1}

    def test_from_json_keeps_stored_totals(self, report: MissionReport):
        data = report.to_dict()
        data["totals"][fld.METRIC_M_OVERALL] = 1.0
        assert MissionReport.from_json(data).m_overall == 1.0

    def test_from_json_missing_key(self):
        with pytest.raises(InputError, match="actions"):
            MissionReport.from_json({"config": {}, "objects": []})

    def test_csv(self, report: MissionReport, tmp_path: Path):
        path = tmp_path / "report.csv"
        report.to_csv(path)
        df = pd.read_csv(path)
        assert df["object"].tolist() == ["cup_1", "cup_2", "total"]
        total = df.iloc[-1]
        assert total[fld.METRIC_T_EXE] == 13.0
        assert total[fld.METRIC_SR_MAN] == pytest.approx(0.25)

    def test_excel(self, report: MissionReport, tmp_path: Path):
        path = tmp_path / "report.xlsx"
        report.to_excel(path)
        with zipfile.ZipFile(path) as z:
            workbook = z.read("xl/workbook.xml").decode()
        names = re.findall(r'<sheet name="([^"]+)"', workbook)
        assert names == ["object", "command", "action", "stat"]

    def test_svg_deterministic(self, report: MissionReport, tmp_path: Path):
        a = report.to_svg(tmp_path / "a.svg")
        b = report.to_svg(tmp_path / "b.svg")
        assert a.read_bytes() == b.read_bytes()


def test_plot_reports_empty(tmp_path: Path):
    with pytest.raises(InputError):
        plot_reports({}, tmp_path / "empty.svg")


def test_emit_report(report: MissionReport, tmp_path: Path):
    written = emit_report(
        report,
        out=tmp_path / "r.json",
        csv=tmp_path / "r.csv",
        plot=tmp_path / "r.svg",
    )
    assert [i.name for i in written] == ["r.json", "r.csv", "r.svg"]
    assert all(i.is_file() for i in written)
    assert emit_report(report) == []
