import logging
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Union

import matplotlib
import pandas as pd
from matplotlib.figure import Figure

from ezytamp import fields as fld
from ezytamp import utils
from ezytamp.errors import InputError
from ezytamp.utils import cached_property

logger = logging.getLogger(__name__)

object_columns = [
    "object",
    "key",
    "destination",
    "command_index",
    "goal_index",
    fld.METRIC_CC_NAV,
    fld.METRIC_D_NAV,
    "man_attempts",
    "man_successes",
    fld.METRIC_SR_MAN,
    fld.METRIC_T_EXE,
    "fulfilled",
    "j",
]
action_columns = [
    "command_index",
    "goal_index",
    "object",
    "action",
    "kind",
    "succeeded",
    "time_s",
    "distance_m",
    "collisions",
    "attempts",
    "successes",
    "empirical_cost",
    "path",
]
csv_columns = [
    "object",
    "command_index",
    fld.METRIC_CC_NAV,
    fld.METRIC_D_NAV,
    fld.METRIC_SR_MAN,
    fld.METRIC_T_EXE,
    "fulfilled",
]

SVG_HASH_SALT = "ezytamp"


def overall_metric(
    cc_nav: float,
    t_exe: float,
    d_nav: float,
    sr_man: float,
    sr_obj: float,
    gamma_nav: float = fld.DEFAULT_GAMMA_NAV,
    gamma_man: float = fld.DEFAULT_GAMMA_MAN,
    gamma_obj: float = fld.DEFAULT_GAMMA_OBJ,
) -> float:
    """Weighted mission score, lower is better.

    ``gamma_nav * cc_nav + t_exe + d_nav + gamma_man * (1 - sr_man)
    + gamma_obj * (1 - sr_obj)``
    """
    return (
        gamma_nav * cc_nav
        + t_exe
        + d_nav
        + gamma_man * (1 - sr_man)
        + gamma_obj * (1 - sr_obj)
    )


def aggregate_rows(rows: Sequence[Mapping[str, Any]]) -> Dict[str, float]:
    """Mission aggregates of per-object rows.

    sr_man is successes over attempts of all rows (0 without attempts) and
    sr_obj the fulfilled fraction.
    """
    attempts = sum(i["man_attempts"] for i in rows)
    successes = sum(i["man_successes"] for i in rows)
    return {
        fld.METRIC_CC_NAV: sum(i[fld.METRIC_CC_NAV] for i in rows),
        fld.METRIC_D_NAV: sum(i[fld.METRIC_D_NAV] for i in rows),
        fld.METRIC_T_EXE: sum(i[fld.METRIC_T_EXE] for i in rows),
        "man_attempts": attempts,
        "man_successes": successes,
        fld.METRIC_SR_MAN: successes / attempts if attempts else 0.0,
        fld.METRIC_SR_OBJ: (
            sum(bool(i["fulfilled"]) for i in rows) / len(rows) if rows else 0.0
        ),
    }


def _gamma(config: Any, name: str, default: float) -> float:
    if config is None:
        return default
    if isinstance(config, Mapping):
        return config.get(name, default)
    return getattr(config, name, default)


def compute_overall_metric(
    rows: Sequence[Mapping[str, Any]], config: Any = None
) -> float:
    """m_overall of per-object rows.

    Parameters
    ----------
    rows: Sequence[Mapping[str, Any]]
        Per-object rows with cc_nav, d_nav, t_exe, man_attempts, man_successes
        and fulfilled.
    config: Any
        RunConfig or dict carrying gamma_nav, gamma_man and gamma_obj.
        Default weights when None.
    """
    agg = aggregate_rows(rows)
    return overall_metric(
        cc_nav=agg[fld.METRIC_CC_NAV],
        t_exe=agg[fld.METRIC_T_EXE],
        d_nav=agg[fld.METRIC_D_NAV],
        sr_man=agg[fld.METRIC_SR_MAN],
        sr_obj=agg[fld.METRIC_SR_OBJ],
        gamma_nav=_gamma(config, "gamma_nav", fld.DEFAULT_GAMMA_NAV),
        gamma_man=_gamma(config, "gamma_man", fld.DEFAULT_GAMMA_MAN),
        gamma_obj=_gamma(config, "gamma_obj", fld.DEFAULT_GAMMA_OBJ),
    )


def compute_j_total(action_rows: Sequence[Mapping[str, Any]]) -> float:
    """Sum of empirical costs of executed actions."""
    return sum(i["empirical_cost"] for i in action_rows)


class MissionReport:
    def __init__(
        self,
        config: dict,
        object_rows: List[dict],
        action_rows: List[dict],
        ledger_snapshots: Optional[List[dict]] = None,
        provenance: Optional[dict] = None,
        totals: Optional[dict] = None,
    ):
        """MissionReport.

        Parameters
        ----------
        config: dict
            Run configuration (``RunConfig.to_dict``).
        object_rows: List[dict]
            One row per commanded goal.
        action_rows: List[dict]
            Executed action log.
        ledger_snapshots: Optional[List[dict]]
            Cost ledger after every command (empty documents for baselines).
        provenance: Optional[dict]
            Seeds and input summary.
        totals: Optional[dict]
            Stored j_total and m_overall. Computed from the rows when None.
        """
        self._config = dict(config)
        self._object_rows = [dict(i) for i in object_rows]
        self._action_rows = [dict(i) for i in action_rows]
        self._ledger_snapshots = list(ledger_snapshots or [])
        self._provenance = dict(provenance or {})
        if totals is None:
            totals = {
                fld.METRIC_J_TOTAL: compute_j_total(self._action_rows),
                fld.METRIC_M_OVERALL: compute_overall_metric(
                    self._object_rows, self._config
                ),
            }
        self._totals = dict(totals)

    @property
    def config(self) -> dict:
        return self._config

    @property
    def algorithm(self) -> str:
        return self._config.get("algorithm", "")

    @property
    def provenance(self) -> dict:
        return self._provenance

    @property
    def ledger_snapshots(self) -> List[dict]:
        return self._ledger_snapshots

    @property
    def object_rows(self) -> List[dict]:
        return self._object_rows

    @property
    def action_rows(self) -> List[dict]:
        return self._action_rows

    @property
    def m_overall(self) -> float:
        return self._totals[fld.METRIC_M_OVERALL]

    @property
    def j_total(self) -> float:
        return self._totals[fld.METRIC_J_TOTAL]

    @property
    def n_objects(self) -> int:
        return len(self._object_rows)

    @property
    def n_fulfilled(self) -> int:
        return sum(bool(i["fulfilled"]) for i in self._object_rows)

    @property
    def planning_failures(self) -> List[str]:
        """Commands left unfulfilled because no feasible plan was found."""
        return list(self._provenance.get("planning_failures", []))

    @cached_property
    def object_df(self) -> pd.DataFrame:
        """Per-object DataFrame.

        Returns
        -------
        pd.DataFrame
            - object
            - key
            - destination
            - command_index
            - goal_index
            - cc_nav
            - d_nav
            - man_attempts
            - man_successes
            - sr_man
            - t_exe
            - fulfilled
            - j
        """
        return pd.DataFrame(self._object_rows, columns=object_columns)

    @cached_property
    def action_df(self) -> pd.DataFrame:
        """Executed action DataFrame.

        Returns
        -------
        pd.DataFrame
            - command_index
            - goal_index
            - object
            - action
            - kind
            - succeeded
            - time_s
            - distance_m
            - collisions
            - attempts
            - successes
            - empirical_cost
            - path
        """
        return pd.DataFrame(self._action_rows, columns=action_columns)

    def command_rows(self) -> List[dict]:
        rows = []
        for c in sorted({i["command_index"] for i in self._object_rows}):
            sub = [i for i in self._object_rows if i["command_index"] == c]
            agg = aggregate_rows(sub)
            agg["command_index"] = c
            agg["n_objects"] = len(sub)
            agg["n_fulfilled"] = sum(bool(i["fulfilled"]) for i in sub)
            agg["j"] = sum(i["j"] for i in sub)
            rows.append(agg)
        return rows

    @cached_property
    def command_df(self) -> pd.DataFrame:
        """Per-command aggregates, indexed by command_index."""
        return pd.DataFrame(self.command_rows()).set_index("command_index")

    @cached_property
    def stat_df(self) -> pd.DataFrame:
        """Mission statistics.

        Returns
        -------
        pd.DataFrame
            columns

                - value

            indexes

                - cc_nav
                - d_nav
                - man_attempts
                - man_successes
                - sr_man
                - t_exe
                - sr_obj
                - m_overall
                - j_total
        """
        stat = aggregate_rows(self._object_rows)
        stat[fld.METRIC_M_OVERALL] = self.m_overall
        stat[fld.METRIC_J_TOTAL] = self.j_total
        return pd.DataFrame({"value": pd.Series(stat, dtype=float)})

    def cumulative_m_overall(self) -> List[float]:
        """m_overall of the first k objects for k = 1..n."""
        return [
            compute_overall_metric(self._object_rows[: k + 1], self._config)
            for k in range(len(self._object_rows))
        ]

    def to_dict(self) -> dict:
        return {
            "config": self._config,
            "provenance": self._provenance,
            "objects": self._object_rows,
            "commands": self.command_rows(),
            "actions": self._action_rows,
            "ledger_snapshots": self._ledger_snapshots,
            "totals": self._totals,
        }

    def to_json(self, path: Union[str, Path, None] = None) -> str:
        """Canonical JSON text; written to ``path`` when given."""
        text = utils.to_canonical_json(self.to_dict())
        if path is not None:
            utils.write_text(path, text)
        return text

    @classmethod
    def from_json(cls, source: Union[str, Path, dict]) -> "MissionReport":
        data = utils.read_json(source)
        for k in ("config", "objects", "actions"):
            if k not in data:
                msg = f"report has no {k!r}"
                raise InputError(msg)
        return cls(
            config=data["config"],
            object_rows=data["objects"],
            action_rows=data["actions"],
            ledger_snapshots=data.get("ledger_snapshots"),
            provenance=data.get("provenance"),
            totals=data.get("totals"),
        )

    def to_csv(self, path: Union[str, Path]):
        """Per-object rows followed by a ``total`` row."""
        df = self.object_df[csv_columns].copy()
        agg = aggregate_rows(self._object_rows)
        total = {
            "object": "total",
            "command_index": "",
            fld.METRIC_CC_NAV: agg[fld.METRIC_CC_NAV],
            fld.METRIC_D_NAV: agg[fld.METRIC_D_NAV],
            fld.METRIC_SR_MAN: agg[fld.METRIC_SR_MAN],
            fld.METRIC_T_EXE: agg[fld.METRIC_T_EXE],
            "fulfilled": self.n_fulfilled,
        }
        df = pd.concat([df, pd.DataFrame([total])], ignore_index=True)
        try:
            df.to_csv(path, index=False)
        except OSError as e:
            msg = f"Cannot write {path}: {e}"
            raise InputError(msg) from e

    def to_excel(self, path: Union[str, Path]):
        """Export to Excel.

        Parameters
        ----------
        path: Union[str, Path]
            Path to Excel file.
        """
        with pd.ExcelWriter(path, engine="xlsxwriter") as writer:
            self.object_df.to_excel(writer, sheet_name="object", index=False)
            self.command_df.to_excel(writer, sheet_name="command")
            self.action_df.drop(columns="path").to_excel(
                writer, sheet_name="action", index=False
            )
            self.stat_df.to_excel(writer, sheet_name="stat")

    def to_svg(self, path: Union[str, Path]) -> Path:
        return plot_reports({self.algorithm or "run": self}, path)


def plot_reports(reports: Mapping[str, MissionReport], path: Union[str, Path]) -> Path:
    """Line plot of cumulative m_overall against object index, one line per report."""
    if not reports:
        msg = "no report to plot"
        raise InputError(msg)

    with matplotlib.rc_context({"svg.hashsalt": SVG_HASH_SALT}):
        fig = Figure(figsize=(6, 4))
        ax = fig.add_subplot()
        for label, report in reports.items():
            values = report.cumulative_m_overall()
            ax.plot(range(1, len(values) + 1), values, marker="o", label=label)
        n = max(i.n_objects for i in reports.values())
        ax.set_xticks(range(1, n + 1))
        ax.set_xticklabels([f"obj_{i}" for i in range(1, n + 1)])
        ax.set_xlabel("object")
        ax.set_ylabel(fld.METRIC_M_OVERALL)
        ax.legend()
        fig.tight_layout()
        try:
            fig.savefig(path, format="svg", metadata={"Date": None})
        except OSError as e:
            msg = f"Cannot write {path}: {e}"
            raise InputError(msg) from e
    logger.info("Wrote %s", path)
    return Path(path)


def emit_report(
    report: MissionReport,
    out: Union[str, Path, None] = None,
    csv: Union[str, Path, None] = None,
    plot: Union[str, Path, None] = None,
    xlsx: Union[str, Path, None] = None,
) -> List[Path]:
    """Write the requested report files and return their paths."""
    written = []
    if out is not None:
        report.to_json(out)
        written.append(Path(out))
    if csv is not None:
        report.to_csv(csv)
        written.append(Path(csv))
    if plot is not None:
        written.append(report.to_svg(plot))
    if xlsx is not None:
        report.to_excel(xlsx)
        written.append(Path(xlsx))
    for i in written:
        logger.info("Wrote %s", i)
    return written
