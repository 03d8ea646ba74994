"""Rendering of results as CSV tables, JSON documents, and DOT graphs.

Numeric CSV cells use repr() so every table round-trips bit-exactly;
only DOT edge labels are rounded for display.
"""

from __future__ import annotations

import json
import re

import numpy as np

from .cointegration import CointReport
from .diagnostics import DiagnosticsReport
from .irf import IrfResult
from .svar import BootstrapSummary, CausalGraph, build_causal_graph
from .unitroot import AdfReport
from .var import VarModel

__all__ = [
    "adf_table_csv",
    "johansen_table_csv",
    "diagnostics_table_csv",
    "var_table_csv",
    "svar_table_csv",
    "irf_long_csv",
    "export_dot",
    "graph_from_dicts",
    "to_json",
]


def _f(v: float) -> str:
    return repr(float(v))


def to_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def adf_table_csv(levels: list[AdfReport], diffs: list[AdfReport]) -> str:
    """Original and first-difference test columns side by side."""
    if len(levels) != len(diffs):
        raise ValueError("level and difference report lists differ in length")
    lines = ["Variables,Lag,Statistic,Reject,Variables,Lag,Statistic,Reject"]
    for lv, df in zip(levels, diffs):
        lines.append(
            f"{lv.variable},{lv.lag},{_f(lv.statistic)},{lv.reject_at or ''},"
            f"{df.variable},{df.lag},{_f(df.statistic)},{df.reject_at or ''}"
        )
    return "\n".join(lines) + "\n"


def _stars_from_cv(stat: float, cv: dict[str, float]) -> str:
    for level, mark in (("1%", "***"), ("5%", "**"), ("10%", "*")):
        if stat > cv[level]:
            return mark
    return ""


def johansen_table_csv(report: CointReport) -> str:
    lines = ["Rank,Eigenvalue,Trace,TraceStars,MaxEig,MaxEigStars"]
    for r in range(report.eigenvalues.size):
        lines.append(
            f"r<={r},{_f(report.eigenvalues[r])},"
            f"{_f(report.trace_stats[r])},{_stars_from_cv(report.trace_stats[r], report.trace_critical_values[r])},"
            f"{_f(report.maxeig_stats[r])},{_stars_from_cv(report.maxeig_stats[r], report.maxeig_critical_values[r])}"
        )
    lines.append(f"selected_rank,{report.selected_rank},,,,")
    return "\n".join(lines) + "\n"


def diagnostics_table_csv(report: DiagnosticsReport) -> str:
    lines = ["Variables,Kurtosis,Shapiro-Wilk,Shapiro-Francia,Jarque-Bera,Ljung-Box"]
    for c in report.columns:
        sw = "" if c.shapiro_wilk_p is None else _f(c.shapiro_wilk_p)
        sf = "" if c.shapiro_francia_p is None else _f(c.shapiro_francia_p)
        lines.append(
            f"{c.name},{_f(c.kurtosis)},{sw},{sf},{_f(c.jarque_bera_p)},{_f(c.ljung_box_p)}"
        )
    return "\n".join(lines) + "\n"


def _lag_block(title: str, names, matrix, stars=None) -> list[str]:
    lines = [title + "," + ",".join(names)]
    for i, name in enumerate(names):
        cells = []
        for j in range(len(names)):
            cell = _f(matrix[i, j])
            if stars is not None and stars[i, j]:
                cell += stars[i, j]
            cells.append(cell)
        lines.append(f"{name}," + ",".join(cells))
    return lines


def var_table_csv(model: VarModel) -> str:
    """Lagged-coefficient blocks of the reduced form, one block per lag."""
    lines = ["intercept," + ",".join(model.names)]
    lines.append("gamma," + ",".join(_f(g) for g in model.gamma))
    for h, pi_h in enumerate(model.pi, start=1):
        lines.extend(_lag_block(f"Pi_{h} (t-{h})", model.names, pi_h))
    return "\n".join(lines) + "\n"


def svar_table_csv(summary: BootstrapSummary) -> str:
    """Instantaneous and lagged structural blocks with significance stars."""
    names = summary.names
    lines: list[str] = []
    for h in range(summary.point.shape[0]):
        tag = "B_0 (t)" if h == 0 else f"B_{h} (t-{h})"
        lines.extend(_lag_block(tag, names, summary.point[h], summary.stars[h]))
    return "\n".join(lines) + "\n"


def irf_long_csv(result: IrfResult) -> str:
    """Long-format responses: one row per (horizon, shock, response) cell."""
    has_bands = result.lower is not None
    header = "horizon,shock,response,point" + (",lower,upper" if has_bands else "")
    lines = [header]
    n = len(result.names)
    for h in range(result.horizon + 1):
        for j in range(n):  # shock
            for i in range(n):  # responding variable
                row = f"{h},{result.names[j]},{result.names[i]},{_f(result.theta[h, i, j])}"
                if has_bands:
                    row += f",{_f(result.lower[h, i, j])},{_f(result.upper[h, i, j])}"
                lines.append(row)
    return "\n".join(lines) + "\n"


_DOT_ID = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def _dot_id(name: str) -> str:
    return name if _DOT_ID.match(name) else '"' + name.replace('"', r"\"") + '"'


def export_dot(graph: CausalGraph) -> str:
    """Deterministic DOT text for the causal graph.

    Nodes appear in causal order; instantaneous edges are solid with
    the weight as label, lagged edges carry a "(t-h)" suffix, and
    insignificant edges are dashed.
    """
    lines = ["digraph causal {", "  rankdir=LR;"]
    for node in graph.nodes:
        lines.append(f"  {_dot_id(node)};")
    for e in graph.edges:
        label = f"{e.weight:.2f}" if e.lag == 0 else f"{e.weight:.2f} (t-{e.lag})"
        attrs = [f'label="{label}"']
        if not e.significant:
            attrs.append("style=dashed")
        lines.append(f'  {_dot_id(e.source)} -> {_dot_id(e.target)} [{", ".join(attrs)}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_from_dicts(model_dict: dict, summary_dict: dict | None, significance_level: str = "95%") -> CausalGraph:
    """Rebuild a CausalGraph from serialized model/bootstrap documents.

    Lets the graph stage run from persisted artifacts without refitting.
    """
    names = tuple(model_dict["names"])
    order = [int(v) for v in model_dict["order"]]
    b = [np.array(m) for m in model_dict["b"]]
    if summary_dict is not None:
        lower = np.array(summary_dict["lower"][significance_level])
        upper = np.array(summary_dict["upper"][significance_level])

    def significant(h, i, j):
        if summary_dict is None:
            return True
        return bool(lower[h, i, j] > 0.0 or upper[h, i, j] < 0.0)

    return build_causal_graph(names, order, b, significant)
