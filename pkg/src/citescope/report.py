"""Rendering of tables, figure data, and machine-readable exports.

All numbers are rounded at print time only; the underlying values come
straight from the metrics/glm APIs.  Output text is UTF-8 with LF line
endings and is byte-stable across runs: floats that pass through linear
algebra are printed at 12 significant digits, everything else uses the
shortest round-trip representation.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

from citescope.corpus.model import CohortGroup, Corpus, Gender, RegionGroup
from citescope.glm import FitResult, average_marginal_effects, wald_inference
from citescope.metrics import (
    AnalysisRecord,
    SummaryStats,
    describe,
    group_describe,
    pearson_correlation,
)
from citescope.selfcite import classify_edges

STAR_FOOTNOTE = "P<0.01 ***; P<0.05 **; P<0.1 *"


@dataclass(frozen=True)
class RunConfig:
    """Options shared by the CLI subcommands."""

    corpus_path: Path | None
    out_dir: Path
    min_citations: int = 20
    models: tuple[int, ...] = (1, 2)
    quantile_method: str = "linear"
    robust: str = "hc1"
    ame_method: str = "derivative"
    seed: int = 0
    dump_edges: bool = False

    def __post_init__(self):
        if self.min_citations < 0:
            raise ValueError("min_citations must be non-negative")


@dataclass(frozen=True)
class BoxStats:
    median: float
    q1: float
    q3: float
    whisker_low: float
    whisker_high: float
    outliers: tuple[float, ...] = field(default=())


def boxplot_stats(values: Sequence[float], *, quantile_method: str = "linear") -> BoxStats:
    """Tukey box-plot summary: whiskers reach the most extreme points
    within 1.5 IQR of the quartiles; anything beyond is an outlier."""
    if len(values) == 0:
        raise ValueError("cannot summarize an empty list")
    stats = describe(values, quantile_method=quantile_method)
    iqr = stats.q3 - stats.q1
    lo_fence = stats.q1 - 1.5 * iqr
    hi_fence = stats.q3 + 1.5 * iqr
    inside = [v for v in values if lo_fence <= v <= hi_fence]
    outliers = tuple(sorted(v for v in values if v < lo_fence or v > hi_fence))
    return BoxStats(
        median=stats.median,
        q1=stats.q1,
        q3=stats.q3,
        whisker_low=min(inside),
        whisker_high=max(inside),
        outliers=outliers,
    )


def _fmt12(value: float) -> str:
    return f"{float(value):.12g}"


def _fmt_count(value: float) -> str:
    # "9" rather than "9.0", but "9.5" stays; matches how integer-valued
    # medians are conventionally printed.
    text = f"{float(value):.1f}"
    return text[:-2] if text.endswith(".0") else text

def _fmt_sd(sd: float | None, scale: float = 1.0) -> str:
    return "NA" if sd is None else f"{sd * scale:.1f}"


def _h_cells(s: SummaryStats) -> tuple[str, str]:
    return (
        f"{s.mean:.1f}({_fmt_sd(s.sd)})",
        f"{_fmt_count(s.median)}({_fmt_count(s.q1)}-{_fmt_count(s.q3)})",
    )


def _prop_cells(s: SummaryStats) -> tuple[str, str]:
    # Proportions are displayed as percentages with one decimal.
    return (
        f"{s.mean * 100:.1f}({_fmt_sd(s.sd, 100)})",
        f"{s.median * 100:.1f}({s.q1 * 100:.1f}-{s.q3 * 100:.1f})",
    )


@dataclass(frozen=True)
class Table1Row:
    section: str
    group: str
    h_stats: SummaryStats
    prop_stats: SummaryStats


def table1_rows(
    records: Sequence[AnalysisRecord], *, quantile_method: str = "linear"
) -> list[Table1Row]:
    """Assemble the descriptive-table rows: All, regions, genders, cohorts."""
    rows = []
    for section, group_by in (("", "all"), ("Region", "region"),
                              ("Gender", "gender"), ("Cohort", "cohort")):
        h_rows = group_describe(records, group_by, "h_index", quantile_method=quantile_method)
        p_rows = group_describe(records, group_by, "self_prop", quantile_method=quantile_method)
        for (label, h_stats), (_, p_stats) in zip(h_rows, p_rows):
            if group_by != "all" and label == "All":
                continue
            rows.append(Table1Row(section, label if group_by != "all" else "All",
                                  h_stats, p_stats))
    return rows


def _expected_groups() -> list[tuple[str, str]]:
    groups = [("", "All")]
    groups += [("Region", g.label) for g in RegionGroup]
    groups += [("Gender", g.value.capitalize()) for g in Gender]
    groups += [("Cohort", g.label) for g in CohortGroup]
    return groups


def render_table1_markdown(rows: Sequence[Table1Row]) -> str:
    lines = [
        "| | Group | N | H-index Mean(SD) | H-index Median(IQR) | "
        "Self-Citation Proportion % Mean(SD) | Self-Citation Proportion % Median(IQR) |",
        "|---|---|---|---|---|---|---|",
    ]
    for row in rows:
        h_ms, h_mi = _h_cells(row.h_stats)
        p_ms, p_mi = _prop_cells(row.prop_stats)
        lines.append(
            f"| {row.section} | {row.group} | {row.h_stats.n} | {h_ms} | {h_mi} "
            f"| {p_ms} | {p_mi} |"
        )
    present = {(r.section, r.group) for r in rows}
    missing = [g for g in _expected_groups() if g not in present and g[1] != "Unknown"]
    if missing:
        names = ", ".join(f"{section} {group}".strip() for section, group in missing)
        lines.append("")
        lines.append(f"Empty groups omitted: {names}.")
    return "\n".join(lines) + "\n"


def render_table1_csv(rows: Sequence[Table1Row]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([
        "section", "group", "n", "h_mean_sd", "h_median_iqr",
        "self_prop_mean_sd", "self_prop_median_iqr",
    ])
    for row in rows:
        h_ms, h_mi = _h_cells(row.h_stats)
        p_ms, p_mi = _prop_cells(row.prop_stats)
        writer.writerow([row.section, row.group, row.h_stats.n, h_ms, h_mi, p_ms, p_mi])
    return buf.getvalue()


_TABLE2_ROWS = [
    ("h_index", "H-indices", "H-index"),
    ("h_index_sq_100", "", "(H-index)²/100"),
    ("uk", "Country of affiliation", "United Kingdom"),
    ("other_europe", "", "Other Europe"),
    ("australia_nz", "", "Australia / NZ"),
    ("other_region", "", "Other"),
    ("male", "Gender", "Male"),
    ("mean_authors", "", "Authors per cited paper"),
    ("intercept", "", "Constant"),
]


def _model_cells(fit: FitResult | None, ames: np.ndarray | None) -> dict[str, tuple[str, str]]:
    if fit is None:
        return {}
    if ames is None:
        weight = float(np.mean(fit.fitted * (1.0 - fit.fitted)))
        ames = fit.beta * weight
    cells = {}
    for row, ame in zip(wald_inference(fit), ames):
        coef_cell = f"{row.estimate:.3f}({row.se:.3f}){row.stars}"
        ame_cell = "" if row.term == "intercept" else f"{float(ame):.3f}"
        cells[row.term] = (coef_cell, ame_cell)
    return cells


def render_table2_markdown(
    fit1: FitResult | None,
    fit2: FitResult | None,
    ame1: np.ndarray | None = None,
    ame2: np.ndarray | None = None,
) -> str:
    cells1 = _model_cells(fit1, ame1)
    cells2 = _model_cells(fit2, ame2)
    lines = []
    for fit, name in ((fit1, "Model 1"), (fit2, "Model 2")):
        if fit is not None and not fit.converged:
            lines.append(f"**WARNING: {name} did not converge; estimates are unreliable.**")
            lines.append("")
    lines += [
        "| Dimension | Independent variable | Model 1 Coefficient (robust SE) "
        "| Marginal effect | Model 2 Coefficient (robust SE) | Marginal effect |",
        "|---|---|---|---|---|---|",
    ]
    for term, dimension, label in _TABLE2_ROWS:
        c1, m1 = cells1.get(term, ("", ""))
        c2, m2 = cells2.get(term, ("", ""))
        if not c1 and not c2:
            continue
        lines.append(f"| {dimension} | {label} | {c1} | {m1} | {c2} | {m2} |")
    lines += ["", STAR_FOOTNOTE]
    return "\n".join(lines) + "\n"


def render_table2_csv(
    fit1: FitResult | None,
    fit2: FitResult | None,
    ame1: np.ndarray | None = None,
    ame2: np.ndarray | None = None,
) -> str:
    cells1 = _model_cells(fit1, ame1)
    cells2 = _model_cells(fit2, ame2)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([
        "dimension", "variable", "model1_coef_se", "model1_marginal_effect",
        "model2_coef_se", "model2_marginal_effect",
    ])
    for term, dimension, label in _TABLE2_ROWS:
        c1, m1 = cells1.get(term, ("", ""))
        c2, m2 = cells2.get(term, ("", ""))
        if not c1 and not c2:
            continue
        writer.writerow([dimension, label, c1, m1, c2, m2])
    writer.writerow([])
    writer.writerow([STAR_FOOTNOTE])
    return buf.getvalue()


def records_csv(records: Sequence[AnalysisRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([
        "researcher_id", "h", "h_noself", "self_prop", "region", "gender",
        "cohort", "mean_authors",
    ])
    for r in records:
        writer.writerow([
            r.researcher_id, r.h_index, r.h_index_no_self, repr(r.self_prop),
            r.region.value, r.gender.value, r.cohort.value, repr(r.mean_authors),
        ])
    return buf.getvalue()


def edge_classification_csv(corpus: Corpus) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["citing_id", "cited_id", "is_self"])
    for edge, flag in zip(corpus.edges, classify_edges(corpus)):
        writer.writerow([edge.citing, edge.cited, "true" if flag else "false"])
    return buf.getvalue()


def fit_result_json(fit: FitResult, ames: np.ndarray, model_name: str) -> str:
    def r12(v):
        return float(f"{float(v):.12g}")

    doc = {
        "model": model_name,
        "terms": fit.column_names,
        "beta": [r12(v) for v in fit.beta],
        "robust_se": [r12(v) for v in fit.se()],
        "robust_cov": [[r12(v) for v in row] for row in fit.robust_cov],
        "marginal_effects": [r12(v) for v in ames],
        "iterations": fit.iterations,
        "converged": fit.converged,
        "deviance": r12(fit.deviance),
        "hc": fit.hc,
        "n_obs": int(fit.fitted.size),
        "fitted": [r12(v) for v in fit.fitted],
    }
    return json.dumps(doc, indent=1) + "\n"


def fit_result_csv(fit: FitResult, ames: np.ndarray) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["term", "coef", "robust_se", "z", "p", "stars", "ame"])
    for row, ame in zip(wald_inference(fit), ames):
        writer.writerow([
            row.term,
            _fmt12(row.estimate),
            _fmt12(row.se),
            "" if row.z is None else _fmt12(row.z),
            "" if row.p is None else _fmt12(row.p),
            row.stars,
            "" if row.term == "intercept" else _fmt12(ame),
        ])
    return buf.getvalue()


# --- figures ---------------------------------------------------------------

_FIG_GROUPERS = {
    "region": (lambda r: r.region, list(RegionGroup)),
    "cohort": (lambda r: r.cohort, list(CohortGroup)),
}


def figure_box_groups(
    records: Sequence[AnalysisRecord], group_by: str, *, quantile_method: str = "linear"
) -> list[tuple[str, int, BoxStats]]:
    keyfn, order = _FIG_GROUPERS[group_by]
    out = []
    for group in order:
        values = [float(r.h_index) for r in records if keyfn(r) == group]
        if values:
            out.append((group.label, len(values),
                        boxplot_stats(values, quantile_method=quantile_method)))
    return out


def box_groups_csv(groups: Sequence[tuple[str, int, BoxStats]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([
        "group", "n", "median", "q1", "q3", "whisker_low", "whisker_high", "outliers",
    ])
    for label, n, box in groups:
        writer.writerow([
            label, n, _fmt12(box.median), _fmt12(box.q1), _fmt12(box.q3),
            _fmt12(box.whisker_low), _fmt12(box.whisker_high),
            ";".join(_fmt12(v) for v in box.outliers),
        ])
    return buf.getvalue()


def scatter_csv(records: Sequence[AnalysisRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["h", "self_prop"])
    for r in records:
        writer.writerow([r.h_index, repr(r.self_prop)])
    return buf.getvalue()


def _nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    start = math.ceil(lo / step) * step
    ticks = []
    value = start
    while value <= hi + 1e-9 * step:
        ticks.append(round(value, 10))
        value += step
    return ticks


class _SvgCanvas:
    """Tiny deterministic SVG builder: fixed size, fixed float formats."""

    def __init__(self, width=640, height=420):
        self.width = width
        self.height = height
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
            f'height="{height}" viewBox="0 0 {width} {height}">',
            f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        ]

    def line(self, x1, y1, x2, y2, stroke="black", width=1.0):
        self.parts.append(
            f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
            f'stroke="{stroke}" stroke-width="{width:g}"/>'
        )

    def rect(self, x, y, w, h, cls, fill="#9ecae1"):
        self.parts.append(
            f'<rect class="{cls}" x="{x:.2f}" y="{y:.2f}" width="{w:.2f}" '
            f'height="{h:.2f}" fill="{fill}" stroke="black"/>'
        )

    def circle(self, cx, cy, r, cls, fill="#3182bd"):
        self.parts.append(
            f'<circle class="{cls}" cx="{cx:.2f}" cy="{cy:.2f}" r="{r:g}" '
            f'fill="{fill}" fill-opacity="0.6"/>'
        )

    def text(self, x, y, content, size=12, anchor="middle", cls=None):
        cls_attr = f' class="{cls}"' if cls else ""
        self.parts.append(
            f'<text{cls_attr} x="{x:.2f}" y="{y:.2f}" font-family="sans-serif" '
            f'font-size="{size}" text-anchor="{anchor}">{escape(content)}</text>'
        )

    def render(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"


_MARGIN = (60.0, 20.0, 40.0, 60.0)  # left, right, top, bottom


def _y_mapper(lo: float, hi: float, canvas: _SvgCanvas):
    left, right, top, bottom = _MARGIN
    span = hi - lo if hi > lo else 1.0
    plot_h = canvas.height - top - bottom

    def to_y(v: float) -> float:
        return top + plot_h * (1.0 - (v - lo) / span)

    return to_y


def _draw_y_axis(canvas: _SvgCanvas, lo: float, hi: float, to_y, label: str):
    left, right, top, bottom = _MARGIN
    canvas.line(left, top, left, canvas.height - bottom)
    for tick in _nice_ticks(lo, hi):
        y = to_y(tick)
        canvas.line(left - 4, y, left, y)
        canvas.text(left - 8, y + 4, _fmt_count(tick), size=10, anchor="end")
    canvas.text(14, (canvas.height - bottom + top) / 2, label, size=11)


def svg_boxplot(groups: Sequence[tuple[str, int, BoxStats]], title: str, ylabel: str) -> str:
    canvas = _SvgCanvas()
    left, right, top, bottom = _MARGIN
    values = [v for _, _, b in groups for v in (b.whisker_low, b.whisker_high, *b.outliers)]
    lo = min(0.0, min(values))
    hi = max(values) * 1.05 if max(values) > 0 else 1.0
    to_y = _y_mapper(lo, hi, canvas)
    _draw_y_axis(canvas, lo, hi, to_y, ylabel)
    canvas.line(left, canvas.height - bottom, canvas.width - right, canvas.height - bottom)
    canvas.text(canvas.width / 2, top - 16, title, size=14)

    slot = (canvas.width - left - right) / len(groups)
    for i, (label, n, box) in enumerate(groups):
        cx = left + slot * (i + 0.5)
        half = slot * 0.25
        canvas.line(cx, to_y(box.whisker_low), cx, to_y(box.q1))
        canvas.line(cx, to_y(box.q3), cx, to_y(box.whisker_high))
        canvas.line(cx - half / 2, to_y(box.whisker_low), cx + half / 2, to_y(box.whisker_low))
        canvas.line(cx - half / 2, to_y(box.whisker_high), cx + half / 2, to_y(box.whisker_high))
        canvas.rect(cx - half, to_y(box.q3), 2 * half, to_y(box.q1) - to_y(box.q3), cls="box")
        canvas.line(cx - half, to_y(box.median), cx + half, to_y(box.median), width=2.0)
        for v in box.outliers:
            canvas.circle(cx, to_y(v), 2.5, cls="outlier", fill="#de2d26")
        canvas.text(cx, canvas.height - bottom + 16, label, size=10)
        canvas.text(cx, canvas.height - bottom + 30, f"n={n}", size=9)
    return canvas.render()


def svg_scatter(points: Sequence[tuple[float, float]], title: str, caption: str) -> str:
    canvas = _SvgCanvas()
    left, right, top, bottom = _MARGIN
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    x_lo, x_hi = min(0.0, min(xs)), max(xs) * 1.05 if max(xs) > 0 else 1.0
    y_lo, y_hi = 0.0, max(max(ys) * 1.05, 0.01)
    to_y = _y_mapper(y_lo, y_hi, canvas)
    x_span = x_hi - x_lo if x_hi > x_lo else 1.0

    def to_x(v: float) -> float:
        return left + (canvas.width - left - right) * (v - x_lo) / x_span

    _draw_y_axis(canvas, y_lo, y_hi, to_y, "Self-citation proportion")
    canvas.line(left, canvas.height - bottom, canvas.width - right, canvas.height - bottom)
    for tick in _nice_ticks(x_lo, x_hi):
        x = to_x(tick)
        canvas.line(x, canvas.height - bottom, x, canvas.height - bottom + 4)
        canvas.text(x, canvas.height - bottom + 16, _fmt_count(tick), size=10)
    canvas.text(canvas.width / 2, top - 16, title, size=14)
    for x, y in points:
        canvas.circle(to_x(x), to_y(y), 2.5, cls="point")
    canvas.text(canvas.width / 2, canvas.height - 12, caption, size=11, cls="caption")
    return canvas.render()


def emit_figures(
    records: Sequence[AnalysisRecord],
    out_dir: str | Path,
    *,
    quantile_method: str = "linear",
) -> list[Path]:
    """Write figure CSVs and SVG renderings; returns the created paths."""
    if not records:
        raise ValueError("records must be non-empty")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    created = []

    for group_by, stem, title in (
        ("region", "fig1_box_by_region", "H-index by region"),
        ("cohort", "fig2_box_by_cohort", "H-index by year of first publication"),
    ):
        groups = figure_box_groups(records, group_by, quantile_method=quantile_method)
        created.append(_write(out / f"{stem}.csv", box_groups_csv(groups)))
        created.append(_write(out / f"{stem}.svg",
                              svg_boxplot(groups, title, "H-index")))

    points = [(float(r.h_index), r.self_prop) for r in records]
    r_value = pearson_correlation([p[0] for p in points], [p[1] for p in points])
    caption = f"Pearson r = {r_value:.12g}"
    created.append(_write(out / "fig3_scatter.csv", scatter_csv(records)))
    created.append(_write(out / "fig3_scatter.svg",
                          svg_scatter(points, "H-index vs self-citation proportion", caption)))
    return created


def _write(path: Path, content: str) -> Path:
    path.write_text(content, encoding="utf-8", newline="\n")
    return path
