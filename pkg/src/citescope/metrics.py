"""H-index variants, descriptive statistics, and the per-researcher table.

Everything downstream (grouped tables, figures, the regression) is
computed from the list of AnalysisRecord rows built here, one per
retained researcher, in deterministic researcher-id order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from citescope.corpus.filters import (
    RegionTable,
    assign_cohort,
    assign_region,
    first_publication_year,
)
from citescope.corpus.model import CohortGroup, Corpus, Gender, RegionGroup
from citescope.errors import AnalysisError
from citescope.selfcite import (
    CitationTally,
    mean_authors_per_cited_paper,
    pub_citation_tallies,
    self_citation_proportion,
)

QUANTILE_METHODS = ("linear", "lower", "higher", "nearest", "midpoint")


@dataclass(frozen=True)
class SummaryStats:
    """Mean/SD/median/IQR bundle for one table cell.

    ``sd`` is the sample standard deviation (n-1 denominator) and is
    None when n == 1.
    """

    n: int
    mean: float
    sd: float | None
    median: float
    q1: float
    q3: float


@dataclass(frozen=True)
class AnalysisRecord:
    researcher_id: str
    h_index: int
    h_index_no_self: int
    self_prop: float
    region: RegionGroup
    gender: Gender
    cohort: CohortGroup
    mean_authors: float


def h_index(citation_counts: Iterable[int]) -> int:
    """Largest h such that at least h entries are >= h."""
    counts = sorted(citation_counts, reverse=True)
    if any(c < 0 for c in counts):
        raise ValueError("citation counts must be non-negative")
    h = 0
    for i, c in enumerate(counts, start=1):
        if c >= i:
            h = i
        else:
            break
    return h


def h_index_excluding_self(
    researcher_id: str,
    corpus: Corpus,
    pub_tallies: dict[str, CitationTally] | None = None,
) -> int:
    """h-index over per-publication counts with self-citations removed."""
    researcher = corpus.researcher(researcher_id)
    if pub_tallies is None:
        pub_tallies = pub_citation_tallies(corpus)
    counts = []
    for pid in researcher.publications:
        tally = pub_tallies.get(pid)
        if tally is not None:
            counts.append(tally.total - tally.self_cites)
        else:
            counts.append(0)
    return h_index(counts)


def describe(values: Sequence[float], *, quantile_method: str = "linear") -> SummaryStats:
    """Summary statistics with interpolated quartiles.

    Quartiles sit at positions (n-1)*p between order statistics; the
    interpolation rule is selectable to match other software's
    conventions (any numpy quantile method name).
    """
    if len(values) == 0:
        raise ValueError("cannot describe an empty list")
    arr = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("values must be finite")
    n = arr.size
    q1, median, q3 = np.quantile(arr, [0.25, 0.5, 0.75], method=quantile_method)
    return SummaryStats(
        n=n,
        mean=float(arr.mean()),
        sd=float(arr.std(ddof=1)) if n > 1 else None,
        median=float(median),
        q1=float(q1),
        q3=float(q3),
    )


_GROUPERS = {
    "region": (lambda r: r.region, list(RegionGroup)),
    "gender": (lambda r: r.gender, [Gender.MALE, Gender.FEMALE, Gender.UNKNOWN]),
    "cohort": (lambda r: r.cohort, list(CohortGroup)),
}

_FIELDS = {
    "h_index": lambda r: float(r.h_index),
    "self_prop": lambda r: r.self_prop,
}


def group_describe(
    records: Sequence[AnalysisRecord],
    group_by: str,
    field: str,
    *,
    quantile_method: str = "linear",
) -> list[tuple[str, SummaryStats]]:
    """Per-group summary rows plus an "All" row, in presentation order.

    ``group_by`` is one of region/gender/cohort/all; ``field`` is
    h_index or self_prop.  Empty groups are omitted.
    """
    if not records:
        raise ValueError("records must be non-empty")
    extract = _FIELDS[field]
    rows = [("All", describe([extract(r) for r in records], quantile_method=quantile_method))]
    if group_by == "all":
        return rows
    keyfn, order = _GROUPERS[group_by]
    for group in order:
        values = [extract(r) for r in records if keyfn(r) == group]
        if values:
            label = group.label if hasattr(group, "label") else group.value.capitalize()
            rows.append((label, describe(values, quantile_method=quantile_method)))
    return rows


def pearson_correlation(x: Sequence[float], y: Sequence[float]) -> float:
    """Product-moment correlation of two equal-length samples."""
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise ValueError("correlation requires at least two observations")
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    dx = xa - xa.mean()
    dy = ya - ya.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise ValueError("correlation undefined for a zero-variance sample")
    return float(dx @ dy) / math.sqrt(sxx * syy)


def build_analysis_records(
    corpus: Corpus,
    *,
    region_table: RegionTable | None = None,
    pre1980_includes_1980: bool = False,
    weight_mean_authors_by_citations: bool = False,
) -> list[AnalysisRecord]:
    """One AnalysisRecord per researcher, ordered by researcher id.

    The corpus is expected to be filtered already (citation threshold
    applied); researchers for whom a field is undefined raise the
    corresponding analysis error with their id attached.
    """
    tallies = pub_citation_tallies(corpus)
    records = []
    for rid in sorted(corpus.researchers):
        researcher = corpus.researchers[rid]
        counts = []
        noself_counts = []
        total = 0
        self_cites = 0
        empty = CitationTally(0, 0)
        for pid in researcher.publications:
            t = tallies.get(pid, empty)
            counts.append(t.total)
            noself_counts.append(t.total - t.self_cites)
            total += t.total
            self_cites += t.self_cites
        try:
            records.append(
                AnalysisRecord(
                    researcher_id=rid,
                    h_index=h_index(counts),
                    h_index_no_self=h_index(noself_counts),
                    self_prop=self_citation_proportion(CitationTally(total, self_cites)),
                    region=assign_region(researcher.country, region_table),
                    gender=researcher.gender,
                    cohort=assign_cohort(
                        first_publication_year(researcher, corpus),
                        pre1980_includes_1980=pre1980_includes_1980,
                    ),
                    mean_authors=mean_authors_per_cited_paper(
                        rid, corpus, tallies,
                        weight_by_citations=weight_mean_authors_by_citations,
                    ),
                )
            )
        except AnalysisError as exc:
            raise type(exc)(f"researcher {rid!r}: {exc}") from exc
    return records
