"""Sample-construction filters and grouping rules.

Citation totals are counted on the raw graph (self-citations included),
because the minimum-citation exclusion happens before any edge is
classified.  Filtering drops researchers only; the publication and edge
sets stay intact so that citation counts remain computable afterwards.
"""

from __future__ import annotations

import csv
import logging
from importlib import resources
from pathlib import Path

from citescope.corpus.model import CohortGroup, Corpus, RegionGroup, ResearcherProfile
from citescope.errors import UndefinedCohortError

log = logging.getLogger(__name__)

RegionTable = dict[str, RegionGroup]

_DEFAULT_TABLE: RegionTable | None = None


def load_region_table(path: str | Path | None = None) -> RegionTable:
    """Load a country-to-region mapping from CSV (header ``country,region``).

    With no path, the table shipped with the package is used.  Lookups
    are case-insensitive on the country name.
    """
    if path is None:
        text = (
            resources.files("citescope.corpus")
            .joinpath("data/regions.csv")
            .read_text(encoding="utf-8")
        )
        lines = text.splitlines()
    else:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    reader = csv.DictReader(lines)
    if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["country", "region"]:
        raise ValueError('region mapping must have header "country,region"')
    table: RegionTable = {}
    valid = {g.value: g for g in RegionGroup}
    for row in reader:
        region = row["region"].strip()
        if region not in valid:
            raise ValueError(
                f"unknown region {region!r} for country {row['country']!r}; "
                f"expected one of {sorted(valid)}"
            )
        table[row["country"].strip().casefold()] = valid[region]
    return table


def _default_table() -> RegionTable:
    global _DEFAULT_TABLE
    if _DEFAULT_TABLE is None:
        _DEFAULT_TABLE = load_region_table()
    return _DEFAULT_TABLE


def assign_region(country: str, table: RegionTable | None = None) -> RegionGroup:
    """Map a country name to its region group; unmapped names fall back to Other."""
    if table is None:
        table = _default_table()
    region = table.get(country.strip().casefold())
    if region is None:
        log.debug("country %r not in region table; assigning Other", country)
        return RegionGroup.OTHER
    return region


def assign_cohort(first_pub_year: int, *, pre1980_includes_1980: bool = False) -> CohortGroup:
    """Bucket a first-publication year into its cohort group.

    The lowest bucket is read as "through 1979" by default; set
    ``pre1980_includes_1980`` to shift the boundary.
    """
    cutoff = 1980 if pre1980_includes_1980 else 1979
    if first_pub_year <= cutoff:
        return CohortGroup.PRE_1980
    if first_pub_year <= 1989:
        return CohortGroup.Y1980_1989
    if first_pub_year <= 1994:
        return CohortGroup.Y1990_1994
    if first_pub_year <= 1999:
        return CohortGroup.Y1995_1999
    if first_pub_year <= 2004:
        return CohortGroup.Y2000_2004
    return CohortGroup.Y2005_PLUS


def first_publication_year(researcher: ResearcherProfile, corpus: Corpus) -> int:
    """Earliest year among the researcher's owned publications."""
    if not researcher.publications:
        raise UndefinedCohortError(
            f"researcher {researcher.researcher_id!r} owns no publications"
        )
    return min(corpus.publications[p].year for p in researcher.publications)


def citation_totals(corpus: Corpus) -> dict[str, int]:
    """Incoming-citation count per researcher (raw, self-citations included)."""
    per_pub: dict[str, int] = {}
    for edge in corpus.edges:
        per_pub[edge.cited] = per_pub.get(edge.cited, 0) + 1
    totals = {}
    for rid, researcher in corpus.researchers.items():
        totals[rid] = sum(per_pub.get(p, 0) for p in researcher.publications)
    return totals


def filter_min_citations(corpus: Corpus, threshold: int) -> tuple[Corpus, int]:
    """Drop researchers with fewer than ``threshold`` incoming citations.

    The threshold is inclusive: a researcher with exactly ``threshold``
    citations is retained.  Returns the filtered corpus and the number of
    researchers excluded.
    """
    if threshold < 0:
        raise ValueError("threshold must be non-negative")
    totals = citation_totals(corpus)
    kept = {
        rid: r for rid, r in corpus.researchers.items() if totals[rid] >= threshold
    }
    excluded = len(corpus.researchers) - len(kept)
    filtered = Corpus(
        researchers=kept,
        publications=corpus.publications,
        edges=corpus.edges,
        warnings=corpus.warnings,
    )
    return filtered, excluded


def filter_by_keyword(corpus: Corpus, keyword: str) -> Corpus:
    """Retain researchers whose keyword list contains ``keyword`` (case-insensitive)."""
    wanted = keyword.strip().casefold()
    kept = {
        rid: r
        for rid, r in corpus.researchers.items()
        if any(k.casefold() == wanted for k in r.keywords)
    }
    return Corpus(
        researchers=kept,
        publications=corpus.publications,
        edges=corpus.edges,
        warnings=corpus.warnings,
    )
