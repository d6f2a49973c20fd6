"""Domain types for the citation graph.

A corpus is an immutable snapshot of researchers, publications and
citation edges.  All analysis operations are pure functions over it, so
a validated corpus can safely be shared across threads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple

from citescope.corpus.names import AuthorKey


class Gender(str, enum.Enum):
    MALE = "male"
    FEMALE = "female"
    UNKNOWN = "unknown"


class RegionGroup(enum.Enum):
    """Affiliation groups in presentation order."""

    NORTH_AMERICA = "NorthAmerica"
    UK = "UK"
    OTHER_EUROPE = "OtherEurope"
    AUSTRALIA_NZ = "AustraliaNZ"
    OTHER = "Other"

    @property
    def label(self) -> str:
        return _REGION_LABELS[self]


_REGION_LABELS = {
    RegionGroup.NORTH_AMERICA: "North America",
    RegionGroup.UK: "UK",
    RegionGroup.OTHER_EUROPE: "Other Europe",
    RegionGroup.AUSTRALIA_NZ: "Australia / NZ",
    RegionGroup.OTHER: "Other",
}


class CohortGroup(enum.Enum):
    """First-publication-year buckets in presentation order."""

    PRE_1980 = "Pre1980"
    Y1980_1989 = "Y1980_1989"
    Y1990_1994 = "Y1990_1994"
    Y1995_1999 = "Y1995_1999"
    Y2000_2004 = "Y2000_2004"
    Y2005_PLUS = "Y2005plus"

    @property
    def label(self) -> str:
        return _COHORT_LABELS[self]


_COHORT_LABELS = {
    CohortGroup.PRE_1980: "-1980",
    CohortGroup.Y1980_1989: "1980-1989",
    CohortGroup.Y1990_1994: "1990-1994",
    CohortGroup.Y1995_1999: "1995-1999",
    CohortGroup.Y2000_2004: "2000-2004",
    CohortGroup.Y2005_PLUS: "2005-",
}


@dataclass(frozen=True)
class Publication:
    pub_id: str
    title: str
    year: int
    authors: tuple[AuthorKey, ...]

    def author_set(self) -> frozenset[AuthorKey]:
        return frozenset(self.authors)


class CitationEdge(NamedTuple):
    """A directed citation: ``citing`` cites ``cited``."""

    citing: str
    cited: str


@dataclass(frozen=True)
class ResearcherProfile:
    researcher_id: str
    display_name: str
    country: str
    gender: Gender
    publications: tuple[str, ...]
    keywords: tuple[str, ...] = ()


@dataclass(frozen=True)
class Corpus:
    """A referentially closed citation graph.

    ``edges`` is kept in canonical (citing, cited) sort order so that two
    documents with the same logical content parse to equal corpora.
    """

    researchers: dict[str, ResearcherProfile]
    publications: dict[str, Publication]
    edges: list[CitationEdge]
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def counts(self) -> tuple[int, int, int]:
        return len(self.researchers), len(self.publications), len(self.edges)

    def researcher(self, researcher_id: str) -> ResearcherProfile:
        try:
            return self.researchers[researcher_id]
        except KeyError:
            raise KeyError(f"unknown researcher id {researcher_id!r}") from None
