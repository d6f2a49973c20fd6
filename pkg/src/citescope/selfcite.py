"""Self-citation classification and per-researcher tallies.

An edge is a self-citation when the citing and cited publications share
at least one author key.  Classification is a property of the edge
alone, so edges can be classified once per corpus and reused by every
per-researcher tally.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple

from citescope.corpus.model import Corpus
from citescope.corpus.names import AuthorKey
from citescope.errors import (
    CorpusIntegrityError,
    UndefinedCovariateError,
    UndefinedProportionError,
)


class CitationTally(NamedTuple):
    total: int
    self_cites: int


def is_self_citation(
    citing_authors: Iterable[AuthorKey], cited_authors: Iterable[AuthorKey]
) -> bool:
    """True iff the two author sets intersect. Symmetric in its arguments."""
    citing = frozenset(citing_authors)
    cited = frozenset(cited_authors)
    if not citing or not cited:
        raise CorpusIntegrityError("publication has an empty author list")
    return not citing.isdisjoint(cited)


def classify_edges(corpus: Corpus) -> list[bool]:
    """Per-edge self-citation flags, aligned with ``corpus.edges``."""
    authors = {pid: p.author_set() for pid, p in corpus.publications.items()}
    return [
        not authors[e.citing].isdisjoint(authors[e.cited]) for e in corpus.edges
    ]


def pub_citation_tallies(corpus: Corpus) -> dict[str, CitationTally]:
    """Incoming (total, self) citation counts for every publication.

    Publications that receive no citations are absent from the result.
    """
    authors = {pid: p.author_set() for pid, p in corpus.publications.items()}
    counts: dict[str, list[int]] = {}
    for citing, cited in corpus.edges:
        pair = counts.get(cited)
        if pair is None:
            pair = counts[cited] = [0, 0]
        pair[0] += 1
        if not authors[citing].isdisjoint(authors[cited]):
            pair[1] += 1
    return {pid: CitationTally(t, s) for pid, (t, s) in counts.items()}


def citation_tally(
    researcher_id: str,
    corpus: Corpus,
    pub_tallies: dict[str, CitationTally] | None = None,
) -> CitationTally:
    """Total and self-citation counts received by one researcher.

    ``pub_tallies`` may be passed to reuse a single classification pass
    across many researchers.
    """
    researcher = corpus.researcher(researcher_id)
    if pub_tallies is None:
        pub_tallies = pub_citation_tallies(corpus)
    total = 0
    self_cites = 0
    empty = CitationTally(0, 0)
    for pid in researcher.publications:
        t = pub_tallies.get(pid, empty)
        total += t.total
        self_cites += t.self_cites
    return CitationTally(total, self_cites)


def self_citation_proportion(tally: CitationTally) -> float:
    """Fraction of received citations that are self-citations."""
    if tally.total == 0:
        raise UndefinedProportionError(
            "proportion undefined for a researcher with zero citations"
        )
    return tally.self_cites / tally.total


def mean_authors_per_cited_paper(
    researcher_id: str,
    corpus: Corpus,
    pub_tallies: dict[str, CitationTally] | None = None,
    *,
    weight_by_citations: bool = False,
) -> float:
    """Mean author-list length over the researcher's cited publications.

    Each distinct cited publication counts once regardless of how many
    citations it receives; ``weight_by_citations`` switches to the
    citation-weighted variant for sensitivity analysis.
    """
    researcher = corpus.researcher(researcher_id)
    if pub_tallies is None:
        pub_tallies = pub_citation_tallies(corpus)
    sizes: list[int] = []
    weights: list[int] = []
    for pid in researcher.publications:
        tally = pub_tallies.get(pid)
        if tally is not None and tally.total > 0:
            sizes.append(len(corpus.publications[pid].authors))
            weights.append(tally.total)
    if not sizes:
        raise UndefinedCovariateError(
            f"researcher {researcher_id!r} has no cited publications"
        )
    if weight_by_citations:
        return sum(s * w for s, w in zip(sizes, weights)) / sum(weights)
    return sum(sizes) / len(sizes)
