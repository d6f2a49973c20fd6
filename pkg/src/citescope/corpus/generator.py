"""Deterministic synthetic corpora for pipeline and estimator tests.

Given a seed, generation is fully reproducible: researcher attributes
are drawn from the configured weights, per-publication citation counts
from the configured ranges, and each incoming citation is a
self-citation with probability inverse-logit(x . b), where x is the
researcher's regressor vector (intercept, h, h^2/100, region dummies,
male) and b the configured coefficient vector.  Self-citing edges
originate from the researcher's own publications; all other citations
come from freshly generated external publications whose authors never
overlap anyone else's, so the realized classification matches the
sampled one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from citescope.corpus.model import (
    CitationEdge,
    CohortGroup,
    Corpus,
    Gender,
    Publication,
    RegionGroup,
    ResearcherProfile,
)
from citescope.errors import GeneratorError

# Coefficient layout: [intercept, h, h^2/100, UK, OtherEurope,
# AustraliaNZ, Other, Male], matching the Model-1 design matrix.
DEFAULT_SELF_CITE_COEFFICIENTS = (
    -1.910, -0.023, 0.019, 0.240, 0.420, 0.461, 0.055, 0.031,
)

# Synthetic corpora are frozen at this snapshot year; publication years
# never exceed it.
_FINAL_YEAR = 2013

_COHORT_YEARS = {
    CohortGroup.PRE_1980: (1955, 1979),
    CohortGroup.Y1980_1989: (1980, 1989),
    CohortGroup.Y1990_1994: (1990, 1994),
    CohortGroup.Y1995_1999: (1995, 1999),
    CohortGroup.Y2000_2004: (2000, 2004),
    CohortGroup.Y2005_PLUS: (2005, 2012),
}

_GIVEN = [
    "alice", "bruno", "carla", "david", "elena", "felix", "grace", "hugo",
    "irene", "jonas", "karen", "liam", "maria", "nadia", "oscar", "paula",
    "quinn", "rosa", "stefan", "tara", "ulrich", "vera", "walter", "xenia",
    "yann", "zoe", "amir", "bella", "carlos", "diana", "emil", "fiona",
    "gustav", "hanna", "igor", "julia", "kevin", "laura", "marco", "nina",
]

_SURNAME_PARTS = [
    "ash", "berg", "carr", "dale", "eck", "ford", "gray", "hill", "ives",
    "james", "kent", "lane", "moss", "nash", "oakes", "pratt", "quill",
    "reed", "stone", "tate", "usher", "vance", "wells", "york", "zane",
    "brook", "cliff", "dunn", "field", "grove", "hart", "knox", "lowe",
    "marsh", "north", "page", "rhodes", "shaw", "thorn", "west",
]


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of a synthetic corpus.

    Weight vectors follow the enum presentation orders (regions:
    NorthAmerica..Other; genders: male, female, unknown; cohorts:
    earliest..latest).  Integer ranges are inclusive on both ends.
    """

    n_researchers: int
    region_weights: tuple[float, ...]
    gender_weights: tuple[float, ...]
    cohort_weights: tuple[float, ...]
    pubs_per_researcher: tuple[int, int]
    cites_per_pub: tuple[int, int]
    self_cite_logit_coefficients: tuple[float, ...] = DEFAULT_SELF_CITE_COEFFICIENTS
    seed: int = 0

    def __post_init__(self):
        if self.n_researchers < 1:
            raise GeneratorError("n_researchers must be positive")
        for name, weights, size in (
            ("region_weights", self.region_weights, len(RegionGroup)),
            ("gender_weights", self.gender_weights, len(Gender)),
            ("cohort_weights", self.cohort_weights, len(CohortGroup)),
        ):
            if len(weights) != size:
                raise GeneratorError(f"{name} must have {size} entries")
            if any(w < 0 for w in weights):
                raise GeneratorError(f"{name} must be non-negative")
            if abs(sum(weights) - 1.0) > 1e-9:
                raise GeneratorError(f"{name} must sum to 1 (got {sum(weights)!r})")
        for name, rng_ in (
            ("pubs_per_researcher", self.pubs_per_researcher),
            ("cites_per_pub", self.cites_per_pub),
        ):
            lo, hi = rng_
            if lo > hi:
                raise GeneratorError(f"{name} range ({lo}, {hi}) is empty")
            if lo < 0:
                raise GeneratorError(f"{name} must be non-negative")
        if self.pubs_per_researcher[0] < 1 and self.cites_per_pub[1] > 0:
            raise GeneratorError(
                "a researcher with zero publications cannot receive citations"
            )
        if len(self.self_cite_logit_coefficients) != 8:
            raise GeneratorError(
                "self_cite_logit_coefficients must have 8 entries "
                "(intercept, h, h^2/100, four region dummies, male)"
            )


def default_generator_spec(seed: int = 0, n_researchers: int = 545) -> GeneratorSpec:
    """A spec whose group weights mirror a realistic field-wide sample.

    Publication and citation ranges are sized so that the average
    realized self-citation proportion lands near 1/8 under the default
    coefficient vector.
    """
    return GeneratorSpec(
        n_researchers=n_researchers,
        region_weights=(267 / 545, 79 / 545, 119 / 545, 46 / 545, 34 / 545),
        gender_weights=(391 / 545, 154 / 545, 0.0),
        cohort_weights=(31 / 545, 50 / 545, 49 / 545, 100 / 545, 117 / 545, 198 / 545),
        pubs_per_researcher=(4, 16),
        cites_per_pub=(1, 8),
        seed=seed,
    )


def _inv_logit(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def _h_index_of(counts: np.ndarray) -> int:
    h = 0
    for i, c in enumerate(sorted(counts.tolist(), reverse=True), start=1):
        if c >= i:
            h = i
        else:
            break
    return h


class _People:
    """Globally unique synthetic persons; index fully determines the name."""

    def __init__(self):
        self._next = 0
        self._combos = len(_SURNAME_PARTS) * len(_SURNAME_PARTS)

    def fresh(self) -> tuple[str, str]:
        idx = self._next
        self._next += 1
        given = _GIVEN[(idx * 7) % len(_GIVEN)]
        a, b = divmod(idx % self._combos, len(_SURNAME_PARTS))
        cycle = idx // self._combos
        surname = _SURNAME_PARTS[a] + _SURNAME_PARTS[b] + ("" if cycle == 0 else str(cycle))
        display = f"{given.capitalize()} {surname.capitalize()}"
        key = f"{given[0]}|{surname}"
        return display, key


def generate_synthetic_corpus(spec: GeneratorSpec) -> Corpus:
    """Generate a corpus; identical specs produce identical corpora."""
    rng = np.random.default_rng(spec.seed)
    people = _People()
    n = spec.n_researchers
    id_width = max(3, len(str(n - 1)))
    beta = spec.self_cite_logit_coefficients

    regions = list(RegionGroup)
    genders = [Gender.MALE, Gender.FEMALE, Gender.UNKNOWN]
    cohorts = list(CohortGroup)
    region_idx = rng.choice(len(regions), size=n, p=spec.region_weights)
    gender_idx = rng.choice(len(genders), size=n, p=spec.gender_weights)
    cohort_idx = rng.choice(len(cohorts), size=n, p=spec.cohort_weights)
    p_lo, p_hi = spec.pubs_per_researcher
    c_lo, c_hi = spec.cites_per_pub
    n_pubs_all = rng.integers(p_lo, p_hi + 1, size=n)

    researchers: dict[str, ResearcherProfile] = {}
    publications: dict[str, Publication] = {}
    edges: list[CitationEdge] = []
    pub_seq = 0
    ext_seq = 0

    for i in range(n):
        rid = f"R{i:0{id_width}d}"
        region = regions[region_idx[i]]
        gender = genders[gender_idx[i]]
        cohort = cohorts[cohort_idx[i]]
        display, key = people.fresh()

        year_lo, year_hi = _COHORT_YEARS[cohort]
        first_year = int(rng.integers(year_lo, year_hi + 1))
        n_pubs = int(n_pubs_all[i])
        if n_pubs == 0:
            researchers[rid] = ResearcherProfile(
                rid, display, _COUNTRY_FOR[region], gender, (), ("synthetic",)
            )
            continue

        n_coauthors = int(rng.integers(2, 6))
        coauthors = [people.fresh()[1] for _ in range(n_coauthors)]

        own_ids: list[str] = []
        years = rng.integers(first_year, _FINAL_YEAR + 1, size=n_pubs)
        years[0] = first_year
        extra_counts = rng.integers(0, 4, size=n_pubs)
        for j in range(n_pubs):
            pid = f"P{pub_seq:07d}"
            pub_seq += 1
            n_extra = int(extra_counts[j])
            if n_extra:
                picked = rng.choice(n_coauthors, size=min(n_extra, n_coauthors), replace=False)
                authors = (key, *(coauthors[q] for q in sorted(picked.tolist())))
            else:
                authors = (key,)
            publications[pid] = Publication(
                pub_id=pid,
                title=f"Synthetic study {pid[1:]}",
                year=int(years[j]),
                authors=authors,
            )
            own_ids.append(pid)

        counts = rng.integers(c_lo, c_hi + 1, size=n_pubs)
        h = _h_index_of(counts)
        region_term = {
            RegionGroup.UK: beta[3],
            RegionGroup.OTHER_EUROPE: beta[4],
            RegionGroup.AUSTRALIA_NZ: beta[5],
            RegionGroup.OTHER: beta[6],
        }.get(region, 0.0)
        xb = (
            beta[0]
            + beta[1] * h
            + beta[2] * h * h / 100.0
            + region_term
            + (beta[7] if gender is Gender.MALE else 0.0)
        )
        p_self = _inv_logit(xb)

        wanted_self = rng.binomial(counts, p_self)
        external_demand = np.zeros(n_pubs, dtype=int)
        for j in range(n_pubs):
            c_j = int(counts[j])
            if c_j == 0:
                continue
            # A cited publication can receive at most one citation from
            # each other owned publication; overflow becomes external.
            s_j = min(int(wanted_self[j]), n_pubs - 1)
            if s_j:
                picks = rng.choice(n_pubs - 1, size=s_j, replace=False)
                for q in sorted(picks.tolist()):
                    source = q if q < j else q + 1
                    edges.append(CitationEdge(own_ids[source], own_ids[j]))
            external_demand[j] = c_j - s_j

        pending = [j for j in range(n_pubs) if external_demand[j] > 0]
        while pending:
            chunk = pending[:8]
            eid = f"E{ext_seq:07d}"
            ext_seq += 1
            n_auth = int(rng.integers(1, 5))
            ext_authors = tuple(people.fresh()[1] for _ in range(n_auth))
            cite_year_lo = max(int(years[j]) for j in chunk)
            publications[eid] = Publication(
                pub_id=eid,
                title=f"Citing article {eid[1:]}",
                year=int(rng.integers(cite_year_lo, _FINAL_YEAR + 1)),
                authors=ext_authors,
            )
            for j in chunk:
                edges.append(CitationEdge(eid, own_ids[j]))
                external_demand[j] -= 1
            pending = [j for j in pending if external_demand[j] > 0]

        researchers[rid] = ResearcherProfile(
            researcher_id=rid,
            display_name=display,
            country=_COUNTRY_FOR[region],
            gender=gender,
            publications=tuple(own_ids),
            keywords=("synthetic",),
        )

    edges.sort()
    return Corpus(researchers=researchers, publications=publications, edges=edges)


# One representative country per region keeps generated corpora exercising
# the shipped mapping table.
_COUNTRY_FOR = {
    RegionGroup.NORTH_AMERICA: "United States",
    RegionGroup.UK: "United Kingdom",
    RegionGroup.OTHER_EUROPE: "Netherlands",
    RegionGroup.AUSTRALIA_NZ: "Australia",
    RegionGroup.OTHER: "Japan",
}
