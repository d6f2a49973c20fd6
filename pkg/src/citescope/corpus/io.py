"""Corpus interchange format: parsing, validation, serialization.

The on-disk format is a single UTF-8 JSON document with top-level arrays
``researchers``, ``publications`` and ``citations``; see
docs/corpus-format.md for the schema.  Parsing validates every corpus
invariant and fails with a position or an offending identifier.  Edges
are stored in canonical sort order, so two documents with the same
logical content always parse to equal corpora and serialization is
byte-stable.

The publication and citation loops are written for million-edge corpora:
records take an inlined fast path and only fall back to the precise
field-by-field validators to produce an exact error message.
"""

from __future__ import annotations

import datetime
import json
import logging
from pathlib import Path
from sys import intern

from citescope.corpus.model import (
    CitationEdge,
    Corpus,
    Gender,
    Publication,
    ResearcherProfile,
)
from citescope.corpus.names import _KEY_RE, normalize_author_name
from citescope.errors import CorpusFormatError, CorpusIntegrityError, InvalidNameError

log = logging.getLogger(__name__)

MIN_YEAR = 1900

_GENDERS = {g.value: g for g in Gender}


def _current_year() -> int:
    return datetime.date.today().year


def _require(obj: dict, key: str, kind: type, where: str):
    if key not in obj:
        raise CorpusFormatError(f"{where}: missing required field {key!r}")
    value = obj[key]
    if kind is int:
        # bool is an int subclass; reject it explicitly
        if isinstance(value, bool) or not isinstance(value, int):
            raise CorpusFormatError(f"{where}: field {key!r} must be an integer")
    elif not isinstance(value, kind):
        raise CorpusFormatError(f"{where}: field {key!r} must be {kind.__name__}")
    return value


def _reject_publication(obj, max_year: int):
    """Slow path: raise the precise error for an invalid publication record."""
    if not isinstance(obj, dict):
        raise CorpusFormatError("publications entries must be objects")
    pub_id = _require(obj, "pub_id", str, "publication")
    where = f"publication {pub_id!r}"
    _require(obj, "title", str, where)
    year = _require(obj, "year", int, where)
    if not MIN_YEAR <= year <= max_year:
        raise CorpusIntegrityError(
            f"{where}: year {year} outside [{MIN_YEAR}, {max_year}]"
        )
    authors = _require(obj, "authors", list, where)
    if not authors:
        raise CorpusIntegrityError(f"{where}: author list is empty")
    for a in authors:
        if not isinstance(a, str) or not _KEY_RE.match(a):
            raise CorpusIntegrityError(
                f"{where}: author {a!r} is not a canonical author key "
                '(expected "initial|surname"; use normalize_author_name)'
            )
    raise CorpusFormatError(f"{where}: invalid publication record")


def _parse_researcher(obj) -> ResearcherProfile:
    if not isinstance(obj, dict):
        raise CorpusFormatError("researchers entries must be objects")
    rid = _require(obj, "researcher_id", str, "researcher")
    where = f"researcher {rid!r}"
    name = _require(obj, "display_name", str, where)
    country = _require(obj, "country", str, where)
    gender = _require(obj, "gender", str, where)
    if gender not in _GENDERS:
        raise CorpusIntegrityError(
            f"{where}: gender {gender!r} not one of {sorted(_GENDERS)}"
        )
    pubs = _require(obj, "publications", list, where)
    seen = set()
    for p in pubs:
        if not isinstance(p, str):
            raise CorpusFormatError(f"{where}: publication ids must be strings")
        if p in seen:
            raise CorpusIntegrityError(f"{where}: duplicate owned publication {p!r}")
        seen.add(p)
    keywords = obj.get("keywords", [])
    if not isinstance(keywords, list) or any(not isinstance(k, str) for k in keywords):
        raise CorpusFormatError(f"{where}: keywords must be a list of strings")
    return ResearcherProfile(
        researcher_id=rid,
        display_name=name,
        country=country,
        gender=_GENDERS[gender],
        publications=tuple(intern(p) for p in pubs),
        keywords=tuple(keywords),
    )


def parse_corpus(data: bytes | str) -> Corpus:
    """Parse and fully validate a corpus interchange document.

    Raises CorpusFormatError for syntax/shape problems (with position
    context where available) and CorpusIntegrityError for invariant
    violations, naming the offending identifier.  Researcher/publication
    ownership mismatches are reported as warnings, not errors.
    """
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise CorpusFormatError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise CorpusFormatError("top-level value must be an object")
    for key in ("researchers", "publications", "citations"):
        if not isinstance(doc.get(key), list):
            raise CorpusFormatError(f"top-level field {key!r} must be an array")

    max_year = _current_year()
    key_match = _KEY_RE.match
    min_year = MIN_YEAR
    valid_keys: set[str] = set()
    publications: dict[str, Publication] = {}
    for obj in doc["publications"]:
        try:
            pub_id = obj["pub_id"]
            title = obj["title"]
            year = obj["year"]
            authors = obj["authors"]
            ok = (
                type(pub_id) is str
                and type(title) is str
                and type(year) is int
                and min_year <= year <= max_year
                and type(authors) is list
                and len(authors) > 0
            )
        except (TypeError, KeyError):
            ok = False
        if ok:
            for a in authors:
                if a not in valid_keys:
                    if type(a) is not str or key_match(a) is None:
                        ok = False
                        break
                    valid_keys.add(a)
        if not ok:
            _reject_publication(obj, max_year)
        pub_id = intern(pub_id)
        if pub_id in publications:
            raise CorpusIntegrityError(f"duplicate publication id {pub_id!r}")
        publications[pub_id] = Publication(
            pub_id=pub_id,
            title=title,
            year=year,
            authors=tuple(map(intern, authors)),
        )

    researchers: dict[str, ResearcherProfile] = {}
    warnings: list[str] = []
    for obj in doc["researchers"]:
        res = _parse_researcher(obj)
        if res.researcher_id in researchers:
            raise CorpusIntegrityError(
                f"duplicate researcher id {res.researcher_id!r}"
            )
        for pid in res.publications:
            if pid not in publications:
                raise CorpusIntegrityError(
                    f"researcher {res.researcher_id!r} lists unknown publication {pid!r}"
                )
        try:
            key = normalize_author_name(res.display_name)
        except InvalidNameError:
            key = None
            warnings.append(
                f"researcher {res.researcher_id!r}: display name "
                f"{res.display_name!r} cannot be normalized"
            )
        if key is not None:
            for pid in res.publications:
                if key not in publications[pid].authors:
                    warnings.append(
                        f"researcher {res.researcher_id!r} (key {key!r}) is not an "
                        f"author of owned publication {pid!r}"
                    )
        researchers[res.researcher_id] = res

    pairs: list[tuple[str, str]] = []
    append = pairs.append
    for obj in doc["citations"]:
        try:
            citing = obj["citing"]
            cited = obj["cited"]
        except (TypeError, KeyError):
            raise CorpusFormatError(
                "citation entries must be objects with 'citing' and 'cited' fields"
            ) from None
        if type(citing) is not str or type(cited) is not str:
            raise CorpusFormatError("citation endpoints must be strings")
        if citing not in publications:
            raise CorpusIntegrityError(f"citation references unknown pub_id {citing!r}")
        if cited not in publications:
            raise CorpusIntegrityError(f"citation references unknown pub_id {cited!r}")
        if citing == cited:
            raise CorpusIntegrityError(f"publication {citing!r} cannot cite itself")
        append((citing, cited))

    pairs.sort()
    previous = None
    for pair in pairs:
        if pair == previous:
            raise CorpusIntegrityError(
                f"duplicate citation edge ({pair[0]!r}, {pair[1]!r})"
            )
        previous = pair
    edges = list(map(CitationEdge._make, pairs))

    for message in warnings:
        log.warning("%s", message)
    return Corpus(
        researchers=researchers,
        publications=publications,
        edges=edges,
        warnings=tuple(warnings),
    )


def serialize_corpus(corpus: Corpus) -> str:
    """Render a corpus to its canonical interchange document.

    Output is deterministic: researchers and publications sorted by id,
    edges in canonical order, LF line endings.  ``parse_corpus``
    round-trips it to an equal corpus.
    """
    doc = {
        "researchers": [
            {
                "researcher_id": r.researcher_id,
                "display_name": r.display_name,
                "country": r.country,
                "gender": r.gender.value,
                "publications": list(r.publications),
                "keywords": list(r.keywords),
            }
            for _, r in sorted(corpus.researchers.items())
        ],
        "publications": [
            {
                "pub_id": p.pub_id,
                "title": p.title,
                "year": p.year,
                "authors": list(p.authors),
            }
            for _, p in sorted(corpus.publications.items())
        ],
        "citations": [
            {"citing": e[0], "cited": e[1]} for e in sorted(corpus.edges)
        ],
    }
    # Compact separators keep million-edge documents readable by machines
    # and fast to load; the parser accepts any JSON whitespace style.
    return json.dumps(doc, ensure_ascii=False, separators=(",", ":")) + "\n"


def load_corpus(path: str | Path) -> Corpus:
    """Read and parse a corpus file. I/O errors propagate as OSError."""
    return parse_corpus(Path(path).read_bytes())


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    Path(path).write_text(serialize_corpus(corpus), encoding="utf-8", newline="\n")
