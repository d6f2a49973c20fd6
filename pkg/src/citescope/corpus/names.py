"""Author name normalization.

Citations are classified by comparing canonical author keys, so two
spellings of the same person must collapse to one key.  The canonical
form is ``"<first initial>|<surname>"``, lowercased, diacritics folded,
punctuation stripped:

    "A Smith"            -> "a|smith"
    "Smith, Alice"       -> "a|smith"
    "Couto, F.M."        -> "f|couto"
    "Francisco M Couto"  -> "f|couto"
    "Jan de Vries"       -> "j|devries"

Matching on first initial plus surname is deliberate: it is the most
that scholarly profile dumps reliably contain.  Full given-name keys
("francisco|couto") are available via ``full_given_name=True`` for
corpora with richer metadata.
"""

from __future__ import annotations

import re
import unicodedata

from citescope.errors import InvalidNameError

AuthorKey = str

_KEY_RE = re.compile(r"^[a-z0-9]+\|[a-z0-9]+$")

# Surname particles that belong with the family name in "Given Particle Surname"
# order ("Jan de Vries" == "De Vries, Jan").
_PARTICLES = frozenset(
    ["van", "von", "de", "der", "den", "del", "della", "di", "da", "dos",
     "das", "du", "la", "le", "ter", "ten", "op", "af"]
)


def _fold(text: str) -> str:
    """Lowercase, strip diacritics, drop everything but letters and digits."""
    decomposed = unicodedata.normalize("NFKD", text)
    stripped = "".join(c for c in decomposed if not unicodedata.combining(c))
    return "".join(c for c in stripped.lower() if c.isalnum())


def _split_words(text: str) -> list[str]:
    # Dots act as separators so "F.M." yields ["F", "M"]; hyphens do not,
    # so "Smith-Jones" stays one word and folds to "smithjones".
    return [w for w in re.split(r"[\s.]+", text) if _fold(w)]


def is_author_key(value: str) -> bool:
    """True if ``value`` is already in canonical key form."""
    return bool(_KEY_RE.match(value))


def normalize_author_name(raw: str, *, full_given_name: bool = False) -> AuthorKey:
    """Normalize a raw author name to its canonical key.

    Accepts "Surname, Given" and "Given Surname" orderings, initials with
    or without dots, hyphenated and particled surnames, and accented
    characters.  Deterministic: the same input always yields the same key.

    Raises
    ------
    InvalidNameError
        If the input is empty, whitespace-only, or contains no letters.
    """
    text = raw.strip()
    if not text:
        raise InvalidNameError("author name is empty or whitespace-only")

    if "," in text:
        surname_part, _, given_part = text.partition(",")
        surname_words = _split_words(surname_part)
        given_words = _split_words(given_part)
    else:
        words = _split_words(text)
        if len(words) == 1:
            surname_words, given_words = words, words
        else:
            # Trailing word is the surname; absorb any run of particles
            # immediately before it ("Jan van der Berg" -> "vanderberg").
            split = len(words) - 1
            while split > 1 and words[split - 1].lower() in _PARTICLES:
                split -= 1
            surname_words = words[split:]
            given_words = words[:split]

    surname = "".join(_fold(w) for w in surname_words)
    given = _fold(given_words[0]) if given_words else ""
    if not surname or not given:
        raise InvalidNameError(f"cannot extract a usable name from {raw!r}")

    if not full_given_name:
        given = given[0]
    return f"{given}|{surname}"


def render_author_key(key: AuthorKey) -> str:
    """Render a key back to a displayable "I Surname" form.

    ``normalize_author_name(render_author_key(k)) == k`` for every valid
    single-initial key.
    """
    given, _, surname = key.partition("|")
    return f"{given.capitalize()} {surname.capitalize()}"
