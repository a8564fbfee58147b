"""Term lists: normalization, loading, lexicon assembly, shadow analysis and mining.

A lexicon is the union of several category-tagged term lists. When the
same text appears under more than one category it is kept once, under the
category that ranks highest in the lexicon's precedence, and the collision
is recorded so that the run stays auditable.
"""

from __future__ import annotations

import enum
import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from ._io import Source, iter_lines, source_name
from .corpus import Gender, UserRecord
from .errors import EmptyInputError, LexiconError

logger = logging.getLogger(__name__)

MIN_TERM_LENGTH = 2


class Category(str, enum.Enum):
    FEMALE_NAME = "FEMALE_NAME"
    MALE_NAME = "MALE_NAME"
    TOPIC = "TOPIC"
    EXTRA_FEMALE = "EXTRA_FEMALE"

    @property
    def gender(self) -> Gender:
        """Gender implied by a match on a term of this category."""
        return Gender.M if self is Category.MALE_NAME else Gender.F


DEFAULT_PRECEDENCE: tuple[Category, ...] = (
    Category.EXTRA_FEMALE,
    Category.FEMALE_NAME,
    Category.MALE_NAME,
    Category.TOPIC,
)


def normalize_text(raw: str) -> str:
    """Simple-case-fold ``raw`` and strip surrounding whitespace.

    Folding is per character and never changes the length of the text:
    a character whose full case folding expands (``"ß"`` -> ``"ss"``) is
    lowercased instead when that is a single character, and otherwise left
    alone. Digits and punctuation pass through untouched.

    >>> normalize_text("  GIRLpower!  ")
    'girlpower!'
    """
    if raw.isascii():
        return raw.lower().strip()
    return "".join(map(_fold_char, raw)).strip()


def _fold_char(ch: str) -> str:
    folded = ch.casefold()
    if len(folded) == 1:
        return folded
    lowered = ch.lower()
    return lowered if len(lowered) == 1 else ch


@dataclass(frozen=True, order=True)
class Term:
    text: str
    category: Category
    source_line: int = 1

    def __post_init__(self) -> None:
        if normalize_text(self.text) != self.text:
            raise ValueError(f"term text is not normalized: {self.text!r}")
        if len(self.text) < MIN_TERM_LENGTH:
            raise ValueError(f"term shorter than {MIN_TERM_LENGTH} characters: {self.text!r}")
        if self.source_line < 1:
            raise ValueError("source_line must be positive")


@dataclass(frozen=True)
class TermList:
    """Result of reading one term-list file."""

    category: Category
    terms: tuple[Term, ...]
    skipped_short: int = 0
    duplicates: int = 0
    source: str = "<stream>"

    def __iter__(self):
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def texts(self) -> list[str]:
        return [t.text for t in self.terms]


def load_term_list(source: Source, category: Category | str) -> TermList:
    """Read one term per line, skipping ``#`` comments and blank lines.

    Lines are normalized; anything shorter than two characters afterwards
    is skipped and counted, and repeated terms keep their first occurrence.
    Raises :class:`IngestError` for unreadable sources or invalid UTF-8.
    """
    category = Category(category)
    name = source_name(source)
    seen: set[str] = set()
    terms: list[Term] = []
    skipped = duplicates = 0
    for lineno, line in iter_lines(source):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        text = normalize_text(stripped)
        if len(text) < MIN_TERM_LENGTH:
            skipped += 1
            continue
        if text in seen:
            duplicates += 1
            continue
        seen.add(text)
        terms.append(Term(text, category, lineno))
    if skipped:
        logger.warning("%s: skipped %d term(s) shorter than %d characters", name, skipped, MIN_TERM_LENGTH)
    return TermList(category, tuple(terms), skipped, duplicates, name)


@dataclass(frozen=True)
class Conflict:
    """A text listed under two categories; ``kept`` won on precedence."""

    text: str
    kept: Category
    dropped: Category


@dataclass(frozen=True)
class Lexicon:
    terms: tuple[Term, ...]
    precedence: tuple[Category, ...] = DEFAULT_PRECEDENCE
    conflicts: tuple[Conflict, ...] = ()
    _by_text: dict[str, Term] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        _check_precedence(self.precedence)
        by_text = {t.text: t for t in self.terms}
        if len(by_text) != len(self.terms):
            raise LexiconError("lexicon terms must have distinct texts")
        object.__setattr__(self, "_by_text", by_text)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __contains__(self, text: object) -> bool:
        return text in self._by_text

    def get(self, text: str) -> Term | None:
        return self._by_text.get(text)

    @property
    def categories(self) -> frozenset[Category]:
        return frozenset(t.category for t in self.terms)

    def rank(self, category: Category) -> int:
        """Position in the precedence order; 0 is the strongest."""
        return self.precedence.index(category)

    def restrict(self, categories: Iterable[Category]) -> Lexicon:
        """Sub-lexicon holding only the given categories."""
        wanted = set(categories)
        kept = tuple(t for t in self.terms if t.category in wanted)
        if not kept:
            raise LexiconError("no terms left after restricting to " + ", ".join(sorted(c.value for c in wanted)))
        return Lexicon(kept, self.precedence)


def _check_precedence(precedence: Sequence[Category]) -> None:
    if len(set(precedence)) != len(precedence):
        raise LexiconError("a category appears more than once in the precedence order")
    missing = set(Category) - set(precedence)
    if missing:
        raise LexiconError("precedence order is missing " + ", ".join(sorted(c.value for c in missing)))


def build_lexicon(
    lists: Iterable[tuple[Category | str, Iterable[Term | str]]],
    precedence: Sequence[Category | str] = DEFAULT_PRECEDENCE,
) -> Lexicon:
    """Merge category-tagged term lists into one :class:`Lexicon`.

    Each list is deduplicated on its own first. A text that then shows up
    again, in any list, is resolved in favour of the higher-precedence
    category and logged as a :class:`Conflict`.
    """
    order = tuple(Category(c) for c in precedence)
    _check_precedence(order)
    rank = {c: i for i, c in enumerate(order)}

    chosen: dict[str, Term] = {}
    conflicts: list[Conflict] = []
    for category, items in lists:
        category = Category(category)
        local: set[str] = set()
        for i, item in enumerate(items, 1):
            if isinstance(item, Term):
                term = item if item.category is category else Term(item.text, category, item.source_line)
            else:
                term = Term(item, category, i)
            if term.text in local:
                continue
            local.add(term.text)
            current = chosen.get(term.text)
            if current is None:
                chosen[term.text] = term
                continue
            if rank[term.category] < rank[current.category]:
                chosen[term.text] = term
                conflicts.append(Conflict(term.text, term.category, current.category))
            else:
                conflicts.append(Conflict(term.text, current.category, term.category))
    if not chosen:
        raise LexiconError("lexicon is empty: no terms in any list")
    for c in conflicts:
        logger.warning("term %r listed as %s and %s; keeping %s", c.text, c.kept.value, c.dropped.value, c.kept.value)
    terms = tuple(sorted(chosen.values(), key=lambda t: t.text))
    return Lexicon(terms, order, tuple(conflicts))


@dataclass(frozen=True)
class ShadowPair:
    """``inner`` is a strict substring of ``outer`` (``bert`` in ``robert``)."""

    inner: Term
    outer: Term


def shadow_report(lexicon: Lexicon) -> list[ShadowPair]:
    """All (inner, outer) term pairs where inner is a strict substring of outer.

    Uses the compiled matcher: every match found inside a term's own text,
    other than the term itself, is a shadowed term.
    """
    from .matcher import build_matcher, find_all_matches

    matcher = build_matcher(lexicon)
    pairs = []
    for outer in lexicon.terms:
        inner_texts = {m.term.text for m in find_all_matches(matcher, outer.text) if m.term.text != outer.text}
        pairs.extend(ShadowPair(lexicon.get(t), outer) for t in inner_texts)
    pairs.sort(key=lambda p: (p.outer.text, p.inner.text))
    return pairs


@dataclass(frozen=True)
class CandidateTerm:
    text: str
    support: int
    female_fraction: float
    female_support: int = 0


def char_ngrams(text: str, n_min: int, n_max: int) -> set[str]:
    """Distinct character n-grams of ``text`` with ``n_min <= n <= n_max``."""
    grams: set[str] = set()
    length = len(text)
    for n in range(n_min, min(n_max, length) + 1):
        grams.update(text[i:i + n] for i in range(length - n + 1))
    return grams


def mine_candidate_terms(
    users: Iterable[UserRecord],
    n_min: int = 3,
    n_max: int = 6,
    min_support: int = 20,
    skew_threshold: float = 0.8,
    exclude: Lexicon | Iterable[str] | None = None,
) -> list[CandidateTerm]:
    """Find username n-grams whose users lean strongly towards one gender.

    Support is the number of labeled users whose normalized username
    contains the n-gram at least once. An n-gram qualifies when its support
    reaches ``min_support`` and its female share is at least
    ``skew_threshold`` or at most ``1 - skew_threshold``. Texts already in
    ``exclude`` are skipped. Output is ordered by support (descending),
    then text.
    """
    if not 2 <= n_min <= n_max:
        raise ValueError("need 2 <= n_min <= n_max")
    if not 0.5 < skew_threshold <= 1:
        raise ValueError("skew_threshold must be in (0.5, 1]")

    labeled = [u for u in users if u.gender_label is not Gender.UNKNOWN]
    if not labeled:
        raise EmptyInputError("no labeled users to mine")
    genders = {u.gender_label for u in labeled}
    if genders != {Gender.F, Gender.M}:
        raise EmptyInputError("mining needs at least one F and one M labeled user")

    if exclude is None:
        excluded: set[str] = set()
    elif isinstance(exclude, Lexicon):
        excluded = {t.text for t in exclude.terms}
    else:
        excluded = set(exclude)

    total: Counter[str] = Counter()
    female: Counter[str] = Counter()
    for user in labeled:
        grams = char_ngrams(normalize_text(user.username), n_min, n_max)
        total.update(grams)
        if user.gender_label is Gender.F:
            female.update(grams)

    # threshold taken at its decimal value; comparisons are exact in integers
    ratio = Fraction(str(skew_threshold))
    num, den = ratio.numerator, ratio.denominator
    found = []
    for gram, support in total.items():
        if support < min_support or gram in excluded:
            continue
        n_female = female[gram]
        n_male = support - n_female
        if n_female * den >= num * support or n_male * den >= num * support:
            found.append(CandidateTerm(gram, support, n_female / support, n_female))
    found.sort(key=lambda c: (-c.support, c.text))
    return found
