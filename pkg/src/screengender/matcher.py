"""Multi-pattern substring matching over normalized usernames.

The lexicon is compiled once into an Aho-Corasick automaton whose
transition table is fully resolved (failure links folded into the
per-state dicts), so a query costs one dict lookup per character plus the
number of reported matches, regardless of how many terms there are.

Offsets are in code points of the normalized text.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .lexicon import DEFAULT_PRECEDENCE, Category, Lexicon, Term
from .errors import LexiconError


@dataclass(frozen=True, slots=True)
class Match:
    term: Term
    start: int
    end: int

    @property
    def length(self) -> int:
        return self.end - self.start

    @property
    def category(self) -> Category:
        return self.term.category


class Matcher:
    """Immutable automaton over the terms of a :class:`Lexicon`.

    Pattern ids are dense, ``0 .. k-1``, assigned in term-text order.
    """

    __slots__ = ("lexicon", "terms", "_delta", "_out", "_lengths")

    def __init__(self, lexicon: Lexicon):
        if not len(lexicon):
            raise LexiconError("cannot build a matcher over an empty lexicon")
        terms = tuple(sorted(lexicon.terms, key=lambda t: t.text))

        goto: list[dict[str, int]] = [{}]
        terminal: list[int] = [-1]
        for pid, term in enumerate(terms):
            state = 0
            for ch in term.text:
                nxt = goto[state].get(ch)
                if nxt is None:
                    nxt = len(goto)
                    goto[state][ch] = nxt
                    goto.append({})
                    terminal.append(-1)
                state = nxt
            terminal[state] = pid

        n = len(goto)
        fail = [0] * n
        delta: list[dict[str, int]] = [{}] * n
        out: list[tuple[int, ...]] = [()] * n
        delta[0] = dict(goto[0])
        queue = deque()
        for child in goto[0].values():
            queue.append(child)
        while queue:
            state = queue.popleft()
            f = fail[state]
            own = (terminal[state],) if terminal[state] >= 0 else ()
            out[state] = own + out[f]
            table = dict(delta[f])
            table.update(goto[state])
            delta[state] = table
            for ch, child in goto[state].items():
                fail[child] = delta[f].get(ch, 0) if state else 0
                queue.append(child)

        object.__setattr__(self, "lexicon", lexicon)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_delta", tuple(delta))
        object.__setattr__(self, "_out", tuple(out))
        object.__setattr__(self, "_lengths", tuple(len(t.text) for t in terms))

    def __setattr__(self, name, value):
        raise AttributeError("Matcher is immutable")

    @property
    def pattern_count(self) -> int:
        return len(self.terms)

    @property
    def state_count(self) -> int:
        return len(self._delta)

    def find_all(self, text: str) -> list[Match]:
        """Every occurrence of every term in ``text``, overlaps included.

        Sorted by (start, end, term text).
        """
        delta, out, lengths = self._delta, self._out, self._lengths
        hits: list[tuple[int, int, int]] = []
        state = 0
        for i, ch in enumerate(text, 1):
            state = delta[state].get(ch, 0)
            if out[state]:
                for pid in out[state]:
                    hits.append((i - lengths[pid], i, pid))
        if not hits:
            return []
        hits.sort()
        terms = self.terms
        return [Match(terms[pid], start, end) for start, end, pid in hits]


def build_matcher(lexicon: Lexicon) -> Matcher:
    return Matcher(lexicon)


def find_all_matches(matcher: Matcher, text: str) -> list[Match]:
    return matcher.find_all(text)


def brute_force_matches(lexicon: Lexicon | Iterable[Term], text: str) -> list[Match]:
    """Reference scan: try every term at every offset.

    Quadratic and slow; exists as an independent oracle for
    :func:`find_all_matches`.
    """
    found = []
    for term in lexicon:
        width = len(term.text)
        for start in range(len(text) - width + 1):
            if text[start:start + width] == term.text:
                found.append(Match(term, start, start + width))
    found.sort(key=lambda m: (m.start, m.end, m.term.text))
    return found


class SelectionMode(str, enum.Enum):
    FIRST_CATEGORY_WINS = "FIRST_CATEGORY_WINS"
    LONGEST_WINS = "LONGEST_WINS"


@dataclass(frozen=True)
class SelectionPolicy:
    mode: SelectionMode = SelectionMode.FIRST_CATEGORY_WINS
    category_precedence: tuple[Category, ...] = DEFAULT_PRECEDENCE

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", SelectionMode(self.mode))
        order = tuple(Category(c) for c in self.category_precedence)
        if len(set(order)) != len(order):
            raise ValueError("category appears twice in precedence")
        object.__setattr__(self, "category_precedence", order)

    def rank(self, category: Category) -> int:
        try:
            return self.category_precedence.index(category)
        except ValueError:
            raise ValueError(f"category {category.value} missing from selection precedence") from None


def select_best_match(matches: Sequence[Match], policy: SelectionPolicy) -> Match | None:
    """Pick one match, or ``None`` when there are none.

    FIRST_CATEGORY_WINS narrows to the strongest category present before
    breaking ties; LONGEST_WINS considers all matches. Ties are broken by
    length (longer first), category precedence, start offset, then term
    text, which makes the choice independent of input order.
    """
    if not matches:
        return None
    rank = {c: policy.rank(c) for c in {m.term.category for m in matches}}
    pool: Iterable[Match] = matches
    if policy.mode is SelectionMode.FIRST_CATEGORY_WINS:
        best_rank = min(rank.values())
        pool = [m for m in matches if rank[m.term.category] == best_rank]
    return min(pool, key=lambda m: (-(m.end - m.start), rank[m.term.category], m.start, m.term.text))
