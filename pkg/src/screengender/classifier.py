"""Per-user gender prediction: lexicon match first, seeded fallback otherwise.

Fallback draws are derived from a hash of ``(seed, user_id)`` rather than a
sequential generator, so every user's draw is fixed regardless of corpus
order or how the work is split across threads.

Fallback hash, bit-exact::

    key    = seed.to_bytes(8, "little") + user_id.encode("utf-8")
    h      = int.from_bytes(blake2b(key, digest_size=8).digest(), "big")
    draw   = (h >> 11) * 2**-53            # uniform on [0, 1)
    gender = F if draw < prior_female else M
"""

from __future__ import annotations

import enum
import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence, Union

from .corpus import Gender, UserRecord
from .lexicon import DEFAULT_PRECEDENCE, Category, Lexicon, Term, normalize_text
from .matcher import Matcher, SelectionMode, SelectionPolicy, find_all_matches, select_best_match

__all__ = [
    "Gender",
    "Strategy",
    "StrategyConfig",
    "Matched",
    "Fallback",
    "Prediction",
    "fallback_draw",
    "classify_user",
    "classify_corpus",
    "strategy_categories",
]

_U64 = (1 << 64) - 1
_INV_2_53 = 2.0 ** -53


class Strategy(str, enum.Enum):
    TOPIC = "TOPIC"
    FEMALE_THEN_MALE = "FEMALE_THEN_MALE"
    FEMALE_ONLY = "FEMALE_ONLY"
    FEMALE_ONLY_PLUS_EXTRAS = "FEMALE_ONLY_PLUS_EXTRAS"
    LONGEST_ACROSS_ALL = "LONGEST_ACROSS_ALL"


_CATEGORIES = {
    Strategy.TOPIC: (Category.TOPIC,),
    Strategy.FEMALE_THEN_MALE: (Category.FEMALE_NAME, Category.MALE_NAME),
    Strategy.FEMALE_ONLY: (Category.FEMALE_NAME,),
    Strategy.FEMALE_ONLY_PLUS_EXTRAS: (Category.FEMALE_NAME, Category.EXTRA_FEMALE),
    Strategy.LONGEST_ACROSS_ALL: (Category.FEMALE_NAME, Category.MALE_NAME),
}

# strategies where any match means F, whatever the term's category
_ANY_MATCH_FEMALE = {Strategy.TOPIC, Strategy.FEMALE_ONLY, Strategy.FEMALE_ONLY_PLUS_EXTRAS}


def strategy_categories(strategy: Strategy | str) -> tuple[Category, ...]:
    """Term categories the strategy's lexicon is built from."""
    return _CATEGORIES[Strategy(strategy)]


@dataclass(frozen=True)
class StrategyConfig:
    strategy: Strategy = Strategy.FEMALE_ONLY_PLUS_EXTRAS
    fallback_prior_female: float = 0.7
    seed: int = 0
    precedence: tuple[Category, ...] = DEFAULT_PRECEDENCE
    selection_policy: SelectionPolicy = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        if not 0.0 <= self.fallback_prior_female <= 1.0:
            raise ValueError("fallback_prior_female must be in [0, 1]")
        if not 0 <= self.seed <= _U64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        mode = (
            SelectionMode.LONGEST_WINS
            if self.strategy is Strategy.LONGEST_ACROSS_ALL
            else SelectionMode.FIRST_CATEGORY_WINS
        )
        object.__setattr__(self, "selection_policy", SelectionPolicy(mode, tuple(self.precedence)))

    @property
    def categories(self) -> tuple[Category, ...]:
        return strategy_categories(self.strategy)

    def with_seed(self, seed: int) -> StrategyConfig:
        return StrategyConfig(self.strategy, self.fallback_prior_female, seed, self.precedence)

    def with_prior(self, prior: float) -> StrategyConfig:
        return StrategyConfig(self.strategy, prior, self.seed, self.precedence)


@dataclass(frozen=True)
class Matched:
    term: Term
    start: int
    end: int


@dataclass(frozen=True)
class Fallback:
    uniform_draw: float


Provenance = Union[Matched, Fallback]


@dataclass(frozen=True)
class Prediction:
    user_id: str
    gender: Gender
    provenance: Provenance

    @property
    def matched(self) -> bool:
        return isinstance(self.provenance, Matched)


def uniform_draw(seed: int, user_id: str) -> float:
    key = (seed & _U64).to_bytes(8, "little") + user_id.encode("utf-8")
    h = int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "big")
    return (h >> 11) * _INV_2_53


def fallback_draw(seed: int, user_id: str, prior_female: float) -> tuple[Gender, float]:
    """Seeded coin flip for a user no term matched."""
    if not 0.0 <= prior_female <= 1.0:
        raise ValueError("prior_female must be in [0, 1]")
    u = uniform_draw(seed, user_id)
    return (Gender.F if u < prior_female else Gender.M), u


def classify_user(matcher: Matcher, config: StrategyConfig, user: UserRecord) -> Prediction:
    """Predict one user's gender under ``config``.

    Matches on categories the strategy does not use are ignored, so a
    matcher compiled from a broader lexicon still behaves per strategy.
    """
    allowed = config.categories
    matches = find_all_matches(matcher, normalize_text(user.username))
    if matches:
        matches = [m for m in matches if m.term.category in allowed]
    best = select_best_match(matches, config.selection_policy)
    if best is not None:
        gender = Gender.F if config.strategy in _ANY_MATCH_FEMALE else best.term.category.gender
        return Prediction(user.user_id, gender, Matched(best.term, best.start, best.end))
    gender, u = fallback_draw(config.seed, user.user_id, config.fallback_prior_female)
    return Prediction(user.user_id, gender, Fallback(u))


def classify_corpus(
    matcher: Matcher,
    config: StrategyConfig,
    users: Sequence[UserRecord],
    workers: int = 1,
    chunk_size: int = 4096,
) -> list[Prediction]:
    """Classify every user, returning predictions in input order.

    ``workers > 1`` spreads chunks over a thread pool; output is identical
    to the single-threaded run.
    """
    if workers <= 1 or len(users) <= chunk_size:
        return [classify_user(matcher, config, u) for u in users]
    chunks = [users[i:i + chunk_size] for i in range(0, len(users), chunk_size)]

    def run(chunk: Sequence[UserRecord]) -> list[Prediction]:
        return [classify_user(matcher, config, u) for u in chunk]

    with ThreadPoolExecutor(max_workers=workers) as pool:
        out: list[Prediction] = []
        for part in pool.map(run, chunks):
            out.extend(part)
    return out


def build_strategy_matcher(lexicon: Lexicon, strategy: Strategy | str) -> Matcher:
    """Matcher over just the categories ``strategy`` reads."""
    return Matcher(lexicon.restrict(strategy_categories(strategy)))
