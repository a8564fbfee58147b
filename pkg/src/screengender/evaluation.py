"""Scoring predictions against labels.

Realized accuracy is what one seeded run scored. Expected accuracy holds
the lexicon matches fixed and averages over the fallback coin flips::

    expected = (matched_correct + p * fallback_F + (1 - p) * fallback_M) / N

It is computed in exact rational arithmetic, taking the prior at its
shortest decimal representation (0.7 is 7/10), so round values come out
exactly.
"""

from __future__ import annotations

import enum
import math
import re
import statistics
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .classifier import Fallback, Prediction, StrategyConfig, classify_corpus, uniform_draw
from .corpus import Gender, UserRecord, split_known
from .errors import EmptyInputError, EvaluationError
from .lexicon import normalize_text
from .matcher import Matcher


class Outcome(enum.Enum):
    MATCHED_CORRECT = "matched_correct"
    MATCHED_WRONG = "matched_wrong"
    FALLBACK = "fallback"


def _exact(p: float) -> Fraction:
    return Fraction(repr(float(p)))


def expected_accuracy(outcomes: Sequence[Outcome], labels: Sequence[Gender], prior_female: float) -> float:
    """Accuracy averaged over fallback randomness, with matches held fixed."""
    if len(outcomes) != len(labels):
        raise ValueError("outcomes and labels must be aligned")
    if not 0.0 <= prior_female <= 1.0:
        raise ValueError("prior_female must be in [0, 1]")
    n = len(outcomes)
    if n == 0:
        raise EvaluationError("expected accuracy of zero users is undefined")
    correct = fb_f = fb_m = 0
    for outcome, label in zip(outcomes, labels):
        if outcome is Outcome.MATCHED_CORRECT:
            correct += 1
        elif outcome is Outcome.FALLBACK:
            if label is Gender.F:
                fb_f += 1
            elif label is Gender.M:
                fb_m += 1
            else:
                raise ValueError("labels must be F or M")
    p = _exact(prior_female)
    return float((correct + p * fb_f + (1 - p) * fb_m) / n)


@dataclass(frozen=True)
class Confusion:
    """Counts indexed true-label first: ``fm`` is true F predicted M."""

    ff: int = 0
    fm: int = 0
    mf: int = 0
    mm: int = 0

    @property
    def total(self) -> int:
        return self.ff + self.fm + self.mf + self.mm


@dataclass(frozen=True)
class ClassScores:
    precision: float | None
    recall: float | None


def _ratio(num: int, den: int) -> float | None:
    return num / den if den else None


@dataclass(frozen=True)
class EvalReport:
    n_evaluated: int
    realized_accuracy: float
    expected_accuracy: float
    coverage: float
    matched_accuracy: float | None
    confusion: Confusion
    per_class: dict[str, ClassScores]
    n_matched: int = 0

    def as_dict(self) -> dict:
        """Report in the fixed JSON key layout."""
        c = self.confusion
        return {
            "n_evaluated": self.n_evaluated,
            "realized_accuracy": self.realized_accuracy,
            "expected_accuracy": self.expected_accuracy,
            "coverage": self.coverage,
            "matched_accuracy": self.matched_accuracy,
            "confusion": {"ff": c.ff, "fm": c.fm, "mf": c.mf, "mm": c.mm},
            "per_class": {
                k: {"precision": v.precision, "recall": v.recall} for k, v in self.per_class.items()
            },
        }


def outcomes_for(predictions: Sequence[Prediction], users: Sequence[UserRecord]) -> tuple[list[Outcome], list[Gender]]:
    """Align predictions with labeled users; unknown-label users are skipped."""
    by_id = {p.user_id: p for p in predictions}
    outcomes: list[Outcome] = []
    labels: list[Gender] = []
    for user in users:
        if not user.gender_label.known:
            continue
        pred = by_id.get(user.user_id)
        if pred is None:
            raise EvaluationError(f"no prediction for labeled user {user.user_id!r}")
        if isinstance(pred.provenance, Fallback):
            outcomes.append(Outcome.FALLBACK)
        elif pred.gender is user.gender_label:
            outcomes.append(Outcome.MATCHED_CORRECT)
        else:
            outcomes.append(Outcome.MATCHED_WRONG)
        labels.append(user.gender_label)
    return outcomes, labels


def evaluate(predictions: Sequence[Prediction], users: Sequence[UserRecord], prior_female: float = 0.7) -> EvalReport:
    """Score ``predictions`` against the F/M-labeled users in ``users``.

    Users labeled unknown are ignored. Every labeled user needs a
    prediction. ``prior_female`` should be the prior the predictions were
    made with; it only feeds ``expected_accuracy``.
    """
    by_id = {p.user_id: p for p in predictions}
    counts = {"ff": 0, "fm": 0, "mf": 0, "mm": 0}
    n = n_matched = matched_correct = 0
    for user in users:
        label = user.gender_label
        if not label.known:
            continue
        pred = by_id.get(user.user_id)
        if pred is None:
            raise EvaluationError(f"no prediction for labeled user {user.user_id!r}")
        if pred.gender not in (Gender.F, Gender.M):
            raise EvaluationError(f"prediction for {user.user_id!r} is not F or M")
        n += 1
        counts[label.value.lower() + pred.gender.value.lower()] += 1
        if pred.matched:
            n_matched += 1
            matched_correct += pred.gender is label
    if n == 0:
        raise EmptyInputError("no labeled users")

    confusion = Confusion(**counts)
    outcomes, labels = outcomes_for(predictions, users)
    per_class = {
        "f": ClassScores(_ratio(confusion.ff, confusion.ff + confusion.mf), _ratio(confusion.ff, confusion.ff + confusion.fm)),
        "m": ClassScores(_ratio(confusion.mm, confusion.mm + confusion.fm), _ratio(confusion.mm, confusion.mm + confusion.mf)),
    }
    return EvalReport(
        n_evaluated=n,
        realized_accuracy=(confusion.ff + confusion.mm) / n,
        expected_accuracy=expected_accuracy(outcomes, labels, prior_female),
        coverage=n_matched / n,
        matched_accuracy=_ratio(matched_correct, n_matched),
        confusion=confusion,
        per_class=per_class,
        n_matched=n_matched,
    )


@dataclass(frozen=True)
class _Baseline:
    """Seed-independent part of a run: labels, match outcomes, fallback users."""

    labels: list[Gender]
    outcomes: list[Outcome]
    matched_correct: int
    fallback: list[UserRecord]


def _baseline(matcher: Matcher, config: StrategyConfig, users: Sequence[UserRecord], workers: int = 1) -> _Baseline:
    known, _ = split_known(users)
    if not known:
        raise EmptyInputError("no labeled users")
    preds = classify_corpus(matcher, config, known, workers=workers)
    outcomes, labels = outcomes_for(preds, known)
    fallback = [u for u, o in zip(known, outcomes) if o is Outcome.FALLBACK]
    return _Baseline(labels, outcomes, outcomes.count(Outcome.MATCHED_CORRECT), fallback)


def _realized(base: _Baseline, seed: int, prior: float) -> float:
    correct = base.matched_correct
    for user in base.fallback:
        guess_f = uniform_draw(seed, user.user_id) < prior
        correct += guess_f == (user.gender_label is Gender.F)
    return correct / len(base.labels)


@dataclass(frozen=True)
class MonteCarloResult:
    mean: float
    stderr: float
    trials: int
    stderr_defined: bool
    accuracies: tuple[float, ...] = ()


def monte_carlo_accuracy(
    matcher: Matcher,
    config: StrategyConfig,
    users: Sequence[UserRecord],
    trials: int = 100,
    workers: int = 1,
) -> MonteCarloResult:
    """Realized accuracy over ``trials`` seeds ``config.seed + i``.

    Matching does not depend on the seed, so users are matched once and
    only the fallback draws are redone per trial. With a single trial the
    standard error is reported as 0 and ``stderr_defined`` is False.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    base = _baseline(matcher, config, users, workers)
    prior = config.fallback_prior_female
    accs = tuple(_realized(base, (config.seed + i) & ((1 << 64) - 1), prior) for i in range(trials))
    mean = statistics.fmean(accs)
    if trials == 1:
        return MonteCarloResult(mean, 0.0, 1, False, accs)
    stderr = statistics.stdev(accs) / math.sqrt(trials)
    return MonteCarloResult(mean, stderr, trials, True, accs)


@dataclass(frozen=True)
class SweepRow:
    prior_female: float
    expected_accuracy: float
    realized_accuracy: float


def sweep_prior(
    matcher: Matcher,
    config: StrategyConfig,
    users: Sequence[UserRecord],
    priors: Iterable[float],
    workers: int = 1,
) -> list[SweepRow]:
    """Expected and realized (seed ``config.seed``) accuracy per prior."""
    priors = list(priors)
    if not priors:
        raise ValueError("at least one prior is required")
    for p in priors:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"prior {p} outside [0, 1]")
    base = _baseline(matcher, config, users, workers)
    return [
        SweepRow(p, expected_accuracy(base.outcomes, base.labels, p), _realized(base, config.seed, p))
        for p in priors
    ]


_FEATURES = {
    "repeated_char_run": re.compile(r"(.)\1\1", re.DOTALL),
    "repeated_exclamation": re.compile(r"!!"),
    "ellipsis": re.compile(r"\.\.\."),
    "omg": re.compile(r"omg"),
}
FEATURE_NAMES = tuple(_FEATURES)


def username_features(username: str) -> dict[str, bool]:
    text = normalize_text(username)
    return {name: rx.search(text) is not None for name, rx in _FEATURES.items()}


@dataclass(frozen=True)
class PatternFeatureStats:
    n_female: int
    n_male: int
    female: dict[str, float | None]
    male: dict[str, float | None]

    def as_dict(self) -> dict:
        return {
            name: {"f": self.female[name], "m": self.male[name]} for name in FEATURE_NAMES
        } | {"n_female": self.n_female, "n_male": self.n_male}


def pattern_feature_prevalence(users: Iterable[UserRecord]) -> PatternFeatureStats:
    """Share of F and of M users whose username shows each surface feature.

    A gender with no labeled users gets ``None`` prevalences.
    """
    hits = {Gender.F: dict.fromkeys(FEATURE_NAMES, 0), Gender.M: dict.fromkeys(FEATURE_NAMES, 0)}
    totals = {Gender.F: 0, Gender.M: 0}
    for user in users:
        g = user.gender_label
        if not g.known:
            continue
        totals[g] += 1
        for name, present in username_features(user.username).items():
            hits[g][name] += present
    if not totals[Gender.F] and not totals[Gender.M]:
        raise EmptyInputError("no labeled users")

    def shares(g: Gender) -> dict[str, float | None]:
        return {name: _ratio(hits[g][name], totals[g]) for name in FEATURE_NAMES}

    return PatternFeatureStats(totals[Gender.F], totals[Gender.M], shares(Gender.F), shares(Gender.M))
