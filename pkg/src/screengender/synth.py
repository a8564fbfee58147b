"""Synthetic labeled corpora for demos and acceptance runs.

Usernames are built from a filler alphabet of digits and underscores, so
they never contain a letter-based term by accident; a configurable share
of each gender gets one name from the matching list embedded in the
filler. Label counts are exact (rounded once), not sampled.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from importlib import resources
from typing import Sequence

from .corpus import Gender, UserRecord

FILLER = "0123456789_"


def demo_list_path(name: str):
    """Path-like handle to a bundled demonstration list (e.g. ``"female_names"``)."""
    return resources.files("screengender") / "data" / f"{name}.txt"


def demo_terms(name: str) -> list[str]:
    text = demo_list_path(name).read_text(encoding="utf-8")
    return [line.strip() for line in text.splitlines() if line.strip() and not line.startswith("#")]


@dataclass(frozen=True)
class CorpusSpec:
    n_users: int = 1000
    female_fraction: float = 0.7
    female_embed_rate: float = 0.5
    male_embed_rate: float = 0.5
    unknown_fraction: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_users < 0:
            raise ValueError("n_users must be >= 0")
        for name in ("female_fraction", "female_embed_rate", "male_embed_rate", "unknown_fraction"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")

    @property
    def n_unknown(self) -> int:
        return round(self.n_users * self.unknown_fraction)

    @property
    def n_female_known(self) -> int:
        return round((self.n_users - self.n_unknown) * self.female_fraction)


def _filler(rng: random.Random, lo: int = 2, hi: int = 6) -> str:
    return "".join(rng.choice(FILLER) for _ in range(rng.randint(lo, hi)))


def _username(rng: random.Random, name: str | None) -> str:
    if name is None:
        return _filler(rng, 4, 10)
    return _filler(rng, 0, 3) + name + _filler(rng, 0, 4)


def generate_users(
    spec: CorpusSpec,
    female_names: Sequence[str] | None = None,
    male_names: Sequence[str] | None = None,
) -> list[UserRecord]:
    """Build ``spec.n_users`` records with ids ``u0 .. u{n-1}``.

    Exactly ``spec.n_unknown`` users are unlabeled and exactly
    ``spec.n_female_known`` of the labeled ones are F. Unlabeled users still
    get a hidden gender (drawn at ``female_fraction``) that shapes their
    username.
    """
    rng = random.Random(spec.seed)
    female_names = list(female_names) if female_names is not None else demo_terms("female_names")
    male_names = list(male_names) if male_names is not None else demo_terms("male_names")

    n = spec.n_users
    unknown = set(rng.sample(range(n), spec.n_unknown))
    known_idx = [i for i in range(n) if i not in unknown]
    female_known = set(rng.sample(known_idx, spec.n_female_known))

    width = len(str(max(n - 1, 0)))
    users = []
    for i in range(n):
        if i in unknown:
            hidden = Gender.F if rng.random() < spec.female_fraction else Gender.M
            label = Gender.UNKNOWN
        else:
            hidden = label = Gender.F if i in female_known else Gender.M
        if hidden is Gender.F:
            embed = female_names and rng.random() < spec.female_embed_rate
            name = rng.choice(female_names) if embed else None
        else:
            embed = male_names and rng.random() < spec.male_embed_rate
            name = rng.choice(male_names) if embed else None
        users.append(UserRecord(f"u{i:0{width}d}", _username(rng, name), label))
    return users


def generate_edges(users: Sequence[UserRecord], edges_per_user: int, seed: int = 0) -> list[tuple[str, str]]:
    """Random follower edges, ``edges_per_user`` per user, no self-loops."""
    rng = random.Random(seed)
    ids = [u.user_id for u in users]
    if len(ids) < 2:
        return []
    edges = []
    for follower in ids:
        for _ in range(edges_per_user):
            followee = follower
            while followee == follower:
                followee = rng.choice(ids)
            edges.append((follower, followee))
    return edges
