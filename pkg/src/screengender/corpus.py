"""User tables and follower edge lists.

User table format (UTF-8, LF or CRLF)::

    # optional comment lines
    user_id<TAB>username<TAB>gender

``gender`` is ``F``, ``M``, ``U`` or empty (both meaning unknown). Edge
lists hold ``follower_id<TAB>followee_id`` per line. Both loaders fail on
the first malformed line and report its number.
"""

from __future__ import annotations

import enum
import statistics
from collections import Counter
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

from ._io import Source, iter_lines, source_name
from .errors import IngestError


class Gender(str, enum.Enum):
    F = "F"
    M = "M"
    UNKNOWN = "U"

    @property
    def known(self) -> bool:
        return self is not Gender.UNKNOWN


_GENDER_TOKENS = {"F": Gender.F, "M": Gender.M, "U": Gender.UNKNOWN, "": Gender.UNKNOWN}


@dataclass(frozen=True)
class UserRecord:
    user_id: str
    username: str
    gender_label: Gender = Gender.UNKNOWN


def load_users(source: Source) -> list[UserRecord]:
    """Parse a user TSV into records, preserving file order."""
    name = source_name(source)
    users: list[UserRecord] = []
    first_seen: dict[str, int] = {}
    for lineno, line in iter_lines(source):
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise IngestError(f"expected 3 tab-separated fields, got {len(fields)}", name, lineno)
        user_id, username, token = fields
        if not user_id:
            raise IngestError("empty user_id", name, lineno)
        gender = _GENDER_TOKENS.get(token)
        if gender is None:
            raise IngestError(f"invalid gender {token!r} (expected F, M, U or empty)", name, lineno)
        if user_id in first_seen:
            raise IngestError(f"duplicate user_id {user_id!r} (first seen at line {first_seen[user_id]})", name, lineno)
        first_seen[user_id] = lineno
        users.append(UserRecord(user_id, username, gender))
    return users


def dump_users(users: Iterable[UserRecord], out: IO[str]) -> None:
    """Write ``users`` in the format :func:`load_users` reads."""
    for u in users:
        if "\t" in u.user_id or "\t" in u.username or "\n" in u.username or "\r" in u.username:
            raise ValueError(f"user {u.user_id!r} contains a tab or line break")
        if u.user_id.startswith("#"):
            raise ValueError(f"user_id {u.user_id!r} would be read back as a comment")
        out.write(f"{u.user_id}\t{u.username}\t{u.gender_label.value}\n")


def split_known(users: Iterable[UserRecord]) -> tuple[list[UserRecord], list[UserRecord]]:
    """Partition users into (labeled F/M, unknown), keeping order."""
    known: list[UserRecord] = []
    unknown: list[UserRecord] = []
    for u in users:
        (known if u.gender_label.known else unknown).append(u)
    return known, unknown


@dataclass(frozen=True)
class EdgeList:
    edges: tuple[tuple[str, str], ...]
    self_loops_dropped: int = 0
    dangling_endpoints: int = 0

    def __len__(self) -> int:
        return len(self.edges)


def load_edges(source: Source, users: Sequence[UserRecord] | None = None) -> EdgeList:
    """Parse a follower edge list.

    Self-loops are dropped and counted. Duplicate edges are kept. When
    ``users`` is given, every endpoint missing from it adds one to
    ``dangling_endpoints``; such edges are still retained.
    """
    name = source_name(source)
    known_ids = {u.user_id for u in users} if users is not None else None
    edges: list[tuple[str, str]] = []
    loops = dangling = 0
    for lineno, line in iter_lines(source):
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2 or not fields[0] or not fields[1]:
            raise IngestError("expected follower_id<TAB>followee_id", name, lineno)
        follower, followee = fields
        if follower == followee:
            loops += 1
            continue
        if known_ids is not None:
            dangling += (follower not in known_ids) + (followee not in known_ids)
        edges.append((follower, followee))
    return EdgeList(tuple(edges), loops, dangling)


@dataclass(frozen=True)
class DegreeSummary:
    min: int
    mean: float
    max: int


@dataclass(frozen=True)
class CorpusStats:
    total_users: int
    known_users: int
    unknown_users: int
    female_users: int
    male_users: int
    female_fraction_of_known: float | None
    edge_count: int
    in_degree: DegreeSummary | None
    out_degree: DegreeSummary | None

    def as_dict(self) -> dict:
        def deg(d: DegreeSummary | None):
            return None if d is None else {"min": d.min, "mean": d.mean, "max": d.max}

        return {
            "total_users": self.total_users,
            "known_users": self.known_users,
            "unknown_users": self.unknown_users,
            "female_users": self.female_users,
            "male_users": self.male_users,
            "female_fraction_of_known": self.female_fraction_of_known,
            "edge_count": self.edge_count,
            "in_degree": deg(self.in_degree),
            "out_degree": deg(self.out_degree),
        }


def corpus_stats(users: Sequence[UserRecord], edges: EdgeList | None = None) -> CorpusStats:
    """Label composition and degree summary.

    Degrees are counted only for users present in the table; fractions and
    degree summaries are ``None`` when there is nothing to summarize.
    """
    labels = Counter(u.gender_label for u in users)
    n_f, n_m = labels[Gender.F], labels[Gender.M]
    known = n_f + n_m
    edge_list = edges.edges if edges is not None else ()

    in_deg = dict.fromkeys((u.user_id for u in users), 0)
    out_deg = dict(in_deg)
    for follower, followee in edge_list:
        if follower in out_deg:
            out_deg[follower] += 1
        if followee in in_deg:
            in_deg[followee] += 1

    return CorpusStats(
        total_users=len(users),
        known_users=known,
        unknown_users=labels[Gender.UNKNOWN],
        female_users=n_f,
        male_users=n_m,
        female_fraction_of_known=n_f / known if known else None,
        edge_count=len(edge_list),
        in_degree=_summarize(in_deg.values()),
        out_degree=_summarize(out_deg.values()),
    )


def _summarize(values: Iterable[int]) -> DegreeSummary | None:
    vals = list(values)
    if not vals:
        return None
    return DegreeSummary(min(vals), statistics.fmean(vals), max(vals))
