"""Shared test builders."""

import io

from screengender import Category, Gender, UserRecord, build_lexicon


def make_lexicon(**lists):
    """``make_lexicon(FEMALE_NAME=["bert"], MALE_NAME=["robert"])``."""
    return build_lexicon([(Category[name], terms) for name, terms in lists.items()])


def users_from(rows):
    """Records from (user_id, username, gender-letter) tuples."""
    return [UserRecord(uid, name, Gender(g)) for uid, name, g in rows]


def stream(text: str) -> io.StringIO:
    return io.StringIO(text)
