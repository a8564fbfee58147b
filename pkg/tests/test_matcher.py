import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from screengender import (
    Category,
    LexiconError,
    Match,
    SelectionMode,
    SelectionPolicy,
    Term,
    brute_force_matches,
    build_lexicon,
    build_matcher,
    find_all_matches,
    select_best_match,
)
from screengender.lexicon import Lexicon

from helpers import make_lexicon

FIRST = SelectionPolicy(SelectionMode.FIRST_CATEGORY_WINS)
LONGEST = SelectionPolicy(SelectionMode.LONGEST_WINS)


def triples(matches):
    return [(m.term.text, m.start, m.end) for m in matches]


class TestBuildMatcher:
    def test_singleton(self):
        assert build_matcher(make_lexicon(FEMALE_NAME=["anna"])).pattern_count == 1

    def test_nested_both_fire(self, bert_robert):
        _, matcher = bert_robert
        assert matcher.pattern_count == 2
        assert {m.term.text for m in find_all_matches(matcher, "roberto")} == {"bert", "robert"}

    def test_immutable(self, bert_robert):
        _, matcher = bert_robert
        with pytest.raises(AttributeError):
            matcher.terms = ()

    def test_empty_lexicon_rejected(self):
        with pytest.raises(LexiconError):
            build_matcher(Lexicon(()))

    def test_large_random_lexicon_matches_naive_scan(self):
        rng = random.Random(7)
        alphabet = "abcdefgh"
        texts = {"".join(rng.choice(alphabet) for _ in range(rng.randint(2, 9))) for _ in range(5000)}
        lexicon = make_lexicon(FEMALE_NAME=sorted(texts))
        matcher = build_matcher(lexicon)
        for _ in range(1000):
            text = "".join(rng.choice(alphabet + "_1") for _ in range(rng.randint(0, 20)))
            assert find_all_matches(matcher, text) == brute_force_matches(lexicon, text)


class TestFindAllMatches:
    def test_nested_offsets(self, bert_robert):
        _, matcher = bert_robert
        assert triples(find_all_matches(matcher, "xrobertx")) == [("robert", 1, 7), ("bert", 3, 7)]

    def test_empty_text(self):
        assert find_all_matches(build_matcher(make_lexicon(FEMALE_NAME=["anna"])), "") == []

    def test_overlapping(self):
        lexicon = make_lexicon(FEMALE_NAME=["ann", "anna"])
        got = triples(find_all_matches(build_matcher(lexicon), "annanna"))
        # naive scan: ann at 0 and 3, anna at 0 and 3
        assert got == [("ann", 0, 3), ("anna", 0, 4), ("ann", 3, 6), ("anna", 3, 7)]

    def test_non_ascii_offsets_are_code_points(self):
        lexicon = make_lexicon(FEMALE_NAME=["sofía"])
        assert triples(find_all_matches(build_matcher(lexicon), "ñ_sofía")) == [("sofía", 2, 7)]


class TestBruteForce:
    @pytest.mark.parametrize(
        "terms, text",
        [(["bert", "robert"], "xrobertx"), (["anna"], ""), (["ann", "anna"], "annanna")],
    )
    def test_agrees_on_examples(self, terms, text):
        lexicon = make_lexicon(FEMALE_NAME=terms)
        assert brute_force_matches(lexicon, text) == find_all_matches(build_matcher(lexicon), text)

    def test_absent_term(self):
        assert brute_force_matches(make_lexicon(TOPIC=["a-long-term-not-present"]), "short") == []


@st.composite
def lexicon_and_text(draw, alphabet="abcd"):
    texts = draw(st.sets(st.text(alphabet=alphabet, min_size=2, max_size=6), min_size=1, max_size=60))
    cats = draw(st.lists(st.sampled_from(list(Category)), min_size=len(texts), max_size=len(texts)))
    lexicon = build_lexicon([(c, [t]) for c, t in zip(cats, sorted(texts))])
    text = draw(st.text(alphabet=alphabet, max_size=64))
    return lexicon, text


class TestProperties:
    @settings(max_examples=300, deadline=None)
    @given(lexicon_and_text())
    def test_automaton_equals_oracle(self, case):
        lexicon, text = case
        got = find_all_matches(build_matcher(lexicon), text)
        assert got == brute_force_matches(lexicon, text)
        for m in got:
            assert text[m.start:m.end] == m.term.text

    @settings(max_examples=200, deadline=None)
    @given(lexicon_and_text(), st.randoms(use_true_random=False))
    def test_selection_order_insensitive(self, case, rnd):
        lexicon, text = case
        matches = find_all_matches(build_matcher(lexicon), text)
        shuffled = list(matches)
        rnd.shuffle(shuffled)
        for policy in (FIRST, LONGEST):
            assert select_best_match(shuffled, policy) == select_best_match(matches, policy)
        best = select_best_match(matches, LONGEST)
        if matches:
            assert all(best.length >= m.length for m in matches)


def _m(text, cat, start):
    return Match(Term(text, cat), start, start + len(text))


class TestSelectBestMatch:
    matches = [_m("robert", Category.MALE_NAME, 1), _m("bert", Category.FEMALE_NAME, 3)]

    def test_first_category(self):
        assert select_best_match(self.matches, FIRST).term.text == "bert"

    def test_longest(self):
        assert select_best_match(self.matches, LONGEST).term.text == "robert"

    @pytest.mark.parametrize("policy", [FIRST, LONGEST])
    def test_empty(self, policy):
        assert select_best_match([], policy) is None

    def test_tie_break_chain(self):
        same_len = [_m("ab", Category.MALE_NAME, 0), _m("cd", Category.FEMALE_NAME, 5)]
        assert select_best_match(same_len, LONGEST).term.text == "cd"  # precedence
        same_cat = [_m("cd", Category.FEMALE_NAME, 4), _m("ab", Category.FEMALE_NAME, 6)]
        assert select_best_match(same_cat, LONGEST).term.text == "cd"  # earlier start
        same_start = [_m("zz", Category.TOPIC, 0), _m("aa", Category.TOPIC, 0)]
        assert select_best_match(same_start, FIRST).term.text == "aa"  # text order

    def test_first_category_prefers_longer_within_category(self):
        ms = [_m("ann", Category.FEMALE_NAME, 0), _m("anna", Category.FEMALE_NAME, 0), _m("annabert", Category.MALE_NAME, 0)]
        assert select_best_match(ms, FIRST).term.text == "anna"
