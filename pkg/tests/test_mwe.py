"""MWE template compilation and sentence matching."""

import numpy as np
import pytest

from usastag.errors import MalformedTemplate
from usastag.mwe import compile_template, find_matches, match_sentence


def triple(word, pos="NOUN", lemma=None):
    return (word, lemma if lemma is not None else word.lower(), pos)


class TestCompile:
    def test_ocean_template(self):
        pattern = compile_template("*_* Ocean_NOUN")
        assert len(pattern) == 2
        assert pattern.slots[0].word_part == "*"
        assert pattern.slots[1].word_part == "Ocean"
        assert pattern.slots[1].pos_part == "NOUN"

    def test_verb_over_template(self):
        pattern = compile_template("*_VERB over_ADV")
        assert pattern.slots[0].pos_part == "VERB"
        assert pattern.slots[1].word_part == "over"

    @pytest.mark.parametrize("bad", ["Ocean", "Ocean_NOUN", "a_b_c d_e", "", "one_X"])
    def test_malformed(self, bad):
        with pytest.raises(MalformedTemplate):
            compile_template(bad)


class TestMatching:
    def test_pacific_ocean(self):
        pattern = compile_template("*_* Ocean_NOUN")
        tokens = [("Pacific", "Pacific", "PROPN"), ("Ocean", "Ocean", "NOUN")]
        matches = match_sentence([pattern], tokens)
        assert len(matches) == 1
        assert (matches[0].start, matches[0].length) == (0, 2)

    def test_no_ocean_no_match(self):
        pattern = compile_template("*_* Ocean_NOUN")
        tokens = [triple("Atlantic"), triple("coast")]
        assert match_sentence([pattern], tokens) == []

    def test_word_part_checks_token_or_lemma(self):
        pattern = compile_template("be_VERB over_ADV")
        tokens = [("was", "be", "VERB"), ("over", "over", "ADV")]
        assert len(match_sentence([pattern], tokens)) == 1

    def test_within_slot_wildcard(self):
        pattern = compile_template("dis*_VERB member_NOUN")
        tokens = [("dismembered", "dismember", "VERB"), ("member", "member", "NOUN")]
        assert len(match_sentence([pattern], tokens)) == 1
        tokens = [("remembered", "remember", "VERB"), ("member", "member", "NOUN")]
        assert match_sentence([pattern], tokens) == []

    def test_longer_overlapping_match_wins(self):
        three = compile_template("a_X b_X c_X")
        two = compile_template("b_X c_X")
        tokens = [(w, w, "X") for w in ["a", "b", "c", "d", "e"]]
        matches = match_sentence([two, three], tokens)
        assert len(matches) == 1
        assert matches[0].pattern is three

    def test_selection_rule_against_enumeration(self):
        # Brute-force oracle on a 5-token fixture: gather every candidate
        # span, then greedily accept by (longer, leftmost, file order).
        patterns = [
            compile_template("a_X b_X"),
            compile_template("b_X c_X d_X"),
            compile_template("d_X e_X"),
            compile_template("c_X d_X"),
        ]
        tokens = [(w, w, "X") for w in ["a", "b", "c", "d", "e"]]
        candidates = []
        for index, pattern in enumerate(patterns):
            for start in find_matches(pattern, tokens):
                candidates.append((len(pattern), start, index))
        expected = []
        used = set()
        for length, start, index in sorted(candidates, key=lambda c: (-c[0], c[1], c[2])):
            span = set(range(start, start + length))
            if span & used:
                continue
            used |= span
            expected.append((start, length, index))
        got = [(m.start, m.length, m.pattern_index) for m in match_sentence(patterns, tokens)]
        assert got == sorted(expected)

    def test_leftmost_then_file_order_ties(self):
        first = compile_template("a_X b_X")
        second = compile_template("a_X *_X")
        tokens = [(w, w, "X") for w in ["a", "b"]]
        matches = match_sentence([first, second], tokens)
        assert matches[0].pattern is first
        matches = match_sentence([second, first], tokens)
        assert matches[0].pattern is second

    def test_all_wildcard_pattern_matches_every_window(self):
        pattern = compile_template("*_* *_* *_*")
        tokens = [triple(w) for w in "abcdef"]
        assert find_matches(pattern, tokens) == [0, 1, 2, 3]

    def test_accepted_matches_never_overlap(self):
        rng = np.random.default_rng(5)
        words = ["alpha", "beta", "gamma", "delta"]
        for _ in range(200):
            tokens = [triple(words[i]) for i in rng.integers(0, 4, size=8)]
            patterns = [
                compile_template(f"{words[rng.integers(0, 4)]}_NOUN *_*"),
                compile_template("*_* *_* *_*"),
                compile_template(f"{words[rng.integers(0, 4)]}_* {words[rng.integers(0, 4)]}_NOUN"),
            ]
            matches = match_sentence(patterns, tokens)
            seen = set()
            for match in matches:
                span = set(range(match.start, match.start + match.length))
                assert not (span & seen)
                seen |= span
            assert matches == match_sentence(patterns, tokens)

    def test_case_fallback_only_when_exact_pass_empty(self):
        pattern = compile_template("ocean_NOUN *_*")
        tokens = [("Ocean", "Ocean", "NOUN"), ("floor", "floor", "NOUN")]
        assert len(match_sentence([pattern], tokens)) == 1
        # An exact match anywhere suppresses the folded pass for that pattern.
        tokens = [
            ("ocean", "ocean", "NOUN"),
            ("x", "x", "NOUN"),
            ("Ocean", "Ocean", "NOUN"),
            ("floor", "floor", "NOUN"),
        ]
        matches = match_sentence([pattern], tokens)
        assert [m.start for m in matches] == [0]

    def test_pos_is_never_case_folded(self):
        pattern = compile_template("ocean_noun *_*")
        tokens = [("Ocean", "Ocean", "NOUN"), ("floor", "floor", "NOUN")]
        assert match_sentence([pattern], tokens) == []

    def test_empty_pattern_list(self):
        assert match_sentence([], [triple("a")]) == []
