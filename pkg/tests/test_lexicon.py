"""Lexicon loading, merging, and the four-stage lookup fallback."""

import pytest

from usastag.errors import MalformedTag, MalformedTemplate
from usastag.lexicon import (
    MatchKind,
    SingleWordLexicon,
    load_mwe,
    load_pos_map,
    load_single_word,
    lookup,
)


def write_lexicon(tmp_path, text, name="lex.tsv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadSingleWord:
    def test_table_rows(self, table4_lexicon):
        lexicon = load_single_word(table4_lexicon)
        tags = lexicon.by_lemma_pos[("coffee-house", "NOUN")]
        assert [t.raw for t in tags] == ["H1/F1"]
        tags = lexicon.by_lemma_pos[("programming", "VERB")]
        assert [t.raw for t in tags] == ["Y2", "P1"]

    def test_empty_file(self, tmp_path):
        lexicon = load_single_word(write_lexicon(tmp_path, ""))
        assert len(lexicon) == 0
        assert lookup(lexicon, "coffee", "NOUN", "coffee") == []

    def test_header_is_optional(self, tmp_path):
        with_header = load_single_word(write_lexicon(tmp_path, "lemma\tpos\ttags\nrun\tVERB\tM1\n"))
        without = load_single_word(write_lexicon(tmp_path, "run\tVERB\tM1\n", "b.tsv"))
        assert with_header.by_lemma_pos.keys() == without.by_lemma_pos.keys()

    def test_malformed_tag_carries_line_number(self, tmp_path):
        path = write_lexicon(tmp_path, "run\tVERB\tM1\nbad\tNOUN\tnot-a-tag\n")
        with pytest.raises(MalformedTag, match="line 2"):
            load_single_word(path)

    def test_short_row_rejected(self, tmp_path):
        with pytest.raises(MalformedTag, match="line 1"):
            load_single_word(write_lexicon(tmp_path, "run\tVERB\n"))

    def test_duplicate_rows_merge_in_order(self, tmp_path):
        path = write_lexicon(
            tmp_path,
            "run\tVERB\tM1 A5.1+\nrun\tVERB\tM1+ X8 M1\n",
        )
        lexicon = load_single_word(path)
        tags = lexicon.by_lemma_pos[("run", "VERB")]
        # Second row's M1 variants collapse onto the first occurrence.
        assert [t.raw for t in tags] == ["M1", "A5.1+", "X8"]

    def test_by_lemma_unions_pos_rows(self, tmp_path):
        path = write_lexicon(tmp_path, "run\tVERB\tM1\nrun\tNOUN\tK5.1 M1\n")
        lexicon = load_single_word(path)
        assert [t.raw for t in lexicon.by_lemma["run"]] == ["M1", "K5.1"]

    def test_every_pos_entry_reachable_via_lemma(self, single_word_path):
        lexicon = load_single_word(single_word_path)
        for (lemma, _), tags in lexicon.by_lemma_pos.items():
            lemma_cores = {t.core for t in lexicon.by_lemma[lemma]}
            assert {t.core for t in tags} <= lemma_cores

    def test_pos_map_applied_at_load(self, tmp_path):
        lexicon_path = write_lexicon(tmp_path, "run\tVB\tM1\n")
        map_path = write_lexicon(tmp_path, "VB\tVERB\n", "pos.tsv")
        lexicon = load_single_word(lexicon_path, load_pos_map(map_path))
        assert ("run", "VERB") in lexicon.by_lemma_pos
        assert ("run", "VB") not in lexicon.by_lemma_pos


class TestLoadMWE:
    def test_table_rows(self, table5_mwe):
        entries = load_mwe(table5_mwe)
        assert [e.template for e in entries] == ["*_* Ocean_NOUN", "*_VERB over_ADV"]
        assert [t.raw for t in entries[1].tags] == ["T2-", "M1", "M6"]
        assert len(entries[0].pattern) == 2

    def test_single_slot_rejected(self, tmp_path):
        path = write_lexicon(tmp_path, "Ocean_NOUN\tZ2\n")
        with pytest.raises(MalformedTemplate, match="line 1"):
            load_mwe(path)

    def test_missing_underscore_rejected(self, tmp_path):
        path = write_lexicon(tmp_path, "Ocean NOUN_X\tZ2\n")
        with pytest.raises(MalformedTemplate):
            load_mwe(path)

    def test_pos_map_rewrites_literal_slots(self, tmp_path):
        lexicon_path = write_lexicon(tmp_path, "*_VB over_RB\tT2-\n")
        entries = load_mwe(lexicon_path, {"VB": "VERB", "RB": "ADV"})
        assert entries[0].template == "*_VERB over_ADV"


class TestLookup:
    @pytest.fixture
    def lexicon(self, tmp_path):
        path = write_lexicon(
            tmp_path,
            "coffee-house\tNOUN\tH1/F1\n"
            "pacific\tADJ\tW3\n"
            "erik\tNOUN\tZ1mf\n",
        )
        return load_single_word(path)

    def test_lemma_pos_hit(self, lexicon):
        hits = lookup(lexicon, "coffee-house", "NOUN", "Coffee-house")
        assert hits[0][0] is MatchKind.LEMMA_POS
        assert [t.raw for t in hits[0][1]] == ["H1/F1"]

    def test_total_miss(self, lexicon):
        assert lookup(lexicon, "xyzzy", "NOUN", "xyzzy") == []

    def test_lowercased_token_stage(self, lexicon):
        # Lemma "Pacific" misses (case-sensitive); the lowercased token hits.
        hits = lookup(lexicon, "Pacific", "ADJ", "Pacific")
        assert hits[0][0] is MatchKind.TOKEN_POS

    def test_pos_dropped_stage(self, lexicon):
        hits = lookup(lexicon, "coffee-house", "VERB", "coffee-house")
        assert hits[0][0] is MatchKind.LEMMA

    def test_lowercased_lemma_stage(self, lexicon):
        hits = lookup(lexicon, "Erik", "PROPN", "Erik")
        assert hits[0][0] is MatchKind.LEMMA_LOWER

    def test_fallback_order_by_enumeration(self, tmp_path):
        # Two-row fixture: brute-force the four stages and compare against
        # lookup() for every combination of inputs.
        path = write_lexicon(tmp_path, "walk\tVERB\tM1\nWalk\tNOUN\tM1.Q\n".replace("M1.Q", "M1"))
        lexicon = load_single_word(path)
        cases = [
            ("walk", "VERB", "Walk"),
            ("Walk", "NOUN", "WALK"),
            ("walk", "NOUN", "Walk"),
            ("Walk", "VERB", "walking"),
            ("stroll", "VERB", "Stroll"),
        ]
        for lemma, pos, token in cases:
            stages = []
            seen = set()
            for kind, key, table in [
                (MatchKind.LEMMA_POS, (lemma, pos), lexicon.by_lemma_pos),
                (MatchKind.TOKEN_POS, (token.lower(), pos), lexicon.by_lemma_pos),
                (MatchKind.LEMMA, lemma, lexicon.by_lemma),
                (MatchKind.LEMMA_LOWER, lemma.lower(), lexicon.by_lemma),
            ]:
                marker = (id(table), key)
                if marker in seen:
                    continue
                seen.add(marker)
                if key in table:
                    stages.append(kind)
            assert [kind for kind, _ in lookup(lexicon, lemma, pos, token)] == stages

    def test_no_duplicate_stage_for_same_key(self, lexicon):
        # token.lower() == lemma with the same POS collapses stages 1 and 2,
        # and lemma == lemma.lower() collapses stages 3 and 4.
        hits = lookup(lexicon, "erik", "NOUN", "erik")
        assert [kind for kind, _ in hits] == [MatchKind.LEMMA_POS, MatchKind.LEMMA]


def test_fixture_lexicons_load(single_word_path, mwe_path):
    lexicon = load_single_word(single_word_path)
    assert len(lexicon) > 0
    entries = load_mwe(mwe_path)
    assert all(len(e.pattern) >= 2 for e in entries)
