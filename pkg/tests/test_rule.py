"""Rule tagger ranking, provenance, and the estimator surface."""

import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from usastag.lexicon import load_mwe, load_single_word
from usastag.rule import Provenance, RuleTagger, tag_sentence


@pytest.fixture
def single_lexicon(table4_lexicon):
    return load_single_word(table4_lexicon)


@pytest.fixture
def mwe_entries(table5_mwe):
    return load_mwe(table5_mwe)


class TestTagSentence:
    def test_pacific_ocean_both_tagged(self, single_lexicon, mwe_entries):
        tokens = [("Pacific", "Pacific", "PROPN"), ("Ocean", "Ocean", "NOUN")]
        predictions = tag_sentence(tokens, single_lexicon, mwe_entries)
        for prediction in predictions:
            assert prediction.provenance is Provenance.MWE
            assert [t.raw for t in prediction.candidates] == ["Z2"]

    def test_single_word_order_preserved(self, single_lexicon):
        predictions = tag_sentence(
            [("programming", "programming", "VERB")], single_lexicon
        )
        assert predictions[0].provenance is Provenance.SINGLE_WORD
        assert [t.raw for t in predictions[0].candidates] == ["Y2", "P1"]

    def test_total_miss_is_z99(self, single_lexicon):
        predictions = tag_sentence([("xyzzy", "xyzzy", "NOUN")], single_lexicon)
        assert predictions[0].provenance is Provenance.UNMATCHED
        assert [t.raw for t in predictions[0].candidates] == ["Z99"]

    def test_mwe_preempts_single_word(self, tmp_path):
        (tmp_path / "sw.tsv").write_text("ocean\tNOUN\tW3\n", encoding="utf-8")
        (tmp_path / "mwe.tsv").write_text("*_* Ocean_NOUN\tZ2\n", encoding="utf-8")
        lexicon = load_single_word(tmp_path / "sw.tsv")
        entries = load_mwe(tmp_path / "mwe.tsv")
        tokens = [("Pacific", "Pacific", "PROPN"), ("Ocean", "ocean", "NOUN")]
        predictions = tag_sentence(tokens, lexicon, entries)
        assert predictions[1].provenance is Provenance.MWE
        assert [t.raw for t in predictions[1].candidates] == ["Z2"]

    def test_punctuation_pseudo_prediction(self, single_lexicon):
        predictions = tag_sentence([(",", ",", "PUNCT")], single_lexicon)
        assert predictions[0].provenance is Provenance.PUNCTUATION
        assert predictions[0].candidates == ()
        assert predictions[0].top_strings() == ["PUNC"]

    def test_no_duplicate_cores(self, tmp_path):
        (tmp_path / "sw.tsv").write_text("run\tVERB\tM1 M1+ X8\n", encoding="utf-8")
        lexicon = load_single_word(tmp_path / "sw.tsv")
        predictions = tag_sentence([("run", "run", "VERB")], lexicon)
        cores = [t.core for t in predictions[0].candidates]
        assert len(cores) == len(set(cores))

    def test_pure_function(self, single_lexicon, mwe_entries):
        tokens = [("Pacific", "Pacific", "PROPN"), ("Ocean", "Ocean", "NOUN")]
        first = tag_sentence(tokens, single_lexicon, mwe_entries)
        second = tag_sentence(tokens, single_lexicon, mwe_entries)
        assert first == second

    def test_only_first_stage_contributes(self, tmp_path):
        (tmp_path / "sw.tsv").write_text(
            "walk\tVERB\tM1\nwalk\tNOUN\tK5.1\n", encoding="utf-8"
        )
        lexicon = load_single_word(tmp_path / "sw.tsv")
        predictions = tag_sentence([("walk", "walk", "VERB")], lexicon)
        # The lemma+POS stage wins; the POS-agnostic union never merges in.
        assert [t.raw for t in predictions[0].candidates] == ["M1"]


class TestRuleTaggerEstimator:
    def test_fit_predict(self, table4_lexicon, table5_mwe):
        tagger = RuleTagger(single_lexicon=str(table4_lexicon), mwe_lexicon=str(table5_mwe))
        tagger.fit()
        out = tagger.predict([[("Pacific", "Pacific", "PROPN"), ("Ocean", "Ocean", "NOUN")]])
        assert out == [["Z2", "Z2"]]

    def test_accepts_corpus_tokens(self, table4_lexicon):
        from usastag.corpus import CorpusToken

        tagger = RuleTagger(single_lexicon=str(table4_lexicon)).fit()
        sentence = [CorpusToken("programming", "programming", "VERB")]
        assert tagger.predict([sentence]) == [["Y2"]]

    def test_unfitted_raises(self, table4_lexicon):
        tagger = RuleTagger(single_lexicon=str(table4_lexicon))
        with pytest.raises(NotFittedError):
            tagger.predict([[("a", "a", "NOUN")]])

    def test_clone_and_get_params(self, table4_lexicon):
        tagger = RuleTagger(single_lexicon=str(table4_lexicon), pos_map=None)
        cloned = clone(tagger)
        assert cloned.get_params()["single_lexicon"] == str(table4_lexicon)

    def test_loaded_objects_accepted(self, single_lexicon, mwe_entries):
        tagger = RuleTagger(single_lexicon=single_lexicon, mwe_lexicon=mwe_entries).fit()
        assert tagger.predict([[("programming", "programming", "VERB")]]) == [["Y2"]]

    def test_custom_punctuation_set(self, single_lexicon):
        tagger = RuleTagger(single_lexicon=single_lexicon, punctuation_pos=("PUNKT",)).fit()
        ranked = tagger.predict_ranked([[("!", "!", "PUNKT"), (",", ",", "PUNCT")]])[0]
        assert ranked[0].provenance is Provenance.PUNCTUATION
        assert ranked[1].provenance is Provenance.UNMATCHED
