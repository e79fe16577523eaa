"""Lexicon-driven tagging: ranked candidate tags for every token.

Ranking follows the lexicon heuristics: an accepted MWE match outranks
any single-word entry for the tokens it covers, and within a lookup
stage candidate order is the lexicon file order (first tag most likely).
Tokens with no lexicon entry receive the unmatched tag Z99.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from . import lexicon as lexicon_mod
from . import mwe
from .lexicon import MWEEntry, SingleWordLexicon, load_mwe, load_pos_map, load_single_word
from .tags import ParsedTag, parse_tag
from .validation import check_sentences

__all__ = [
    "DEFAULT_PUNCTUATION_POS",
    "InputToken",
    "Provenance",
    "RankedPrediction",
    "RuleTagger",
    "UNMATCHED_TAG",
    "tag_sentence",
]

#: POS values treated as punctuation unless the caller overrides them.
DEFAULT_PUNCTUATION_POS = frozenset({"PUNCT", "PUNC"})

#: The tag emitted when no lexicon entry applies.
UNMATCHED_TAG = parse_tag("Z99")


class Provenance(enum.Enum):
    """Which component produced a token's candidate list."""

    MWE = "mwe"
    SINGLE_WORD = "single-word"
    NEURAL = "neural"
    UNMATCHED = "unmatched"
    PUNCTUATION = "punctuation"


@dataclass(frozen=True)
class InputToken:
    text: str
    lemma: str
    pos: str
    index: int

    @property
    def triple(self) -> tuple[str, str, str]:
        return (self.text, self.lemma, self.pos)


@dataclass(frozen=True)
class RankedPrediction:
    """Ordered candidate tag groups for one token, with provenance."""

    token_index: int
    candidates: tuple[ParsedTag, ...]
    provenance: Provenance

    @property
    def top(self) -> Optional[ParsedTag]:
        return self.candidates[0] if self.candidates else None

    def top_strings(self, k: Optional[int] = None) -> list[str]:
        """The first ``k`` candidate tags as raw strings (``PUNC`` for
        punctuation pseudo-predictions)."""
        if self.provenance is Provenance.PUNCTUATION:
            return ["PUNC"]
        picked = self.candidates if k is None else self.candidates[:k]
        return [tag.raw or tag.core for tag in picked]


def _as_input_tokens(sentence: Sequence) -> list[InputToken]:
    tokens = []
    for index, item in enumerate(sentence):
        if isinstance(item, InputToken):
            tokens.append(item)
        else:
            text, lemma, pos = item
            tokens.append(InputToken(text, lemma, pos, index))
    return tokens


def _dedupe_by_core(tags: Sequence[ParsedTag]) -> tuple[ParsedTag, ...]:
    seen = set()
    unique = []
    for tag in tags:
        if tag.core not in seen:
            seen.add(tag.core)
            unique.append(tag)
    return tuple(unique)


def tag_sentence(
    tokens: Sequence,
    single_lexicon: SingleWordLexicon,
    mwe_entries: Sequence[MWEEntry] = (),
    punctuation_pos: frozenset = DEFAULT_PUNCTUATION_POS,
) -> list[RankedPrediction]:
    """Rank candidate tag groups for each token of one sentence.

    Pure in (tokens, lexicons): sentences may be tagged concurrently over
    shared frozen lexicons.  Per token: punctuation POS yields a
    punctuation pseudo-prediction; a covering MWE match yields that
    entry's tags; otherwise the first successful single-word lookup stage
    yields its tags; otherwise the single candidate Z99.
    """
    tokens = _as_input_tokens(tokens)
    triples = [t.triple for t in tokens]
    matches = mwe.match_sentence([entry.pattern for entry in mwe_entries], triples)
    covering: dict[int, MWEEntry] = {}
    for match in matches:
        entry = mwe_entries[match.pattern_index]
        for position in range(match.start, match.start + match.length):
            covering[position] = entry

    predictions = []
    for token in tokens:
        if token.pos in punctuation_pos:
            predictions.append(RankedPrediction(token.index, (), Provenance.PUNCTUATION))
            continue
        entry = covering.get(token.index)
        if entry is not None:
            predictions.append(
                RankedPrediction(token.index, _dedupe_by_core(entry.tags), Provenance.MWE)
            )
            continue
        stages = lexicon_mod.lookup(single_lexicon, token.lemma, token.pos, token.text)
        if stages:
            _, tags = stages[0]
            predictions.append(
                RankedPrediction(token.index, _dedupe_by_core(tags), Provenance.SINGLE_WORD)
            )
        else:
            predictions.append(
                RankedPrediction(token.index, (UNMATCHED_TAG,), Provenance.UNMATCHED)
            )
    return predictions


class RuleTagger(BaseEstimator):
    """Dictionary-lookup semantic tagger over frozen lexicons.

    Parameters may be paths to lexicon TSV files or already-loaded
    objects; :meth:`fit` resolves them.  The estimator is stateless
    beyond the loaded lexicons, so ``fit`` needs no data.

    >>> tagger = RuleTagger(single_lexicon="lexicon.tsv").fit()
    >>> tagger.predict([[("Coffee", "coffee", "NOUN")]])
    """

    def __init__(
        self,
        single_lexicon: Union[str, SingleWordLexicon, None] = None,
        mwe_lexicon: Union[str, Sequence[MWEEntry], None] = None,
        pos_map: Union[str, dict, None] = None,
        punctuation_pos: Sequence[str] = tuple(sorted(DEFAULT_PUNCTUATION_POS)),
    ):
        self.single_lexicon = single_lexicon
        self.mwe_lexicon = mwe_lexicon
        self.pos_map = pos_map
        self.punctuation_pos = punctuation_pos

    def fit(self, X=None, y=None) -> "RuleTagger":
        """Load and freeze the configured lexicons."""
        pos_map = self.pos_map
        if isinstance(pos_map, (str, bytes)) or hasattr(pos_map, "__fspath__"):
            pos_map = load_pos_map(pos_map)
        if self.single_lexicon is None:
            self.single_lexicon_ = SingleWordLexicon()
        elif isinstance(self.single_lexicon, SingleWordLexicon):
            self.single_lexicon_ = self.single_lexicon
        else:
            self.single_lexicon_ = load_single_word(self.single_lexicon, pos_map)
        if self.mwe_lexicon is None:
            self.mwe_entries_ = []
        elif isinstance(self.mwe_lexicon, (str, bytes)) or hasattr(self.mwe_lexicon, "__fspath__"):
            self.mwe_entries_ = load_mwe(self.mwe_lexicon, pos_map)
        else:
            self.mwe_entries_ = list(self.mwe_lexicon)
        self.punctuation_pos_ = frozenset(self.punctuation_pos)
        return self

    def predict_ranked(self, X, k: Optional[int] = None) -> list[list[RankedPrediction]]:
        """Ranked predictions per sentence; ``k`` is ignored (the full
        lexicon candidate list is always returned)."""
        check_is_fitted(self, "single_lexicon_")
        return [
            tag_sentence(sentence, self.single_lexicon_, self.mwe_entries_, self.punctuation_pos_)
            for sentence in check_sentences(X)
        ]

    def predict(self, X) -> list[list[str]]:
        """Top-1 tag string per token for each sentence."""
        return [
            [prediction.top_strings(1)[0] for prediction in sentence]
            for sentence in self.predict_ranked(X)
        ]
