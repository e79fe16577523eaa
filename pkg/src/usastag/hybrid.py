"""Rule-first tagging with neural back-off.

The rule tagger's output is authoritative whenever a lexicon produced
it; the neural model steps in only for tokens no lexicon entry covers,
so hybrid output never contains the unmatched tag Z99.  The trigger is
strictly "no lexicon match": the rule model carries no confidence
scores, so there is nothing softer to threshold on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError
from sklearn.utils.validation import check_is_fitted

from .biencoder import BiEncoderTagger
from .rule import Provenance, RankedPrediction, RuleTagger
from .validation import check_sentences

__all__ = ["HybridConfig", "HybridTagger", "tag_hybrid"]


@dataclass(frozen=True)
class HybridConfig:
    """How many neural candidates to emit when backing off."""

    k_backoff: int = 5

    def __post_init__(self):
        if self.k_backoff < 1:
            raise ValueError(f"k_backoff must be >= 1, got {self.k_backoff}")


def tag_hybrid(
    tokens: Sequence,
    rule_tagger: RuleTagger,
    neural: BiEncoderTagger,
    config: HybridConfig = HybridConfig(),
) -> list[RankedPrediction]:
    """Tag one sentence, backing off to the neural model per token.

    Rule predictions with MWE or single-word provenance pass through
    unchanged (the same objects); only unmatched tokens are replaced by
    the neural top-k, so hybrid coverage is a superset of rule coverage.
    """
    sentence = check_sentences([tokens])[0]
    rule_predictions = rule_tagger.predict_ranked([sentence])[0]
    texts = [text for text, _, _ in sentence]
    merged = []
    for prediction in rule_predictions:
        if prediction.provenance is Provenance.UNMATCHED:
            merged.append(
                neural._predict_token(texts, prediction.token_index, config.k_backoff)
            )
        else:
            merged.append(prediction)
    return merged


class HybridTagger(BaseEstimator):
    """Composition of a fitted rule tagger and a fitted neural tagger."""

    def __init__(
        self,
        rule: Optional[RuleTagger] = None,
        neural: Optional[BiEncoderTagger] = None,
        k_backoff: int = 5,
    ):
        self.rule = rule
        self.neural = neural
        self.k_backoff = k_backoff

    def fit(self, X=None, y=None) -> "HybridTagger":
        """Validate the components; fits the rule side if still unfitted.

        The neural side must already be trained or restored from a
        checkpoint: refitting it here would need silver data this
        estimator does not own.
        """
        if self.rule is None or self.neural is None:
            raise ValueError("HybridTagger needs both a rule and a neural component")
        self.rule_ = self.rule
        if not hasattr(self.rule_, "single_lexicon_"):
            self.rule_.fit()
        try:
            check_is_fitted(self.neural, "model_")
        except NotFittedError:
            raise NotFittedError(
                "the neural component must be fitted or loaded from a checkpoint first"
            ) from None
        self.neural_ = self.neural
        self.config_ = HybridConfig(self.k_backoff)
        return self

    def predict_ranked(self, X, k: Optional[int] = None) -> list[list[RankedPrediction]]:
        check_is_fitted(self, "config_")
        config = self.config_ if k is None else HybridConfig(k)
        return [
            tag_hybrid(sentence, self.rule_, self.neural_, config)
            for sentence in check_sentences(X)
        ]

    def predict(self, X) -> list[list[str]]:
        """Top-1 tag string per token."""
        return [
            [prediction.top_strings(1)[0] for prediction in sentence]
            for sentence in self.predict_ranked(X)
        ]
