"""Gold preprocessing and top-n accuracy.

A prediction hits when some candidate among its first n has exactly the
gold tag's membership, affixes ignored: F2/O2 against gold F2/O1 is a
miss, and a single-label prediction can never match a multi-membership
gold.  Membership comparison is order-sensitive by default; the
``unordered`` switch relaxes it to set equality for sensitivity checks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence, Union

from .corpus import Document
from .errors import AlignmentError, EmptyCorpus
from .rule import Provenance, RankedPrediction
from .tags import ParsedTag, SenseInventory, default_inventory, is_discardable, parse_tag

__all__ = [
    "CorpusStatistics",
    "EvalReport",
    "GoldToken",
    "corpus_statistics",
    "evaluate_run",
    "preprocess_gold",
    "top_n_accuracy",
]


@dataclass(frozen=True)
class GoldToken:
    """One evaluable token: affix-free gold tag at a flat corpus position."""

    token_index: int
    gold: ParsedTag
    multi_membership: bool


@dataclass(frozen=True)
class CorpusStatistics:
    tokens: int
    labelled: int
    multi_membership: int

    @property
    def multi_membership_pct(self) -> float:
        return 100.0 * self.multi_membership / self.labelled if self.labelled else 0.0


def _gold_for_token(tags: Optional[Sequence[str]], inventory: SenseInventory) -> Optional[ParsedTag]:
    """The evaluable gold tag for one token, or None to drop it.

    Only the first tag group counts; punctuation markers, Z99 bearers,
    and tags with any component outside the inventory are dropped.
    """
    if not tags:
        return None
    first = tags[0]
    if is_discardable(first):
        return None
    parsed = parse_tag(first)
    if any(label not in inventory for label in parsed.membership):
        return None
    return parse_tag(parsed.core)


def preprocess_gold(
    documents: Iterable[Document], inventory: Optional[SenseInventory] = None
) -> list[GoldToken]:
    """Flatten a gold corpus into evaluable tokens.

    ``token_index`` counts every corpus token (including dropped ones) in
    reading order, matching the flat indexing of `evaluate_run`'s
    predictions.
    """
    inventory = inventory or default_inventory()
    gold = []
    position = 0
    for document in documents:
        for sentence in document.sentences:
            for token in sentence:
                tag = _gold_for_token(token.tags, inventory)
                if tag is not None:
                    gold.append(GoldToken(position, tag, tag.is_multi_membership))
                position += 1
    return gold


def corpus_statistics(
    documents: Sequence[Document], inventory: Optional[SenseInventory] = None
) -> CorpusStatistics:
    """Token counts in the shape of the evaluation-data statistics."""
    total = sum(len(sentence) for document in documents for sentence in document.sentences)
    gold = preprocess_gold(documents, inventory)
    return CorpusStatistics(total, len(gold), sum(1 for g in gold if g.multi_membership))


def _memberships_equal(predicted: ParsedTag, gold: ParsedTag, unordered: bool) -> bool:
    if unordered:
        return sorted(predicted.membership) == sorted(gold.membership)
    return predicted.membership == gold.membership


def top_n_accuracy(
    gold: Sequence[GoldToken],
    predictions: Sequence[RankedPrediction],
    n: int,
    unordered: bool = False,
) -> float:
    """Fraction of gold tokens whose tag appears in the first n candidates."""
    if not gold:
        raise EmptyCorpus("no gold tokens to score")
    by_index = {prediction.token_index: prediction for prediction in predictions}
    hits = 0
    for gold_token in gold:
        prediction = by_index.get(gold_token.token_index)
        if prediction is None:
            raise AlignmentError(f"no prediction for token index {gold_token.token_index}")
        hits += any(
            _memberships_equal(candidate, gold_token.gold, unordered)
            for candidate in prediction.candidates[:n]
        )
    return hits / len(gold)


@dataclass
class EvalReport:
    """Per-n accuracy with counts and a provenance breakdown."""

    tokens: int
    labelled: int
    multi_membership: int
    accuracies: dict[int, float]
    provenance_counts: dict[str, int] = field(default_factory=dict)
    model: str = ""
    corpus: str = ""

    def format_table(self) -> str:
        pct = self.multi_membership / self.labelled * 100 if self.labelled else 0.0
        lines = [
            f"model={self.model or '-'}  corpus={self.corpus or '-'}",
            f"tokens={self.tokens}  labelled={self.labelled}  "
            f"multi-membership={self.multi_membership} ({pct:.1f}%)",
            "  n   accuracy",
        ]
        for n in sorted(self.accuracies):
            lines.append(f"  {n:<3} {self.accuracies[n]:.4f}")
        if self.provenance_counts:
            breakdown = "  ".join(
                f"{name}={count}" for name, count in sorted(self.provenance_counts.items())
            )
            lines.append(f"provenance: {breakdown}")
        return "\n".join(lines)

    def json_records(self) -> list[str]:
        """One machine-readable line per n value."""
        records = []
        for n in sorted(self.accuracies):
            records.append(
                json.dumps(
                    {
                        "model": self.model,
                        "corpus": self.corpus,
                        "n": n,
                        "accuracy": self.accuracies[n],
                        "tokens": self.tokens,
                        "labelled": self.labelled,
                        "multi_membership": self.multi_membership,
                    },
                    ensure_ascii=False,
                )
            )
        return records


def evaluate_run(
    documents: Sequence[Document],
    tagger,
    n_values: Sequence[int] = (1, 5),
    inventory: Optional[SenseInventory] = None,
    unordered: bool = False,
    model_name: str = "",
    corpus_name: str = "",
) -> EvalReport:
    """Tag a gold corpus and score it at each requested n.

    ``tagger`` is anything with ``predict_ranked(sentences, k)`` -- the
    rule, neural, and hybrid estimators all qualify.
    """
    inventory = inventory or default_inventory()
    sentences = [sentence for document in documents for sentence in document.sentences]
    if not sentences:
        raise EmptyCorpus("corpus has no sentences")
    ranked = tagger.predict_ranked(sentences, k=max(n_values))

    flat: list[RankedPrediction] = []
    offset = 0
    for sentence, predictions in zip(sentences, ranked):
        for prediction in predictions:
            flat.append(replace(prediction, token_index=offset + prediction.token_index))
        offset += len(sentence)

    gold = preprocess_gold(documents, inventory)
    accuracies = {n: top_n_accuracy(gold, flat, n, unordered) for n in n_values}

    by_index = {prediction.token_index: prediction for prediction in flat}
    provenance_counts: dict[str, int] = {}
    for gold_token in gold:
        name = by_index[gold_token.token_index].provenance.value
        provenance_counts[name] = provenance_counts.get(name, 0) + 1

    return EvalReport(
        tokens=offset,
        labelled=len(gold),
        multi_membership=sum(1 for g in gold if g.multi_membership),
        accuracies=accuracies,
        provenance_counts=provenance_counts,
        model=model_name,
        corpus=corpus_name,
    )
