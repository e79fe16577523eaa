"""Silver training data from a rule-tagged corpus.

A tagged corpus becomes training examples by splitting multi-membership
tags into separate positive labels, dropping punctuation and unmatched
tokens, and drawing three negative labels per positive: one each from
the training split's tag distribution, its inverse, and a log-scaled
inverse.  Negatives never collide with a token's positives.
"""

from __future__ import annotations

import enum
import hashlib
import json
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence, Union

import numpy as np

from .biencoder import TrainingExample
from .corpus import Document
from .errors import EmptyCorpus, EmptyTable, InsufficientLabels, UsastagError
from .tags import CategoryLabel, SenseInventory, is_discardable, parse_tag

__all__ = [
    "DistributionKind",
    "SamplingDistribution",
    "SilverRecord",
    "TagFrequencyTable",
    "build_distributions",
    "count_labels",
    "describe_distributions",
    "extract_positives",
    "make_dataset",
    "read_silver",
    "sample_negatives",
    "write_silver",
]


class DistributionKind(enum.Enum):
    ORIGINAL = "original"
    INVERSE = "inverse"
    LOG_INVERSE = "log_inverse"


@dataclass(frozen=True)
class TagFrequencyTable:
    """Label occurrence counts over a training split.

    Every inventory label is present; unseen labels carry count zero.
    """

    counts: dict[CategoryLabel, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def observed(self) -> list[CategoryLabel]:
        return [label for label, count in self.counts.items() if count > 0]


@dataclass(frozen=True)
class SamplingDistribution:
    """A normalized weighting over the labels observed in training."""

    kind: DistributionKind
    weights: dict[CategoryLabel, float]

    def __post_init__(self):
        if not self.weights:
            raise EmptyTable(f"no labels to weight for {self.kind.value}")
        labels = sorted(self.weights)
        cumulative = np.cumsum([self.weights[label] for label in labels])
        if abs(cumulative[-1] - 1.0) > 1e-9:
            raise ValueError(f"weights sum to {cumulative[-1]}, expected 1")
        cumulative[-1] = 1.0
        object.__setattr__(self, "_labels", labels)
        object.__setattr__(self, "_cumulative", cumulative)

    def sample(self, rng: np.random.Generator) -> CategoryLabel:
        """One seeded draw; consumes exactly one uniform variate."""
        position = int(np.searchsorted(self._cumulative, rng.random(), side="right"))
        return self._labels[min(position, len(self._labels) - 1)]

    def support(self) -> frozenset:
        return frozenset(self._labels)


def extract_positives(
    documents: Iterable[Document],
) -> Iterator[tuple[str, tuple[str, ...], int, frozenset]]:
    """Yield (doc_id, sentence tokens, target index, positive labels).

    Positives are the union of split membership components over all of a
    token's tag groups, affixes stripped.  Tokens without tags, tagged as
    punctuation, or carrying any Z99 component yield nothing.
    """
    for document in documents:
        for sentence in document.sentences:
            texts = tuple(token.text for token in sentence)
            for index, token in enumerate(sentence):
                if not token.tags:
                    continue
                if any(is_discardable(group) for group in token.tags):
                    continue
                positives = set()
                for group in token.tags:
                    positives.update(parse_tag(group).membership)
                if positives:
                    yield document.doc_id, texts, index, frozenset(positives)


def count_labels(documents: Iterable[Document], inventory: SenseInventory) -> TagFrequencyTable:
    """Tally positive-label occurrences; one count per (token, label)."""
    counts = {label: 0 for label in inventory.labels()}
    for _, _, _, positives in extract_positives(documents):
        for label in positives:
            if label in counts:
                counts[label] += 1
    return TagFrequencyTable(counts)


def build_distributions(freq: TagFrequencyTable) -> dict[DistributionKind, SamplingDistribution]:
    """The three negative-sampling distributions from one count table.

    ORIGINAL weights labels by raw frequency count/N; INVERSE by 1/count
    normalized; LOG_INVERSE by log2(1 + N/count) normalized.  Labels with
    zero count get no weight anywhere and are never sampled.
    """
    total = freq.total
    if total == 0:
        raise EmptyTable("frequency table has no observations")
    observed = freq.observed()

    original = {label: freq.counts[label] / total for label in observed}

    inverse_raw = {label: 1.0 / freq.counts[label] for label in observed}
    inverse_sum = sum(inverse_raw.values())
    inverse = {label: weight / inverse_sum for label, weight in inverse_raw.items()}

    log_raw = {label: math.log2(1.0 + total / freq.counts[label]) for label in observed}
    log_sum = sum(log_raw.values())
    log_inverse = {label: weight / log_sum for label, weight in log_raw.items()}

    return {
        DistributionKind.ORIGINAL: SamplingDistribution(DistributionKind.ORIGINAL, original),
        DistributionKind.INVERSE: SamplingDistribution(DistributionKind.INVERSE, inverse),
        DistributionKind.LOG_INVERSE: SamplingDistribution(DistributionKind.LOG_INVERSE, log_inverse),
    }


def sample_negatives(
    positives: frozenset,
    distributions: dict[DistributionKind, SamplingDistribution],
    rng: np.random.Generator,
) -> tuple[CategoryLabel, CategoryLabel, CategoryLabel]:
    """One negative from each distribution, disjoint from the positives.

    Draws collide when they hit a positive or an earlier negative for the
    same target; collisions are rejected and redrawn, which leaves each
    marginal proportional to its distribution restricted to the allowed
    labels.
    """
    order = (DistributionKind.ORIGINAL, DistributionKind.INVERSE, DistributionKind.LOG_INVERSE)
    support = distributions[order[0]].support()
    if len(support - positives) < 3:
        raise InsufficientLabels(
            f"only {len(support - positives)} sampleable labels outside the positives"
        )
    drawn: list[CategoryLabel] = []
    for kind in order:
        distribution = distributions[kind]
        while True:
            candidate = distribution.sample(rng)
            if candidate not in positives and candidate not in drawn:
                drawn.append(candidate)
                break
    return (drawn[0], drawn[1], drawn[2])


@dataclass(frozen=True)
class SilverRecord:
    """A training example with the document it came from."""

    doc_id: str
    example: TrainingExample


def _doc_stream(seed: int, doc_id: str) -> np.random.Generator:
    # Streams keyed by (seed, document) keep output independent of any
    # sharding of the corpus across workers.
    digest = hashlib.blake2b(doc_id.encode("utf-8"), digest_size=8).digest()
    return np.random.default_rng([seed, 2, int.from_bytes(digest, "little")])


def _parse_split(split: Union[str, float]) -> float:
    if isinstance(split, str):
        parts = split.split(":")
        if len(parts) != 2:
            raise UsastagError(f"split must look like '95:5', got {split!r}")
        train_share, val_share = (float(p) for p in parts)
        if train_share < 0 or val_share < 0 or train_share + val_share == 0:
            raise UsastagError(f"invalid split {split!r}")
        return train_share / (train_share + val_share)
    fraction = float(split)
    if not 0.0 <= fraction <= 1.0:
        raise UsastagError(f"train fraction must be within [0, 1], got {fraction}")
    return fraction


def _records_for(
    documents: Sequence[Document],
    distributions: dict[DistributionKind, SamplingDistribution],
    seed: int,
) -> list[SilverRecord]:
    records = []
    for document in documents:
        rng = _doc_stream(seed, document.doc_id)
        for doc_id, tokens, index, positives in extract_positives([document]):
            for positive in sorted(positives):
                negatives = sample_negatives(positives, distributions, rng)
                records.append(
                    SilverRecord(doc_id, TrainingExample(tokens, index, positive, negatives))
                )
    return records


def make_dataset(
    documents: Sequence[Document],
    inventory: SenseInventory,
    split: Union[str, float] = "95:5",
    seed: int = 0,
) -> tuple[list[SilverRecord], list[SilverRecord]]:
    """Build (train, validation) silver records from a tagged corpus.

    The corpus splits at document level so no sentence leaks between
    splits, and the sampling distributions come from the training split
    alone; validation negatives reuse them.  Each (token, positive) pair
    becomes one record, so multi-membership tokens contribute several.
    """
    documents = list(documents)
    if not documents:
        raise EmptyCorpus("cannot build a dataset from an empty corpus")
    fraction = _parse_split(split)
    order = np.random.default_rng([seed, 1]).permutation(len(documents))
    n_train = int(round(fraction * len(documents)))
    train_docs = [documents[i] for i in sorted(order[:n_train])]
    val_docs = [documents[i] for i in sorted(order[n_train:])]
    if not val_docs:
        warnings.warn("validation split is empty; early stopping will be disabled")

    freq = count_labels(train_docs, inventory)
    distributions = build_distributions(freq)
    return (
        _records_for(train_docs, distributions, seed),
        _records_for(val_docs, distributions, seed),
    )


_NEGATIVE_KEYS = ("original", "inverse", "log_inverse")


def write_silver(records: Iterable[SilverRecord], destination) -> None:
    """Write records as UTF-8 JSON lines with a fixed field order."""
    if isinstance(destination, (str, bytes)) or hasattr(destination, "__fspath__"):
        with open(destination, "w", encoding="utf-8") as handle:
            write_silver(records, handle)
            return
    for record in records:
        example = record.example
        payload = {
            "doc": record.doc_id,
            "tokens": list(example.tokens),
            "target": example.target_index,
            "positive": str(example.positive),
            "negatives": dict(zip(_NEGATIVE_KEYS, (str(n) for n in example.negatives))),
        }
        destination.write(json.dumps(payload, ensure_ascii=False) + "\n")


def read_silver(source) -> list[SilverRecord]:
    """Read records written by :func:`write_silver`, validating each."""
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, encoding="utf-8") as handle:
            return read_silver(handle)
    records = []
    for lineno, line in enumerate(source, start=1):
        if not line.strip():
            continue
        try:
            payload = json.loads(line)
            negatives = tuple(
                CategoryLabel(payload["negatives"][key]) for key in _NEGATIVE_KEYS
            )
            example = TrainingExample(
                tuple(payload["tokens"]),
                int(payload["target"]),
                CategoryLabel(payload["positive"]),
                negatives,
            )
            records.append(SilverRecord(str(payload["doc"]), example))
        except (KeyError, TypeError, ValueError, UsastagError) as exc:
            raise UsastagError(f"silver record at line {lineno} is invalid: {exc}") from exc
    return records


def describe_distributions(
    distributions: dict[DistributionKind, SamplingDistribution], top: int = 10
) -> str:
    """Human-readable summary: heaviest and lightest labels per kind."""
    lines = []
    for kind in DistributionKind:
        distribution = distributions[kind]
        ranked = sorted(distribution.weights.items(), key=lambda kv: (-kv[1], kv[0]))
        lines.append(f"[{kind.value}] {len(ranked)} labels")
        lines.append("  top:    " + "  ".join(f"{lab}={w:.4f}" for lab, w in ranked[:top]))
        lines.append("  bottom: " + "  ".join(f"{lab}={w:.4f}" for lab, w in ranked[-top:]))
    return "\n".join(lines)
