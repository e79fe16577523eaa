"""Gloss bi-encoder: shared encoder, dot-product scoring, 4-way loss.

A context embedding for the target word and one embedding per sense
gloss are produced by the same encoder; the score of a sense is the dot
product of the two.  Training contrasts the positive sense against three
sampled negatives with a cross-entropy loss over the four scores.
Because sense embeddings are independent of the context, the full gloss
matrix is precomputed once at inference and scoring a word costs one
matrix-vector product.

The shipped :class:`ReferenceEncoder` is a desk-scale trainable encoder:
an embedding table for target words and gloss tokens plus a second table
mixed in from a +/- ``window`` neighborhood.  Any encoder honouring the
same contract can replace it; an encoder that splits one input token
into several units must average their vectors to represent the token.

Training is single-threaded and deterministic given a seed.  A frozen
model plus its gloss matrix may be shared read-only across concurrent
tagging workers.
"""

from __future__ import annotations

import hashlib
import math
import struct
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .errors import EmptyDataset, EmptyGloss, UsastagError
from .rule import DEFAULT_PUNCTUATION_POS, Provenance, RankedPrediction
from .tags import CategoryLabel, SenseInventory, default_inventory, load_inventory, parse_tag
from .validation import check_sentences, check_target_index

__all__ = [
    "BiEncoderTagger",
    "CheckpointRecord",
    "EncoderConfig",
    "GlossIndex",
    "GlossMatrix",
    "ReferenceEncoder",
    "TrainResult",
    "TrainingExample",
    "build_gloss_matrix",
    "encode_context",
    "example_gradients",
    "example_loss",
    "load_checkpoint",
    "predict_topk",
    "save_checkpoint",
    "score",
    "train",
    "validation_metrics",
]

CHECKPOINT_MAGIC = b"USASBEM1"
_HEADER = struct.Struct("<IIIQ")  # d, vocab_size, window, seed


@dataclass(frozen=True)
class EncoderConfig:
    """Hyperparameters of the reference encoder.

    The 1e-3 learning-rate default suits the embedding-table encoder;
    fine-tuned transformer back-ends conventionally run near 1e-5.
    """

    d: int = 64
    vocab_size: int = 8192
    window: int = 2
    seed: int = 0
    learning_rate: float = 1e-3
    batch_size: int = 64

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"embedding dimension must be >= 1, got {self.d}")
        if self.window < 0:
            raise ValueError(f"context window must be >= 0, got {self.window}")
        if self.vocab_size < 1:
            raise ValueError(f"vocab_size must be >= 1, got {self.vocab_size}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")


@dataclass(frozen=True)
class TrainingExample:
    """One silver example: a positive sense and three sampled negatives."""

    tokens: tuple[str, ...]
    target_index: int
    positive: CategoryLabel
    negatives: tuple[CategoryLabel, CategoryLabel, CategoryLabel]

    def __post_init__(self):
        check_target_index(self.tokens, self.target_index)
        if len(self.negatives) != 3 or len(set(self.negatives)) != 3:
            raise ValueError(f"need exactly 3 distinct negatives, got {self.negatives!r}")
        if self.positive in self.negatives:
            raise ValueError(f"positive {self.positive} also appears among negatives")

    @property
    def candidates(self) -> tuple[CategoryLabel, ...]:
        """The four candidate senses, positive first."""
        return (self.positive,) + self.negatives


def _stable_hash(text: str) -> int:
    return int.from_bytes(hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest(), "little")


class ReferenceEncoder:
    """Word-hashing embedding encoder with windowed context mixing.

    Tokens are mapped into the table by a deterministic hash, so the
    model needs no fitted vocabulary and never sees an out-of-vocabulary
    word.  The target table also encodes gloss tokens (the encoder is
    shared between the context and gloss sides); the context table only
    contributes neighborhood mixing.
    """

    def __init__(self, config: EncoderConfig, tables: Optional[tuple[np.ndarray, np.ndarray]] = None):
        self.config = config
        if tables is None:
            rng = np.random.default_rng(config.seed)
            shape = (config.vocab_size, config.d)
            self.target_table = rng.uniform(-0.05, 0.05, shape)
            self.context_table = rng.uniform(-0.05, 0.05, shape)
        else:
            self.target_table, self.context_table = tables
        if self.target_table.shape != (config.vocab_size, config.d):
            raise ValueError("table shape does not match the configuration")

    @property
    def d(self) -> int:
        return self.config.d

    def token_id(self, token: str) -> int:
        return _stable_hash(token) % self.config.vocab_size

    def token_ids(self, tokens: Sequence[str]) -> np.ndarray:
        return np.fromiter((self.token_id(t) for t in tokens), dtype=np.int64, count=len(tokens))

    def neighborhood(self, n_tokens: int, target_index: int) -> list[int]:
        """Indices within ``window`` of the target, excluding it."""
        w = self.config.window
        lo = max(0, target_index - w)
        hi = min(n_tokens, target_index + w + 1)
        return [k for k in range(lo, hi) if k != target_index]

    def encode_context(self, tokens: Sequence[str], target_index: int) -> np.ndarray:
        """Embed the target word in context; see :func:`encode_context`."""
        check_target_index(tokens, target_index)
        ids = self.token_ids(tokens)
        u = self.target_table[ids[target_index]].copy()
        neighbors = self.neighborhood(len(tokens), target_index)
        if neighbors:
            u += self.context_table[ids[neighbors]].mean(axis=0)
        return u

    def encode_gloss_ids(self, ids: np.ndarray) -> np.ndarray:
        if len(ids) == 0:
            raise EmptyGloss("cannot embed a gloss with no tokens")
        return self.target_table[ids].mean(axis=0)

    def copy(self) -> "ReferenceEncoder":
        return ReferenceEncoder(self.config, (self.target_table.copy(), self.context_table.copy()))


def encode_context(model: ReferenceEncoder, tokens: Sequence[str], target_index: int) -> np.ndarray:
    """u = target_row(t_i) + mean over the window of context_row(t_k).

    The neighborhood holds up to ``window`` tokens on each side and never
    the target itself; with no neighbors (window 0 or a single-token
    sentence) the embedding is the bare target row.
    """
    return model.encode_context(tokens, target_index)


class GlossIndex:
    """Token-id view of an inventory's glosses for one vocabulary size."""

    def __init__(self, inventory: SenseInventory, vocab_size: int):
        self._ids: dict[str, np.ndarray] = {}
        for entry in inventory:
            if not entry.gloss_tokens:
                raise EmptyGloss(f"no gloss tokens for {entry.label}")
            self._ids[entry.label] = np.array(
                [_stable_hash(t) % vocab_size for t in entry.gloss_tokens], dtype=np.int64
            )
        self.labels = tuple(sorted(self._ids))

    def ids(self, label: str) -> np.ndarray:
        return self._ids[label]

    def __contains__(self, label: str) -> bool:
        return label in self._ids


@dataclass(frozen=True)
class GlossMatrix:
    """Stacked sense embeddings, one row per label in ``label_order``."""

    matrix: np.ndarray
    label_order: tuple[CategoryLabel, ...]

    def __post_init__(self):
        if self.matrix.shape[0] != len(self.label_order):
            raise ValueError("row count does not match label_order")
        object.__setattr__(self, "_row", {label: i for i, label in enumerate(self.label_order)})

    @property
    def m(self) -> int:
        return len(self.label_order)

    def row(self, label: str) -> int:
        return self._row[label]


def build_gloss_matrix(
    model: ReferenceEncoder,
    inventory: SenseInventory,
    label_order: Optional[Sequence[CategoryLabel]] = None,
) -> GlossMatrix:
    """Embed every gloss with the current parameters.

    Row order defaults to sorted label codes and is recorded alongside
    the matrix.  During training the matrix must be rebuilt whenever the
    parameters change; at inference it is computed once and cached.
    """
    if label_order is None:
        label_order = sorted(inventory.labels())
    index = GlossIndex(inventory, model.config.vocab_size)
    rows = np.stack([model.encode_gloss_ids(index.ids(label)) for label in label_order])
    return GlossMatrix(rows, tuple(label_order))


def score(u: np.ndarray, gloss_matrix: Union[GlossMatrix, np.ndarray]) -> np.ndarray:
    """Dot product of the context embedding with every sense row.

    No normalization and no temperature; the ranking is scale-covariant
    in ``u``.
    """
    matrix = gloss_matrix.matrix if isinstance(gloss_matrix, GlossMatrix) else gloss_matrix
    if matrix.shape[1] != u.shape[0]:
        raise ValueError(
            f"dimension mismatch: embedding has d={u.shape[0]}, matrix expects d={matrix.shape[1]}"
        )
    return matrix @ u


def _candidate_scores(model: ReferenceEncoder, example: TrainingExample, gloss_index: GlossIndex):
    u = model.encode_context(example.tokens, example.target_index)
    gloss_ids = [gloss_index.ids(label) for label in example.candidates]
    rows = [model.encode_gloss_ids(ids) for ids in gloss_ids]
    scores = np.array([u @ row for row in rows])
    return u, gloss_ids, rows, scores


def _log_softmax_first(scores: np.ndarray) -> tuple[float, np.ndarray]:
    shifted = scores - scores.max()
    exp = np.exp(shifted)
    probs = exp / exp.sum()
    loss = float(np.log(exp.sum()) - shifted[0])
    return loss, probs


def example_loss(model: ReferenceEncoder, example: TrainingExample, gloss_index: GlossIndex) -> float:
    """Cross-entropy of the positive sense against the 3 negatives.

    loss = -log( exp(s_pos) / sum over the 4 candidate scores exp(s_q) ),
    computed with max-subtraction for stability.  Always >= 0.
    """
    _, _, _, scores = _candidate_scores(model, example, gloss_index)
    return _log_softmax_first(scores)[0]


def example_gradients(
    model: ReferenceEncoder, example: TrainingExample, gloss_index: GlossIndex
) -> tuple[float, dict[int, np.ndarray], dict[int, np.ndarray]]:
    """Loss plus sparse per-row gradients for both tables.

    Gradients flow into the target table through the target word and
    through every gloss token of all four candidates (the encoder is
    shared), and into the context table through the mixing window.
    """
    u, gloss_ids, rows, scores = _candidate_scores(model, example, gloss_index)
    loss, probs = _log_softmax_first(scores)
    dscores = probs.copy()
    dscores[0] -= 1.0

    d_target: dict[int, np.ndarray] = {}
    d_context: dict[int, np.ndarray] = {}

    def accumulate(store: dict[int, np.ndarray], row: int, grad: np.ndarray) -> None:
        slot = store.get(row)
        if slot is None:
            store[row] = grad.copy()
        else:
            slot += grad

    du = np.zeros(model.d)
    for q in range(4):
        du += dscores[q] * rows[q]
        dj = dscores[q] * u
        per_token = dj / len(gloss_ids[q])
        for token_row in gloss_ids[q]:
            accumulate(d_target, int(token_row), per_token)

    ids = model.token_ids(example.tokens)
    accumulate(d_target, int(ids[example.target_index]), du)
    neighbors = model.neighborhood(len(example.tokens), example.target_index)
    if neighbors:
        per_neighbor = du / len(neighbors)
        for k in neighbors:
            accumulate(d_context, int(ids[k]), per_neighbor)
    return loss, d_target, d_context


def dense_gradients(model, example, gloss_index) -> tuple[float, np.ndarray, np.ndarray]:
    """Gradients materialized to full table shape (for small models)."""
    loss, d_target, d_context = example_gradients(model, example, gloss_index)
    full_target = np.zeros_like(model.target_table)
    full_context = np.zeros_like(model.context_table)
    for row, grad in d_target.items():
        full_target[row] += grad
    for row, grad in d_context.items():
        full_context[row] += grad
    return loss, full_target, full_context


def predict_topk(
    model: ReferenceEncoder,
    gloss_matrix: GlossMatrix,
    tokens: Sequence[str],
    target_index: int,
    k: int,
    exclude: frozenset = frozenset(),
) -> list[tuple[CategoryLabel, float]]:
    """The ``k`` best senses by score, ties broken by label code.

    ``predict_topk(k1)`` is always a prefix of ``predict_topk(k2)`` for
    k1 < k2.  ``exclude`` removes labels (e.g. Z99) from consideration.
    """
    if not 1 <= k <= gloss_matrix.m:
        raise ValueError(f"k must be in 1..{gloss_matrix.m}, got {k}")
    u = model.encode_context(tokens, target_index)
    scores = score(u, gloss_matrix)
    order = sorted(
        (i for i, label in enumerate(gloss_matrix.label_order) if label not in exclude),
        key=lambda i: (-scores[i], gloss_matrix.label_order[i]),
    )
    return [(gloss_matrix.label_order[i], float(scores[i])) for i in order[:k]]


# ---------------------------------------------------------------------------
# Checkpoints


def save_checkpoint(path, model: ReferenceEncoder, label_order: Sequence[CategoryLabel]) -> None:
    """Write the bit-exact checkpoint format.

    Layout: magic ``USASBEM1``, little-endian u32 d, u32 vocab_size,
    u32 window, u64 seed, the target then context tables as row-major
    float32, and the label order as length-prefixed UTF-8 strings.
    """
    cfg = model.config
    with open(path, "wb") as handle:
        handle.write(CHECKPOINT_MAGIC)
        handle.write(_HEADER.pack(cfg.d, cfg.vocab_size, cfg.window, cfg.seed))
        handle.write(np.ascontiguousarray(model.target_table, dtype="<f4").tobytes())
        handle.write(np.ascontiguousarray(model.context_table, dtype="<f4").tobytes())
        handle.write(struct.pack("<I", len(label_order)))
        for label in label_order:
            data = str(label).encode("utf-8")
            handle.write(struct.pack("<I", len(data)))
            handle.write(data)


def load_checkpoint(path) -> tuple[ReferenceEncoder, tuple[CategoryLabel, ...]]:
    """Read a checkpoint written by :func:`save_checkpoint`."""
    with open(path, "rb") as handle:
        magic = handle.read(len(CHECKPOINT_MAGIC))
        if magic != CHECKPOINT_MAGIC:
            raise UsastagError(f"not a checkpoint file: bad magic {magic!r}")
        d, vocab_size, window, seed = _HEADER.unpack(handle.read(_HEADER.size))
        count = vocab_size * d
        target = np.frombuffer(handle.read(4 * count), dtype="<f4").reshape(vocab_size, d)
        context = np.frombuffer(handle.read(4 * count), dtype="<f4").reshape(vocab_size, d)
        (n_labels,) = struct.unpack("<I", handle.read(4))
        labels = []
        for _ in range(n_labels):
            (length,) = struct.unpack("<I", handle.read(4))
            labels.append(CategoryLabel(handle.read(length).decode("utf-8")))
    config = EncoderConfig(d=d, vocab_size=vocab_size, window=window, seed=seed)
    tables = (target.astype(np.float64), context.astype(np.float64))
    return ReferenceEncoder(config, tables), tuple(labels)


# ---------------------------------------------------------------------------
# Training


@dataclass(frozen=True)
class CheckpointRecord:
    """One training log line, written every 20% of an epoch."""

    examples_seen: int
    mean_loss: float
    val_accuracy_4way: float
    val_top1_full: float
    path: str


@dataclass
class TrainResult:
    model: ReferenceEncoder
    label_order: tuple[CategoryLabel, ...]
    gloss_matrix: GlossMatrix
    history: list[CheckpointRecord]
    best: CheckpointRecord


def validation_metrics(
    model: ReferenceEncoder,
    examples: Sequence[TrainingExample],
    gloss_matrix: GlossMatrix,
) -> tuple[float, float]:
    """(4-way accuracy, full-inventory top-1) on a validation split.

    The 4-way number scores the positive against its three negatives
    only, a far easier task than ranking the positive above the whole
    inventory; both are reported so the gap stays visible.
    """
    if not examples:
        return (float("nan"), float("nan"))
    hits4 = 0
    hits_full = 0
    for example in examples:
        u = model.encode_context(example.tokens, example.target_index)
        scores = score(u, gloss_matrix)
        candidates = example.candidates
        best4 = min(candidates, key=lambda lab: (-scores[gloss_matrix.row(lab)], lab))
        if best4 == example.positive:
            hits4 += 1
        best_row = min(
            range(gloss_matrix.m), key=lambda i: (-scores[i], gloss_matrix.label_order[i])
        )
        if gloss_matrix.label_order[best_row] == example.positive:
            hits_full += 1
    return hits4 / len(examples), hits_full / len(examples)


def _apply_batch(model, batch, gloss_index, learning_rate) -> float:
    """One mini-batch SGD step on the mean loss; returns that mean."""
    total = 0.0
    acc_target: dict[int, np.ndarray] = {}
    acc_context: dict[int, np.ndarray] = {}
    for example in batch:
        loss, d_target, d_context = example_gradients(model, example, gloss_index)
        total += loss
        for row, grad in d_target.items():
            slot = acc_target.get(row)
            if slot is None:
                acc_target[row] = grad
            else:
                slot += grad
        for row, grad in d_context.items():
            slot = acc_context.get(row)
            if slot is None:
                acc_context[row] = grad
            else:
                slot += grad
    scale = learning_rate / len(batch)
    for row, grad in acc_target.items():
        model.target_table[row] -= scale * grad
    for row, grad in acc_context.items():
        model.context_table[row] -= scale * grad
    return total / len(batch)


def train(
    train_examples: Sequence[TrainingExample],
    validation_examples: Sequence[TrainingExample],
    inventory: SenseInventory,
    config: EncoderConfig,
    checkpoint_dir,
    max_epochs: int = 3,
    patience: int = 3,
) -> TrainResult:
    """Mini-batch gradient descent with 20%-of-epoch checkpointing.

    After every fifth of an epoch the model is checkpointed and scored on
    the validation split; training stops early when the 4-way validation
    accuracy has not improved for ``patience`` consecutive checkpoints.
    The best checkpoint (by 4-way accuracy) is returned.  With an empty
    validation split, checkpoints record NaN accuracies, early stopping
    is disabled, and the final checkpoint wins.
    """
    if not train_examples:
        raise EmptyDataset("no training examples")
    checkpoint_dir = Path(checkpoint_dir)
    checkpoint_dir.mkdir(parents=True, exist_ok=True)

    model = ReferenceEncoder(config)
    gloss_index = GlossIndex(inventory, config.vocab_size)
    label_order = tuple(sorted(inventory.labels()))
    rng = np.random.default_rng(config.seed)

    n = len(train_examples)
    marks = sorted({math.ceil(n * k / 5) for k in range(1, 6)})
    history: list[CheckpointRecord] = []
    best: Optional[CheckpointRecord] = None
    best_model: Optional[ReferenceEncoder] = None
    stall = 0
    examples_seen = 0
    stop = False

    for _ in range(max_epochs):
        order = rng.permutation(n)
        seen_in_epoch = 0
        next_mark = 0
        window_loss = 0.0
        window_count = 0
        for start in range(0, n, config.batch_size):
            batch = [train_examples[i] for i in order[start : start + config.batch_size]]
            mean_loss = _apply_batch(model, batch, gloss_index, config.learning_rate)
            window_loss += mean_loss * len(batch)
            window_count += len(batch)
            seen_in_epoch += len(batch)
            examples_seen += len(batch)
            if next_mark < len(marks) and seen_in_epoch >= marks[next_mark]:
                while next_mark < len(marks) and seen_in_epoch >= marks[next_mark]:
                    next_mark += 1
                gloss_matrix = build_gloss_matrix(model, inventory, label_order)
                acc4, top1 = validation_metrics(model, validation_examples, gloss_matrix)
                path = checkpoint_dir / f"checkpoint-{len(history) + 1:05d}.bem"
                save_checkpoint(path, model, label_order)
                record = CheckpointRecord(
                    examples_seen, window_loss / window_count, acc4, top1, str(path)
                )
                history.append(record)
                window_loss = 0.0
                window_count = 0
                improved = best is None or (
                    not math.isnan(acc4) and acc4 > best.val_accuracy_4way
                )
                if best is None or math.isnan(best.val_accuracy_4way) or improved:
                    best = record
                    best_model = model.copy()
                    stall = 0
                elif not math.isnan(acc4):
                    stall += 1
                    if stall >= patience:
                        stop = True
                        break
        if stop:
            break

    assert best is not None and best_model is not None
    gloss_matrix = build_gloss_matrix(best_model, inventory, label_order)
    return TrainResult(best_model, label_order, gloss_matrix, history, best)


# ---------------------------------------------------------------------------
# Estimator


class BiEncoderTagger(BaseEstimator):
    """Neural sense tagger built on the gloss bi-encoder.

    ``fit`` trains the reference encoder on :class:`TrainingExample`
    data; :meth:`predict_ranked` then tags sentences token by token with
    the top-``top_k`` senses.  Predictions are single category labels
    (never multi-membership tags), and the unmatched label Z99 is
    excluded because the model is never trained to emit it.
    """

    def __init__(
        self,
        inventory: Union[str, SenseInventory, None] = None,
        d: int = 64,
        window: int = 2,
        vocab_size: int = 8192,
        seed: int = 0,
        learning_rate: float = 1e-3,
        batch_size: int = 64,
        max_epochs: int = 3,
        patience: int = 3,
        checkpoint_dir=None,
        top_k: int = 5,
        punctuation_pos: Sequence[str] = tuple(sorted(DEFAULT_PUNCTUATION_POS)),
    ):
        self.inventory = inventory
        self.d = d
        self.window = window
        self.vocab_size = vocab_size
        self.seed = seed
        self.learning_rate = learning_rate
        self.batch_size = batch_size
        self.max_epochs = max_epochs
        self.patience = patience
        self.checkpoint_dir = checkpoint_dir
        self.top_k = top_k
        self.punctuation_pos = punctuation_pos

    def _resolve_inventory(self) -> SenseInventory:
        if self.inventory is None:
            return default_inventory()
        if isinstance(self.inventory, SenseInventory):
            return self.inventory
        return load_inventory(self.inventory)

    def _config(self) -> EncoderConfig:
        return EncoderConfig(
            d=self.d,
            vocab_size=self.vocab_size,
            window=self.window,
            seed=self.seed,
            learning_rate=self.learning_rate,
            batch_size=self.batch_size,
        )

    def fit(self, X: Sequence[TrainingExample], y=None, validation: Sequence[TrainingExample] = ()):
        """Train on silver examples; ``validation`` drives early stopping."""
        inventory = self._resolve_inventory()
        if self.checkpoint_dir is not None:
            result = train(
                X, validation, inventory, self._config(), self.checkpoint_dir,
                max_epochs=self.max_epochs, patience=self.patience,
            )
        else:
            with tempfile.TemporaryDirectory(prefix="usastag-ckpt-") as scratch:
                result = train(
                    X, validation, inventory, self._config(), scratch,
                    max_epochs=self.max_epochs, patience=self.patience,
                )
        self.inventory_ = inventory
        self.model_ = result.model
        self.label_order_ = result.label_order
        self.gloss_matrix_ = result.gloss_matrix
        self.history_ = result.history
        self.best_checkpoint_ = result.best
        self._finish_setup()
        return self

    @classmethod
    def from_checkpoint(cls, path, inventory: Union[str, SenseInventory, None] = None, **params):
        """Restore a tagger from a checkpoint file."""
        model, label_order = load_checkpoint(path)
        tagger = cls(
            inventory=inventory,
            d=model.config.d,
            window=model.config.window,
            vocab_size=model.config.vocab_size,
            seed=model.config.seed,
            **params,
        )
        resolved = tagger._resolve_inventory()
        missing = [label for label in label_order if label not in resolved]
        if missing:
            raise UsastagError(f"checkpoint labels missing from inventory: {missing[:5]}")
        tagger.inventory_ = resolved
        tagger.model_ = model
        tagger.label_order_ = label_order
        tagger.gloss_matrix_ = build_gloss_matrix(model, resolved, label_order)
        tagger.history_ = []
        tagger.best_checkpoint_ = None
        tagger._finish_setup()
        return tagger

    def _finish_setup(self) -> None:
        self.punctuation_pos_ = frozenset(self.punctuation_pos)
        self._parsed = {label: parse_tag(label) for label in self.label_order_}
        self._exclude = frozenset(
            label for label in self.label_order_ if label == "Z99"
        )

    def disambiguate(self, tokens: Sequence[str], target_index: int, k: Optional[int] = None):
        """Top-``k`` (label, score) pairs for one target word in context."""
        check_is_fitted(self, "model_")
        k = self.top_k if k is None else k
        k = min(k, self.gloss_matrix_.m - len(self._exclude))
        return predict_topk(
            self.model_, self.gloss_matrix_, list(tokens), target_index, k, self._exclude
        )

    def _predict_token(self, texts: Sequence[str], index: int, k: int) -> RankedPrediction:
        ranked = self.disambiguate(texts, index, k)
        candidates = tuple(self._parsed[label] for label, _ in ranked)
        return RankedPrediction(index, candidates, Provenance.NEURAL)

    def predict_ranked(self, X, k: Optional[int] = None) -> list[list[RankedPrediction]]:
        check_is_fitted(self, "model_")
        k = self.top_k if k is None else k
        results = []
        for sentence in check_sentences(X):
            texts = [text for text, _, _ in sentence]
            predictions = []
            for index, (_, _, pos) in enumerate(sentence):
                if pos in self.punctuation_pos_:
                    predictions.append(RankedPrediction(index, (), Provenance.PUNCTUATION))
                else:
                    predictions.append(self._predict_token(texts, index, k))
            results.append(predictions)
        return results

    def predict(self, X) -> list[list[str]]:
        """Top-1 sense label per token (``PUNC`` for punctuation)."""
        return [
            [prediction.top_strings(1)[0] for prediction in sentence]
            for sentence in self.predict_ranked(X, k=1)
        ]
