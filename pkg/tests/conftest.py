"""Shared fixtures: tiny lexicons, inventories, and corpus builders."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from usastag.biencoder import TrainingExample
from usastag.corpus import CorpusToken, Document
from usastag.tags import (
    CategoryLabel,
    GlossEntry,
    SenseInventory,
    default_inventory,
    gloss_tokenize,
)

DATA_DIR = Path(__file__).parent / "data"


def make_inventory(pairs) -> SenseInventory:
    """An inventory from (label, title) pairs."""
    entries = []
    for label, title in pairs:
        entries.append(GlossEntry(CategoryLabel(label), title, None, gloss_tokenize(title)))
    return SenseInventory(entries)


def make_corpus_token(text, tags=None, pos="NOUN", lemma=None) -> CorpusToken:
    return CorpusToken(text, lemma if lemma is not None else text.lower(), pos, tags)


@pytest.fixture(scope="session")
def shipped_inventory() -> SenseInventory:
    return default_inventory()


@pytest.fixture
def single_word_path() -> Path:
    return DATA_DIR / "single_word.tsv"


@pytest.fixture
def mwe_path() -> Path:
    return DATA_DIR / "mwe.tsv"


@pytest.fixture
def table4_lexicon(tmp_path) -> Path:
    path = tmp_path / "table4.tsv"
    path.write_text(
        "lemma\tpos\ttags\ncoffee-house\tNOUN\tH1/F1\nprogramming\tVERB\tY2 P1\n",
        encoding="utf-8",
    )
    return path


@pytest.fixture
def table5_mwe(tmp_path) -> Path:
    path = tmp_path / "table5.tsv"
    path.write_text("*_* Ocean_NOUN\tZ2\n*_VERB over_ADV\tT2- M1 M6\n", encoding="utf-8")
    return path


def separable_setup(n_senses=20, n_examples=2000, seed=11, holdout=400):
    """A corpus where each pseudo-word deterministically implies one sense.

    Returns (inventory, train examples, validation examples, word->label).
    Keyword hash ids are checked for collisions so an embedding lookup
    genuinely suffices to solve the task.
    """
    import usastag.biencoder as be

    labels = [CategoryLabel(f"S{i}") for i in range(1, n_senses + 1)]
    inventory = make_inventory(
        (label, f"marker{i} item{i} gloss{i}") for i, label in enumerate(labels, start=1)
    )
    keywords = {label: f"kw{i}" for i, label in enumerate(labels, start=1)}
    ids = {be._stable_hash(word) % 4096 for word in keywords.values()}
    assert len(ids) == n_senses, "keyword hash collision would break separability"

    rng = np.random.default_rng(seed)
    examples = []
    for _ in range(n_examples):
        label = labels[int(rng.integers(0, n_senses))]
        others = [lab for lab in labels if lab != label]
        picks = rng.choice(len(others), size=3, replace=False)
        negatives = tuple(others[int(p)] for p in picks)
        examples.append(TrainingExample((keywords[label],), 0, label, negatives))
    return inventory, examples[holdout:], examples[:holdout], keywords


def labelled_corpus(word_labels, n_docs=4, sentences_per_doc=4, tokens_per_sentence=5, seed=0):
    """Documents whose tokens are tagged by a fixed word->tag mapping."""
    words = list(word_labels)
    rng = np.random.default_rng(seed)
    documents = []
    for d in range(n_docs):
        sentences = []
        for _ in range(sentences_per_doc):
            sentence = []
            for _ in range(tokens_per_sentence):
                word = words[int(rng.integers(0, len(words)))]
                sentence.append(CorpusToken(word, word, "NOUN", (word_labels[word],)))
            sentences.append(sentence)
        documents.append(Document(f"doc{d}", sentences))
    return documents
