"""Input validation helpers for the estimator layer.

The taggers accept sentences as sequences of ``(text, lemma, pos)``
triples or of objects exposing those attributes (e.g.
:class:`usastag.corpus.CorpusToken`).  These helpers normalize either
form and produce sklearn-style error messages on bad input.
"""

from __future__ import annotations

from typing import Sequence

__all__ = ["check_sentence", "check_sentences", "check_target_index"]

TokenTriple = tuple[str, str, str]


def _as_triple(item) -> TokenTriple:
    if isinstance(item, str):
        raise TypeError(
            "each token must be a (text, lemma, pos) triple, got a bare string; "
            "did you pass a sentence where a list of sentences was expected?"
        )
    if hasattr(item, "text") and hasattr(item, "lemma") and hasattr(item, "pos"):
        return (str(item.text), str(item.lemma), str(item.pos))
    try:
        text, lemma, pos = item
    except (TypeError, ValueError):
        raise TypeError(f"cannot interpret token {item!r} as a (text, lemma, pos) triple") from None
    return (str(text), str(lemma), str(pos))


def check_sentence(sentence) -> list[TokenTriple]:
    """Normalize one sentence to a list of string triples."""
    triples = [_as_triple(item) for item in sentence]
    for text, lemma, pos in triples:
        if not text or not lemma or not pos:
            raise ValueError(f"token fields must be non-empty, got {(text, lemma, pos)!r}")
    return triples


def check_sentences(X) -> list[list[TokenTriple]]:
    """Normalize a batch of sentences; rejects a single bare sentence."""
    if X is None:
        raise ValueError("X must be an iterable of sentences, got None")
    return [check_sentence(sentence) for sentence in X]


def check_target_index(tokens: Sequence, index: int) -> int:
    if not 0 <= index < len(tokens):
        raise IndexError(f"target index {index} out of range for {len(tokens)} tokens")
    return index
