"""Vertical (CoNLL-like) corpus format.

One token per line: ``token<TAB>lemma<TAB>pos[<TAB>tags]`` where the tags
cell holds whitespace-separated tag groups.  A blank line ends a
sentence; ``#doc id=...`` starts a new document and other ``#`` lines are
metadata and ignored.  Files are UTF-8.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from .errors import CorpusFormatError

__all__ = ["CorpusToken", "Document", "read_vertical", "write_vertical"]


@dataclass(frozen=True)
class CorpusToken:
    text: str
    lemma: str
    pos: str
    #: None when the corpus has no tags column; () for an empty cell.
    tags: Optional[tuple[str, ...]] = None


Sentence = list[CorpusToken]


@dataclass
class Document:
    doc_id: str
    sentences: list[Sentence] = field(default_factory=list)

    def __iter__(self):
        return iter(self.sentences)


def _parse_line(line: str, lineno: int) -> CorpusToken:
    cells = line.split("\t")
    if len(cells) < 3:
        raise CorpusFormatError(
            f"expected token<TAB>lemma<TAB>pos[<TAB>tags], got {line!r}", line=lineno
        )
    tags: Optional[tuple[str, ...]] = None
    if len(cells) > 3:
        tags = tuple(cells[3].split())
    return CorpusToken(cells[0], cells[1], cells[2], tags)


def read_vertical(source) -> list[Document]:
    """Parse a vertical-format file, path, or iterable of lines."""
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, encoding="utf-8") as handle:
            return read_vertical(handle)

    documents: list[Document] = []
    current_doc: Optional[Document] = None
    current_sentence: Sentence = []

    def flush_sentence():
        nonlocal current_sentence, current_doc
        if current_sentence:
            if current_doc is None:
                current_doc = Document(f"doc{len(documents)}")
                documents.append(current_doc)
            current_doc.sentences.append(current_sentence)
            current_sentence = []

    for lineno, line in enumerate(source, start=1):
        line = line.rstrip("\n").lstrip("﻿") if lineno == 1 else line.rstrip("\n")
        if not line.strip():
            flush_sentence()
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("doc"):
                flush_sentence()
                rest = body[3:].strip()
                doc_id = rest[3:].strip() if rest.startswith("id=") else rest
                current_doc = Document(doc_id or f"doc{len(documents)}")
                documents.append(current_doc)
            continue
        current_sentence.append(_parse_line(line, lineno))
    flush_sentence()
    return documents


def write_vertical(documents: Iterable[Document], destination) -> None:
    """Write documents back out; inverse of :func:`read_vertical`."""
    if isinstance(destination, (str, bytes)) or hasattr(destination, "__fspath__"):
        with open(destination, "w", encoding="utf-8") as handle:
            write_vertical(documents, handle)
            return
    out: io.TextIOBase = destination
    for document in documents:
        out.write(f"#doc id={document.doc_id}\n")
        for sentence in document.sentences:
            for token in sentence:
                cells = [token.text, token.lemma, token.pos]
                if token.tags is not None:
                    cells.append(" ".join(token.tags))
                out.write("\t".join(cells) + "\n")
            out.write("\n")
