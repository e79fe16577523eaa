"""Single-word and MWE lexicon loading and lookup.

Both lexicon types are plain dictionary lookups loaded from TSV.  They
are built single-threaded, then frozen; tagging workers may share them
read-only.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from . import mwe
from .errors import MalformedTag, MalformedTemplate, UsastagError
from .tags import ParsedTag, parse_tag

__all__ = [
    "MatchKind",
    "MWEEntry",
    "SingleWordEntry",
    "SingleWordLexicon",
    "load_mwe",
    "load_pos_map",
    "load_single_word",
    "lookup",
]


class MatchKind(enum.Enum):
    """Which lookup stage produced a hit, most specific first."""

    LEMMA_POS = "lemma+pos"
    TOKEN_POS = "token+pos"
    LEMMA = "lemma"
    LEMMA_LOWER = "lemma-lower"


@dataclass(frozen=True)
class SingleWordEntry:
    lemma: str
    pos: str
    tags: tuple[ParsedTag, ...]


@dataclass(frozen=True)
class MWEEntry:
    """A compiled MWE template with its tag list, in lexicon file order."""

    template: str
    pattern: mwe.Pattern
    tags: tuple[ParsedTag, ...]


def _merge(existing: tuple[ParsedTag, ...], extra: Iterable[ParsedTag]) -> tuple[ParsedTag, ...]:
    """Append tags, dropping any whose canonical core is already present."""
    seen = {tag.core for tag in existing}
    merged = list(existing)
    for tag in extra:
        if tag.core not in seen:
            seen.add(tag.core)
            merged.append(tag)
    return tuple(merged)


class SingleWordLexicon:
    """Frozen (lemma, pos) -> ranked tags table with a POS-agnostic view.

    Tag order within an entry follows the source file, which is the
    ranking: the first tag is the most likely.  ``by_lemma`` unions the
    tags of all POS rows for a lemma in first-seen order.
    """

    def __init__(self, entries: Iterable[SingleWordEntry] = ()):
        by_lemma_pos: dict[tuple[str, str], tuple[ParsedTag, ...]] = {}
        by_lemma: dict[str, tuple[ParsedTag, ...]] = {}
        for entry in entries:
            key = (entry.lemma, entry.pos)
            by_lemma_pos[key] = _merge(by_lemma_pos.get(key, ()), entry.tags)
            by_lemma[entry.lemma] = _merge(by_lemma.get(entry.lemma, ()), entry.tags)
        self._by_lemma_pos = by_lemma_pos
        self._by_lemma = by_lemma

    @property
    def by_lemma_pos(self) -> Mapping[tuple[str, str], tuple[ParsedTag, ...]]:
        return self._by_lemma_pos

    @property
    def by_lemma(self) -> Mapping[str, tuple[ParsedTag, ...]]:
        return self._by_lemma

    def __len__(self) -> int:
        return len(self._by_lemma_pos)

    def __repr__(self) -> str:
        return f"SingleWordLexicon(entries={len(self)}, lemmas={len(self._by_lemma)})"


def load_pos_map(path) -> dict[str, str]:
    """Read a ``from<TAB>to`` POS-mapping table."""
    mapping = {}
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            cells = line.split("\t")
            if len(cells) < 2:
                raise UsastagError(f"pos map row needs two cells: {line!r}")
            mapping[cells[0]] = cells[1]
    return mapping


def _parse_tag_cell(cell: str, lineno: int) -> tuple[ParsedTag, ...]:
    tags = []
    for raw in cell.split():
        try:
            tags.append(parse_tag(raw))
        except MalformedTag as exc:
            raise MalformedTag(str(exc), line=lineno) from None
    return tuple(tags)


def load_single_word(path, pos_map: Optional[Mapping[str, str]] = None) -> SingleWordLexicon:
    """Load a ``lemma<TAB>pos<TAB>tags`` TSV into a frozen lexicon.

    An optional header row is detected by the literal first cell
    ``lemma``.  ``pos_map`` rewrites the file's POS values at load time
    so lexicons produced for one tagset can serve input from another.
    """
    pos_map = pos_map or {}
    entries = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.rstrip("\n").lstrip("﻿")
            if not line.strip():
                continue
            cells = line.split("\t")
            if lineno == 1 and cells[0].strip().lower() == "lemma":
                continue
            if len(cells) < 3:
                raise MalformedTag(f"expected lemma<TAB>pos<TAB>tags, got {line!r}", line=lineno)
            lemma, pos = cells[0], cells[1]
            tags = _parse_tag_cell(cells[2], lineno)
            if not tags:
                raise MalformedTag(f"no tags for {lemma!r}", line=lineno)
            entries.append(SingleWordEntry(lemma, pos_map.get(pos, pos), tags))
    return SingleWordLexicon(entries)


def _map_template_pos(template: str, pos_map: Mapping[str, str]) -> str:
    if not pos_map:
        return template
    slots = []
    for raw in template.split():
        if raw.count("_") == 1:
            word, pos = raw.split("_")
            # Wildcard-bearing POS parts cannot be mapped and pass through.
            if "*" not in pos:
                pos = pos_map.get(pos, pos)
            raw = f"{word}_{pos}"
        slots.append(raw)
    return " ".join(slots)


def load_mwe(path, pos_map: Optional[Mapping[str, str]] = None) -> list[MWEEntry]:
    """Load a ``template<TAB>tags`` TSV, compiling each template.

    Entries keep file order, which later breaks ties between competing
    matches.  A header row with first cell ``mwe_template`` is skipped.
    """
    pos_map = pos_map or {}
    entries = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.rstrip("\n").lstrip("﻿")
            if not line.strip():
                continue
            cells = line.split("\t")
            if lineno == 1 and cells[0].strip().lower() == "mwe_template":
                continue
            if len(cells) < 2:
                raise MalformedTemplate(f"expected template<TAB>tags, got {line!r}", line=lineno)
            template = _map_template_pos(cells[0].strip(), pos_map)
            try:
                pattern = mwe.compile_template(template)
            except MalformedTemplate as exc:
                raise MalformedTemplate(str(exc), line=lineno) from None
            tags = _parse_tag_cell(cells[1], lineno)
            if not tags:
                raise MalformedTag(f"no tags for template {template!r}", line=lineno)
            entries.append(MWEEntry(template, pattern, tags))
    return entries


def lookup(
    lexicon: SingleWordLexicon, lemma: str, pos: str, token: str
) -> list[tuple[MatchKind, tuple[ParsedTag, ...]]]:
    """All successful lookup stages in fallback order.

    Stages widen the search as described for the rule tagger: exact
    lemma+POS first, then the lowercased token with POS, then the lemma
    alone, then the lowercased lemma alone.  A stage whose key material
    repeats an earlier stage's key is skipped, so the result never
    contains duplicate hits for one underlying entry.
    """
    results = []
    seen_keys = set()

    def probe(kind: MatchKind, key, table) -> None:
        namespaced = (table is lexicon.by_lemma, key)
        if namespaced in seen_keys:
            return
        seen_keys.add(namespaced)
        tags = table.get(key)
        if tags:
            results.append((kind, tags))

    probe(MatchKind.LEMMA_POS, (lemma, pos), lexicon.by_lemma_pos)
    probe(MatchKind.TOKEN_POS, (token.lower(), pos), lexicon.by_lemma_pos)
    probe(MatchKind.LEMMA, lemma, lexicon.by_lemma)
    probe(MatchKind.LEMMA_LOWER, lemma.lower(), lexicon.by_lemma)
    return results
