"""USAS tag grammar and the category sense inventory.

A category label is one uppercase letter naming a discourse field, an
optional integer, and up to two further ``.digit`` sub-levels (``Z2``,
``O1.3``, ``A1.1.1``).  A full tag joins 1-4 labels with ``/`` for multi
tag membership, may carry affix symbols (rarity ``%@``, gender ``mf``,
``cn``, comparatives ``+-``), and may end in a multiword-expression
marker such as ``[i135.2.1``.

All types in this module are immutable after construction and safe to
share between threads; parsing is pure.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator, Mapping, NamedTuple, Optional, Union

from .errors import DuplicateLabel, EmptyGloss, MalformedTag, MissingTitle

__all__ = [
    "AFFIX_SYMBOLS",
    "CategoryLabel",
    "GlossEntry",
    "MWEMarker",
    "ParsedTag",
    "SenseInventory",
    "canonical_core",
    "default_inventory",
    "gloss_tokenize",
    "is_discardable",
    "load_inventory",
    "parse_tag",
    "split_membership",
]

#: Symbols that may trail a category label inside a tag.  ``+`` and ``-``
#: may repeat (lexicons contain e.g. ``A5.1+++``).
AFFIX_SYMBOLS = frozenset("%@mfcn+-")

#: Tokens marking punctuation in tagged corpora; not part of the tagset.
PUNCTUATION_TAGS = frozenset({"PUNC", "PUNCT"})

_LABEL_RE = re.compile(r"[A-Z][0-9]*(?:\.[0-9]+)*")
_MWE_MARKER_RE = re.compile(r"\[i(\d+)\.(\d+)\.(\d+)$")
_MAX_SUBLEVELS = 3


class CategoryLabel(str):
    """A single USAS category code, validated against the label grammar."""

    __slots__ = ()

    def __new__(cls, code: str) -> "CategoryLabel":
        if not _LABEL_RE.fullmatch(code):
            raise MalformedTag(f"not a category label: {code!r}")
        levels = code[1:].count(".") + (1 if len(code) > 1 else 0)
        if levels > _MAX_SUBLEVELS:
            raise MalformedTag(f"more than {_MAX_SUBLEVELS} sub-levels: {code!r}")
        return super().__new__(cls, code)

    @property
    def fieldcode(self) -> str:
        """The leading discourse-field letter."""
        return self[0]


class MWEMarker(NamedTuple):
    """Decoded ``[i<id>.<len>.<pos>`` marker; structural only."""

    entry_id: int
    span_length: int
    position: int


@dataclass(frozen=True)
class ParsedTag:
    """A USAS tag decomposed into membership, affixes, and MWE marker.

    ``affixes`` preserves the symbols in order of appearance, repeats
    included, so ``A5.1+++`` yields ``('+', '+', '+')``.
    """

    membership: tuple[CategoryLabel, ...]
    affixes: tuple[str, ...] = ()
    mwe_marker: Optional[MWEMarker] = None
    raw: str = ""

    def __post_init__(self):
        if not self.membership:
            raise MalformedTag("tag must have at least one membership label")

    @property
    def core(self) -> str:
        """Membership joined with ``/``; affixes and marker dropped."""
        return "/".join(self.membership)

    @property
    def is_multi_membership(self) -> bool:
        return len(self.membership) > 1

    def affix_counts(self) -> Mapping[str, int]:
        counts: dict[str, int] = {}
        for symbol in self.affixes:
            counts[symbol] = counts.get(symbol, 0) + 1
        return counts

    def __str__(self) -> str:
        return self.raw or self.core


def parse_tag(raw: str) -> ParsedTag:
    """Decompose a raw tag string into a :class:`ParsedTag`.

    Raises :class:`MalformedTag` for empty strings, punctuation markers,
    or cores that violate the label grammar.
    """
    if not raw:
        raise MalformedTag("empty tag string")
    if raw in PUNCTUATION_TAGS:
        raise MalformedTag(f"{raw} marks punctuation and is not a USAS tag")

    rest = raw
    marker = None
    bracket = rest.find("[")
    if bracket != -1:
        m = _MWE_MARKER_RE.fullmatch(rest[bracket:])
        if m is None:
            raise MalformedTag(f"malformed MWE marker in {raw!r}")
        marker = MWEMarker(int(m.group(1)), int(m.group(2)), int(m.group(3)))
        rest = rest[:bracket]

    membership: list[CategoryLabel] = []
    affixes: list[str] = []
    for part in rest.split("/"):
        end = len(part)
        while end > 0 and part[end - 1] in AFFIX_SYMBOLS:
            end -= 1
        trailing = part[end:]
        try:
            membership.append(CategoryLabel(part[:end]))
        except MalformedTag:
            raise MalformedTag(f"bad membership component {part!r} in {raw!r}") from None
        affixes.extend(trailing)
    if len(membership) > 4:
        raise MalformedTag(f"membership longer than 4 components: {raw!r}")
    return ParsedTag(tuple(membership), tuple(affixes), marker, raw)


def canonical_core(tag: Union[ParsedTag, str]) -> str:
    """The evaluation form of a tag: membership only, joined with ``/``."""
    if isinstance(tag, str):
        tag = parse_tag(tag)
    return tag.core


def split_membership(tag: Union[ParsedTag, str]) -> list[CategoryLabel]:
    """The member labels of a tag in order, one per ``/`` component."""
    if isinstance(tag, str):
        tag = parse_tag(tag)
    return list(tag.membership)


def is_discardable(tag: Union[ParsedTag, str]) -> bool:
    """True for punctuation markers and any tag with a Z99 component.

    Such tokens carry no semantic content and are dropped before both
    training-data extraction and evaluation.
    """
    if isinstance(tag, str):
        if tag in PUNCTUATION_TAGS:
            return True
        tag = parse_tag(tag)
    return any(label == "Z99" for label in tag.membership)


_GLOSS_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def gloss_tokenize(text: str) -> tuple[str, ...]:
    """Lowercase and split on non-alphanumeric runs; language-neutral."""
    return tuple(_GLOSS_TOKEN_RE.findall(text.lower()))


@dataclass(frozen=True)
class GlossEntry:
    """One sense: a category label with its natural-language gloss."""

    label: CategoryLabel
    title: str
    description: Optional[str] = None
    gloss_tokens: tuple[str, ...] = field(default=(), compare=False)

    @property
    def gloss_text(self) -> str:
        if self.description:
            return f"{self.title} {self.description}"
        return self.title


def _make_entry(label: CategoryLabel, title: str, description: Optional[str]) -> GlossEntry:
    tokens = gloss_tokenize(title if not description else f"{title} {description}")
    if not tokens:
        raise EmptyGloss(f"gloss for {label} has no tokens")
    return GlossEntry(label, title, description, tokens)


class SenseInventory:
    """The category inventory: label -> gloss, in a fixed file order.

    The shipped inventory holds the 232 USAS category labels.  Instances
    are immutable; iteration follows insertion (file) order.
    """

    def __init__(self, entries: Iterable[GlossEntry]):
        self._entries: dict[CategoryLabel, GlossEntry] = {}
        for entry in entries:
            if entry.label in self._entries:
                raise DuplicateLabel(f"duplicate inventory label {entry.label}")
            self._entries[entry.label] = entry

    @property
    def size(self) -> int:
        return len(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, label: str) -> bool:
        return label in self._entries

    def __getitem__(self, label: str) -> GlossEntry:
        return self._entries[label]

    def get(self, label: str) -> Optional[GlossEntry]:
        return self._entries.get(label)

    def __iter__(self) -> Iterator[GlossEntry]:
        return iter(self._entries.values())

    def labels(self) -> list[CategoryLabel]:
        return list(self._entries)

    def __repr__(self) -> str:
        return f"SenseInventory(size={self.size})"


def load_inventory(path) -> SenseInventory:
    """Load a gloss TSV (``tag<TAB>title<TAB>description``) into an inventory.

    The description cell may be empty or absent.  A header row whose
    first cell is the literal ``tag`` is skipped.
    """
    entries = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.rstrip("\n").lstrip("﻿")
            if not line.strip():
                continue
            cells = line.split("\t")
            if lineno == 1 and cells[0].strip().lower() == "tag":
                continue
            label = CategoryLabel(cells[0].strip())
            title = cells[1].strip() if len(cells) > 1 else ""
            if not title:
                raise MissingTitle(f"line {lineno}: no title for {label}")
            description = cells[2].strip() if len(cells) > 2 and cells[2].strip() else None
            entries.append(_make_entry(label, title, description))
    return SenseInventory(entries)


def default_inventory() -> SenseInventory:
    """The inventory shipped with the package (232 category labels)."""
    with resources.as_file(resources.files("usastag").joinpath("data/usas_tags.tsv")) as path:
        return load_inventory(Path(path))
