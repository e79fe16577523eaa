"""Template matching for multiword expressions.

Templates are whitespace-separated ``word_POS`` slots where ``*`` inside
either part matches any (possibly empty) character run: ``*_* Ocean_NOUN``
matches a two-token span whose second token or lemma is ``Ocean`` with
POS ``NOUN``.  ``*`` never spans slot boundaries, so templates match a
fixed number of consecutive tokens.

Compiled patterns are immutable and matching is pure, so pattern sets can
be shared across concurrently tagged sentences.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import MalformedTemplate

__all__ = ["MWEMatch", "Pattern", "Slot", "compile_template", "find_matches", "match_sentence"]

TokenTriple = tuple[str, str, str]  # (text, lemma, pos)


def _part_regex(part: str) -> Optional[re.Pattern]:
    """None for a pure literal; otherwise the wildcard part as a regex."""
    if "*" not in part:
        return None
    return re.compile(".*".join(re.escape(piece) for piece in part.split("*")), re.DOTALL)


@dataclass(frozen=True)
class Slot:
    """One template slot: a word constraint and a POS constraint."""

    word_part: str
    pos_part: str

    def __post_init__(self):
        if not self.word_part or not self.pos_part:
            raise MalformedTemplate(f"empty slot part in {self.word_part!r}_{self.pos_part!r}")
        word_re = _part_regex(self.word_part)
        object.__setattr__(self, "_word_re", word_re)
        object.__setattr__(
            self,
            "_word_re_folded",
            None if word_re is None else re.compile(word_re.pattern, re.DOTALL | re.IGNORECASE),
        )
        object.__setattr__(self, "_pos_re", _part_regex(self.pos_part))

    @property
    def word_is_literal(self) -> bool:
        return self._word_re is None

    def matches(self, token: TokenTriple, fold_case: bool = False) -> bool:
        """A token matches when the word part hits its text or lemma and
        the POS part hits its POS.  ``fold_case`` lowercases both sides of
        the word comparison; POS comparison is always case-sensitive."""
        text, lemma, pos = token
        if self._word_re is None:
            word = self.word_part
            if fold_case:
                text, lemma, word = text.lower(), lemma.lower(), word.lower()
            if word != text and word != lemma:
                return False
        else:
            word_re = self._word_re_folded if fold_case else self._word_re
            if not (word_re.fullmatch(text) or word_re.fullmatch(lemma)):
                return False
        if self._pos_re is None:
            return self.pos_part == pos
        return self._pos_re.fullmatch(pos) is not None


@dataclass(frozen=True)
class Pattern:
    """A compiled MWE template of two or more slots."""

    slots: tuple[Slot, ...]
    source: str

    def __len__(self) -> int:
        return len(self.slots)

    def anchor(self) -> Optional[tuple[int, str]]:
        """(offset, literal) of the first wildcard-free word part, if any.

        Used to index large pattern sets by a required literal so that
        matching does not scan every sentence position for every pattern.
        """
        for offset, slot in enumerate(self.slots):
            if slot.word_is_literal:
                return offset, slot.word_part
        return None


@dataclass(frozen=True)
class MWEMatch:
    """A matched span: ``length`` always equals the pattern's slot count."""

    start: int
    length: int
    pattern_index: int
    pattern: Pattern


def compile_template(template: str) -> Pattern:
    """Compile a raw template string, validating the slot grammar."""
    raw_slots = template.split()
    if len(raw_slots) < 2:
        raise MalformedTemplate(f"template needs at least two slots: {template!r}")
    slots = []
    for raw in raw_slots:
        if raw.count("_") != 1:
            raise MalformedTemplate(f"slot {raw!r} must contain exactly one '_'")
        word_part, pos_part = raw.split("_")
        slots.append(Slot(word_part, pos_part))
    return Pattern(tuple(slots), template)


def _scan(pattern: Pattern, tokens: Sequence[TokenTriple], starts, fold_case: bool) -> list[int]:
    hits = []
    for start in starts:
        if start < 0 or start + len(pattern) > len(tokens):
            continue
        if all(
            slot.matches(tokens[start + offset], fold_case)
            for offset, slot in enumerate(pattern.slots)
        ):
            hits.append(start)
    return hits


def find_matches(pattern: Pattern, tokens: Sequence[TokenTriple], fold_case: bool = False) -> list[int]:
    """All start positions where ``pattern`` matches, overlap allowed."""
    return _scan(pattern, tokens, range(len(tokens) - len(pattern) + 1), fold_case)


def _candidate_starts(pattern: Pattern, index: dict[str, list[int]], n_tokens: int, fold_case: bool):
    anchor = pattern.anchor()
    if anchor is None:
        return range(n_tokens - len(pattern) + 1)
    offset, literal = anchor
    if fold_case:
        literal = literal.lower()
    positions = index.get(literal, ())
    return sorted({pos - offset for pos in positions})


def match_sentence(patterns: Sequence[Pattern], tokens: Sequence[TokenTriple]) -> list[MWEMatch]:
    """Maximal non-overlapping matches over a sentence.

    Candidates from every pattern compete; the accepted set is chosen by
    preferring longer spans, then leftmost starts, then lower pattern
    index (lexicon file order).  A pattern that finds no case-sensitive
    match anywhere in the sentence is retried once with case folded on
    the word parts.
    """
    if not tokens:
        return []
    exact_index: dict[str, list[int]] = {}
    folded_index: dict[str, list[int]] = {}
    for position, (text, lemma, _) in enumerate(tokens):
        for key in {text, lemma}:
            exact_index.setdefault(key, []).append(position)
        for key in {text.lower(), lemma.lower()}:
            folded_index.setdefault(key, []).append(position)

    candidates: list[MWEMatch] = []
    for pattern_index, pattern in enumerate(patterns):
        if len(pattern) > len(tokens):
            continue
        starts = _scan(pattern, tokens, _candidate_starts(pattern, exact_index, len(tokens), False), False)
        if not starts:
            starts = _scan(pattern, tokens, _candidate_starts(pattern, folded_index, len(tokens), True), True)
        candidates.extend(MWEMatch(s, len(pattern), pattern_index, pattern) for s in starts)

    candidates.sort(key=lambda m: (-m.length, m.start, m.pattern_index))
    taken = [False] * len(tokens)
    accepted = []
    for match in candidates:
        span = range(match.start, match.start + match.length)
        if any(taken[i] for i in span):
            continue
        for i in span:
            taken[i] = True
        accepted.append(match)
    accepted.sort(key=lambda m: m.start)
    return accepted
