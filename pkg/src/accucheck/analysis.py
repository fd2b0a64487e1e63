"""Corpus-level analyses over a gold mistake list.

Three reports: how often each surface class of error occurs (digits, spelled
numbers, weekdays, team and player names, individual words), the per-text
error profile of each generator, and where in a summary errors start (which
tenth of the text, by token id).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .gamedata import GameData
from .gsml import GsmlError, MistakeCategory, MistakeList, TokenizedText
from .lexicon import GameLexicon, classify_surface
from .rational import format_ratio

CATEGORY_ORDER = (
    MistakeCategory.NAME,
    MistakeCategory.NUMBER,
    MistakeCategory.WORD,
    MistakeCategory.CONTEXT,
    MistakeCategory.NOT_CHECKABLE,
    MistakeCategory.OTHER,
)


@dataclass(frozen=True)
class ErrorProfile:
    """Mean mistakes per text for one generator, split by category."""

    system_id: str
    text_count: int
    counts: Mapping[MistakeCategory, int]

    def mean(self, category: MistakeCategory) -> Fraction:
        return Fraction(self.counts.get(category, 0), self.text_count)

    def rendered(self, places: int = 1) -> dict[str, str]:
        return {
            cat.value: format_ratio(self.mean(cat), places)
            for cat in CATEGORY_ORDER
        }


@dataclass(frozen=True)
class PositionHistogram:
    """Error counts by the tenth of the summary the error starts in."""

    bins: tuple[int, ...]
    category: MistakeCategory | None = None

    def __post_init__(self) -> None:
        assert len(self.bins) == 10

    @property
    def total(self) -> int:
        return sum(self.bins)

    def peak_bin(self) -> int:
        return max(range(10), key=lambda i: (self.bins[i], i))


def _require_docs(gold: MistakeList, texts: Mapping[str, TokenizedText]) -> None:
    missing = sorted({m.doc_id for m in gold} - set(texts))
    if missing:
        raise GsmlError(f"gold list references unknown documents: {missing}")


def frequency_table(
    gold: MistakeList,
    texts: Mapping[str, TokenizedText],
    games: Iterable[GameData],
) -> list[tuple[str, MistakeCategory, int]]:
    """Count (surface class, category) combinations, most frequent first.

    The surface class comes from the span's first token: NUM-DIGIT, NUM-WORD,
    DAY-WEEK, TEAM, or PLAYER when the lexicon (built from the given game
    files) recognizes it, otherwise the lower-cased token itself.
    """
    _require_docs(gold, texts)
    lexicon = GameLexicon(list(games))
    counter: Counter[tuple[str, MistakeCategory]] = Counter()
    for m in gold:
        surface = classify_surface(texts[m.doc_id].tokens, m.start, lexicon)
        counter[(surface, m.category)] += 1
    return sorted(
        ((surface, cat, n) for (surface, cat), n in counter.items()),
        key=lambda row: (-row[2], row[0], row[1].value),
    )


def system_profile(
    gold: MistakeList, texts: Mapping[str, TokenizedText]
) -> list[ErrorProfile]:
    """Per-category mean mistakes per text for each generator.

    Every text counts toward its system's denominator, including texts with
    no mistakes at all.
    """
    _require_docs(gold, texts)
    text_counts: Counter[str] = Counter(t.system_id for t in texts.values())
    counts: dict[str, Counter[MistakeCategory]] = {
        system: Counter() for system in text_counts
    }
    for m in gold:
        counts[texts[m.doc_id].system_id][m.category] += 1
    return [
        ErrorProfile(system, text_counts[system], dict(counts[system]))
        for system in sorted(text_counts)
    ]


def position_histogram(
    gold: MistakeList,
    texts: Mapping[str, TokenizedText],
    category: MistakeCategory | None = None,
) -> PositionHistogram:
    """Bin mistakes by the tenth of the text their span starts in.

    Bin index is ``floor(10 * start / token_count)``, clamped to the last
    bin, so a mistake on the final token of any text lands in bin 9.
    """
    _require_docs(gold, texts)
    bins = [0] * 10
    for m in gold:
        if category is not None and m.category is not category:
            continue
        token_count = len(texts[m.doc_id])
        bins[min(9, 10 * m.start // token_count)] += 1
    return PositionHistogram(tuple(bins), category)
