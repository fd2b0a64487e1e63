"""Score submitted mistake lists against a gold standard.

Matching pairs gold and submitted spans one-to-one per document.  A submitted
span detects a gold mistake when they share at least one token (span
boundaries legitimately vary between annotators), and a single submitted span
can never claim two gold mistakes, so flagging a whole document scores
nothing extra.  Among all maximum pairings, pairs are chosen preferring
larger overlaps, then earlier gold spans: deterministic, and never sacrifices
a feasible detection to a locally bigger overlap.

Reports carry mistake-level and token-level recall/precision, overall and per
category, as exact rationals; rounding happens only when rendering.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal, Mapping, Sequence

from .gsml import (
    GsmlError,
    Mistake,
    MistakeCategory,
    MistakeList,
    TokenizedText,
    normalize_submission,
    validate_mistakes,
)
from .rational import format_ratio, ratio

MatchMode = Literal["overlap", "exact"]

ROW_LABELS = (
    "Name",
    "Number",
    "Word",
    "Context",
    "Not checkable",
    "Other",
    "Overall",
)

_CATEGORY_ROW = {
    MistakeCategory.NAME: "Name",
    MistakeCategory.NUMBER: "Number",
    MistakeCategory.WORD: "Word",
    MistakeCategory.CONTEXT: "Context",
    MistakeCategory.NOT_CHECKABLE: "Not checkable",
    MistakeCategory.OTHER: "Other",
}
_ROW_CATEGORY = {label: cat for cat, label in _CATEGORY_ROW.items()}


@dataclass(frozen=True)
class Matching:
    """A one-to-one pairing of gold and submitted mistakes."""

    pairs: tuple[tuple[Mistake, Mistake], ...]
    unmatched_gold: tuple[Mistake, ...]
    unmatched_submitted: tuple[Mistake, ...]


@dataclass(frozen=True)
class ScoreRow:
    mistake_recall: Fraction | None
    mistake_precision: Fraction | None
    token_recall: Fraction | None
    token_precision: Fraction | None


@dataclass(frozen=True)
class ScoreReport:
    """One :class:`ScoreRow` per category plus the Overall row."""

    rows: Mapping[str, ScoreRow]

    def __getitem__(self, label: str) -> ScoreRow:
        return self.rows[label]


# ---------------------------------------------------------------------------
# Matching
# ---------------------------------------------------------------------------

def _overlap_size(a: Mistake, b: Mistake) -> int:
    return max(0, min(a.end, b.end) - max(a.start, b.start) + 1)


def _candidates(
    gold: Sequence[Mistake],
    submitted: Sequence[Mistake],
    mode: MatchMode,
    category_strict: bool,
) -> list[tuple[int, int, int]]:
    """(gold index, submitted index, overlap) pairs, in preference order."""
    found = []
    for gi, g in enumerate(gold):
        for si, s in enumerate(submitted):
            if category_strict and g.category is not s.category:
                continue
            if mode == "exact":
                if (g.start, g.end) != (s.start, s.end):
                    continue
            elif not g.overlaps(s):
                continue
            found.append((gi, si, _overlap_size(g, s)))
    found.sort(key=lambda t: (-t[2], gold[t[0]].start, submitted[t[1]].start, t[0], t[1]))
    return found


def _max_matching_size(
    edges: Iterable[tuple[int, int]], banned_g: set[int], banned_s: set[int]
) -> int:
    """Maximum bipartite matching cardinality (augmenting paths)."""
    adj: dict[int, list[int]] = {}
    for gi, si in edges:
        if gi not in banned_g and si not in banned_s:
            adj.setdefault(gi, []).append(si)
    match_of_s: dict[int, int] = {}

    def augment(gi: int, seen: set[int]) -> bool:
        for si in adj.get(gi, ()):
            if si in seen:
                continue
            seen.add(si)
            if si not in match_of_s or augment(match_of_s[si], seen):
                match_of_s[si] = gi
                return True
        return False

    size = 0
    for gi in adj:
        if augment(gi, set()):
            size += 1
    return size


def _match_doc(
    gold: Sequence[Mistake], submitted: Sequence[Mistake], mode: MatchMode,
    category_strict: bool,
) -> list[tuple[Mistake, Mistake]]:
    cands = _candidates(gold, submitted, mode, category_strict)
    edges = [(gi, si) for gi, si, _ in cands]
    banned_g: set[int] = set()
    banned_s: set[int] = set()
    target = _max_matching_size(edges, banned_g, banned_s)
    chosen: list[tuple[Mistake, Mistake]] = []
    while len(chosen) < target:
        for gi, si, _ in cands:
            if gi in banned_g or si in banned_s:
                continue
            # Keep this pair only if a full-size pairing is still reachable.
            rest = _max_matching_size(edges, banned_g | {gi}, banned_s | {si})
            if len(chosen) + 1 + rest == target:
                chosen.append((gold[gi], submitted[si]))
                banned_g.add(gi)
                banned_s.add(si)
                break
    return chosen


def match_mistakes(
    gold: MistakeList,
    submitted: MistakeList,
    *,
    mode: MatchMode = "overlap",
    category_strict: bool = False,
) -> Matching:
    """Pair submitted mistakes with the gold mistakes they detect.

    Pairing is per document and one-to-one, maximizing the number of pairs;
    with ``category_strict`` a pair additionally requires equal categories,
    and ``mode="exact"`` requires identical spans instead of token overlap.
    """
    gold_by_doc = gold.by_doc()
    sub_by_doc = submitted.by_doc()
    pairs: list[tuple[Mistake, Mistake]] = []
    for doc_id in sorted(set(gold_by_doc) | set(sub_by_doc)):
        pairs.extend(
            _match_doc(
                gold_by_doc.get(doc_id, []),
                sub_by_doc.get(doc_id, []),
                mode,
                category_strict,
            )
        )
    matched_gold = {id(g) for g, _ in pairs}
    matched_sub = {id(s) for _, s in pairs}
    return Matching(
        pairs=tuple(pairs),
        unmatched_gold=tuple(m for m in gold if id(m) not in matched_gold),
        unmatched_submitted=tuple(m for m in submitted if id(m) not in matched_sub),
    )


# ---------------------------------------------------------------------------
# Scores
# ---------------------------------------------------------------------------

def _token_set(
    mistakes: Iterable[Mistake], category: MistakeCategory | None = None
) -> set[tuple[str, int]]:
    covered = set()
    for m in mistakes:
        if category is None or m.category is category:
            covered.update((m.doc_id, tok) for tok in m.tokens_covered())
    return covered


def compute_scores(
    gold: MistakeList,
    submitted: MistakeList,
    texts: Mapping[str, TokenizedText] | None = None,
    *,
    mode: MatchMode = "overlap",
    category_strict: bool = False,
) -> ScoreReport:
    """Score a submission against the gold list.

    The Overall row pairs spans regardless of category; per-category rows
    count only pairs whose two sides carry that category.  Token rows use the
    sets of tokens covered by each side's spans (restricted by category for
    the per-category rows).  A zero denominator renders as undefined.
    """
    if texts is not None:
        for label, lst in (("gold", gold), ("submitted", submitted)):
            report = validate_mistakes(lst, texts)
            bad = [f for f in report.findings if f.kind != "overlap" or label == "gold"]
            if bad:
                raise GsmlError(f"{label} list invalid:\n{report}")
    submitted = normalize_submission(submitted)

    matching = match_mistakes(
        gold, submitted, mode=mode, category_strict=category_strict
    )

    rows: dict[str, ScoreRow] = {}
    for label in ROW_LABELS[:-1]:
        cat = _ROW_CATEGORY[label]
        gold_n = sum(1 for m in gold if m.category is cat)
        sub_n = sum(1 for m in submitted if m.category is cat)
        hit = sum(
            1 for g, s in matching.pairs
            if g.category is cat and s.category is cat
        )
        gold_tok = _token_set(gold, cat)
        sub_tok = _token_set(submitted, cat)
        tok_hit = len(gold_tok & sub_tok)
        rows[label] = ScoreRow(
            mistake_recall=ratio(hit, gold_n),
            mistake_precision=ratio(hit, sub_n),
            token_recall=ratio(tok_hit, len(gold_tok)),
            token_precision=ratio(tok_hit, len(sub_tok)),
        )

    gold_tok = _token_set(gold)
    sub_tok = _token_set(submitted)
    tok_hit = len(gold_tok & sub_tok)
    rows["Overall"] = ScoreRow(
        mistake_recall=ratio(len(matching.pairs), len(gold)),
        mistake_precision=ratio(len(matching.pairs), len(submitted)),
        token_recall=ratio(tok_hit, len(gold_tok)),
        token_precision=ratio(tok_hit, len(sub_tok)),
    )
    return ScoreReport(rows)


def blind_spot(
    gold: MistakeList,
    submissions: Sequence[MistakeList],
    *,
    mode: MatchMode = "overlap",
    category_strict: bool = False,
) -> MistakeList:
    """Gold mistakes that every submission failed to detect."""
    if not submissions:
        raise GsmlError("blind spot needs at least one submission")
    missed = {id(m): m for m in gold}
    for submission in submissions:
        matching = match_mistakes(
            gold, normalize_submission(submission),
            mode=mode, category_strict=category_strict,
        )
        for g, _ in matching.pairs:
            missed.pop(id(g), None)
    ordered = sorted(missed.values(), key=lambda m: (m.doc_id, m.start))
    return MistakeList(tuple(ordered))


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

_COLUMNS = (
    ("mistake_recall", "Mistake recall"),
    ("mistake_precision", "Mistake precision"),
    ("token_recall", "Token recall"),
    ("token_precision", "Token precision"),
)


def render_report(report: ScoreReport, fmt: str = "table") -> str:
    """Render a report as an aligned table, CSV, or JSON.

    Cells show three decimals (halves round up); undefined cells show "-".
    """
    if fmt == "json":
        payload = {
            label: {
                attr: (None if cell is None else round(float(cell), 3))
                for attr, cell in (
                    (a, getattr(report[label], a)) for a, _ in _COLUMNS
                )
            }
            for label in ROW_LABELS
        }
        return json.dumps(payload, indent=2)

    cells = [
        [label] + [format_ratio(getattr(report[label], attr)) for attr, _ in _COLUMNS]
        for label in ROW_LABELS
    ]
    header = ["Type"] + [title for _, title in _COLUMNS]
    if fmt == "csv":
        return "\n".join(",".join(row) for row in [header] + cells) + "\n"
    if fmt != "table":
        raise ValueError(f"unknown report format {fmt!r}")
    widths = [max(len(row[i]) for row in [header] + cells) for i in range(len(header))]
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(header)),
        "  ".join("-" * w for w in widths),
    ]
    for row in cells:
        lines.append(
            row[0].ljust(widths[0])
            + "  "
            + "  ".join(row[i].rjust(widths[i]) for i in range(1, len(row)))
        )
    return "\n".join(lines)
