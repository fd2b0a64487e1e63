"""Tokenized summaries and categorized mistake spans.

A mistake list marks factual errors in a summary as token spans (0-based,
end-inclusive) with one of six categories.  Lists travel as GSML CSV files
with header ``TEXT_ID,START_IDX,END_IDX,CATEGORY,NOTE`` (UTF-8, RFC-4180
quoting).  Gold lists never contain overlapping spans for the same document;
submitted lists are normalized before scoring (same-category overlaps merge,
cross-category overlaps are rejected).
"""

from __future__ import annotations

import csv
import io
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Mapping


class GsmlError(ValueError):
    """A mistake list (or GSML file) violates the format contract."""


class MistakeCategory(Enum):
    """The six error categories, with their GSML column labels."""

    NAME = "NAME"
    NUMBER = "NUMBER"
    WORD = "WORD"
    CONTEXT = "CONTEXT"
    NOT_CHECKABLE = "NOT_CHECKABLE"
    OTHER = "OTHER"

    @classmethod
    def from_label(cls, label: str) -> "MistakeCategory":
        try:
            return cls(label.strip().upper())
        except ValueError:
            raise GsmlError(f"unknown category label: {label!r}") from None


# Annotation priority used when several corrections are equally small.
CATEGORY_PRIORITY = (
    MistakeCategory.NAME,
    MistakeCategory.NUMBER,
    MistakeCategory.WORD,
    MistakeCategory.CONTEXT,
    MistakeCategory.OTHER,
    MistakeCategory.NOT_CHECKABLE,
)

_PRIORITY_RANK = {cat: i for i, cat in enumerate(CATEGORY_PRIORITY)}


@dataclass(frozen=True)
class TokenizedText:
    """A pre-tokenized summary; tokens are never re-split or re-joined."""

    doc_id: str
    system_id: str
    tokens: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.tokens:
            raise GsmlError(f"document {self.doc_id!r} has no tokens")
        for tok in self.tokens:
            if not tok or any(ch.isspace() for ch in tok):
                raise GsmlError(
                    f"document {self.doc_id!r} has an empty or whitespace token: {tok!r}"
                )

    def __len__(self) -> int:
        return len(self.tokens)

    @classmethod
    def from_string(cls, doc_id: str, text: str, system_id: str | None = None) -> "TokenizedText":
        """Split a single-space-separated summary line into tokens."""
        if system_id is None:
            system_id = system_from_doc_id(doc_id)
        return cls(doc_id=doc_id, system_id=system_id, tokens=tuple(text.split()))


def system_from_doc_id(doc_id: str) -> str:
    """Generator label convention: the stem prefix before the first underscore."""
    return doc_id.split("_", 1)[0] if "_" in doc_id else "unknown"


def load_token_dir(path: str | Path) -> dict[str, TokenizedText]:
    """Load every ``*.txt`` token file in a directory, keyed by TEXT_ID (= stem)."""
    texts: dict[str, TokenizedText] = {}
    for file in sorted(Path(path).glob("*.txt")):
        texts[file.stem] = TokenizedText.from_string(file.stem, file.read_text(encoding="utf-8"))
    return texts


@dataclass(frozen=True, order=True)
class Mistake:
    """One categorized error span: token indices are 0-based and end-inclusive."""

    doc_id: str
    start: int
    end: int
    category: MistakeCategory = field(compare=False)
    note: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.start < 0 or self.start > self.end:
            raise GsmlError(
                f"bad span [{self.start},{self.end}] in {self.doc_id!r}: "
                "need 0 <= start <= end"
            )
        if self.note is not None and set(self.note) & {"\r", "\n"}:
            raise GsmlError(f"note must be a single line: {self.note!r}")

    @property
    def token_count(self) -> int:
        return self.end - self.start + 1

    def tokens_covered(self) -> range:
        return range(self.start, self.end + 1)

    def overlaps(self, other: "Mistake") -> bool:
        return (
            self.doc_id == other.doc_id
            and self.start <= other.end
            and other.start <= self.end
        )


@dataclass(frozen=True)
class MistakeList:
    """An ordered collection of mistakes; the GSML is one of these."""

    entries: tuple[Mistake, ...] = ()

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Mistake]:
        return iter(self.entries)

    def by_doc(self) -> dict[str, list[Mistake]]:
        grouped: dict[str, list[Mistake]] = defaultdict(list)
        for m in self.entries:
            grouped[m.doc_id].append(m)
        return dict(grouped)

    def for_doc(self, doc_id: str) -> list[Mistake]:
        return [m for m in self.entries if m.doc_id == doc_id]

    def doc_ids(self) -> list[str]:
        seen: dict[str, None] = {}
        for m in self.entries:
            seen.setdefault(m.doc_id, None)
        return list(seen)


@dataclass(frozen=True)
class AnnotationCandidate:
    """One hypothesis for correcting a sentence: a set of mistakes, one doc."""

    mistakes: tuple[Mistake, ...]

    def __post_init__(self) -> None:
        docs = {m.doc_id for m in self.mistakes}
        if len(docs) > 1:
            raise GsmlError(f"candidate spans several documents: {sorted(docs)}")


# ---------------------------------------------------------------------------
# GSML CSV parsing / writing
# ---------------------------------------------------------------------------

GSML_HEADER = ("TEXT_ID", "START_IDX", "END_IDX", "CATEGORY", "NOTE")


def parse_gsml(
    content: str, texts: Mapping[str, TokenizedText] | None = None
) -> MistakeList:
    """Parse GSML CSV content into a mistake list.

    Raises:
        GsmlError: on a malformed header, unknown category, inverted span,
            duplicate exact row, or (when ``texts`` is given) an index out of
            range for the referenced document.  Messages carry the 1-based
            row number.
    """
    reader = csv.reader(io.StringIO(content, newline=""))
    try:
        header = next(reader)
    except StopIteration:
        raise GsmlError("empty GSML file (missing header)") from None
    if tuple(h.strip() for h in header) != GSML_HEADER:
        raise GsmlError(f"bad GSML header {header!r}, expected {','.join(GSML_HEADER)}")

    entries: list[Mistake] = []
    seen_rows: dict[tuple[str, ...], int] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) < 4 or len(row) > 5:
            raise GsmlError(f"row {lineno}: expected 4 or 5 fields, got {len(row)}")
        key = tuple(row)
        if key in seen_rows:
            raise GsmlError(f"row {lineno}: duplicate of row {seen_rows[key]}")
        seen_rows[key] = lineno

        doc_id = row[0].strip()
        try:
            start, end = int(row[1]), int(row[2])
        except ValueError:
            raise GsmlError(f"row {lineno}: non-integer span index") from None
        try:
            category = MistakeCategory.from_label(row[3])
            note = row[4] if len(row) == 5 and row[4] != "" else None
            mistake = Mistake(doc_id, start, end, category, note)
        except GsmlError as exc:
            raise GsmlError(f"row {lineno}: {exc}") from None
        if texts is not None:
            if doc_id not in texts:
                raise GsmlError(f"row {lineno}: unknown document {doc_id!r}")
            if end >= len(texts[doc_id]):
                raise GsmlError(
                    f"row {lineno}: span end {end} out of range for "
                    f"{doc_id!r} ({len(texts[doc_id])} tokens)"
                )
        entries.append(mistake)
    return MistakeList(tuple(entries))


def write_gsml(mistakes: MistakeList | Iterable[Mistake]) -> str:
    """Serialize a mistake list as GSML CSV; inverse of :func:`parse_gsml`."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(GSML_HEADER)
    for m in mistakes:
        writer.writerow([m.doc_id, m.start, m.end, m.category.value, m.note or ""])
    return out.getvalue()


def parse_gsml_file(
    path: str | Path, texts: Mapping[str, TokenizedText] | None = None
) -> MistakeList:
    return parse_gsml(Path(path).read_text(encoding="utf-8"), texts)


# ---------------------------------------------------------------------------
# Validation and normalization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Finding:
    kind: str  # unknown-doc | out-of-range | overlap
    message: str
    mistakes: tuple[Mistake, ...]


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...]

    @property
    def ok(self) -> bool:
        return not self.findings

    def __str__(self) -> str:
        if self.ok:
            return "OK: no findings"
        return "\n".join(f"{f.kind}: {f.message}" for f in self.findings)


def validate_mistakes(
    mistakes: MistakeList, texts: Mapping[str, TokenizedText]
) -> ValidationReport:
    """Report every out-of-range span, unknown document, and overlapping pair."""
    findings: list[Finding] = []
    for m in mistakes:
        if m.doc_id not in texts:
            findings.append(
                Finding("unknown-doc", f"{m.doc_id!r} has no token file", (m,))
            )
        elif m.end >= len(texts[m.doc_id]):
            findings.append(
                Finding(
                    "out-of-range",
                    f"span [{m.start},{m.end}] exceeds {m.doc_id!r} "
                    f"({len(texts[m.doc_id])} tokens)",
                    (m,),
                )
            )
    for doc_id, doc_mistakes in mistakes.by_doc().items():
        ordered = sorted(doc_mistakes)
        for prev, cur in zip(ordered, ordered[1:]):
            if cur.start <= prev.end:
                findings.append(
                    Finding(
                        "overlap",
                        f"{doc_id!r}: [{prev.start},{prev.end}] overlaps "
                        f"[{cur.start},{cur.end}]",
                        (prev, cur),
                    )
                )
    return ValidationReport(tuple(findings))


def normalize_submission(mistakes: MistakeList) -> MistakeList:
    """Merge same-category overlapping spans; reject cross-category overlaps.

    Scoring needs unambiguous spans, so a submission that marks ``[3,5]`` and
    ``[4,6]`` with the same category becomes one ``[3,6]`` span, while the
    same overlap across two categories is an error the submitter must fix.
    """
    merged: list[Mistake] = []
    for doc_id, doc_mistakes in mistakes.by_doc().items():
        ordered = sorted(doc_mistakes)
        current: Mistake | None = None
        for m in ordered:
            if current is not None and m.start <= current.end:
                if m.category is not current.category:
                    raise GsmlError(
                        f"{doc_id!r}: cross-category overlap between "
                        f"[{current.start},{current.end}] {current.category.value} "
                        f"and [{m.start},{m.end}] {m.category.value}"
                    )
                current = Mistake(
                    doc_id,
                    current.start,
                    max(current.end, m.end),
                    current.category,
                    current.note or m.note,
                )
            else:
                if current is not None:
                    merged.append(current)
                current = m
        if current is not None:
            merged.append(current)
    merged.sort(key=lambda m: (m.doc_id, m.start))
    return MistakeList(tuple(merged))


# ---------------------------------------------------------------------------
# Annotation selection and annotator merging
# ---------------------------------------------------------------------------

def _priority_signature(candidate: AnnotationCandidate) -> tuple[int, ...]:
    # Sorted priority ranks; lexicographically smaller = relies more on
    # higher-priority categories for the same number of corrections.
    return tuple(sorted(_PRIORITY_RANK[m.category] for m in candidate.mistakes))


def select_minimal_annotation(
    candidates: Iterable[AnnotationCandidate],
) -> AnnotationCandidate:
    """Pick the smallest correction hypothesis.

    Fewest mistakes wins; ties compare the candidates' sorted category
    priority sequences (Name before Number before Word before Context before
    Other before Not-checkable); remaining ties keep the earliest candidate.
    """
    pool = list(candidates)
    if not pool:
        raise GsmlError("no annotation candidates to select from")
    best = pool[0]
    best_key = (len(best.mistakes), _priority_signature(best))
    for cand in pool[1:]:
        key = (len(cand.mistakes), _priority_signature(cand))
        if key < best_key:
            best, best_key = cand, key
    return best


def merge_annotator_lists(
    a: MistakeList,
    b: MistakeList,
    c: MistakeList,
    texts: Mapping[str, TokenizedText],
) -> MistakeList:
    """Merge three annotators' lists by token-level majority vote.

    A token enters the gold set with category C when at least two annotators
    cover it with C; maximal runs of consecutive gold tokens sharing one
    category become single mistakes.  The result never contains overlaps.
    """
    for name, lst in (("a", a), ("b", b), ("c", c)):
        report = validate_mistakes(lst, texts)
        if not report.ok:
            raise GsmlError(f"annotator {name} list invalid:\n{report}")

    votes: dict[str, dict[int, list[MistakeCategory]]] = defaultdict(
        lambda: defaultdict(list)
    )
    for lst in (a, b, c):
        for m in lst:
            for tok in m.tokens_covered():
                votes[m.doc_id][tok].append(m.category)

    merged: list[Mistake] = []
    for doc_id in sorted(votes):
        winner: dict[int, MistakeCategory] = {}
        for tok, cats in votes[doc_id].items():
            for cat in set(cats):
                if cats.count(cat) >= 2:
                    winner[tok] = cat  # unique: 3 voters, one category each
                    break
        run_start: int | None = None
        run_cat: MistakeCategory | None = None
        for tok in sorted(winner) + [None]:  # type: ignore[list-item]
            if (
                run_start is not None
                and (tok is None or tok != prev + 1 or winner[tok] is not run_cat)
            ):
                merged.append(Mistake(doc_id, run_start, prev, run_cat))
                run_start = None
            if tok is None:
                break
            if run_start is None:
                run_start, run_cat = tok, winner[tok]
            prev = tok
    merged.sort(key=lambda m: (m.doc_id, m.start))
    return MistakeList(tuple(merged))
