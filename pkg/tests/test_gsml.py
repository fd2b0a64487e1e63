from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from accucheck.gsml import (
    AnnotationCandidate,
    GsmlError,
    Mistake,
    MistakeCategory,
    MistakeList,
    TokenizedText,
    merge_annotator_lists,
    normalize_submission,
    parse_gsml,
    select_minimal_annotation,
    validate_mistakes,
    write_gsml,
)

HEADER = "TEXT_ID,START_IDX,END_IDX,CATEGORY,NOTE\n"


def _texts(n_tokens: int = 40, doc_id: str = "G1") -> dict[str, TokenizedText]:
    tokens = tuple(f"tok{i}" for i in range(n_tokens))
    return {doc_id: TokenizedText(doc_id, "unknown", tokens)}


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def test_parse_simple_row():
    got = parse_gsml(HEADER + 'G1,3,3,NUMBER,"should be 0"\n')
    assert got.entries == (Mistake("G1", 3, 3, MistakeCategory.NUMBER, "should be 0"),)


def test_parse_name_category_row(figure1_texts):
    got = parse_gsml(HEADER + "figure1,17,17,NAME,\n", figure1_texts)
    (m,) = got.entries
    assert m.category is MistakeCategory.NAME
    assert figure1_texts["figure1"].tokens[m.start] == "Monday"


def test_parse_rejects_inverted_span():
    with pytest.raises(GsmlError, match="row 2"):
        parse_gsml(HEADER + "G1,5,2,WORD,\n")


def test_parse_rejects_unknown_category():
    with pytest.raises(GsmlError, match="unknown category"):
        parse_gsml(HEADER + "G1,1,2,TYPO,\n")


def test_parse_rejects_duplicate_rows():
    content = HEADER + "G1,1,2,WORD,\nG1,1,2,WORD,\n"
    with pytest.raises(GsmlError, match="row 3: duplicate of row 2"):
        parse_gsml(content)


def test_parse_rejects_out_of_range_with_texts():
    with pytest.raises(GsmlError, match="out of range"):
        parse_gsml(HEADER + "G1,39,40,WORD,\n", _texts(40))


def test_parse_rejects_bad_header():
    with pytest.raises(GsmlError, match="header"):
        parse_gsml("TEXT,FROM,TO,CAT,NOTE\n")


# ---------------------------------------------------------------------------
# Writing and round-trips
# ---------------------------------------------------------------------------

def test_write_empty_is_header_only():
    assert write_gsml(MistakeList()) == HEADER


def test_write_figure1_gold_has_ten_rows(figure1_gold):
    lines = write_gsml(figure1_gold).strip().splitlines()
    assert len(lines) == 11  # header + 10


def test_note_with_comma_round_trips():
    original = MistakeList(
        (Mistake("G1", 2, 4, MistakeCategory.WORD, "tied, not out-scored"),)
    )
    assert parse_gsml(write_gsml(original)) == original


_mistake_st = st.tuples(
    st.sampled_from(["A", "B"]),
    st.integers(0, 30),
    st.integers(0, 8),
    st.sampled_from(list(MistakeCategory)),
    st.one_of(
        st.none(),
        st.text(
            st.characters(blacklist_characters="\r\n", blacklist_categories=("Cs",)),
            min_size=1,
            max_size=12,
        ),
    ),
).map(lambda t: Mistake(t[0], t[1], t[1] + t[2], t[3], t[4]))


def _disjoint(entries, limit=40):
    """Keep a per-doc non-overlapping subset: what a valid list looks like."""
    taken: set[tuple[str, int]] = set()
    kept = []
    for m in entries:
        toks = {(m.doc_id, t) for t in m.tokens_covered()}
        if not (toks & taken) and m.end < limit:
            taken.update(toks)
            kept.append(m)
    return MistakeList(tuple(kept))


@given(st.lists(_mistake_st, max_size=12))
def test_roundtrip_identity(entries):
    original = _disjoint(entries)
    assert parse_gsml(write_gsml(original)) == original


# ---------------------------------------------------------------------------
# Validation and normalization
# ---------------------------------------------------------------------------

def test_validate_flags_span_at_token_count():
    report = validate_mistakes(
        MistakeList((Mistake("G1", 39, 40, MistakeCategory.WORD),)), _texts(40)
    )
    assert [f.kind for f in report.findings] == ["out-of-range"]


def test_validate_flags_overlap():
    mistakes = MistakeList(
        (
            Mistake("G1", 5, 7, MistakeCategory.WORD),
            Mistake("G1", 7, 9, MistakeCategory.NUMBER),
        )
    )
    report = validate_mistakes(mistakes, _texts())
    assert [f.kind for f in report.findings] == ["overlap"]


def test_validate_clean_list(figure1_gold, figure1_texts):
    assert validate_mistakes(figure1_gold, figure1_texts).ok


def test_validate_unknown_doc():
    report = validate_mistakes(
        MistakeList((Mistake("nope", 0, 0, MistakeCategory.WORD),)), _texts()
    )
    assert [f.kind for f in report.findings] == ["unknown-doc"]


def test_normalize_merges_same_category_overlap():
    merged = normalize_submission(
        MistakeList(
            (
                Mistake("G1", 3, 5, MistakeCategory.NUMBER),
                Mistake("G1", 4, 6, MistakeCategory.NUMBER),
                Mistake("G1", 9, 9, MistakeCategory.WORD),
            )
        )
    )
    assert [(m.start, m.end) for m in merged] == [(3, 6), (9, 9)]


def test_normalize_rejects_cross_category_overlap():
    with pytest.raises(GsmlError, match="cross-category"):
        normalize_submission(
            MistakeList(
                (
                    Mistake("G1", 3, 5, MistakeCategory.NUMBER),
                    Mistake("G1", 5, 6, MistakeCategory.WORD),
                )
            )
        )


# ---------------------------------------------------------------------------
# Minimal-annotation selection
# ---------------------------------------------------------------------------

def _candidate(*cats: MistakeCategory) -> AnnotationCandidate:
    return AnnotationCandidate(
        tuple(Mistake("G1", 2 * i, 2 * i, cat) for i, cat in enumerate(cats))
    )


def test_select_one_name_over_three_numbers():
    name_fix = _candidate(MistakeCategory.NAME)
    number_fix = _candidate(*[MistakeCategory.NUMBER] * 3)
    assert select_minimal_annotation([number_fix, name_fix]) is name_fix


def test_select_seven_over_nine_errors():
    seven = _candidate(
        MistakeCategory.WORD, MistakeCategory.NAME, MistakeCategory.NAME,
        MistakeCategory.WORD, MistakeCategory.NUMBER, MistakeCategory.NUMBER,
        MistakeCategory.NUMBER,
    )
    nine = _candidate(
        MistakeCategory.WORD, MistakeCategory.NAME,
        *[MistakeCategory.NUMBER] * 7,
    )
    assert select_minimal_annotation([nine, seven]) is seven


def test_select_prefers_higher_priority_on_count_tie():
    name_fix = _candidate(MistakeCategory.NAME)
    number_fix = _candidate(MistakeCategory.NUMBER)
    assert select_minimal_annotation([number_fix, name_fix]) is name_fix


def test_select_stable_between_identical_candidates():
    first = _candidate(MistakeCategory.WORD)
    second = _candidate(MistakeCategory.WORD)
    assert select_minimal_annotation([first, second]) is first


def test_select_empty_input_is_an_error():
    with pytest.raises(GsmlError):
        select_minimal_annotation([])


@given(st.lists(st.lists(st.sampled_from(list(MistakeCategory)), max_size=5), min_size=1, max_size=6))
def test_select_output_never_larger_than_any_candidate(cat_lists):
    candidates = [_candidate(*cats) for cats in cat_lists]
    chosen = select_minimal_annotation(candidates)
    assert all(len(chosen.mistakes) <= len(c.mistakes) for c in candidates)


# ---------------------------------------------------------------------------
# Annotator merging
# ---------------------------------------------------------------------------

def _single(span, cat=MistakeCategory.NUMBER):
    return MistakeList((Mistake("G1", span[0], span[1], cat),))


def test_merge_unanimous_span():
    lst = _single((4, 6))
    merged = merge_annotator_lists(lst, lst, lst, _texts())
    assert [(m.start, m.end, m.category) for m in merged] == [
        (4, 6, MistakeCategory.NUMBER)
    ]


def test_merge_majority_vs_outlier():
    # Two annotators mark a two-token Name span and a Word span; the third
    # marks numbers elsewhere.  Gold keeps the majority pair only.
    t1 = MistakeList(
        (
            Mistake("G1", 0, 1, MistakeCategory.WORD),
            Mistake("G1", 5, 6, MistakeCategory.NAME),
        )
    )
    t2 = MistakeList(
        (
            Mistake("G1", 0, 1, MistakeCategory.WORD),
            Mistake("G1", 5, 6, MistakeCategory.NAME),
        )
    )
    t3 = MistakeList(
        (
            Mistake("G1", 10, 10, MistakeCategory.NUMBER),
            Mistake("G1", 12, 12, MistakeCategory.NUMBER),
        )
    )
    merged = merge_annotator_lists(t1, t2, t3, _texts())
    assert [(m.start, m.end, m.category) for m in merged] == [
        (0, 1, MistakeCategory.WORD),
        (5, 6, MistakeCategory.NAME),
    ]


def test_merge_minority_token_absent():
    merged = merge_annotator_lists(
        _single((3, 3)), MistakeList(), MistakeList(), _texts()
    )
    assert len(merged) == 0


def test_merge_boundary_disagreement_keeps_agreed_core():
    # Spans [2,5] and [3,5] agree on tokens 3..5 only.
    merged = merge_annotator_lists(
        _single((2, 5), MistakeCategory.WORD),
        _single((3, 5), MistakeCategory.WORD),
        MistakeList(),
        _texts(),
    )
    assert [(m.start, m.end) for m in merged] == [(3, 5)]


@given(
    st.lists(_mistake_st, max_size=6),
    st.lists(_mistake_st, max_size=6),
)
def test_merge_two_identical_lists_dominate(x_entries, y_entries):
    texts = {d: TokenizedText(d, "unknown", tuple(f"t{i}" for i in range(40)))
             for d in ("A", "B")}
    x, y = _disjoint(x_entries), _disjoint(y_entries)
    merged = merge_annotator_lists(x, x, y, texts)
    merged_tokens = {
        (m.doc_id, t, m.category) for m in merged for t in m.tokens_covered()
    }
    for m in x:
        for t in m.tokens_covered():
            assert (m.doc_id, t, m.category) in merged_tokens
    # The merge rule never produces overlapping gold spans.
    assert validate_mistakes(merged, texts).ok
