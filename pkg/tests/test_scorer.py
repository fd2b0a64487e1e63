from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from accucheck.gsml import Mistake, MistakeCategory, MistakeList
from accucheck.scorer import (
    Matching,
    blind_spot,
    compute_scores,
    match_mistakes,
    render_report,
)
from oracles import best_pairing_size

NUM = MistakeCategory.NUMBER
WORD = MistakeCategory.WORD
NAME = MistakeCategory.NAME


def _list(spans, doc="D", cat=NUM):
    return MistakeList(tuple(Mistake(doc, s, e, cat) for s, e in spans))


# ---------------------------------------------------------------------------
# Matching
# ---------------------------------------------------------------------------

def test_identity_submission_matches_everything(figure1_gold):
    matching = match_mistakes(figure1_gold, figure1_gold)
    assert len(matching.pairs) == len(figure1_gold)
    assert not matching.unmatched_gold and not matching.unmatched_submitted


def test_empty_submission_leaves_all_gold_unmatched(figure1_gold):
    matching = match_mistakes(figure1_gold, MistakeList())
    assert not matching.pairs
    assert matching.unmatched_gold == figure1_gold.entries


def test_derived_three_span_example():
    # Oracle first: exhaustive search says two pairs is the best possible.
    gold_spans = [(0, 1), (5, 5), (9, 10)]
    sub_spans = [(1, 2), (9, 9), (20, 20)]
    assert best_pairing_size(gold_spans, sub_spans) == 2

    matching = match_mistakes(_list(gold_spans), _list(sub_spans))
    assert len(matching.pairs) == 2
    assert [(m.start, m.end) for m in matching.unmatched_gold] == [(5, 5)]
    assert [(m.start, m.end) for m in matching.unmatched_submitted] == [(20, 20)]


def test_single_submitted_span_cannot_claim_two_gold():
    gold = _list([(0, 2), (4, 6)])
    submitted = _list([(0, 6)])
    matching = match_mistakes(gold, submitted)
    assert len(matching.pairs) == 1
    assert len(matching.unmatched_gold) == 1


def test_matching_is_per_document():
    gold = MistakeList((Mistake("A", 0, 1, NUM), Mistake("B", 0, 1, NUM)))
    submitted = MistakeList((Mistake("B", 1, 2, NUM),))
    matching = match_mistakes(gold, submitted)
    assert len(matching.pairs) == 1
    assert matching.pairs[0][0].doc_id == "B"


def test_exact_mode_requires_identical_spans():
    gold = _list([(0, 2)])
    submitted = _list([(0, 1)])
    assert len(match_mistakes(gold, submitted, mode="exact").pairs) == 0
    assert len(match_mistakes(gold, gold, mode="exact").pairs) == 1


def test_category_strict_mode():
    gold = _list([(0, 2)], cat=NUM)
    submitted = _list([(0, 2)], cat=WORD)
    assert len(match_mistakes(gold, submitted).pairs) == 1
    assert len(match_mistakes(gold, submitted, category_strict=True).pairs) == 0


def _random_doc_lists(rng, max_mistakes=6, doc="D"):
    def spans():
        out = []
        cursor = 0
        for _ in range(rng.randint(0, max_mistakes)):
            cursor += rng.randint(0, 6)
            length = rng.randint(1, 5)
            out.append((cursor, cursor + length - 1))
            cursor += length
        return out

    cats = list(MistakeCategory)
    gold = MistakeList(
        tuple(Mistake(doc, s, e, rng.choice(cats)) for s, e in spans())
    )
    submitted = MistakeList(
        tuple(Mistake(doc, s, e, rng.choice(cats)) for s, e in spans())
    )
    return gold, submitted


def test_greedy_matches_exhaustive_oracle_on_random_fixtures():
    rng = random.Random(1518)
    for _ in range(300):
        gold, submitted = _random_doc_lists(rng)
        expected = best_pairing_size(
            [(m.start, m.end) for m in gold], [(m.start, m.end) for m in submitted]
        )
        matching = match_mistakes(gold, submitted)
        assert len(matching.pairs) == expected
        assert len(matching.pairs) <= min(len(gold), len(submitted))


# ---------------------------------------------------------------------------
# Scores
# ---------------------------------------------------------------------------

def test_identity_scores_are_all_one(figure1_gold):
    report = compute_scores(figure1_gold, figure1_gold)
    for label in ("Name", "Number", "Word", "Overall"):
        row = report[label]
        assert row.mistake_recall == 1 and row.mistake_precision == 1
        assert row.token_recall == 1 and row.token_precision == 1


def test_empty_submission_scores(figure1_gold):
    report = compute_scores(figure1_gold, MistakeList())
    assert report["Overall"].mistake_recall == 0
    assert report["Overall"].mistake_precision is None
    assert report["Name"].mistake_recall == 0
    assert report["Name"].mistake_precision is None


def test_figure1_number_name_subset_scores(figure1_gold):
    # Hand count over the fixture's error list: three Number mistakes and two
    # Name mistakes, five in all, so recall is 5/10 with perfect precision.
    subset = MistakeList(
        tuple(m for m in figure1_gold if m.category in (NUM, NAME))
    )
    assert len(subset) == 5
    report = compute_scores(figure1_gold, subset)
    assert report["Overall"].mistake_recall == Fraction(1, 2)
    assert report["Overall"].mistake_precision == 1

    # One more detection (the not-checkable span) lifts recall to 0.6.
    six = MistakeList(
        subset.entries
        + tuple(m for m in figure1_gold if m.category is MistakeCategory.NOT_CHECKABLE)
    )
    report = compute_scores(figure1_gold, six)
    assert report["Overall"].mistake_recall == Fraction(3, 5)
    assert report["Overall"].mistake_precision == 1


def test_cross_category_pair_counts_overall_not_per_category():
    gold = _list([(0, 2)], cat=NUM)
    submitted = _list([(1, 3)], cat=WORD)
    report = compute_scores(gold, submitted)
    assert report["Overall"].mistake_recall == 1
    assert report["Number"].mistake_recall == 0
    assert report["Word"].mistake_precision == 0


def test_token_scores_use_covered_token_sets():
    gold = _list([(0, 3)])  # 4 tokens
    submitted = _list([(2, 5)])  # 4 tokens, overlap 2
    report = compute_scores(gold, submitted)
    assert report["Overall"].token_recall == Fraction(2, 4)
    assert report["Overall"].token_precision == Fraction(2, 4)
    assert report["Overall"].mistake_recall == 1


def test_adding_detection_never_lowers_recall():
    rng = random.Random(7)
    for _ in range(50):
        gold, submitted = _random_doc_lists(rng)
        if not gold:
            continue
        base = compute_scores(gold, submitted)["Overall"].mistake_recall
        extra = Mistake("D", 200, 201, NUM)
        grown = MistakeList(submitted.entries + (extra,))
        assert compute_scores(gold, grown)["Overall"].mistake_recall >= base


def test_per_category_gold_counts_sum_to_overall(figure1_gold):
    per_cat = sum(
        sum(1 for m in figure1_gold if m.category is c) for c in MistakeCategory
    )
    assert per_cat == len(figure1_gold)


# ---------------------------------------------------------------------------
# Blind spot
# ---------------------------------------------------------------------------

def test_blind_spot_empty_when_one_submission_is_gold(figure1_gold):
    assert len(blind_spot(figure1_gold, [figure1_gold])) == 0


def test_blind_spot_everything_when_submissions_empty(figure1_gold):
    missed = blind_spot(figure1_gold, [MistakeList(), MistakeList()])
    assert len(missed) == len(figure1_gold)


def test_blind_spot_derived_four_mistake_case():
    # Gold #1..#4; submission one overlaps #1 and #2, submission two overlaps
    # #2 and #3; enumerating matchings by hand leaves #4 missed by both.
    gold = _list([(0, 1), (10, 11), (20, 21), (30, 31)])
    sub1 = _list([(1, 2), (11, 12)])
    sub2 = _list([(10, 10), (21, 22)])
    missed = blind_spot(gold, [sub1, sub2])
    assert [(m.start, m.end) for m in missed] == [(30, 31)]


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def test_render_all_ones(figure1_gold):
    table = render_report(compute_scores(figure1_gold, figure1_gold))
    for line in table.splitlines()[2:]:
        cells = line.split()
        if cells[0] in ("Name", "Number", "Word", "Overall"):
            assert cells[-4:] == ["1.000"] * 4


def test_render_undefined_as_dash(figure1_gold):
    table = render_report(compute_scores(figure1_gold, MistakeList()))
    other_row = next(l for l in table.splitlines() if l.startswith("Other"))
    assert other_row.split()[-1] == "-"


def test_render_two_thirds_rounds_to_667():
    gold = _list([(0, 0), (2, 2), (4, 4)])
    submitted = _list([(0, 0), (2, 2)])
    table = render_report(compute_scores(gold, submitted), fmt="csv")
    number_row = next(l for l in table.splitlines() if l.startswith("Number"))
    assert number_row.split(",")[1] == "0.667"


def test_render_json_round_values(figure1_gold):
    import json

    payload = json.loads(render_report(compute_scores(figure1_gold, figure1_gold), "json"))
    assert payload["Overall"]["mistake_recall"] == 1.0
    assert payload["Other"]["mistake_recall"] is None  # no Other in fixture gold


@given(st.integers(0, 5), st.integers(0, 5))
@settings(max_examples=20)
def test_pairs_bounded_by_list_sizes(n_gold, n_sub):
    gold = _list([(3 * i, 3 * i + 1) for i in range(n_gold)])
    submitted = _list([(3 * i + 1, 3 * i + 2) for i in range(n_sub)])
    matching = match_mistakes(gold, submitted)
    assert len(matching.pairs) <= min(n_gold, n_sub)
