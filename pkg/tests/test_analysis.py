from __future__ import annotations

from fractions import Fraction

import pytest

from accucheck.analysis import (
    ErrorProfile,
    frequency_table,
    position_histogram,
    system_profile,
)
from accucheck.gsml import (
    GsmlError,
    Mistake,
    MistakeCategory,
    MistakeList,
    TokenizedText,
)

WORD = MistakeCategory.WORD
NAME = MistakeCategory.NAME


def _text(doc_id, text, system="sys"):
    return TokenizedText(doc_id, system, tuple(text.split()))


def test_frequency_single_word_mistake(figure1_game):
    texts = {"d": _text("d", "Gasol led the Grizzlies tonight .")}
    gold = MistakeList((Mistake("d", 1, 1, WORD),))
    assert frequency_table(gold, texts, [figure1_game]) == [("led", WORD, 1)]


def test_frequency_empty_gold(figure1_game):
    assert frequency_table(MistakeList(), {}, [figure1_game]) == []


def test_frequency_classes_from_fixture(figure1_game, figure1_texts, figure1_gold):
    rows = {(cls, cat): n for cls, cat, n in
            frequency_table(figure1_gold, figure1_texts, [figure1_game])}
    assert rows[("NUM-DIGIT", MistakeCategory.NUMBER)] == 3  # 2, 59, 42
    assert rows[("DAY-WEEK", NAME)] == 1  # Monday
    assert rows[("PLAYER", MistakeCategory.CONTEXT)] == 1  # Isaiah Thomas added
    assert rows[("averaging", MistakeCategory.NOT_CHECKABLE)] == 1


def test_frequency_counts_sum_to_gold_size(figure1_game, figure1_texts, figure1_gold):
    rows = frequency_table(figure1_gold, figure1_texts, [figure1_game])
    assert sum(n for _, _, n in rows) == len(figure1_gold)


def test_frequency_unknown_doc_is_error(figure1_game):
    gold = MistakeList((Mistake("missing", 0, 0, WORD),))
    with pytest.raises(GsmlError, match="unknown documents"):
        frequency_table(gold, {}, [figure1_game])


def test_profile_simple_mean():
    texts = {"a": _text("a", "one two three four", system="gen")}
    gold = MistakeList(tuple(Mistake("a", i, i, NAME) for i in range(3)))
    (profile,) = system_profile(gold, texts)
    assert profile.system_id == "gen" and profile.text_count == 1
    assert profile.mean(NAME) == 3
    assert profile.rendered()["NAME"] == "3.0"


def test_profile_counts_textless_systems():
    texts = {
        "a": _text("a", "w x y z", system="gen"),
        "b": _text("b", "w x y z", system="gen"),
    }
    gold = MistakeList((Mistake("a", 0, 0, NAME),))
    (profile,) = system_profile(gold, texts)
    assert profile.text_count == 2
    assert profile.mean(NAME) == Fraction(1, 2)


def test_profile_half_up_rendering():
    # 207 mistakes over 20 texts is 10.35, which renders as 10.4.
    profile = ErrorProfile("gen", 20, {MistakeCategory.NUMBER: 207})
    assert profile.rendered()["NUMBER"] == "10.4"
    assert ErrorProfile("gen", 20, {NAME: 105}).rendered()["NAME"] == "5.3"
    assert ErrorProfile("gen", 20, {MistakeCategory.OTHER: 1}).rendered()["OTHER"] == "0.1"


def test_histogram_first_token_is_bin_zero():
    texts = {"a": _text("a", " ".join(["tok"] * 300))}
    gold = MistakeList((Mistake("a", 0, 0, NAME),))
    assert position_histogram(gold, texts).bins[0] == 1


def test_histogram_final_token_lands_in_last_bin():
    texts = {"a": _text("a", " ".join(["tok"] * 300))}
    gold = MistakeList((Mistake("a", 299, 299, NAME),))
    hist = position_histogram(gold, texts)
    assert hist.bins[9] == 1
    assert max(10 * m.start // 300 for m in gold) <= 9  # clamp never needed in range


def test_histogram_bins_sum_to_filtered_count(figure1_texts, figure1_gold):
    for category in (None, NAME, WORD):
        hist = position_histogram(figure1_gold, figure1_texts, category)
        expected = sum(
            1 for m in figure1_gold
            if category is None or m.category is category
        )
        assert hist.total == expected


def test_histogram_bin_boundary_uses_floor():
    texts = {"a": _text("a", " ".join(["tok"] * 20))}
    gold = MistakeList((Mistake("a", 2, 2, NAME),))  # 10*2//20 == 1, exactly k/10
    assert position_histogram(gold, texts).bins[1] == 1
