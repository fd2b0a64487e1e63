from __future__ import annotations

import random

import pytest

from accucheck.checker import check_document
from accucheck.gamedata import (
    DoubleStatus,
    check_invariants,
    double_double_status,
)
from accucheck.gsml import TokenizedText
from accucheck.synth import corrupt, random_game, render_summary


def _overlaps(mistakes, span):
    return any(m.start <= span[1] and span[0] <= m.end for m in mistakes)


def test_random_games_are_valid():
    rng = random.Random(3)
    for i in range(25):
        game = random_game(rng, f"g{i}")
        assert check_invariants(game) == []


def test_ensure_double_controls_leader_status():
    rng = random.Random(5)
    for want, status in (("double", DoubleStatus.DOUBLE_DOUBLE),
                         ("triple", DoubleStatus.TRIPLE_DOUBLE)):
        game = random_game(rng, "g", ensure_double=want)
        statuses = {
            double_double_status(p)
            for p in game.players if p.played
        }
        assert status in statuses


def test_clean_rendering_passes_the_checker():
    rng = random.Random(11)
    for i in range(20):
        game = random_game(rng, f"g{i}", ensure_double=rng.choice(["double", "triple"]))
        summary = render_summary(game, rng)
        text = TokenizedText(game.game_id, "synth", tuple(summary.tokens))
        assert len(check_document(text, game)) == 0


@pytest.mark.parametrize("kind", ["number", "name", "led", "double"])
def test_corruptions_are_caught(kind):
    rng = random.Random(hash(kind) % 10_000)
    for i in range(15):
        game = random_game(rng, f"g{i}", ensure_double=rng.choice(["double", "triple"]))
        summary = render_summary(game, rng)
        fault = corrupt(summary, game, kind, rng)
        text = TokenizedText(game.game_id, "synth", tuple(fault.tokens))
        flagged = check_document(text, game)
        assert _overlaps(flagged, fault.span), (kind, i, fault.span)


def test_corrupt_does_not_mutate_the_summary():
    rng = random.Random(2)
    game = random_game(rng, "g", ensure_double="double")
    summary = render_summary(game, rng)
    before = list(summary.tokens)
    corrupt(summary, game, "number", rng)
    assert summary.tokens == before
