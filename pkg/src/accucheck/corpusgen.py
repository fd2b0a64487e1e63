"""Builder for the bundled annotated demo corpus.

The original shared-task corpus is not redistributable here, so the package
ships a deterministic synthetic stand-in: 60 texts (20 per generator label)
over synthetic games, with gold error annotations whose aggregate statistics
are calibrated to the published corpus analyses: per-category totals
(Number 474, Name 317, Word 334, Context 51, Not-checkable 37, Other 1),
surface-class head counts (digit numbers 270, team names 162, spelled
numbers 130, weekdays 128), per-system per-text means, and the concentration
of Name errors in the final tenth of each text.

Every gold mistake is injected at generation time, so its span, category,
and surface class are known by construction rather than re-derived.
"""

from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from .gamedata import GameData, TeamLine
from .gsml import Mistake, MistakeCategory, MistakeList, write_gsml
from .lexicon import spell_number
from .synth import WEEKDAY_POOL, random_game

SYSTEMS = ("wiseman", "puduppully", "rebuffel")
TEXTS_PER_SYSTEM = 20
DEFAULT_SEED = 74021

# Items each system's 20 texts must carry, by realization kind.  Row sums per
# system equal the per-category totals; column sums equal the corpus-wide
# surface-class counts.
NUMBER_PLAN = {
    #                 w   p   r
    "opener-record": (28, 28, 20),
    "opener-score":  (14, 14, 10),
    "half-digit":    (16, 15, 12),
    "quarter-digit": (16, 15, 12),
    "player-digit":  (46, 17, 7),
    "spelled":       (55, 45, 30),
    "a-article":     (10, 7, 5),
    "an-article":    (5, 4, 3),
    "ordinal":       (12, 8, 6),
    "hyphen":        (5, 4, 5),
}
NAME_PLAN = {
    "opener-day":   (20, 20, 20),
    "closing-day":  (24, 24, 20),
    "opener-team":  (20, 20, 20),
    "closing-team": (26, 25, 24),
    "body-team":    (11, 9, 7),
    "player-swap":  (12, 6, 3),
    "arena":        (5, 1, 0),
}
WORD_PLAN = {
    "led":           (16, 12, 12),
    "double-double": (9, 7, 7),
    "out-scored":    (12, 9, 9),
    "defeated":      (10, 9, 9),
    "strong":        (10, 8, 7),
    "home":          (10, 7, 7),
    "bench":         (8, 7, 7),
    "road":          (8, 6, 6),
    "only":          (8, 5, 5),
    "quick":         (6, 5, 5),
    "straight":      (7, 4, 4),
    "win":           (6, 4, 4),
    "loss":          (5, 4, 4),
    "victory":       (4, 4, 4),
    "blowout":       (4, 3, 3),
    "narrow":        (3, 3, 3),
    "season":        (4, 2, 2),
    "streak":        (3, 2, 2),
}
CONTEXT_PLAN = {"player-context": (6, 11, 33), "he-context": (0, 0, 1)}
NOT_CHECKABLE_PLAN = {"averaging": (12, 5, 5), "has-clause": (7, 3, 5)}
OTHER_PLAN = {"run-other": (0, 0, 1)}

CATEGORY_TOTALS = {
    MistakeCategory.NUMBER: (207, 157, 110),
    MistakeCategory.NAME: (118, 105, 94),
    MistakeCategory.WORD: (133, 101, 100),
    MistakeCategory.CONTEXT: (6, 11, 34),
    MistakeCategory.NOT_CHECKABLE: (19, 8, 10),
    MistakeCategory.OTHER: (0, 0, 1),
}

_PLAN_CATEGORY = [
    (NUMBER_PLAN, MistakeCategory.NUMBER),
    (NAME_PLAN, MistakeCategory.NAME),
    (WORD_PLAN, MistakeCategory.WORD),
    (CONTEXT_PLAN, MistakeCategory.CONTEXT),
    (NOT_CHECKABLE_PLAN, MistakeCategory.NOT_CHECKABLE),
    (OTHER_PLAN, MistakeCategory.OTHER),
]

# How many items of a kind fit into one text (missing = unlimited).
TEXT_CAPS = {
    "opener-record": 4, "opener-score": 2, "half-digit": 2, "quarter-digit": 2,
    "opener-day": 1, "closing-day": 2, "opener-team": 2, "closing-team": 2,
    "body-team": 2, "arena": 1, "out-scored": 2, "defeated": 1,
}

ORDINAL_WORDS = ["first"] * 9 + ["second"] * 8 + ["third"] * 5 + ["fourth"] * 4
HYPHEN_WORDS = ["20-point"] * 4 + ["15-point"] * 4 + ["10-game"] * 3 + ["12-game"] * 3
ARENA_NAMES = [
    ("Talking", "Stick", "Resort", "Arena"),
    ("Staples", "Center"),
    ("Oracle", "Arena"),
] * 2

FILLERS = (
    "The building was loud from the opening tip .",
    "Both coaches went deep into their rotations late .",
    "Neither side found much rhythm early in the game .",
    "The benches traded baskets through the middle stretch .",
    "Turnovers kept the margin closer than expected .",
    "The pace slowed considerably after the break .",
    "Free throws decided several key possessions down the stretch .",
    "The starters watched the finish from the sideline .",
    "It was a physical game at both ends of the floor .",
    "The shooting never quite evened out .",
)


def _verify_plan() -> None:
    for plan, category in _PLAN_CATEGORY:
        sums = [0, 0, 0]
        for counts in plan.values():
            for i, c in enumerate(counts):
                sums[i] += c
        assert tuple(sums) == CATEGORY_TOTALS[category], (category, sums)


@dataclass
class _TextPlan:
    doc_id: str
    system: str
    items: dict[str, int] = field(default_factory=dict)

    def count(self) -> int:
        return sum(self.items.values())

    def take(self, kind: str) -> bool:
        if self.items.get(kind, 0) > 0:
            self.items[kind] -= 1
            return True
        return False


def _schedule(rng: random.Random) -> list[_TextPlan]:
    """Distribute every item to a text, respecting per-text caps."""
    _verify_plan()
    plans: list[_TextPlan] = []
    for system in SYSTEMS:
        plans.extend(
            _TextPlan(f"{system}_{i + 1:02d}", system)
            for i in range(TEXTS_PER_SYSTEM)
        )
    for sys_idx, system in enumerate(SYSTEMS):
        texts = [p for p in plans if p.system == system]
        items: list[str] = []
        for plan, _cat in _PLAN_CATEGORY:
            for kind, counts in plan.items():
                items.extend([kind] * counts[sys_idx])
        rng.shuffle(items)
        for kind in items:
            cap = TEXT_CAPS.get(kind)
            eligible = [
                t for t in texts if cap is None or t.items.get(kind, 0) < cap
            ]
            target = min(eligible, key=lambda t: (t.count(), t.doc_id))
            target.items[kind] = target.items.get(kind, 0) + 1
    return plans


# ---------------------------------------------------------------------------
# Text assembly
# ---------------------------------------------------------------------------

class _Segment:
    """A run of tokens with marks at segment-relative positions."""

    def __init__(self) -> None:
        self.tokens: list[str] = []
        self.marks: list[tuple[int, int, MistakeCategory, str | None]] = []

    def add(self, *words: str) -> tuple[int, int]:
        start = len(self.tokens)
        self.tokens.extend(words)
        return start, len(self.tokens) - 1

    def mark(self, span: tuple[int, int], category: MistakeCategory,
             note: str | None = None) -> None:
        self.marks.append((span[0], span[1], category, note))

    def first_mark(self) -> int | None:
        return min((m[0] for m in self.marks), default=None)

    def last_mark(self) -> int | None:
        return max((m[0] for m in self.marks), default=None)


class _CorpusState:
    """Global queues that realize corpus-wide sub-splits exactly."""

    def __init__(self, rng: random.Random, team_pool: list[tuple[str, str]]):
        self.rng = rng
        self.team_pool = team_pool
        self.ordinals = ORDINAL_WORDS[:]
        self.hyphens = HYPHEN_WORDS[:]
        self.arenas = ARENA_NAMES[:]
        rng.shuffle(self.ordinals)
        rng.shuffle(self.hyphens)
        rng.shuffle(self.arenas)

    def wrong_team(self, game: GameData) -> tuple[str, ...]:
        used = {game.home.nickname, game.visitor.nickname}
        city, nick = self.rng.choice(
            [t for t in self.team_pool if t[1] not in used]
        )
        return tuple(f"{city} {nick}".split())

    def wrong_day(self, game: GameData) -> str:
        return self.rng.choice([d for d in WEEKDAY_POOL if d != game.day_of_week])


def _wrong_digit(rng: random.Random, true_value: int) -> int:
    while True:
        wrong = true_value + rng.choice([-6, -5, -4, -3, -2, -1, 1, 2, 3, 4, 5, 6])
        if wrong >= 0 and wrong != true_value:
            return wrong


def _marked_digit(seg: _Segment, rng: random.Random, true_value: int) -> None:
    wrong = _wrong_digit(rng, true_value)
    span = seg.add(str(wrong))
    seg.mark(span, MistakeCategory.NUMBER, f"should be {true_value}")


def _opener(game: GameData, plan: _TextPlan, state: _CorpusState) -> _Segment:
    rng = state.rng
    seg = _Segment()
    home_first = game.home.total_points > game.visitor.total_points
    first = game.home if home_first else game.visitor
    second = game.visitor if home_first else game.home
    backwards = plan.take("defeated")
    if backwards:
        first, second = second, first  # the text claims the loser won

    seg.add("The")
    for position, team in enumerate((first, second)):
        if position == 1:
            span = seg.add("defeated")
            if backwards:
                seg.mark(span, MistakeCategory.WORD,
                         f"the {first.nickname} lost this game")
            seg.add("the")
        if plan.take("opener-team"):
            span = seg.add(*state.wrong_team(game))
            seg.mark(span, MistakeCategory.NAME, f"should be {team.full_name}")
        else:
            seg.add(*team.full_name.split())
        seg.add("(")
        for slot, true_value in enumerate((team.wins, team.losses)):
            if plan.take("opener-record"):
                _marked_digit(seg, rng, true_value)
            else:
                seg.add(str(true_value))
            if slot == 0:
                seg.add("-")
        seg.add(")")
    if plan.take("opener-day"):
        span = seg.add(state.wrong_day(game))
        seg.mark(span, MistakeCategory.NAME, f"should be {game.day_of_week}")
    else:
        seg.add(game.day_of_week)
    for slot, true_value in enumerate((first.total_points, second.total_points)):
        if plan.take("opener-score"):
            _marked_digit(seg, rng, true_value)
        else:
            seg.add(str(true_value))
        if slot == 0:
            seg.add("-")
    if plan.take("arena"):
        arena = state.arenas.pop()
        seg.add("at", "the")
        span = seg.add(*arena)
        seg.mark(span, MistakeCategory.NAME, "wrong arena")
        seg.add("in", game.home.city.split()[0])
    seg.add(".")
    return seg


def _comparison_sentence(
    seg: _Segment, game: GameData, plan: _TextPlan, state: _CorpusState,
    period: str,
) -> None:
    rng = state.rng
    digit_kind = "half-digit" if period == "half" else "quarter-digit"
    if period == "half":
        h = game.home.quarter_points[0] + game.home.quarter_points[1]
        v = game.visitor.quarter_points[0] + game.visitor.quarter_points[1]
        tail = ("in", "the", "first", "half")
    else:
        q = rng.randint(0, 3)
        h, v = game.home.quarter_points[q], game.visitor.quarter_points[q]
        tail = ("in", "the", ("first", "second", "third", "fourth")[q], "quarter")
    leader, trailer = (game.home, game.visitor) if h >= v else (game.visitor, game.home)
    hi, lo = max(h, v), min(h, v)
    backwards = plan.take("out-scored")
    if backwards:
        leader, trailer = trailer, leader
        hi, lo = lo, hi
    seg.add("The")
    seg.add(*leader.nickname.split())
    trigger = seg.add("out-scored")
    if backwards:
        seg.mark(trigger, MistakeCategory.WORD, "the comparison is backwards")
    seg.add("the")
    if plan.take("body-team"):
        span = seg.add(*state.wrong_team(game))
        seg.mark(span, MistakeCategory.NAME, f"should be {trailer.full_name}")
    else:
        seg.add(*trailer.nickname.split())
    for slot, value in enumerate((hi, lo)):
        if plan.take(digit_kind):
            _marked_digit(seg, rng, value)
        else:
            seg.add(str(value))
        if slot == 0:
            seg.add("-")
    seg.add(*tail)
    seg.add(".")


_WORD_TEMPLATES = {
    "strong": ("The", "{nick}", "had", "a", "MARK:strong", "first", "half", "."),
    "home": ("The", "{nick}", "have", "been", "dominant", "at", "MARK:home",
             "this", "year", "."),
    "bench": ("{player}", "provided", "a", "lift", "off", "the", "MARK:bench", "."),
    "road": ("The", "{nick}", "remain", "unbeaten", "on", "the", "MARK:road", "."),
    "only": ("The", "MARK:only other", "{nick}", "starter", "in", "double",
             "figures", "was", "{player}", "."),
    "quick": ("The", "{nick}", "got", "off", "to", "a", "MARK:quick", "start", "."),
    "straight": ("That", "made", "it", "five", "MARK:straight", "wins", "for",
                 "the", "{nick}", "."),
    "win": ("It", "was", "a", "statement", "MARK:win", "for", "the", "{nick}", "."),
    "loss": ("The", "MARK:loss", "dropped", "the", "{nick}", "out", "of", "the",
             "top", "spot", "."),
    "victory": ("The", "MARK:victory", "stretched", "the", "lead", "for", "the",
                "{nick}", "."),
    "blowout": ("The", "game", "turned", "into", "a", "MARK:blowout", "after",
                "the", "break", "."),
    "narrow": ("The", "{nick}", "escaped", "with", "a", "MARK:narrow", "margin", "."),
    "season": ("It", "was", "their", "best", "showing", "of", "the",
               "MARK:season", "so", "far", "."),
    "streak": ("The", "MARK:streak", "now", "stands", "at", "six", "games",
               "for", "the", "{nick}", "."),
}


def _word_sentence(seg: _Segment, game: GameData, state: _CorpusState,
                   word: str) -> None:
    rng = state.rng
    nick = rng.choice((game.home, game.visitor)).nickname
    player = rng.choice([p for p in game.players if p.played]).name
    for piece in _WORD_TEMPLATES[word]:
        if piece.startswith("MARK:"):
            span = seg.add(*piece[5:].split())
            seg.mark(span, MistakeCategory.WORD, None)
        elif piece == "{nick}":
            seg.add(*nick.split())
        elif piece == "{player}":
            seg.add(*player.split())
        else:
            seg.add(piece)


def _led_sentence(seg: _Segment, game: GameData, state: _CorpusState) -> None:
    rng = state.rng
    side = rng.choice(("home", "visitor"))
    roster = game.roster(side, played_only=True)
    best = max(p.points for p in roster)
    non_leader = rng.choice([p for p in roster if p.points < best])
    seg.add(*non_leader.name.split())
    span = seg.add("led")
    seg.mark(span, MistakeCategory.WORD, "someone else led the team")
    seg.add("the", *game.team(side).nickname.split(), "with",
            str(non_leader.points), "points", ".")


def _double_sentence(seg: _Segment, game: GameData, state: _CorpusState) -> None:
    rng = state.rng
    candidates = [p for p in game.players if p.played and p.rebounds < 10]
    p = rng.choice(candidates)
    seg.add(*p.name.split(), "posted", "a")
    span = seg.add("double-double")
    seg.mark(span, MistakeCategory.WORD, f"{p.name} had no double-double")
    seg.add("with", str(p.points), "points", "and", str(p.rebounds),
            "rebounds", ".")


def _player_sentences(seg: _Segment, game: GameData, plan: _TextPlan,
                      state: _CorpusState) -> None:
    rng = state.rng
    queue: list[str] = []
    for kind in ("player-digit", "spelled", "a-article", "an-article"):
        queue.extend([kind] * plan.items.pop(kind, 0))
    rng.shuffle(queue)
    swaps = plan.items.pop("player-swap", 0)
    players = [p for p in game.players if p.played]
    rng.shuffle(players)
    verbs = ("scored", "added", "finished with", "recorded", "put up")
    pi = 0
    while queue or swaps:
        p = players[pi % len(players)]
        pi += 1
        # Articles only read as quantities when they are wrong, so skip
        # players whose true count is actually one.
        if "a-article" in queue[:3] and p.rebounds == 1:
            continue
        if "an-article" in queue[:3] and p.assists == 1:
            continue
        if swaps:
            swaps -= 1
            other = rng.choice([q for q in players if q.name != p.name])
            span = seg.add(*other.name.split())
            seg.mark(span, MistakeCategory.NAME, f"should be {p.name}")
        else:
            seg.add(*p.name.split())
        seg.add(*rng.choice(verbs).split())

        if queue and queue[0] == "player-digit":
            queue.pop(0)
            _marked_digit(seg, rng, p.points)
        else:
            seg.add(str(p.points))
        seg.add("points", ",")

        slot = queue.pop(0) if queue else None
        if slot == "spelled":
            wrong = _wrong_digit(rng, p.rebounds)
            span = seg.add(spell_number(wrong))
            seg.mark(span, MistakeCategory.NUMBER, f"should be {p.rebounds}")
            seg.add("rebounds")
        elif slot == "a-article":
            span = seg.add("a")
            seg.mark(span, MistakeCategory.NUMBER, f"should be {p.rebounds}")
            seg.add("rebound")
        elif slot == "player-digit":
            _marked_digit(seg, rng, p.rebounds)
            seg.add("rebounds")
        else:
            if slot is not None:
                queue.insert(0, slot)
            seg.add(str(p.rebounds), "rebounds")
        seg.add("and")

        slot = queue.pop(0) if queue else None
        if slot == "spelled":
            wrong = _wrong_digit(rng, p.assists)
            span = seg.add(spell_number(wrong))
            seg.mark(span, MistakeCategory.NUMBER, f"should be {p.assists}")
            seg.add("assists")
        elif slot == "an-article":
            span = seg.add("an")
            seg.mark(span, MistakeCategory.NUMBER, f"should be {p.assists}")
            seg.add("assist")
        elif slot == "player-digit":
            _marked_digit(seg, rng, p.assists)
            seg.add("assists")
        else:
            if slot is not None:
                queue.insert(0, slot)
            seg.add(str(p.assists), "assists")
        seg.add(".")


def _context_sentence(seg: _Segment, game: GameData, state: _CorpusState,
                      kind: str) -> None:
    rng = state.rng
    if kind == "he-context":
        seg.add("Later", ",")
        span = seg.add("he")
        seg.mark(span, MistakeCategory.CONTEXT, "misleading referent")
        seg.add("gave", "the", "second", "unit", "a", "lift", ".")
        return
    p = rng.choice([q for q in game.players if q.played])
    start = seg.add(*p.name.split())
    verb = seg.add("added")
    seg.mark((start[0], verb[1]), MistakeCategory.CONTEXT,
             f"{p.name} plays for the other team")
    seg.add(str(p.points), "points", ".")


def _not_checkable_sentence(seg: _Segment, game: GameData, state: _CorpusState,
                            kind: str) -> None:
    rng = state.rng
    p = rng.choice([q for q in game.players if q.played])
    seg.add(*p.name.split())
    if kind == "averaging":
        seg.add("is")
        start = seg.add("averaging")
        seg.add(str(rng.randint(8, 24)), "points", "on", "the", "season", "so")
        end = seg.add("far")
        seg.mark((start[0], end[1]), MistakeCategory.NOT_CHECKABLE,
                 "needs data beyond this game")
    else:
        start = seg.add("has")
        seg.add("scored", "in", "double", "figures", "in", "nine", "straight")
        end = seg.add("games")
        seg.mark((start[0], end[1]), MistakeCategory.NOT_CHECKABLE,
                 "needs data beyond this game")
    seg.add(".")


def _other_sentence(seg: _Segment, game: GameData) -> None:
    seg.add("The", *game.home.nickname.split(), "will", "look", "to")
    start = seg.add("run")
    seg.add("with", "the", "first", "-", "round", "win", "of", "the")
    end = seg.add("season")
    seg.mark((start[0], end[1]), MistakeCategory.OTHER, "nonsensical statement")
    seg.add(".")


def _ordinal_sentence(seg: _Segment, game: GameData, state: _CorpusState) -> None:
    word = state.ordinals.pop()
    seg.add("It", "was", "the")
    span = seg.add(word)
    seg.mark(span, MistakeCategory.NUMBER, "wrong streak count")
    seg.add("straight", "win", "for", "the", *game.home.nickname.split(), ".")


def _hyphen_sentence(seg: _Segment, game: GameData, state: _CorpusState) -> None:
    word = state.hyphens.pop()
    noun = "lead" if word.endswith("point") else "run"
    seg.add("The", *game.visitor.nickname.split(), "built", "a")
    span = seg.add(word)
    seg.mark(span, MistakeCategory.NUMBER, "wrong size")
    seg.add(noun, "in", "the", "second", "half", ".")


def _closing(game: GameData, plan: _TextPlan, state: _CorpusState) -> _Segment:
    seg = _Segment()
    team_marks = plan.items.get("closing-team", 0)
    day_marks = plan.items.get("closing-day", 0)
    legs = max(1, team_marks, day_marks)
    seg.add("The", *game.home.nickname.split(), "'", "next", "game", "will",
            "be", "at", "home", "against", "the")
    for leg in range(legs):
        if leg:
            seg.add(",", "before", "visiting", "the")
        if plan.take("closing-team"):
            span = seg.add(*state.wrong_team(game))
            seg.mark(span, MistakeCategory.NAME, "wrong opponent")
        else:
            seg.add(*state.wrong_team(game))  # a guess either way
        seg.add("on")
        if plan.take("closing-day"):
            span = seg.add(state.wrong_day(game))
            seg.mark(span, MistakeCategory.NAME, "wrong day")
        else:
            seg.add(state.wrong_day(game))
    seg.add(".")
    return seg


def _build_body(game: GameData, plan: _TextPlan, state: _CorpusState) -> _Segment:
    seg = _Segment()
    _comparison_sentence(seg, game, plan, state, "half")
    _comparison_sentence(seg, game, plan, state, "quarter")
    for _ in range(plan.items.pop("led", 0)):
        _led_sentence(seg, game, state)
    for _ in range(plan.items.pop("double-double", 0)):
        _double_sentence(seg, game, state)
    _player_sentences(seg, game, plan, state)
    for _ in range(plan.items.pop("player-context", 0)):
        _context_sentence(seg, game, state, "player-context")
    for _ in range(plan.items.pop("he-context", 0)):
        _context_sentence(seg, game, state, "he-context")
    for kind in ("averaging", "has-clause"):
        for _ in range(plan.items.pop(kind, 0)):
            _not_checkable_sentence(seg, game, state, kind)
    for word in _WORD_TEMPLATES:
        for _ in range(plan.items.pop(word, 0)):
            _word_sentence(seg, game, state, word)
    for _ in range(plan.items.pop("ordinal", 0)):
        _ordinal_sentence(seg, game, state)
    for _ in range(plan.items.pop("hyphen", 0)):
        _hyphen_sentence(seg, game, state)
    for _ in range(plan.items.pop("run-other", 0)):
        _other_sentence(seg, game)
    return seg


def _compose(doc_id: str, opener: _Segment, body: _Segment, closing: _Segment,
             state: _CorpusState) -> tuple[list[str], list[Mistake]]:
    """Join the segments, padding with filler sentences so opener marks land
    in the first tenth, closing marks in the last, and body marks between."""
    rng = state.rng
    early: list[str] = []
    late: list[str] = []
    opener_last = opener.last_mark()
    body_first = body.first_mark()
    body_last = body.last_mark()
    closing_first = closing.first_mark()

    for _ in range(400):
        O, E, B = len(opener.tokens), len(early), len(body.tokens)
        L, C = len(late), len(closing.tokens)
        total = O + E + B + L + C
        if opener_last is not None and 10 * (opener_last + 1) > total:
            late.extend(rng.choice(FILLERS).split())
            continue
        if body_first is not None and 10 * (O + E + body_first) < total:
            early.extend(rng.choice(FILLERS).split())
            continue
        if body_last is not None and 10 * (O + E + body_last) >= 9 * total:
            late.extend(rng.choice(FILLERS).split())
            continue
        if closing_first is not None and 10 * (O + E + B + L + closing_first) < 9 * total:
            late.extend(rng.choice(FILLERS).split())
            continue
        break
    else:
        raise AssertionError(f"padding failed to converge for {doc_id}")

    tokens = opener.tokens + early + body.tokens + late + closing.tokens
    mistakes: list[Mistake] = []
    for seg, offset, region in (
        (opener, 0, 0),
        (body, len(opener.tokens) + len(early), None),
        (closing, len(tokens) - len(closing.tokens), 9),
    ):
        for start, end, category, note in seg.marks:
            m = Mistake(doc_id, offset + start, offset + end, category, note)
            bin_index = 10 * m.start // len(tokens)
            if region is not None:
                assert bin_index == region, (doc_id, m, bin_index)
            else:
                assert 0 < bin_index < 9, (doc_id, m, bin_index)
            mistakes.append(m)
    mistakes.sort(key=lambda m: m.start)
    return tokens, mistakes


def build_corpus(out_dir: str | Path, seed: int = DEFAULT_SEED) -> None:
    """Generate texts/, games/, gsml.csv, and systems.csv under ``out_dir``."""
    rng = random.Random(seed)
    out = Path(out_dir)
    (out / "texts").mkdir(parents=True, exist_ok=True)
    (out / "games").mkdir(parents=True, exist_ok=True)

    plans = _schedule(rng)
    games = {
        plan.doc_id: random_game(
            rng, plan.doc_id,
            ensure_double=rng.choice(["double", "triple", None]),
        )
        for plan in plans
    }
    team_pool = sorted(
        {(g.home.city, g.home.nickname) for g in games.values()}
        | {(g.visitor.city, g.visitor.nickname) for g in games.values()}
    )
    state = _CorpusState(rng, team_pool)

    all_mistakes: list[Mistake] = []
    for plan in plans:
        game = games[plan.doc_id]
        opener = _opener(game, plan, state)
        body = _build_body(game, plan, state)
        closing = _closing(game, plan, state)
        leftover = {k: v for k, v in plan.items.items() if v}
        assert not leftover, (plan.doc_id, leftover)
        tokens, mistakes = _compose(plan.doc_id, opener, body, closing, state)
        (out / "texts" / f"{plan.doc_id}.txt").write_text(
            " ".join(tokens) + "\n", encoding="utf-8"
        )
        all_mistakes.extend(mistakes)
    assert not state.ordinals and not state.hyphens and not state.arenas

    for doc_id, game in games.items():
        (out / "games" / f"{doc_id}.json").write_text(
            _game_to_json(game), encoding="utf-8"
        )
    (out / "gsml.csv").write_text(
        write_gsml(MistakeList(tuple(all_mistakes))), encoding="utf-8"
    )
    sys_map = io.StringIO()
    writer = csv.writer(sys_map, lineterminator="\n")
    writer.writerow(["TEXT_ID", "SYSTEM_ID"])
    for plan in plans:
        writer.writerow([plan.doc_id, plan.system])
    (out / "systems.csv").write_text(sys_map.getvalue(), encoding="utf-8")


def _game_to_json(game: GameData) -> str:
    def team_line(team: TeamLine) -> dict:
        line = {
            "TEAM-CITY": team.city, "TEAM-NAME": team.nickname,
            "TEAM-WINS": team.wins, "TEAM-LOSSES": team.losses,
            "TEAM-PTS": team.total_points,
        }
        for i, q in enumerate(team.quarter_points, start=1):
            line[f"TEAM-PTS_QTR{i}"] = q
        return line

    stats = {
        "PTS": "points", "REB": "rebounds", "AST": "assists", "STL": "steals",
        "BLK": "blocks", "TO": "turnovers", "FGM": "fgm", "FGA": "fga",
        "FG3M": "tpm", "FG3A": "tpa", "FTM": "ftm", "FTA": "fta",
    }
    box: dict = {
        "PLAYER_NAME": {}, "TEAM_CITY": {}, "START_POSITION": {}, "MIN": {},
    }
    box.update({key: {} for key in stats})
    for i, p in enumerate(game.players):
        idx = str(i)
        box["PLAYER_NAME"][idx] = p.name
        box["TEAM_CITY"][idx] = game.team(p.team_side).city
        box["START_POSITION"][idx] = ("F", "G", "C", "G", "F")[i % 5] if p.starter else ""
        box["MIN"][idx] = p.minutes if p.played else "N/A"
        for key, attr in stats.items():
            box[key][idx] = getattr(p, attr) if p.played else "N/A"
    return json.dumps(
        {
            "game_id": game.game_id,
            "day": game.day_of_week,
            "home_line": team_line(game.home),
            "vis_line": team_line(game.visitor),
            "box_score": box,
        },
        indent=1,
    )


def main(argv: list[str] | None = None) -> None:
    import argparse

    parser = argparse.ArgumentParser(description="Rebuild the demo corpus.")
    parser.add_argument("out_dir")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    args = parser.parse_args(argv)
    build_corpus(args.out_dir, args.seed)


if __name__ == "__main__":
    main()
