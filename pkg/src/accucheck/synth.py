"""Synthetic games, template summaries, and single-fault corruptions.

The template writer renders a factually correct summary from a game, tracking
every corruptible site (numbers, names, the leader mention, the double-double
word).  The corruptor then injects exactly one fault and reports its span, so
a checker can be measured against a known ground truth: flag something
overlapping the fault, flag nothing on the clean rendering.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace

from .gamedata import (
    DoubleStatus,
    GameData,
    PlayerLine,
    TeamLine,
    double_double_status,
    game_outcome,
    halftime_scores,
    team_leaders,
)
from .lexicon import NBA_TEAMS, spell_number

Span = tuple[int, int]

FIRST_NAMES = (
    "Aaron", "Blake", "Cody", "Darius", "Evan", "Felix", "Gavin", "Hassan",
    "Ivan", "Jalen", "Kyle", "Liam", "Mason", "Noah", "Omar", "Pablo",
    "Quinn", "Rashad", "Silas", "Trent", "Umar", "Victor", "Xavier", "Yusuf",
)
LAST_NAMES = (
    "Abrams", "Barker", "Caldwell", "Dawson", "Ellison", "Fletcher", "Graves",
    "Holloway", "Ingram", "Jacobs", "Keller", "Lawson", "Merritt", "Norwood",
    "Osborne", "Pruitt", "Ramsey", "Sutton", "Tillman", "Underwood", "Vaughn",
    "Whitfield", "Zimmer", "Beckett", "Corbin", "Draper", "Easton", "Farley",
    "Gibbs", "Harmon", "Irwin", "Jennings", "Kirkland", "Landry", "Maddox",
    "Nolan", "Ogden", "Palmer", "Quigley", "Rhodes", "Sherrill", "Tobin",
)
WEEKDAY_POOL = (
    "Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday",
)


# ---------------------------------------------------------------------------
# Random games
# ---------------------------------------------------------------------------

def _split_points(rng: random.Random, total: int, n: int) -> list[int]:
    """Split a team total into player points with a strict single leader."""
    cuts = sorted(rng.randint(0, total) for _ in range(n - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [total])]
    parts.sort(reverse=True)
    while parts[0] < 12 or (len(parts) > 1 and parts[0] == parts[1]):
        donor = max(range(1, len(parts)), key=lambda i: parts[i])
        if parts[donor] == 0:
            break
        parts[donor] -= 1
        parts[0] += 1
    return parts


def _shooting_line(rng: random.Random, points: int) -> tuple[int, int, int, int, int, int]:
    """(fgm, fga, tpm, tpa, ftm, fta) consistent with a point count."""
    tpm = rng.randint(0, points // 3) if points >= 3 else 0
    remainder = points - 3 * tpm
    ftm = rng.randint(0, min(remainder, 8))
    if (remainder - ftm) % 2:
        ftm += 1 if ftm < remainder else -1
    twos = (points - 3 * tpm - ftm) // 2
    fgm = twos + tpm
    fga = fgm + rng.randint(0, 9)
    tpa = tpm + rng.randint(0, 4)
    fta = ftm + rng.randint(0, 3)
    return fgm, fga, tpm, tpa, ftm, fta


def random_game(
    rng: random.Random,
    game_id: str,
    *,
    ensure_double: str | None = "double",
    team_pool: tuple[tuple[str, str], ...] = NBA_TEAMS,
) -> GameData:
    """A valid random game whose points leader holds the requested double
    status ("double", "triple", or None)."""
    while True:
        (h_city, h_nick), (v_city, v_nick) = rng.sample(list(team_pool), 2)
        if h_city != v_city:
            break
    quarters = {
        "home": [rng.randint(18, 34) for _ in range(4)],
        "visitor": [rng.randint(18, 34) for _ in range(4)],
    }
    if sum(quarters["home"]) == sum(quarters["visitor"]):
        quarters["home"][3] += 1

    home = TeamLine(
        city=h_city, nickname=h_nick,
        wins=rng.randint(0, 25), losses=rng.randint(0, 25),
        total_points=sum(quarters["home"]),
        quarter_points=tuple(quarters["home"]),  # type: ignore[arg-type]
    )
    visitor = TeamLine(
        city=v_city, nickname=v_nick,
        wins=rng.randint(0, 25), losses=rng.randint(0, 25),
        total_points=sum(quarters["visitor"]),
        quarter_points=tuple(quarters["visitor"]),  # type: ignore[arg-type]
    )

    n_players = {"home": rng.randint(9, 11), "visitor": rng.randint(9, 11)}
    firsts = rng.sample(list(FIRST_NAMES), n_players["home"] + n_players["visitor"])
    lasts = rng.sample(list(LAST_NAMES), n_players["home"] + n_players["visitor"])
    names = [f"{f} {l}" for f, l in zip(firsts, lasts)]

    players: list[PlayerLine] = []
    cursor = 0
    for side, team in (("home", home), ("visitor", visitor)):
        count = n_players[side]
        points = _split_points(rng, team.total_points, count)
        for i in range(count):
            fgm, fga, tpm, tpa, ftm, fta = _shooting_line(rng, points[i])
            players.append(
                PlayerLine(
                    name=names[cursor + i],
                    team_side=side,  # type: ignore[arg-type]
                    starter=i < 5,
                    minutes=rng.randint(26, 38) if i < 5 else rng.randint(6, 24),
                    points=points[i],
                    rebounds=rng.randint(0, 9),
                    assists=rng.randint(0, 9),
                    steals=rng.randint(0, 4),
                    blocks=rng.randint(0, 3),
                    turnovers=rng.randint(0, 5),
                    fgm=fgm, fga=fga, tpm=tpm, tpa=tpa, ftm=ftm, fta=fta,
                    played=True,
                )
            )
        cursor += count

    if ensure_double is not None:
        # The designated player is the winning side's points leader, whose
        # points are >= 12 by construction.
        winner_side = "home" if home.total_points > visitor.total_points else "visitor"
        side_players = [p for p in players if p.team_side == winner_side]
        target = max(side_players, key=lambda p: p.points)
        idx = players.index(target)
        players[idx] = replace(
            target,
            rebounds=rng.randint(10, 14),
            assists=rng.randint(10, 12) if ensure_double == "triple" else rng.randint(0, 9),
            steals=rng.randint(0, 4),
            blocks=rng.randint(0, 3),
        )

    return GameData(
        game_id=game_id,
        day_of_week=rng.choice(WEEKDAY_POOL),
        home=home,
        visitor=visitor,
        players=tuple(players),
    )


# ---------------------------------------------------------------------------
# Template summaries
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Site:
    """A corruptible region of the rendered summary."""

    kind: str  # number | player-name | team-name | weekday | led-subject | double-word
    span: Span
    spelled: bool = False
    value: int | None = None  # numbers only
    exclude: tuple[int, ...] = ()  # replacement values that would stay true
    player: str | None = None
    claimed_stats: tuple[str, ...] = ()  # player-name sites: stats the sentence claims


@dataclass
class TemplateSummary:
    tokens: list[str]
    sites: list[Site]
    game_id: str


class _Builder:
    def __init__(self, game_id: str):
        self.tokens: list[str] = []
        self.sites: list[Site] = []
        self.game_id = game_id

    def add(self, *words: str) -> Span:
        start = len(self.tokens)
        self.tokens.extend(words)
        return (start, len(self.tokens) - 1)

    def number(self, value: int, *, spelled: bool = False,
               exclude: tuple[int, ...] = ()) -> Span:
        span = self.add(spell_number(value) if spelled else str(value))
        self.sites.append(Site("number", span, spelled, value, exclude))
        return span

    def site(self, kind: str, span: Span, **meta) -> None:
        self.sites.append(Site(kind, span, **meta))


def _name_span(b: _Builder, player: PlayerLine, claimed: tuple[str, ...],
               corruptible: bool = True) -> Span:
    span = b.add(*player.name.split())
    if corruptible:
        b.site("player-name", span, player=player.name, claimed_stats=claimed)
    return span


def _team_span(b: _Builder, team: TeamLine, *, full: bool, corruptible: bool = True) -> Span:
    words = team.full_name.split() if full else team.nickname.split()
    span = b.add(*words)
    if corruptible:
        b.site("team-name", span)
    return span


def render_summary(game: GameData, rng: random.Random) -> TemplateSummary:
    """A factually correct summary: every sentence verifies against the game."""
    b = _Builder(game.game_id)
    winner_side, loser_side, (w_pts, l_pts) = game_outcome(game)
    winner, loser = game.team(winner_side), game.team(loser_side)

    # Opening: records, weekday, final score.
    b.add("The")
    _team_span(b, winner, full=True)
    b.add("(")
    b.number(winner.wins)
    b.add("-")
    b.number(winner.losses)
    b.add(")")
    b.add("defeated", "the")
    _team_span(b, loser, full=True)
    b.add("(")
    b.number(loser.wins)
    b.add("-")
    b.number(loser.losses)
    b.add(")")
    day_span = b.add(game.day_of_week)
    b.site("weekday", day_span)
    pair_exclude = (game.home.total_points, game.visitor.total_points)
    b.number(w_pts, exclude=pair_exclude)
    b.add("-")
    b.number(l_pts, exclude=pair_exclude)
    b.add(".")

    # First half, when someone actually won it.
    home_half, visitor_half = halftime_scores(game)
    if home_half != visitor_half:
        half_winner = "home" if home_half > visitor_half else "visitor"
        half_loser = "visitor" if half_winner == "home" else "home"
        a = max(home_half, visitor_half)
        z = min(home_half, visitor_half)
        b.add("The")
        _team_span(b, game.team(half_winner), full=False)
        b.add("out-scored", "the")
        _team_span(b, game.team(half_loser), full=False, corruptible=False)
        b.number(a, exclude=(home_half, visitor_half))
        b.add("-")
        b.number(z, exclude=(home_half, visitor_half))
        b.add("in", "the", "first", "half", ".")

    # One decided quarter.
    for q in range(4):
        hq = game.home.quarter_points[q]
        vq = game.visitor.quarter_points[q]
        if hq != vq:
            q_winner = "home" if hq > vq else "visitor"
            q_loser = "visitor" if q_winner == "home" else "home"
            ordinal = ("first", "second", "third", "fourth")[q]
            b.add("The")
            _team_span(b, game.team(q_winner), full=False, corruptible=False)
            b.add("out-scored", "the")
            _team_span(b, game.team(q_loser), full=False, corruptible=False)
            b.number(max(hq, vq), exclude=(hq, vq))
            b.add("-")
            b.number(min(hq, vq), exclude=(hq, vq))
            b.add("in", "the", ordinal, "quarter", ".")
            break

    # Leader sentence.
    leader = max(
        (p for p in game.roster(winner_side, played_only=True)),
        key=lambda p: p.points,
    )
    lead_span = b.add(*leader.name.split())
    b.site("led-subject", lead_span, player=leader.name)
    b.add("led", "the")
    _team_span(b, winner, full=False, corruptible=False)
    b.add("with")
    b.number(leader.points)
    b.add("points", ".")

    # Double-double / triple-double sentence for the designated player.
    for p in sorted(game.players, key=lambda p: -p.points):
        if not p.played:
            continue
        status = double_double_status(p)
        if status in (DoubleStatus.DOUBLE_DOUBLE, DoubleStatus.TRIPLE_DOUBLE):
            _name_span(b, p, (), corruptible=False)
            b.add("posted", "a")
            word_span = b.add(status.value)
            b.site("double-word", word_span, player=p.name)
            b.add("with")
            b.number(p.points)
            b.add("points", "and")
            b.number(p.rebounds)
            b.add("rebounds")
            if status is DoubleStatus.TRIPLE_DOUBLE:
                b.add("and")
                b.number(p.assists)
                b.add("assists")
            b.add(".")
            break

    # Full stat lines for a few scorers (skip the doubles player: one sentence
    # per subject keeps each cluster independent).
    mentioned = {leader.name}
    scorers = [
        p for p in sorted(game.players, key=lambda p: -p.points)
        if p.played and p.name not in mentioned
    ]
    verbs = ["scored", "added", "finished", "recorded"]
    for p in scorers[:3]:
        verb = rng.choice(verbs)
        _name_span(
            b, p,
            ("points", "fgm", "fga", "tpm", "tpa", "ftm", "fta", "rebounds", "assists"),
        )
        b.add(verb)
        b.number(p.points)
        b.add("points", "(")
        b.number(p.fgm)
        b.add("-")
        b.number(p.fga)
        b.add("FG", ",")
        b.number(p.tpm)
        b.add("-")
        b.number(p.tpa)
        b.add("3Pt", ",")
        b.number(p.ftm)
        b.add("-")
        b.number(p.fta)
        b.add("FT", ")", ",")
        b.number(p.rebounds, spelled=rng.random() < 0.5)
        b.add("rebounds", "and")
        if p.assists == 1:
            span = b.add("an")
            b.site("number", span, value=1)
            b.add("assist")
        else:
            b.number(p.assists, spelled=rng.random() < 0.5)
            b.add("assists")
        b.add(".")

    # A couple of short lines.
    for p in scorers[3:5]:
        _name_span(b, p, ("points", "rebounds"))
        b.add("chipped", "in")
        b.number(p.points)
        b.add("points", "and")
        if p.rebounds == 1:
            span = b.add("a")
            b.site("number", span, value=1)
            b.add("rebound")
        else:
            b.number(p.rebounds, spelled=rng.random() < 0.4)
            b.add("rebounds")
        b.add(".")

    return TemplateSummary(b.tokens, b.sites, game.game_id)


# ---------------------------------------------------------------------------
# Corruption
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Corruption:
    kind: str
    span: Span  # span of the corrupted tokens in the corrupted document
    tokens: list[str]


def _splice(tokens: list[str], span: Span, replacement: list[str]) -> tuple[list[str], Span]:
    new = tokens[: span[0]] + replacement + tokens[span[1] + 1 :]
    return new, (span[0], span[0] + len(replacement) - 1)


def _wrong_number(rng: random.Random, site: Site) -> int:
    assert site.value is not None
    forbidden = {site.value, *site.exclude}
    while True:
        wrong = site.value + rng.choice([-9, -7, -5, -4, -3, -2, -1, 1, 2, 3, 4, 5, 7, 9])
        if wrong >= 0 and wrong not in forbidden and (not site.spelled or wrong <= 99):
            return wrong


def corrupt(
    summary: TemplateSummary, game: GameData, kind: str, rng: random.Random
) -> Corruption:
    """Inject one fault of the given kind; the summary is not modified.

    Kinds: "number" perturbs one quantity, "name" swaps a player (or team or
    weekday) mention, "led" replaces the leader with a lesser scorer, and
    "double" flips double-double/triple-double.
    """
    tokens = list(summary.tokens)
    if kind == "number":
        site = rng.choice([s for s in summary.sites if s.kind == "number"])
        wrong = _wrong_number(rng, site)
        new, span = _splice(
            tokens, site.span, [spell_number(wrong) if site.spelled else str(wrong)]
        )
        return Corruption(kind, span, new)

    if kind == "name":
        target = rng.choice(["player", "player", "player", "team", "weekday"])
        if target == "player":
            sites = [s for s in summary.sites if s.kind == "player-name"]
            site = rng.choice(sites)
            original = game.find_player(site.player or "")
            assert original is not None
            candidates = [
                p for p in game.players
                if p.played and p.name != original.name
                and _differing_stats(p, original, site.claimed_stats) >= 2
            ]
            swap = rng.choice(candidates)
            new, span = _splice(tokens, site.span, swap.name.split())
            return Corruption(kind, span, new)
        if target == "team":
            site = rng.choice([s for s in summary.sites if s.kind == "team-name"])
            used = {game.home.nickname, game.visitor.nickname}
            city, nick = rng.choice(
                [t for t in NBA_TEAMS if t[1] not in used]
            )
            words = f"{city} {nick}".split() if site.span[1] > site.span[0] else [nick]
            new, span = _splice(tokens, site.span, words)
            return Corruption(kind, span, new)
        site = next(s for s in summary.sites if s.kind == "weekday")
        wrong_day = rng.choice([d for d in WEEKDAY_POOL if d != game.day_of_week])
        new, span = _splice(tokens, site.span, [wrong_day])
        return Corruption(kind, span, new)

    if kind == "led":
        site = next(s for s in summary.sites if s.kind == "led-subject")
        leader = game.find_player(site.player or "")
        assert leader is not None
        lesser = [
            p for p in game.roster(leader.team_side, played_only=True)
            if p.points < leader.points
        ]
        swap = rng.choice(lesser)
        new, span = _splice(tokens, site.span, swap.name.split())
        return Corruption(kind, span, new)

    if kind == "double":
        site = next(s for s in summary.sites if s.kind == "double-word")
        flipped = (
            "triple-double" if tokens[site.span[0]] == "double-double"
            else "double-double"
        )
        new, span = _splice(tokens, site.span, [flipped])
        return Corruption(kind, span, new)

    raise ValueError(f"unknown corruption kind {kind!r}")


def _differing_stats(a: PlayerLine, b: PlayerLine, stats: tuple[str, ...]) -> int:
    return sum(1 for s in stats if getattr(a, s) != getattr(b, s))
