"""Box-score game data and the derived statistics checks rely on.

Input is one JSON document per game in the Rotowire-style schema (see
``docs/game-schema.md`` and the committed sample under ``data/games/``).
Loaded values are immutable and safe to share across workers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Literal

Side = Literal["home", "visitor"]
SIDES: tuple[Side, Side] = ("home", "visitor")

WEEKDAYS = (
    "Monday",
    "Tuesday",
    "Wednesday",
    "Thursday",
    "Friday",
    "Saturday",
    "Sunday",
)

#: Alternate nicknames that appear in summaries but not in box scores.
TEAM_NICKNAME_ALIASES = {
    "sixers": "76ers",
    "cavs": "cavaliers",
    "mavs": "mavericks",
    "blazers": "trail blazers",
    "wolves": "timberwolves",
}

#: Counting stats eligible for leader and double-double computations.
COUNTING_STATS = ("points", "rebounds", "assists", "steals", "blocks")

PERIODS = ("Q1", "Q2", "Q3", "Q4", "H1", "H2")


class GameDataError(Exception):
    """Base for every game-data failure."""


class GameParseError(GameDataError):
    """The document is malformed; ``field`` names the offending key."""

    def __init__(self, message: str, field: str):
        self.field = field
        super().__init__(f"{message} (field: {field})")


class GameValidationError(GameDataError):
    """One or more invariants failed; ``failures`` lists each check."""

    def __init__(self, game_id: str, failures: list[str]):
        self.failures = list(failures)
        super().__init__(
            f"game {game_id!r} failed {len(failures)} check(s):\n  "
            + "\n  ".join(failures)
        )


class TieGameError(GameDataError):
    """Equal final scores: corrupt data in this domain (no ties)."""


class InapplicablePlayerError(GameDataError):
    """A per-player statistic was requested for someone who did not play."""


class DoubleStatus(Enum):
    NONE = "none"
    DOUBLE_DOUBLE = "double-double"
    TRIPLE_DOUBLE = "triple-double"
    HIGHER_DOUBLE = "higher-double"


@dataclass(frozen=True)
class TeamLine:
    city: str
    nickname: str
    wins: int
    losses: int
    total_points: int
    quarter_points: tuple[int, int, int, int]
    overtime_points: tuple[int, ...] = ()

    @property
    def full_name(self) -> str:
        return f"{self.city} {self.nickname}"

    def matches_name(self, phrase: str) -> bool:
        """Case-insensitive match on nickname, city, full name, or alias."""
        p = phrase.strip().lower()
        candidates = {self.city.lower(), self.nickname.lower(), self.full_name.lower()}
        candidates.update(
            alias for alias, canon in TEAM_NICKNAME_ALIASES.items()
            if canon == self.nickname.lower()
        )
        return p in candidates


@dataclass(frozen=True)
class PlayerLine:
    name: str
    team_side: Side
    starter: bool = False
    minutes: int = 0
    points: int = 0
    rebounds: int = 0
    assists: int = 0
    steals: int = 0
    blocks: int = 0
    turnovers: int = 0
    fgm: int = 0
    fga: int = 0
    tpm: int = 0
    tpa: int = 0
    ftm: int = 0
    fta: int = 0
    played: bool = True

    def stat(self, name: str) -> int:
        if name not in COUNTING_STATS and name != "turnovers":
            raise GameDataError(f"not a counting stat: {name!r}")
        return getattr(self, name)


@dataclass(frozen=True)
class GameData:
    game_id: str
    day_of_week: str
    home: TeamLine
    visitor: TeamLine
    players: tuple[PlayerLine, ...] = field(default_factory=tuple)

    def team(self, side: Side) -> TeamLine:
        return self.home if side == "home" else self.visitor

    def roster(self, side: Side, played_only: bool = False) -> list[PlayerLine]:
        return [
            p for p in self.players
            if p.team_side == side and (p.played or not played_only)
        ]

    def find_player(self, name: str) -> PlayerLine | None:
        low = name.strip().lower()
        for p in self.players:
            if p.name.lower() == low:
                return p
        return None


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------

_TEAM_KEYS = ("TEAM-CITY", "TEAM-NAME", "TEAM-WINS", "TEAM-LOSSES", "TEAM-PTS")
_BOX_STAT_KEYS = {
    "PTS": "points",
    "REB": "rebounds",
    "AST": "assists",
    "STL": "steals",
    "BLK": "blocks",
    "TO": "turnovers",
    "FGM": "fgm",
    "FGA": "fga",
    "FG3M": "tpm",
    "FG3A": "tpa",
    "FTM": "ftm",
    "FTA": "fta",
}


def _require(mapping: dict, key: str, where: str) -> Any:
    if key not in mapping:
        raise GameParseError("missing key", f"{where}.{key}")
    return mapping[key]


def _to_int(value: Any, where: str) -> int:
    if isinstance(value, bool):
        raise GameParseError(f"expected integer, got {value!r}", where)
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value.strip())
        except ValueError:
            pass
    raise GameParseError(f"expected integer, got {value!r}", where)


def _parse_minutes(value: Any, where: str) -> int:
    # "36:42" style values keep whole minutes only.
    if isinstance(value, str) and ":" in value:
        value = value.split(":", 1)[0]
    return _to_int(value, where)


def _is_absent(value: Any) -> bool:
    return value is None or (isinstance(value, str) and value.strip().upper() in ("N/A", "NA", ""))


def _parse_team(line: dict, where: str) -> TeamLine:
    for key in _TEAM_KEYS:
        _require(line, key, where)
    quarters = tuple(
        _to_int(_require(line, f"TEAM-PTS_QTR{i}", where), f"{where}.TEAM-PTS_QTR{i}")
        for i in (1, 2, 3, 4)
    )
    overtime = tuple(
        _to_int(v, f"{where}.TEAM-PTS_OT") for v in line.get("TEAM-PTS_OT", [])
    )
    return TeamLine(
        city=str(line["TEAM-CITY"]).strip(),
        nickname=str(line["TEAM-NAME"]).strip(),
        wins=_to_int(line["TEAM-WINS"], f"{where}.TEAM-WINS"),
        losses=_to_int(line["TEAM-LOSSES"], f"{where}.TEAM-LOSSES"),
        total_points=_to_int(line["TEAM-PTS"], f"{where}.TEAM-PTS"),
        quarter_points=quarters,  # type: ignore[arg-type]
        overtime_points=overtime,
    )


def _parse_players(box: dict, home: TeamLine, visitor: TeamLine) -> list[PlayerLine]:
    names = _require(box, "PLAYER_NAME", "box_score")
    cities = _require(box, "TEAM_CITY", "box_score")
    starts = box.get("START_POSITION", {})
    minutes = box.get("MIN", {})

    players: list[PlayerLine] = []
    for idx in sorted(names, key=lambda k: int(k)):
        name = str(names[idx]).strip()
        city = str(cities.get(idx, "")).strip().lower()
        if city == home.city.lower():
            side: Side = "home"
        elif city == visitor.city.lower():
            side = "visitor"
        else:
            raise GameParseError(
                f"player {name!r} city {city!r} matches neither team",
                f"box_score.TEAM_CITY.{idx}",
            )
        # Did-not-play lines carry "N/A" in place of every statistic.
        played = True
        stats = {}
        for key, attr in _BOX_STAT_KEYS.items():
            raw = _require(box, key, "box_score").get(idx)
            if _is_absent(raw):
                played = False
                stats[attr] = 0
            else:
                stats[attr] = _to_int(raw, f"box_score.{key}.{idx}")
        raw_min = minutes.get(idx)
        if raw_min is not None and _is_absent(raw_min):
            played = False
        players.append(
            PlayerLine(
                name=name,
                team_side=side,
                starter=played and bool(str(starts.get(idx, "")).strip()),
                minutes=0 if _is_absent(raw_min) else _parse_minutes(raw_min, f"box_score.MIN.{idx}"),
                played=played,
                **stats,
            )
        )
    return players


def check_invariants(game: GameData) -> list[str]:
    """Return a failure string per violated invariant (empty when valid)."""
    failures: list[str] = []
    for side in SIDES:
        team = game.team(side)
        expected = sum(team.quarter_points) + sum(team.overtime_points)
        if team.total_points != expected:
            failures.append(
                f"{side} total {team.total_points} != period sum {expected}"
            )
        for label, value in (("wins", team.wins), ("losses", team.losses)):
            if value < 0:
                failures.append(f"{side} {label} is negative ({value})")
        if any(q < 0 for q in team.quarter_points):
            failures.append(f"{side} has a negative quarter score")
    if game.home.total_points == game.visitor.total_points:
        failures.append(
            f"tie score {game.home.total_points}-{game.visitor.total_points} "
            "(ties cannot occur in this data)"
        )
    if game.day_of_week not in WEEKDAYS:
        failures.append(f"day {game.day_of_week!r} is not a weekday name")
    for p in game.players:
        for label, made, att in (
            ("fgm <= fga", p.fgm, p.fga),
            ("tpm <= tpa", p.tpm, p.tpa),
            ("ftm <= fta", p.ftm, p.fta),
            ("tpm <= fgm", p.tpm, p.fgm),
        ):
            if made > att:
                failures.append(f"{p.name}: {label} violated ({made} > {att})")
        if any(
            getattr(p, s) < 0
            for s in (*COUNTING_STATS, "turnovers", "minutes", "fgm", "fga", "tpm", "tpa", "ftm", "fta")
        ):
            failures.append(f"{p.name}: negative statistic")
    return failures


def load_game(document: dict, game_id: str = "") -> GameData:
    """Build a validated :class:`GameData` from a parsed JSON document.

    Raises:
        GameParseError: when a required key is missing or not numeric.
        GameValidationError: when parsed values violate the game invariants.
    """
    if not isinstance(document, dict):
        raise GameParseError("document is not a JSON object", "<root>")
    home = _parse_team(_require(document, "home_line", "<root>"), "home_line")
    visitor = _parse_team(_require(document, "vis_line", "<root>"), "vis_line")
    players = _parse_players(_require(document, "box_score", "<root>"), home, visitor)
    game = GameData(
        game_id=str(document.get("game_id", game_id or "game")),
        day_of_week=str(_require(document, "day", "<root>")).strip().capitalize(),
        home=home,
        visitor=visitor,
        players=tuple(players),
    )
    failures = check_invariants(game)
    if failures:
        raise GameValidationError(game.game_id, failures)
    return game


def load_game_file(path: str | Path) -> GameData:
    path = Path(path)
    return load_game(json.loads(path.read_text(encoding="utf-8")), game_id=path.stem)


def load_game_dir(path: str | Path) -> dict[str, GameData]:
    games = {}
    for file in sorted(Path(path).glob("*.json")):
        game = load_game_file(file)
        games[game.game_id] = game
    return games


# ---------------------------------------------------------------------------
# Derived statistics
# ---------------------------------------------------------------------------

def halftime_scores(game: GameData) -> tuple[int, int]:
    """First-half points as ``(home, visitor)``: Q1 + Q2 for each team."""
    home = game.home.quarter_points[0] + game.home.quarter_points[1]
    visitor = game.visitor.quarter_points[0] + game.visitor.quarter_points[1]
    return home, visitor


def double_double_status(player: PlayerLine) -> DoubleStatus:
    """Classify a played line by how many counting stats reach double digits.

    Exactly two of points/rebounds/assists/steals/blocks at ten or more is a
    double-double; exactly three a triple-double (which is *not* also a
    double-double); four or five a higher double.
    """
    if not player.played:
        raise InapplicablePlayerError(f"{player.name} did not play")
    doubled = sum(1 for stat in COUNTING_STATS if getattr(player, stat) >= 10)
    if doubled == 2:
        return DoubleStatus.DOUBLE_DOUBLE
    if doubled == 3:
        return DoubleStatus.TRIPLE_DOUBLE
    if doubled >= 4:
        return DoubleStatus.HIGHER_DOUBLE
    return DoubleStatus.NONE


def team_leaders(game: GameData, side: Side, stat: str) -> set[PlayerLine]:
    """All players on ``side`` attaining the maximum of ``stat`` (ties kept)."""
    if stat not in COUNTING_STATS:
        raise GameDataError(f"leaders undefined for stat {stat!r}")
    roster = game.roster(side, played_only=True)
    if not roster:
        raise GameDataError(f"no played players on {side} roster of {game.game_id!r}")
    best = max(getattr(p, stat) for p in roster)
    return {p for p in roster if getattr(p, stat) == best}


def game_outcome(game: GameData) -> tuple[Side, Side, tuple[int, int]]:
    """Winner side, loser side, and the (winner, loser) score pair."""
    home_pts, vis_pts = game.home.total_points, game.visitor.total_points
    if home_pts == vis_pts:
        raise TieGameError(f"game {game.game_id!r} has equal totals ({home_pts})")
    if home_pts > vis_pts:
        return "home", "visitor", (home_pts, vis_pts)
    return "visitor", "home", (vis_pts, home_pts)


@dataclass(frozen=True)
class PeriodComparison:
    period: str
    outcome: Literal["home_outscored", "visitor_outscored", "tied"]
    home_points: int
    visitor_points: int


def period_points(team: TeamLine, period: str) -> int:
    if period == "H1":
        return team.quarter_points[0] + team.quarter_points[1]
    if period == "H2":
        return team.quarter_points[2] + team.quarter_points[3]
    if period in ("Q1", "Q2", "Q3", "Q4"):
        return team.quarter_points[int(period[1]) - 1]
    raise GameDataError(f"unknown period {period!r}")


def period_comparison(game: GameData, period: str) -> PeriodComparison:
    """Compare the two teams' points in one quarter or half (a tie is a tie,
    never an "out-scoring")."""
    home = period_points(game.home, period)
    visitor = period_points(game.visitor, period)
    if home > visitor:
        outcome: Literal["home_outscored", "visitor_outscored", "tied"] = "home_outscored"
    elif visitor > home:
        outcome = "visitor_outscored"
    else:
        outcome = "tied"
    return PeriodComparison(period, outcome, home, visitor)
