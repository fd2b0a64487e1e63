"""Lexicons for mention and number recognition in tokenized summaries.

Built from the box-score files that accompany a corpus: team phrases (city,
nickname, full name, plus common alternate nicknames), player names (full
names and unambiguous surnames), weekday names, and spelled-out numbers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .gamedata import GameData, PlayerLine, Side, TEAM_NICKNAME_ALIASES, TeamLine, WEEKDAYS

_DIGITS_RE = re.compile(r"^\d+$")

_UNITS = {
    "zero": 0, "one": 1, "two": 2, "three": 3, "four": 4,
    "five": 5, "six": 6, "seven": 7, "eight": 8, "nine": 9,
}
_TEENS = {
    "ten": 10, "eleven": 11, "twelve": 12, "thirteen": 13, "fourteen": 14,
    "fifteen": 15, "sixteen": 16, "seventeen": 17, "eighteen": 18, "nineteen": 19,
}
_TENS = {
    "twenty": 20, "thirty": 30, "forty": 40, "fifty": 50,
    "sixty": 60, "seventy": 70, "eighty": 80, "ninety": 90,
}

#: Singular noun -> box-score statistic named by "a/an <noun>".
STAT_NOUN_SINGULAR = {
    "point": "points",
    "rebound": "rebounds",
    "board": "rebounds",
    "assist": "assists",
    "steal": "steals",
    "block": "blocks",
    "turnover": "turnovers",
}
STAT_NOUNS = dict(STAT_NOUN_SINGULAR)
STAT_NOUNS.update({f"{noun}s": stat for noun, stat in STAT_NOUN_SINGULAR.items()})

WEEKDAY_SET = {d.lower() for d in WEEKDAYS}

#: League-wide (city, nickname) table so foreign-team mentions are still
#: recognized as team names even when neither roster matches.
NBA_TEAMS = (
    ("Atlanta", "Hawks"), ("Boston", "Celtics"), ("Brooklyn", "Nets"),
    ("Charlotte", "Hornets"), ("Chicago", "Bulls"), ("Cleveland", "Cavaliers"),
    ("Dallas", "Mavericks"), ("Denver", "Nuggets"), ("Detroit", "Pistons"),
    ("Golden State", "Warriors"), ("Houston", "Rockets"), ("Indiana", "Pacers"),
    ("Los Angeles", "Clippers"), ("Los Angeles", "Lakers"), ("Memphis", "Grizzlies"),
    ("Miami", "Heat"), ("Milwaukee", "Bucks"), ("Minnesota", "Timberwolves"),
    ("New Orleans", "Pelicans"), ("New York", "Knicks"), ("Oklahoma City", "Thunder"),
    ("Orlando", "Magic"), ("Philadelphia", "76ers"), ("Phoenix", "Suns"),
    ("Portland", "Trail Blazers"), ("Sacramento", "Kings"), ("San Antonio", "Spurs"),
    ("Toronto", "Raptors"), ("Utah", "Jazz"), ("Washington", "Wizards"),
)


def spelled_number_value(token: str) -> int | None:
    """Value of a single spelled-number token ("six", "twenty-two"), else None."""
    t = token.lower()
    if t in _UNITS:
        return _UNITS[t]
    if t in _TEENS:
        return _TEENS[t]
    if t in _TENS:
        return _TENS[t]
    if t == "hundred":
        return 100
    if "-" in t:
        tens, _, unit = t.partition("-")
        if tens in _TENS and unit in _UNITS and _UNITS[unit] > 0:
            return _TENS[tens] + _UNITS[unit]
    return None


@dataclass(frozen=True)
class NumberToken:
    """A recognized quantity: value plus the token span that states it."""

    value: int
    start: int
    end: int


def parse_number_at(tokens: Sequence[str], i: int) -> NumberToken | None:
    """Recognize a number starting at token ``i``.

    Handles digit tokens, spelled numbers up to one hundred (single token,
    "twenty two", or "twenty - two"), and "a"/"an" immediately before a
    singular counting noun ("a rebound" means one rebound).  Returns None on
    anything else; never spans more than three tokens.
    """
    tok = tokens[i]
    if _DIGITS_RE.match(tok):
        return NumberToken(int(tok), i, i)
    low = tok.lower()
    if low in ("a", "an"):
        if i + 1 < len(tokens) and tokens[i + 1].lower() in STAT_NOUN_SINGULAR:
            return NumberToken(1, i, i)
        return None
    value = spelled_number_value(tok)
    if value is None:
        return None
    if low in _TENS:
        # Compound forms: "twenty two" and "twenty - two".
        if i + 1 < len(tokens):
            unit = _UNITS.get(tokens[i + 1].lower())
            if unit:
                return NumberToken(value + unit, i, i + 1)
        if i + 2 < len(tokens) and tokens[i + 1] == "-":
            unit = _UNITS.get(tokens[i + 2].lower())
            if unit:
                return NumberToken(value + unit, i, i + 2)
    return NumberToken(value, i, i)


def spell_number(value: int) -> str:
    """Inverse of :func:`spelled_number_value` for 0..100."""
    for table in (_UNITS, _TEENS, _TENS):
        for word, v in table.items():
            if v == value:
                return word
    if value == 100:
        return "hundred"
    tens = (value // 10) * 10
    unit = value % 10
    if 20 <= value < 100 and unit:
        return f"{spell_number(tens)}-{spell_number(unit)}"
    raise ValueError(f"cannot spell {value}")


# ---------------------------------------------------------------------------
# Mention scanning
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Mention:
    """A recognized entity in the token stream."""

    kind: str  # "player" | "team" | "weekday"
    start: int
    end: int
    name: str  # canonical name (player full name / team full name / weekday)
    side: Side | None = None  # None for foreign teams
    player: PlayerLine | None = None


def _team_phrases(city: str, nickname: str) -> list[tuple[str, ...]]:
    city_toks = tuple(city.lower().split())
    nick_toks = tuple(nickname.lower().split())
    phrases = [city_toks + nick_toks, nick_toks, city_toks]
    for alias, canon in TEAM_NICKNAME_ALIASES.items():
        if canon == nickname.lower():
            phrases.append(tuple(alias.split()))
            phrases.append(city_toks + tuple(alias.split()))
    return phrases


class GameLexicon:
    """Entity lexicon for one game or for a whole corpus of games.

    Phrase tables are token tuples matched case-insensitively with
    longest-match-first semantics at a position.  Surnames shared by two or
    more players are dropped from the surname table: a bare ambiguous
    surname is not a resolvable mention.
    """

    def __init__(self, games: Iterable[GameData] | GameData):
        if isinstance(games, GameData):
            games = [games]
        self._team_by_phrase: dict[tuple[str, ...], tuple[str, Side | None]] = {}
        self._player_by_phrase: dict[tuple[str, ...], PlayerLine] = {}
        surname_owners: dict[str, list[PlayerLine]] = {}

        # Foreign teams first so game teams override them with sides.
        for city, nickname in NBA_TEAMS:
            for phrase in _team_phrases(city, nickname):
                self._team_by_phrase[phrase] = (f"{city} {nickname}", None)
        single_game = None
        for game in games:
            single_game = game
            for side, team in (("home", game.home), ("visitor", game.visitor)):
                for phrase in _team_phrases(team.city, team.nickname):
                    self._team_by_phrase[phrase] = (team.full_name, side)  # type: ignore[arg-type]
            for player in game.players:
                toks = tuple(player.name.lower().split())
                self._player_by_phrase[toks] = player
                surname_owners.setdefault(toks[-1], []).append(player)
        self._single_game = single_game

        for surname, owners in surname_owners.items():
            if len({p.name for p in owners}) == 1 and len(surname) > 1:
                self._player_by_phrase.setdefault((surname,), owners[0])

        self._max_team_len = max((len(p) for p in self._team_by_phrase), default=0)
        self._max_player_len = max((len(p) for p in self._player_by_phrase), default=0)

    @staticmethod
    def _mention_cased(token: str) -> bool:
        # Mentions start upper-cased; digit-led names like "76ers" also count.
        return token[0].isupper() or not token[0].isalpha()

    def match_team_at(self, tokens: Sequence[str], i: int) -> Mention | None:
        for length in range(min(self._max_team_len, len(tokens) - i), 0, -1):
            phrase = tuple(t.lower() for t in tokens[i : i + length])
            hit = self._team_by_phrase.get(phrase)
            if hit and self._mention_cased(tokens[i]):
                name, side = hit
                return Mention("team", i, i + length - 1, name, side=side)
        return None

    def match_player_at(self, tokens: Sequence[str], i: int) -> Mention | None:
        for length in range(min(self._max_player_len, len(tokens) - i), 0, -1):
            phrase = tuple(t.lower() for t in tokens[i : i + length])
            player = self._player_by_phrase.get(phrase)
            if player and tokens[i][0].isupper():
                return Mention(
                    "player", i, i + length - 1, player.name,
                    side=player.team_side, player=player,
                )
        return None

    def scan_mentions(self, tokens: Sequence[str]) -> list[Mention]:
        """All team, player, and weekday mentions, left to right."""
        mentions: list[Mention] = []
        i = 0
        while i < len(tokens):
            if tokens[i].lower() in WEEKDAY_SET and tokens[i][0].isupper():
                mentions.append(
                    Mention("weekday", i, i, tokens[i].capitalize())
                )
                i += 1
                continue
            team = self.match_team_at(tokens, i)
            player = self.match_player_at(tokens, i)
            # Prefer the longer match; a tie goes to the player reading.
            best = None
            for cand in (player, team):
                if cand and (best is None or cand.end > best.end):
                    best = cand
            if best:
                mentions.append(best)
                i = best.end + 1
            else:
                i += 1
        return mentions


# ---------------------------------------------------------------------------
# Surface classes (for frequency analysis)
# ---------------------------------------------------------------------------

NUM_DIGIT = "NUM-DIGIT"
NUM_WORD = "NUM-WORD"
DAY_WEEK = "DAY-WEEK"
TEAM = "TEAM"
PLAYER = "PLAYER"


def classify_surface(tokens: Sequence[str], start: int, lexicon: GameLexicon) -> str:
    """Lexical class of the token a span starts with.

    NUM-DIGIT, NUM-WORD, DAY-WEEK, TEAM, and PLAYER when a lexicon phrase
    begins at ``start``; otherwise the lower-cased token itself.
    """
    tok = tokens[start]
    if _DIGITS_RE.match(tok):
        return NUM_DIGIT
    if spelled_number_value(tok) is not None:
        return NUM_WORD
    if tok.lower() in WEEKDAY_SET:
        return DAY_WEEK
    if lexicon.match_team_at(tokens, start):
        return TEAM
    if lexicon.match_player_at(tokens, start):
        return PLAYER
    return tok.lower()
