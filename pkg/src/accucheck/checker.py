"""Rule-based fact checking of summaries against box-score data.

Three steps: extract factual claims from the token stream, attach subjects
(nearest preceding player or team mention), and verify each claim against
the game data.  Refuted claims emit categorized mistakes: a wrong quantity
is a Number error on the number tokens, a wrong player/team/weekday is a
Name error on the name tokens, and a refuted comparison word (out-scored,
defeated, led, double-double, home) is a Word error on the trigger tokens.
Season averages and next-game statements cannot be verified from one game's
data and are flagged Not-checkable.

When two or more claims about one subject fail together but another player's
line satisfies all of them, the cheapest correction is the name, so a single
Name error on the subject replaces the pile of Number errors.  Score pairs
bind their first number to the syntactic subject of the comparison; when the
subject cannot be resolved (or the pair matches the swapped orientation
exactly) the pair is given the benefit of the doubt, favoring precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterator, Literal, Sequence

from .gamedata import (
    DoubleStatus,
    GameData,
    PlayerLine,
    Side,
    double_double_status,
    game_outcome,
    period_points,
    team_leaders,
)
from .gsml import Mistake, MistakeCategory, MistakeList, TokenizedText
from .lexicon import (
    GameLexicon,
    Mention,
    NumberToken,
    STAT_NOUNS,
    parse_number_at,
)

Span = tuple[int, int]

PLAYER_STATS = ("points", "rebounds", "assists", "steals", "blocks", "turnovers")
SHOOTING_STATS = ("fgm", "fga", "tpm", "tpa", "ftm", "fta")

_OUTSCORE_TRIGGERS = {"out-scored", "outscored", "out-scoring", "outscoring"}
_DEFEAT_TRIGGERS = {"defeated", "beat", "topped", "downed", "routed", "edged"}
_LOSS_TRIGGERS = {"lost", "fell"}
_LED_TRIGGERS = {"led", "leads", "leading"}
_AVERAGE_WORDS = {"averaging", "averages", "averaged", "average"}
_SENTENCE_END = {".", "!", "?"}
_CLAUSE_END = {".", "!", "?", ",", ";"}
_STATLINE_UNITS = {"fg": ("fgm", "fga"), "3pt": ("tpm", "tpa"), "ft": ("ftm", "fta")}
_STAT_VERBS = {
    "scored", "added", "had", "recorded", "posted", "grabbed", "finished",
    "chipped", "dished", "contributed", "tallied", "totaled", "put", "led",
    "leads",
}
_PERIOD_ORDINALS = {"first": 1, "second": 2, "third": 3, "fourth": 4}


@dataclass(frozen=True)
class EntityRef:
    """A claim subject or object: who or what the claim is about."""

    kind: Literal["player", "team", "pronoun-unresolved"]
    resolved_name: str | None = None
    side: Side | None = None
    span: Span | None = None
    unknown: bool = False  # named entity absent from this game's data
    player: PlayerLine | None = None


@dataclass(frozen=True)
class Claim:
    """One extracted factual assertion awaiting verification."""

    doc_id: str
    span: Span
    property: str
    value: object = None
    subject: EntityRef | None = None
    object_ref: EntityRef | None = None
    value_span: Span | None = None  # number tokens to blame for Number errors
    trigger_span: Span | None = None  # word tokens to blame for Word errors
    period: str | None = None  # Q1..Q4 / H1 / H2; None = whole game
    sentence: int = 0
    lead_stat: str = "points"


@dataclass(frozen=True)
class Verdict:
    claim: Claim
    status: Literal["supported", "refuted", "uncheckable"]
    expected: object = None
    emitted: Mistake | None = None
    also_emitted: tuple[Mistake, ...] = ()  # second wrong half of a pair


# ---------------------------------------------------------------------------
# Sentence and mention scanning
# ---------------------------------------------------------------------------

def _split_sentences(tokens: Sequence[str]) -> list[tuple[int, int]]:
    sentences = []
    start = 0
    for i, tok in enumerate(tokens):
        if tok in _SENTENCE_END:
            sentences.append((start, i))
            start = i + 1
    if start < len(tokens):
        sentences.append((start, len(tokens) - 1))
    return sentences


def _sentence_period(tokens: Sequence[str], start: int, end: int) -> str | None:
    for i in range(start, end + 1):
        low = tokens[i].lower()
        if low == "halftime":
            return "H1"
        if low in ("quarter", "half") and i > start:
            n = _PERIOD_ORDINALS.get(tokens[i - 1].lower())
            if n and low == "quarter":
                return f"Q{n}"
            if n and n <= 2:
                return f"H{n}"
    return None


def _is_next_game_sentence(tokens: Sequence[str], start: int, end: int) -> bool:
    window = [t.lower() for t in tokens[start : end + 1]]
    return "next" in window and ("game" in window or "games" in window)


def _clause_end(tokens: Sequence[str], start: int, sentence_end: int) -> int:
    for i in range(start, sentence_end + 1):
        if tokens[i] in _CLAUSE_END:
            return max(start, i - 1)
    return sentence_end


def _looks_like_name_token(token: str) -> bool:
    return bool(token) and token[0].isupper() and all(
        ch.isalpha() or ch in ".'-" for ch in token
    )


def _scan_mentions(lexicon: GameLexicon, tokens: Sequence[str]) -> list[Mention]:
    """Lexicon mentions plus unknown-person candidates.

    A run of two or more capitalized tokens directly followed by a statistic
    verb, matching nothing in the lexicon, reads as a player this game's
    rosters do not know (a hallucinated or wrong-game name).
    """
    mentions = lexicon.scan_mentions(tokens)
    covered = {i for m in mentions for i in range(m.start, m.end + 1)}
    i = 0
    extra: list[Mention] = []
    while i < len(tokens):
        if i in covered or not _looks_like_name_token(tokens[i]) \
                or tokens[i].lower() in ("the", "a", "an"):
            i += 1
            continue
        j = i
        while j + 1 < len(tokens) and (j + 1) not in covered \
                and _looks_like_name_token(tokens[j + 1]):
            j += 1
        if j > i and j + 1 < len(tokens) and tokens[j + 1].lower() in _STAT_VERBS:
            extra.append(Mention("player", i, j, " ".join(tokens[i : j + 1])))
        i = j + 1
    return sorted(mentions + extra, key=lambda m: m.start)


def parse_number_token(tokens: Sequence[str], i: int) -> NumberToken | None:
    """Recognize a quantity starting at token ``i``: digit tokens, spelled
    numbers up to one hundred (including "twenty-two" and "twenty two"), and
    a/an before a singular counting noun.  Total; never wider than 3 tokens."""
    return parse_number_at(tokens, i)


@dataclass
class _SentenceCtx:
    index: int
    start: int
    end: int  # inclusive (usually the punctuation token)
    mentions: list[Mention] = field(default_factory=list)
    period: str | None = None


# ---------------------------------------------------------------------------
# Claim extraction
# ---------------------------------------------------------------------------

def extract_claims(text: TokenizedText, game: GameData) -> list[Claim]:
    """Extract verifiable claims from one summary.

    Pattern rules cover stat counts ("18 points", "six rebounds", "an
    assist"), shooting lines "( 7 - 13 FG , 0 - 1 3Pt , 4 - 5 FT )", win-loss
    records "( 3 - 2 )" after a team name, score pairs with game or period
    context, defeated/out-scored/led/double-double/home trigger words,
    weekday mentions, and next-game or season-average clauses.  Unparseable
    regions produce no claims.
    """
    lexicon = GameLexicon(game)
    tokens = text.tokens
    claims: list[Claim] = []
    consumed: set[int] = set()
    all_mentions = _scan_mentions(lexicon, tokens)

    for s_idx, (s_start, s_end) in enumerate(_split_sentences(tokens)):
        ctx = _SentenceCtx(
            index=s_idx,
            start=s_start,
            end=s_end,
            mentions=[m for m in all_mentions if s_start <= m.start <= s_end],
            period=_sentence_period(tokens, s_start, s_end),
        )
        if _is_next_game_sentence(tokens, s_start, s_end):
            trigger = next(
                i for i in range(s_start, s_end + 1) if tokens[i].lower() == "next"
            )
            end = s_end - 1 if tokens[s_end] in _SENTENCE_END else s_end
            claims.append(
                Claim(
                    doc_id=text.doc_id,
                    span=(trigger, max(trigger, end)),
                    property="next-game",
                    trigger_span=(trigger, trigger),
                    sentence=s_idx,
                )
            )
            continue
        claims.extend(_extract_statlines(text, tokens, ctx, consumed))
        claims.extend(_extract_records(text, tokens, ctx, consumed))
        claims.extend(_extract_score_pairs(text, tokens, ctx, consumed))
        claims.extend(_extract_triggers(text, tokens, ctx))
        claims.extend(_extract_weekdays(text, ctx))
        claims.extend(_extract_stat_counts(text, tokens, ctx, consumed))
    return claims


def _extract_statlines(
    text: TokenizedText, tokens: Sequence[str], ctx: _SentenceCtx, consumed: set[int]
) -> Iterator[Claim]:
    i = ctx.start
    while i <= ctx.end:
        if tokens[i] != "(":
            i += 1
            continue
        j = i + 1
        found = []
        while j + 3 <= ctx.end and tokens[j].isdigit() and tokens[j + 1] == "-" \
                and tokens[j + 2].isdigit() and tokens[j + 3].lower() in _STATLINE_UNITS:
            made_attr, att_attr = _STATLINE_UNITS[tokens[j + 3].lower()]
            found.append((j, made_attr, int(tokens[j])))
            found.append((j + 2, att_attr, int(tokens[j + 2])))
            j += 4
            if j <= ctx.end and tokens[j] == ",":
                j += 1
        if found and j <= ctx.end and tokens[j] == ")":
            consumed.update(range(i, j + 1))
            for pos, prop, value in found:
                yield Claim(
                    doc_id=text.doc_id,
                    span=(i, j),
                    property=prop,
                    value=value,
                    value_span=(pos, pos),
                    sentence=ctx.index,
                )
            i = j + 1
        else:
            i += 1


def _extract_records(
    text: TokenizedText, tokens: Sequence[str], ctx: _SentenceCtx, consumed: set[int]
) -> Iterator[Claim]:
    for mention in ctx.mentions:
        if mention.kind != "team":
            continue
        i = mention.end + 1
        if (
            i + 4 <= ctx.end
            and tokens[i] == "("
            and tokens[i + 1].isdigit()
            and tokens[i + 2] == "-"
            and tokens[i + 3].isdigit()
            and tokens[i + 4] == ")"
            and not consumed.intersection(range(i, i + 5))
        ):
            consumed.update(range(i, i + 5))
            subject = _team_ref(mention)
            for offset, prop in ((1, "record-wins"), (3, "record-losses")):
                yield Claim(
                    doc_id=text.doc_id,
                    span=(mention.start, i + 4),
                    property=prop,
                    value=int(tokens[i + offset]),
                    subject=subject,
                    value_span=(i + offset, i + offset),
                    sentence=ctx.index,
                )


def _extract_score_pairs(
    text: TokenizedText, tokens: Sequence[str], ctx: _SentenceCtx, consumed: set[int]
) -> Iterator[Claim]:
    prop = "half-score" if ctx.period in ("H1", "H2") else (
        "quarter-score" if ctx.period else "game-score"
    )
    for i in range(ctx.start, ctx.end - 1):
        if i in consumed or not tokens[i].isdigit():
            continue
        if tokens[i + 1] == "-" and tokens[i + 2].isdigit() and (i + 2) not in consumed:
            consumed.update((i, i + 1, i + 2))
            yield Claim(
                doc_id=text.doc_id,
                span=(i, i + 2),
                property=prop,
                value=(int(tokens[i]), int(tokens[i + 2])),
                value_span=(i, i + 2),
                period=ctx.period,
                sentence=ctx.index,
            )


def _extract_triggers(
    text: TokenizedText, tokens: Sequence[str], ctx: _SentenceCtx
) -> Iterator[Claim]:
    for i in range(ctx.start, ctx.end + 1):
        low = tokens[i].lower()
        if low in _OUTSCORE_TRIGGERS:
            yield Claim(
                doc_id=text.doc_id, span=(i, i), property="out-scored",
                trigger_span=(i, i), period=ctx.period, sentence=ctx.index,
            )
        elif low in _DEFEAT_TRIGGERS:
            yield Claim(
                doc_id=text.doc_id, span=(i, i), property="defeated",
                trigger_span=(i, i), sentence=ctx.index,
            )
        elif low in _LOSS_TRIGGERS and i < ctx.end and tokens[i + 1].lower() == "to":
            yield Claim(
                doc_id=text.doc_id, span=(i, i + 1), property="lost-to",
                trigger_span=(i, i + 1), sentence=ctx.index,
            )
        elif low in _LED_TRIGGERS:
            stat = "points"
            for j in range(i + 1, min(i + 6, ctx.end + 1)):
                if tokens[j].lower() == "in":
                    nxt = tokens[j + 1].lower() if j + 1 <= ctx.end else ""
                    stat = "points" if nxt == "scoring" else STAT_NOUNS.get(nxt, stat)
                    break
            yield Claim(
                doc_id=text.doc_id, span=(i, i), property="led",
                trigger_span=(i, i), lead_stat=stat, sentence=ctx.index,
            )
        elif low in ("double-double", "triple-double"):
            yield Claim(
                doc_id=text.doc_id, span=(i, i), property=low,
                trigger_span=(i, i), sentence=ctx.index,
            )
        elif low == "hosted" or (
            low == "home" and i > ctx.start and tokens[i - 1].lower() == "at"
        ):
            yield Claim(
                doc_id=text.doc_id, span=(i, i), property="home-game",
                value=True, trigger_span=(i, i), sentence=ctx.index,
            )
        elif low == "road" and i > ctx.start and tokens[i - 1].lower() == "the":
            yield Claim(
                doc_id=text.doc_id, span=(i, i), property="home-game",
                value=False, trigger_span=(i, i), sentence=ctx.index,
            )


def _extract_weekdays(text: TokenizedText, ctx: _SentenceCtx) -> Iterator[Claim]:
    for mention in ctx.mentions:
        if mention.kind == "weekday":
            yield Claim(
                doc_id=text.doc_id,
                span=(mention.start, mention.end),
                property="day-of-week",
                value=mention.name,
                value_span=(mention.start, mention.end),
                sentence=ctx.index,
            )


def _extract_stat_counts(
    text: TokenizedText, tokens: Sequence[str], ctx: _SentenceCtx, consumed: set[int]
) -> Iterator[Claim]:
    i = ctx.start
    while i <= ctx.end:
        if i in consumed:
            i += 1
            continue
        number = parse_number_at(tokens, i)
        if number is None or consumed.intersection(range(number.start, number.end + 1)):
            i += 1
            continue
        noun_idx = number.end + 1
        if noun_idx > ctx.end or tokens[noun_idx].lower() not in STAT_NOUNS:
            i = number.end + 1
            continue
        stat = STAT_NOUNS[tokens[noun_idx].lower()]
        consumed.update(range(number.start, noun_idx + 1))
        if _in_average_context(tokens, ctx, number, noun_idx):
            trigger = _find_average_trigger(tokens, ctx, number.start)
            start = trigger if trigger is not None else number.start
            yield Claim(
                doc_id=text.doc_id,
                span=(start, _clause_end(tokens, noun_idx, ctx.end)),
                property="season-average",
                value=number.value,
                value_span=(number.start, number.end),
                sentence=ctx.index,
            )
        else:
            yield Claim(
                doc_id=text.doc_id,
                span=(number.start, noun_idx),
                property=stat,
                value=number.value,
                value_span=(number.start, number.end),
                sentence=ctx.index,
            )
        i = noun_idx + 1


def _in_average_context(
    tokens: Sequence[str], ctx: _SentenceCtx, number: NumberToken, noun_idx: int
) -> bool:
    before = range(max(ctx.start, number.start - 3), number.start)
    if any(tokens[i].lower() in _AVERAGE_WORDS for i in before):
        return True
    after = [t.lower() for t in tokens[noun_idx + 1 : min(noun_idx + 5, ctx.end + 1)]]
    if after[:1] == ["per"]:
        return True
    return after[:3] == ["on", "the", "season"] or after[:2] == ["this", "season"]


def _find_average_trigger(
    tokens: Sequence[str], ctx: _SentenceCtx, number_start: int
) -> int | None:
    for i in range(number_start - 1, max(ctx.start, number_start - 4) - 1, -1):
        if tokens[i].lower() in _AVERAGE_WORDS:
            return i
    return None


def _team_ref(mention: Mention) -> EntityRef:
    return EntityRef(
        kind="team",
        resolved_name=mention.name,
        side=mention.side,
        span=(mention.start, mention.end),
        unknown=mention.side is None,
    )


def _player_ref(mention: Mention) -> EntityRef:
    return EntityRef(
        kind="player",
        resolved_name=mention.name,
        side=mention.side,
        span=(mention.start, mention.end),
        unknown=mention.player is None,
        player=mention.player,
    )


# ---------------------------------------------------------------------------
# Subject resolution
# ---------------------------------------------------------------------------

_PLAYER_SUBJECT_PROPS = set(PLAYER_STATS) | set(SHOOTING_STATS) | {
    "led", "double-double", "triple-double", "season-average",
}
_TEAM_SUBJECT_PROPS = {
    "out-scored", "defeated", "lost-to", "game-score", "half-score",
    "quarter-score", "home-game",
}


class _MentionIndex:
    def __init__(self, mentions: list[Mention], sentences: list[tuple[int, int]]):
        self.by_sentence: dict[int, list[Mention]] = {
            i: [] for i in range(len(sentences))
        }
        for m in mentions:
            for s_idx, (s_start, s_end) in enumerate(sentences):
                if s_start <= m.start <= s_end:
                    self.by_sentence[s_idx].append(m)
                    break

    def before(self, pos: int, s_idx: int, kind: str) -> tuple[Mention, int] | None:
        """Nearest mention of ``kind`` before ``pos``: same sentence first,
        then anywhere in the previous sentence."""
        for idx in (s_idx, s_idx - 1):
            if idx < 0:
                break
            pool = [
                m for m in self.by_sentence.get(idx, [])
                if m.kind == kind and (idx < s_idx or m.end < pos)
            ]
            if pool:
                return pool[-1], idx
        return None

    def after(self, pos: int, s_idx: int, kind: str) -> Mention | None:
        for m in self.by_sentence.get(s_idx, []):
            if m.kind == kind and m.start > pos:
                return m
        return None


def resolve_claim_subjects(
    claims: Sequence[Claim], text: TokenizedText, game: GameData
) -> list[Claim]:
    """Attach subjects and objects.

    Player claims bind to the nearest preceding player mention in the same
    sentence, falling back to the previous sentence; when a team mention sits
    closer (same sentence), a bare points count reads as a team total.  Team
    comparisons take the nearest team mention before the trigger as subject
    and the first one after it as object; score pairs inherit the subject of
    their sentence's comparison trigger, so "defeated the Suns ... 102 - 91"
    binds 102 to the winner, not to the nearest name.
    """
    lexicon = GameLexicon(game)
    tokens = text.tokens
    sentences = _split_sentences(tokens)
    index = _MentionIndex(_scan_mentions(lexicon, tokens), sentences)

    resolved: list[Claim] = []
    trigger_subjects: dict[int, tuple[EntityRef | None, EntityRef | None]] = {}
    pair_claims: list[int] = []

    for claim in claims:
        if claim.subject is not None or claim.property in ("day-of-week", "next-game"):
            resolved.append(_widen_span(claim))
            continue
        anchor = claim.trigger_span[0] if claim.trigger_span else claim.span[0]
        if claim.property in _PLAYER_SUBJECT_PROPS:
            resolved.append(_resolve_player_claim(claim, anchor, index, tokens))
        elif claim.property in _TEAM_SUBJECT_PROPS:
            subj_hit = index.before(anchor, claim.sentence, "team")
            obj_m = index.after(
                claim.trigger_span[1] if claim.trigger_span else claim.span[1],
                claim.sentence, "team",
            )
            subject = _team_ref(subj_hit[0]) if subj_hit else EntityRef("pronoun-unresolved")
            obj = _team_ref(obj_m) if obj_m else None
            out = _widen_span(replace(claim, subject=subject, object_ref=obj))
            resolved.append(out)
            if claim.property in ("out-scored", "defeated"):
                trigger_subjects.setdefault(claim.sentence, (out.subject, out.object_ref))
            elif claim.property == "lost-to":
                # Score order after "lost to" is ambiguous: leave pairs free.
                trigger_subjects.setdefault(claim.sentence, (None, None))
            if claim.property in ("game-score", "half-score", "quarter-score"):
                pair_claims.append(len(resolved) - 1)
        else:
            resolved.append(_widen_span(claim))

    # Pairs ride on their sentence's comparison trigger when one exists.
    for i in pair_claims:
        claim = resolved[i]
        inherited = trigger_subjects.get(claim.sentence)
        if inherited is not None:
            subject, obj = inherited
            resolved[i] = _widen_span(
                replace(
                    claim,
                    subject=subject or EntityRef("pronoun-unresolved"),
                    object_ref=obj,
                )
            )
    return resolved


def _resolve_player_claim(
    claim: Claim, anchor: int, index: _MentionIndex, tokens: Sequence[str]
) -> Claim:
    mention_hit = None
    if claim.property == "led":
        by = _led_by_subject(tokens, claim, index)
        if by is not None:
            mention_hit = (by, claim.sentence)
    if mention_hit is None:
        mention_hit = index.before(anchor, claim.sentence, "player")
    team_hit = index.before(anchor, claim.sentence, "team")

    # A count with a team mention but no player (and no singular pronoun)
    # earlier in the same sentence is about the team, not a player: "the
    # Grizzlies scored 102 points" versus "Conley led the Grizzlies with 24".
    team_claims_it = (
        team_hit is not None
        and team_hit[1] == claim.sentence
        and not (mention_hit is not None and mention_hit[1] == claim.sentence)
        and not any(
            tokens[i].lower() in ("he", "his", "him", "who")
            for i in range(team_hit[0].end + 1, anchor)
        )
    )
    if team_claims_it and claim.property in PLAYER_STATS:
        prop = "team-total" if claim.property == "points" else "team-stat"
        return _widen_span(
            replace(claim, property=prop, subject=_team_ref(team_hit[0]))
        )
    if team_claims_it and claim.property == "led":
        return _widen_span(
            replace(claim, property="team-led", subject=_team_ref(team_hit[0]))
        )

    subject = (
        _player_ref(mention_hit[0]) if mention_hit else EntityRef("pronoun-unresolved")
    )
    obj = None
    if claim.property == "led":
        trigger_end = claim.trigger_span[1] if claim.trigger_span else claim.span[1]
        obj_m = index.after(trigger_end, claim.sentence, "team")
        obj = _team_ref(obj_m) if obj_m else None
    return _widen_span(replace(claim, subject=subject, object_ref=obj))


def _led_by_subject(
    tokens: Sequence[str], claim: Claim, index: _MentionIndex
) -> Mention | None:
    # "... led by Mike Conley" puts the subject after the trigger.
    trigger = claim.trigger_span[0] if claim.trigger_span else claim.span[0]
    if trigger + 1 < len(tokens) and tokens[trigger + 1].lower() == "by":
        for m in index.by_sentence.get(claim.sentence, []):
            if m.kind == "player" and m.start == trigger + 2:
                return m
    return None


def _widen_span(claim: Claim) -> Claim:
    """Grow the claim span to cover its subject/object/trigger regions.

    Clause-level claims (season averages, next games) keep their clause span:
    the whole uncheckable statement is the finding, not the names in it.
    """
    if claim.property in ("season-average", "next-game"):
        return claim
    points = [claim.span[0], claim.span[1]]
    for ref in (claim.subject, claim.object_ref):
        if ref and ref.span:
            points.extend(ref.span)
    if claim.trigger_span:
        points.extend(claim.trigger_span)
    if claim.value_span:
        points.extend(claim.value_span)
    return replace(claim, span=(min(points), max(points)))


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

def verify_claims(
    claims: Sequence[Claim], game: GameData, *, led_strict: bool = False
) -> list[Verdict]:
    """Check resolved claims against the game data.

    Claims sharing one player subject in one sentence verify as a group so
    the name-versus-numbers correction choice can be made.  ``led_strict``
    downgrades refuted led-claims to warnings (the verdict stays refuted but
    no mistake is emitted).
    """
    verdicts: list[Verdict] = []
    player_groups: dict[tuple[int, str], list[Claim]] = {}
    rest: list[Claim] = []
    for claim in claims:
        subject = claim.subject
        if (
            claim.property in _PLAYER_SUBJECT_PROPS
            and claim.property != "season-average"
            and subject is not None
            and subject.kind == "player"
        ):
            key = (claim.sentence, subject.resolved_name or "")
            player_groups.setdefault(key, []).append(claim)
        else:
            rest.append(claim)

    for group in player_groups.values():
        verdicts.extend(_verify_player_group(group, game, led_strict))
    for claim in rest:
        verdicts.append(_verify_single(claim, game))
    return verdicts


def _claim_holds_for(claim: Claim, player: PlayerLine, game: GameData) -> bool:
    prop = claim.property
    if prop in PLAYER_STATS or prop in SHOOTING_STATS:
        return player.played and getattr(player, prop) == claim.value
    if prop in ("double-double", "triple-double"):
        if not player.played:
            return False
        want = (
            DoubleStatus.DOUBLE_DOUBLE if prop == "double-double"
            else DoubleStatus.TRIPLE_DOUBLE
        )
        return double_double_status(player) is want
    if prop == "led":
        obj = claim.object_ref
        if obj is not None and obj.unknown:
            return False
        side = (obj.side if obj else None) or player.team_side
        if side != player.team_side:
            return False
        return player in team_leaders(game, side, claim.lead_stat)
    raise ValueError(f"not a player-line property: {prop}")


def _verify_player_group(
    group: list[Claim], game: GameData, led_strict: bool
) -> list[Verdict]:
    subject = group[0].subject
    assert subject is not None
    player = subject.player

    if player is None:
        # Named subject absent from both rosters: the name is the mistake.
        matches = [
            p for p in game.players
            if p.played and all(_claim_holds_for(c, p, game) for c in group)
        ]
        note = "player not in this game's box score"
        if matches:
            note = f"should be {matches[0].name}"
        emitted = None
        if subject.span is not None:
            emitted = Mistake(
                group[0].doc_id, subject.span[0], subject.span[1],
                MistakeCategory.NAME, note,
            )
        return [
            Verdict(c, "refuted", None, emitted if i == 0 else None)
            for i, c in enumerate(group)
        ]

    failures = [c for c in group if not _claim_holds_for(c, player, game)]
    if not failures:
        return [Verdict(c, "supported") for c in group]

    if len(failures) >= 2 and subject.span is not None:
        matches = [
            p for p in game.players
            if p.played and p.name != player.name
            and all(_claim_holds_for(c, p, game) for c in group)
        ]
        if matches:
            emitted = Mistake(
                group[0].doc_id, subject.span[0], subject.span[1],
                MistakeCategory.NAME, f"should be {matches[0].name}",
            )
            return [
                Verdict(
                    c, "refuted" if c in failures else "supported",
                    None, emitted if i == 0 else None,
                )
                for i, c in enumerate(group)
            ]

    verdicts = []
    for claim in group:
        if claim in failures:
            verdicts.append(_emit_player_failure(claim, player, game, led_strict))
        else:
            verdicts.append(Verdict(claim, "supported"))
    return verdicts


def _emit_player_failure(
    claim: Claim, player: PlayerLine, game: GameData, led_strict: bool
) -> Verdict:
    prop = claim.property
    if prop in PLAYER_STATS or prop in SHOOTING_STATS:
        expected = getattr(player, prop)
        span = claim.value_span or claim.span
        return Verdict(
            claim, "refuted", expected,
            Mistake(claim.doc_id, span[0], span[1], MistakeCategory.NUMBER,
                    f"should be {expected}"),
        )
    if prop == "led":
        if claim.object_ref is not None and claim.object_ref.unknown:
            span = claim.object_ref.span or claim.span
            return Verdict(
                claim, "refuted", None,
                Mistake(claim.doc_id, span[0], span[1], MistakeCategory.NAME,
                        "team not in this game"),
            )
        side = (claim.object_ref.side if claim.object_ref else None) or player.team_side
        leaders = sorted(p.name for p in team_leaders(game, side, claim.lead_stat))
        emitted = None
        if not led_strict:
            span = claim.trigger_span or claim.span
            emitted = Mistake(
                claim.doc_id, span[0], span[1], MistakeCategory.WORD,
                f"{', '.join(leaders)} led in {claim.lead_stat}",
            )
        return Verdict(claim, "refuted", leaders, emitted)
    # double-double / triple-double
    status = double_double_status(player) if player.played else DoubleStatus.NONE
    span = claim.trigger_span or claim.span
    detail = (
        f"{player.name} recorded a {status.value}"
        if status is not DoubleStatus.NONE
        else f"{player.name} reached double figures in fewer than two categories"
    )
    return Verdict(
        claim, "refuted", status.value,
        Mistake(claim.doc_id, span[0], span[1], MistakeCategory.WORD, detail),
    )


def _verify_single(claim: Claim, game: GameData) -> Verdict:
    prop = claim.property
    if prop in ("next-game", "season-average"):
        return Verdict(
            claim, "uncheckable", None,
            Mistake(claim.doc_id, claim.span[0], claim.span[1],
                    MistakeCategory.NOT_CHECKABLE, "needs data beyond this game"),
        )
    if prop == "day-of-week":
        if str(claim.value).lower() == game.day_of_week.lower():
            return Verdict(claim, "supported")
        span = claim.value_span or claim.span
        return Verdict(
            claim, "refuted", game.day_of_week,
            Mistake(claim.doc_id, span[0], span[1], MistakeCategory.NAME,
                    f"should be {game.day_of_week}"),
        )
    if prop in ("record-wins", "record-losses"):
        return _verify_record(claim, game)
    if prop in ("game-score", "half-score", "quarter-score"):
        return _verify_score_pair(claim, game)
    if prop == "out-scored":
        return _verify_outscored(claim, game)
    if prop in ("defeated", "lost-to"):
        return _verify_outcome(claim, game)
    if prop == "home-game":
        return _verify_home(claim, game)
    if prop == "team-total":
        return _verify_team_total(claim, game)
    # team-stat (non-points team counts), team-led, unresolved subjects:
    # nothing in the box score settles these, so stay silent.
    return Verdict(claim, "uncheckable")


def _subject_side(claim: Claim) -> Side | None:
    subject = claim.subject
    if subject is not None and subject.kind == "team" and not subject.unknown:
        return subject.side
    obj = claim.object_ref
    if obj is not None and not obj.unknown and obj.side is not None:
        # Two-team game: a known object pins the subject to the other side.
        return "home" if obj.side == "visitor" else "visitor"
    return None


def _foreign_ref_mistake(claim: Claim) -> Verdict | None:
    for ref in (claim.subject, claim.object_ref):
        if ref is not None and ref.kind == "team" and ref.unknown and ref.span:
            return Verdict(
                claim, "refuted", None,
                Mistake(claim.doc_id, ref.span[0], ref.span[1],
                        MistakeCategory.NAME, "team not in this game"),
            )
    return None


def _verify_record(claim: Claim, game: GameData) -> Verdict:
    foreign = _foreign_ref_mistake(claim)
    if foreign:
        return foreign
    side = _subject_side(claim)
    if side is None:
        return Verdict(claim, "uncheckable")
    team = game.team(side)
    expected = team.wins if claim.property == "record-wins" else team.losses
    if claim.value == expected:
        return Verdict(claim, "supported")
    span = claim.value_span or claim.span
    return Verdict(
        claim, "refuted", expected,
        Mistake(claim.doc_id, span[0], span[1], MistakeCategory.NUMBER,
                f"should be {expected}"),
    )


def _pair_expected(claim: Claim, game: GameData, side: Side) -> tuple[int, int]:
    other: Side = "home" if side == "visitor" else "visitor"
    if claim.period:
        return (
            period_points(game.team(side), claim.period),
            period_points(game.team(other), claim.period),
        )
    return game.team(side).total_points, game.team(other).total_points


def _verify_score_pair(claim: Claim, game: GameData) -> Verdict:
    foreign = _foreign_ref_mistake(claim)
    if foreign:
        return foreign
    v1, v2 = claim.value  # type: ignore[misc]
    home_first = _pair_expected(claim, game, "home")
    swapped = (home_first[1], home_first[0])
    # Either exact orientation passes; the order convention is not reliable
    # enough to refute a pair that matches the data backwards.
    if (v1, v2) in (home_first, swapped):
        return Verdict(claim, "supported")
    side = _subject_side(claim)
    if side is not None:
        expected = _pair_expected(claim, game, side)
    else:
        expected = min(
            (home_first, swapped),
            key=lambda exp: int(v1 != exp[0]) + int(v2 != exp[1]),
        )
    first, second = claim.value_span  # type: ignore[misc]
    mistakes = []
    if v1 != expected[0]:
        mistakes.append(Mistake(claim.doc_id, first, first,
                                MistakeCategory.NUMBER, f"should be {expected[0]}"))
    if v2 != expected[1]:
        mistakes.append(Mistake(claim.doc_id, second, second,
                                MistakeCategory.NUMBER, f"should be {expected[1]}"))
    return Verdict(
        claim, "refuted", expected,
        mistakes[0], also_emitted=tuple(mistakes[1:]),
    )


def _verify_outscored(claim: Claim, game: GameData) -> Verdict:
    foreign = _foreign_ref_mistake(claim)
    if foreign:
        return foreign
    side = _subject_side(claim)
    if side is None:
        home, visitor = _pair_expected(claim, game, "home")
        if home != visitor:
            # Someone did out-score the other; cannot pin the subject.
            return Verdict(claim, "uncheckable")
        subject_pts, object_pts = home, visitor
    else:
        subject_pts, object_pts = _pair_expected(claim, game, side)
    if subject_pts > object_pts:
        return Verdict(claim, "supported")
    span = claim.trigger_span or claim.span
    detail = (
        "the score was tied" if subject_pts == object_pts
        else f"they were out-scored {object_pts}-{subject_pts}"
    )
    return Verdict(
        claim, "refuted", (subject_pts, object_pts),
        Mistake(claim.doc_id, span[0], span[1], MistakeCategory.WORD, detail),
    )


def _verify_outcome(claim: Claim, game: GameData) -> Verdict:
    foreign = _foreign_ref_mistake(claim)
    if foreign:
        return foreign
    side = _subject_side(claim)
    if side is None:
        return Verdict(claim, "uncheckable")
    winner, _, _ = game_outcome(game)
    won = side == winner
    claimed_win = claim.property == "defeated"
    if won == claimed_win:
        return Verdict(claim, "supported")
    span = claim.trigger_span or claim.span
    return Verdict(
        claim, "refuted", winner,
        Mistake(claim.doc_id, span[0], span[1], MistakeCategory.WORD,
                f"the {game.team(winner).nickname} won"),
    )


def _verify_home(claim: Claim, game: GameData) -> Verdict:
    side = _subject_side(claim)
    if side is None:
        return Verdict(claim, "uncheckable")
    at_home = side == "home"
    if at_home == bool(claim.value):
        return Verdict(claim, "supported")
    span = claim.trigger_span or claim.span
    return Verdict(
        claim, "refuted", "home" if at_home else "road",
        Mistake(claim.doc_id, span[0], span[1], MistakeCategory.WORD,
                f"the {game.team(side).nickname} were "
                + ("at home" if at_home else "on the road")),
    )


def _verify_team_total(claim: Claim, game: GameData) -> Verdict:
    side = _subject_side(claim)
    if side is None:
        return Verdict(claim, "uncheckable")
    expected = game.team(side).total_points
    if claim.value == expected:
        return Verdict(claim, "supported")
    span = claim.value_span or claim.span
    return Verdict(
        claim, "refuted", expected,
        Mistake(claim.doc_id, span[0], span[1], MistakeCategory.NUMBER,
                f"should be {expected}"),
    )


# ---------------------------------------------------------------------------
# Composition
# ---------------------------------------------------------------------------

def check_document(
    text: TokenizedText, game: GameData, *, led_strict: bool = False
) -> MistakeList:
    """Extract, resolve, and verify; return the emitted mistakes as a list.

    Output spans never overlap: duplicates collapse, same-category overlaps
    merge, and a cross-category collision keeps the earlier span.
    """
    claims = extract_claims(text, game)
    claims = resolve_claim_subjects(claims, text, game)
    verdicts = verify_claims(claims, game, led_strict=led_strict)
    mistakes: list[Mistake] = []
    for verdict in verdicts:
        if verdict.emitted is not None:
            mistakes.append(verdict.emitted)
        mistakes.extend(verdict.also_emitted)
    return _merge_emitted(mistakes)


def _merge_emitted(mistakes: list[Mistake]) -> MistakeList:
    deduped: dict[tuple[str, int, int, MistakeCategory], Mistake] = {}
    for m in mistakes:
        deduped.setdefault((m.doc_id, m.start, m.end, m.category), m)
    ordered = sorted(deduped.values(), key=lambda m: (m.doc_id, m.start, m.end))
    kept: list[Mistake] = []
    for m in ordered:
        if kept and m.overlaps(kept[-1]):
            prev = kept[-1]
            if m.category is prev.category:
                kept[-1] = Mistake(
                    m.doc_id, prev.start, max(prev.end, m.end), m.category, prev.note
                )
            continue
        kept.append(m)
    return MistakeList(tuple(kept))
