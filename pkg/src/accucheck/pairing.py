"""Associating token files with their box-score games."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Mapping

from .gamedata import GameData
from .gsml import GsmlError, TokenizedText


def load_docmap(path: str | Path) -> dict[str, str]:
    """Read a TEXT_ID,GAME_ID CSV (header required)."""
    mapping: dict[str, str] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:2]] != ["TEXT_ID", "GAME_ID"]:
            raise GsmlError(f"bad docmap header in {path}: {header!r}")
        for row in reader:
            if row:
                mapping[row[0].strip()] = row[1].strip()
    return mapping


def pair_texts_with_games(
    texts: Mapping[str, TokenizedText],
    games: Mapping[str, GameData],
    docmap: Mapping[str, str] | None = None,
) -> dict[str, GameData]:
    """Resolve each document to a game.

    An explicit map wins; otherwise the game whose id equals the document id;
    otherwise, when the corpus has exactly one game, that game.
    """
    paired: dict[str, GameData] = {}
    missing: list[str] = []
    for doc_id in texts:
        game_id = (docmap or {}).get(doc_id, doc_id)
        if game_id in games:
            paired[doc_id] = games[game_id]
        elif len(games) == 1:
            paired[doc_id] = next(iter(games.values()))
        else:
            missing.append(doc_id)
    if missing:
        raise GsmlError(
            f"no game found for documents {missing[:5]}"
            + ("..." if len(missing) > 5 else "")
        )
    return paired
