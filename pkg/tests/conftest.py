from __future__ import annotations

from pathlib import Path

import pytest

from accucheck.gamedata import GameData, load_game_file
from accucheck.gsml import MistakeList, TokenizedText, load_token_dir, parse_gsml_file

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="session")
def figure1_game() -> GameData:
    return load_game_file(DATA / "figure1" / "games" / "figure1.json")


@pytest.fixture(scope="session")
def figure1_texts() -> dict[str, TokenizedText]:
    return load_token_dir(DATA / "figure1" / "texts")


@pytest.fixture(scope="session")
def figure1_gold(figure1_texts) -> MistakeList:
    return parse_gsml_file(DATA / "figure1" / "gold.csv", figure1_texts)
