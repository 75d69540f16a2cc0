from __future__ import annotations

from pathlib import Path

import pytest

from comlex.frames import default_registry
from comlex.pdir import default_pdir

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def registry():
    return default_registry()


@pytest.fixture(scope="session")
def pdir():
    return default_pdir()


@pytest.fixture(scope="session")
def sample_lexicon_text():
    return (FIXTURES / "sample-entries.lex").read_text("utf-8")


@pytest.fixture(scope="session")
def golden_lexicon_text():
    return (FIXTURES / "sample-entries.golden.lex").read_text("utf-8")
