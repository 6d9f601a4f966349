from pathlib import Path

import pytest

from descoord.automata import from_words
from descoord.crosscheck import language_words
from descoord.instances import example_one

FIXTURES = Path(__file__).parent / "fixtures"
AT = ("a", "tau")


def lang(*words, alphabet=AT):
    return from_words(words, alphabet)


def words(g):
    """Finite marked language as a set of space-joined strings ('' for ε)."""
    return {" ".join(w) for w in language_words(g)}


@pytest.fixture
def ex1():
    p, k1, k2, c = example_one()
    return p, k1, k2, c


@pytest.fixture
def fixtures():
    return FIXTURES
