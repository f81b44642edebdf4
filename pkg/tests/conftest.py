import sys
from pathlib import Path

import pytest

# run against the working tree whether or not the package is installed
sys.path.insert(0, str(Path(__file__).parent))
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from stagkit import load_fixture
from stagkit import trees as T
from stagkit.trees import ElementaryTree, epsilon, nonterminal, terminal, Constraint


@pytest.fixture(scope="session")
def blink():
    return load_fixture("blink")


@pytest.fixture(scope="session")
def eight():
    return load_fixture("eight")


@pytest.fixture(scope="session")
def smoke():
    return load_fixture("smoke")


def four_count_tag() -> dict[str, ElementaryTree]:
    """TAG for a^n b^n c^n d^n: counting auxiliary with null adjunction at
    root and foot, so every derivation chains through the inner node."""
    na = Constraint(T.NONE_ALLOWED)
    init = ElementaryTree("start", T.INITIAL, nonterminal("T", epsilon()))
    aux = ElementaryTree(
        "count",
        T.AUXILIARY,
        nonterminal(
            "T",
            terminal("a"),
            nonterminal(
                "T",
                terminal("b"),
                nonterminal("T", constraint=na),
                terminal("c"),
            ),
            terminal("d"),
            constraint=na,
        ),
        foot=(2, 2),
    )
    return {t.name: t for t in (init, aux)}


@pytest.fixture(scope="session")
def four_count():
    return four_count_tag()
