import sys
from functools import lru_cache
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from khtree.corpus import diagram_of, find_entry, get_knot, load_corpus  # noqa: E402
from khtree.diagram import checkerboard_and_tait  # noqa: E402
from khtree.stc import build_st_complex, names_from_words  # noqa: E402
from khtree.trees import enumerate_spanning_trees  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

CORPUS = load_corpus()
CORPUS_NAMES = [e["name"] for e in CORPUS]
KNOTS = [e["name"] for e in CORPUS if e["components"] == 1]
ALTERNATING = [e["name"] for e in CORPUS if e["alternating"] and e["crossings"] >= 3]
UP_TO_7 = [e["name"] for e in CORPUS if e["crossings"] <= 7]


@lru_cache(maxsize=None)
def tait(name):
    return checkerboard_and_tait(get_knot(name))


@lru_cache(maxsize=None)
def st_complex(name, variant):
    g = tait(name)
    names = None
    entry = find_entry(name)
    if entry.get("tree_words"):
        names = names_from_words(g, enumerate_spanning_trees(g), entry["tree_words"])
    return build_st_complex(g, variant, tree_names=names)


@pytest.fixture(scope="session")
def g820():
    return tait("8_20")


@pytest.fixture(scope="session")
def trefoil():
    return tait("trefoil")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k][1])
