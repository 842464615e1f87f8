"""The bundled small-knot corpus."""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .diagram import LinkDiagram


@lru_cache(maxsize=None)
def _raw(path=None):
    if path is None:
        text = resources.files("khtree").joinpath("data/corpus.json").read_text()
    else:
        text = Path(path).read_text()
    return json.loads(text)["knots"]


def load_corpus(path=None):
    return list(_raw(path))


def find_entry(name, path=None):
    for e in _raw(path):
        if name == e["name"] or name in e.get("aliases", ()):
            return e
    raise KeyError(f"no corpus entry named {name!r}")


def diagram_of(entry):
    return LinkDiagram([tuple(x) for x in entry["pd"]], dotted_arc=entry.get("dotted_arc"))


def get_knot(name, path=None):
    return diagram_of(find_entry(name, path))
