"""Reference data for the 8_20 diagram (published tables, transcribed by hand).

WORDS has one correction: the eighteenth word is printed as a duplicate of
the first; ``LlDdDD̄D̄D̄`` is the only unused word with the printed grading.
"""
import re

WORDS = (
    "lDDDDd̄D̄D̄ LdDDDd̄D̄D̄ LLdDDd̄D̄D̄ LLLdDd̄D̄D̄ LLLLdd̄D̄D̄ lDDDDL̄d̄D̄ LdDDDL̄d̄D̄ "
    "LLdDDL̄d̄D̄ LLLdDL̄d̄D̄ LLLLdL̄d̄D̄ lDDDDL̄L̄d̄ LdDDDL̄L̄d̄ LLdDDL̄L̄d̄ LLLdDL̄L̄d̄ "
    "LLLLdL̄L̄d̄ llDDDD̄D̄D̄ lLdDDD̄D̄D̄ LlDdDD̄D̄D̄ LlDLdD̄D̄D̄ LLddDD̄D̄D̄ LLdLdD̄D̄D̄"
).split()

_CELLS = {
    (3, 5): "T21+", (2, 5): "T5+",
    (1, 3): "T10+ T4+", (2, 3): "T20+ T5-", (3, 3): "T21-",
    (0, 1): "T15+ T9+ T3+", (1, 1): "T19+ T10- T4-", (2, 1): "T20-",
    (-1, -1): "T14+ T8+ T2+", (0, -1): "T17+ T15- T18+ T9- T3-", (1, -1): "T19-",
    (-2, -3): "T13+ T7+", (-1, -3): "T14- T8- T2-", (0, -3): "T17- T18-",
    (-3, -5): "T12+ T1+", (-2, -5): "T16+ T13- T7-",
    (-4, -7): "T6+", (-3, -7): "T12- T1-", (-2, -7): "T16-",
    (-5, -9): "T11+", (-4, -9): "T6-",
    (-5, -11): "T11-",
}
GRADINGS = {name: ij for ij, names in _CELLS.items() for name in names.split()}

_TABLE = """T11+:2T6-; T6+:0; T12-:0; T12+:2T13-; T1+:T16+; T13+:0
T7+:-2T8- -2T2-; T14-:T18-; T8-:-T17-; T2-:T17-
T14+:-2T15- +2T9- +T18+; T8+:-T17+ +2T3-; T2+:T17+ -2T3-; T20+:-2T21-
T17+:0; T18+:-2T19-; T15-:T19-; T9-:T19-; T3-:T19-
T15+:T19+ -2T10-; T9+:T19+ -2T10-; T3+:T19+; T19+:0; T10-:0
T4-:T20-; T10+:0; T4+:T20+ -2T5-; T5+:-T21+; T5-:-T21-"""


def _parse(table):
    out = {}
    for item in re.split(r"[;\n]", table):
        src, rhs = item.strip().split(":")
        row = {}
        if rhs != "0":
            for term in rhs.split():
                m = re.fullmatch(r"([+-]?)(\d*)(T\d+[+-])", term)
                row[m.group(3)] = int(m.group(2) or 1) * (-1 if m.group(1) == "-" else 1)
        out[src] = row
    return out


INCIDENCES = _parse(_TABLE)

# (i, j) -> (rank, torsion)
HOMOLOGY = {
    (1, 3): (1, ()), (0, 1): (1, ()), (1, 1): (0, (2,)), (-1, -1): (1, ()),
    (0, -1): (2, ()), (-2, -3): (1, ()), (-1, -3): (0, (2,)), (-2, -5): (1, (2,)),
    (-4, -7): (1, ()), (-3, -7): (1, ()), (-4, -9): (0, (2,)), (-5, -11): (1, ()),
}

DOTTED_ARC = 7
