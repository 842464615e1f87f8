"""Acceptance battery: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are repeated in
the terminal summary) or directly with ``python tests/test_acceptance.py``.
"""
import random
import sys
import time
from collections import defaultdict
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import golden_8_20 as G  # noqa: E402
from conftest import CORPUS, find_entry, st_complex, tait  # noqa: E402
from khtree.cube import build_khovanov_complex, oriented_state  # noqa: E402
from khtree.homology import (filtered_ranks, homology_of, jones_khovanov,  # noqa: E402
                             rational_homology_ranks)
from khtree.morse import compose, homotopy_identities, morse_differential, verify_acyclic  # noqa: E402
from khtree.sinv import (build_orientation_tree, distinguished_cycle, lobb_bound,  # noqa: E402
                         s_invariant, verify_cycle)
from khtree.stc import VARIANTS, build_st_complex, torsion_witness_alternating  # noqa: E402
from khtree.trees import activity_word, enumerate_spanning_trees  # noqa: E402
from randcx import homology_by_degree, oracle_homology, sample  # noqa: E402

# runtime budgets in seconds, tolerance on every value is exact
BUDGET = {1: 10, 2: 600, 3: 600, 4: 60, 5: 60, 6: 60, 7: 600, 8: 300}
PERMUTATIONS = 10
RANDOM_COMPLEXES = 50

RESULTS = {}


def _names(pred=lambda e: True):
    return [x["name"] for x in CORPUS if pred(x)]


def _knot(e):
    return e["components"] == 1


def criterion_1():
    st = st_complex("8_20", "unreduced")
    g = st.g
    notes, ok = [], True
    words = sorted(str(activity_word(g, t)) for t in enumerate_spanning_trees(g))
    part = len(words) == 21 and words == sorted(G.WORDS)
    notes.append(f"trees={'ok' if part else 'differ'}")
    ok &= part
    grading = {n: st.grading[k] for k, n in enumerate(st.names)}
    part = len(st) == 42 and grading == G.GRADINGS
    notes.append(f"gradings={'ok' if part else 'differ'}")
    ok &= part
    # incidences: one global sign per source bidegree, exact first
    by_bideg = defaultdict(list)
    for src, row in G.INCIDENCES.items():
        k = st.names.index(src)
        got = {st.names[t]: v for t, v in st.diff[k].items()}
        by_bideg[st.grading[k]].append((row, got))
    exact = all(r == g_ for rows in by_bideg.values() for r, g_ in rows)
    bad = [ij for ij, rows in by_bideg.items()
           if not any(all({a: s * b for a, b in r.items()} == g_ for r, g_ in rows)
                      for s in (1, -1))]
    notes.append("incidences=exact" if exact else
                 f"incidences: {len(by_bideg) - len(bad)}/{len(by_bideg)} bidegrees agree "
                 f"up to sign, mismatch at {sorted(bad)}")
    ok &= not bad
    part = homology_of(st).normalised() == G.HOMOLOGY
    notes.append(f"homology={'ok' if part else 'differ'}")
    ok &= part
    return ok, "; ".join(notes)


def criterion_2():
    checked = 0
    for name in _names(lambda e: e["crossings"] <= 8):
        for v in VARIANTS:
            st = st_complex(name, v)
            if v == "lee":
                same = (rational_homology_ranks(st) == rational_homology_ranks(st.cube)
                        and filtered_ranks(st) == filtered_ranks(st.cube))
            else:
                same = homology_of(st) == homology_of(st.cube)
            if not same:
                return False, f"{name} {v} differs"
            checked += 1
    return True, f"{checked} (knot, variant) pairs"


def criterion_3():
    rng = random.Random(20)
    n = 0
    for name in _names(lambda e: e["crossings"] <= 7):
        g = tait(name)
        want = homology_of(build_khovanov_complex(g))
        for _ in range(PERMUTATIONS):
            order = list(range(g.n_edges))
            rng.shuffle(order)
            if homology_of(build_st_complex(g.with_order(order), "unreduced")) != want:
                return False, f"{name} order {order}"
            n += 1
    return True, f"{n} reorderings"


def criterion_4():
    matched = 0
    for seed in range(RANDOM_COMPLEXES):
        cx, m = sample(seed)
        if not verify_acyclic(cx, m):
            return False, f"seed {seed}: matching not acyclic"
        matched += len(m)
        mc = morse_differential(cx, m)
        if any(compose(mc.diff, mc.diff)):
            return False, f"seed {seed}: Morse differential squares to nonzero"
        want = oracle_homology(cx)
        if homology_by_degree(homology_of(mc)) != want:
            return False, f"seed {seed}: homology differs"
        if homotopy_identities(mc) != (True, True):
            return False, f"seed {seed}: homotopy identities fail"
    return True, f"{RANDOM_COMPLEXES} complexes, {matched} matched pairs"


def criterion_5():
    for e in CORPUS:
        g = tait(e["name"])
        jn = jones_khovanov(g.diagram)
        if homology_of(build_khovanov_complex(g)).euler() != jn:
            return False, e["name"]
    return True, f"{len(CORPUS)} diagrams"


def criterion_6():
    names = _names(lambda e: e["alternating"] and e["crossings"] >= 3)
    for name in names:
        cert = torsion_witness_alternating(tait(name))
        if not cert.ok or abs(cert.incidence) != 2:
            return False, f"{name}: incidence {cert.incidence}"
    return True, f"{len(names)} alternating diagrams"


def criterion_7():
    for name, s in (("unknot", 0), ("trefoil", 2), ("left_trefoil", -2)):
        rep = s_invariant(tait(name))
        if rep.s != s or rep.oracle_s != s:
            return False, f"{name}: s={rep.s}, oracle {rep.oracle_s}"
    knots = _names(_knot)
    for name in knots:
        g = tait(name)
        small = find_entry(name)["crossings"] <= 7
        rep = s_invariant(g, oracle=small)
        if small and rep.s != rep.oracle_s:
            return False, f"{name}: ST {rep.s} vs oracle {rep.oracle_s}"
        if not rep.bound_holds:
            return False, f"{name}: s={rep.s} < {rep.lobb}"
        j1, seif = lobb_bound(g)
        if j1 != seif or j1 != rep.lobb:
            return False, f"{name}: j-1={j1}, Seifert expression {seif}"
    return True, f"{len(knots)} knots"


def criterion_8():
    knots = _names(_knot)
    for name in knots:
        ot = build_orientation_tree(tait(name))
        ok, bad = verify_cycle(ot)
        if not ok:
            return False, f"{name}: {bad}"
        phi, st = distinguished_cycle(ot)
        s0 = oriented_state(ot.g.diagram)
        if not phi or any(state != s0 for state, _ in phi):
            return False, f"{name}: support leaves the oriented resolution"
        if st.cube.apply(phi):
            return False, f"{name}: not closed"
    return True, f"{len(knots)} knots"


CRITERIA = {k: globals()[f"criterion_{k}"] for k in range(1, 9)}


def evaluate(k):
    if k not in RESULTS:
        t0 = time.perf_counter()
        ok, detail = CRITERIA[k]()
        dt = time.perf_counter() - t0
        if dt > BUDGET[k]:
            ok, detail = False, f"{detail}; {dt:.1f}s over the {BUDGET[k]}s budget"
        line = f"criterion {k}: {'PASS' if ok else 'FAIL'} ({dt:.1f}s) {detail}"
        RESULTS[k] = (ok, line)
        print(line)
    return RESULTS[k]


@pytest.mark.parametrize("k", range(1, 9))
def test_criterion(k):
    ok, line = evaluate(k)
    assert ok, line


if __name__ == "__main__":
    failed = [k for k in CRITERIA if not evaluate(k)[0]]
    sys.exit(1 if failed else 0)
