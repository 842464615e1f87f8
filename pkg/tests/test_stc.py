import itertools
import random

import pytest

import golden_8_20 as G
from conftest import ALTERNATING, CORPUS_NAMES, UP_TO_7, st_complex, tait
from khtree.cube import build_khovanov_complex
from khtree.errors import NotAlternating, TooSmall
from khtree.homology import homology_of
from khtree.stc import (VARIANTS, build_st_complex, incidence_combinatorial, subpath_census,
                        subpath_shapes, torsion_witness_alternating)
from khtree.trees import activity_word


def _names(st):
    return {n: k for k, n in enumerate(st.names)}


def test_trefoil_reduced_complex():
    st = st_complex("trefoil", "reduced_plus")
    assert sorted(st.grading) == [(0, 3), (2, 7), (3, 9)]
    assert all(not row for row in st.diff)


def test_8_20_generator_placement():
    st = st_complex("8_20", "unreduced")
    assert len(st) == 42
    assert {n: st.grading[k] for n, k in _names(st).items()} == G.GRADINGS


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_generator_shape(name):
    st = st_complex(name, "unreduced")
    assert len(st) == 2 * len(st.trees)
    for t in range(len(st.trees)):
        (ip, jp) = st.grading[st.generator(t, "+")]
        (im, jm) = st.grading[st.generator(t, "-")]
        assert ip == im and jp == jm + 2


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_differential_is_graded_and_squares_to_zero(name):
    for v in VARIANTS:
        st_complex(name, v).check()


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_minus_generators_never_reach_plus(name):
    st = st_complex(name, "unreduced")
    for k, row in enumerate(st.diff):
        if st.gens[k].sign == "-":
            assert all(st.gens[t].sign == "-" for t in row)


def test_8_20_incidences_on_agreeing_rows():
    # rows where the published list and the Morse differential agree exactly
    st = st_complex("8_20", "unreduced")
    for src in ["T11+", "T6+", "T12-", "T1+", "T13+", "T7+", "T14-", "T14+", "T17+",
                "T3-", "T3+", "T19+", "T10-", "T4-", "T10+", "T4+", "T20+", "T5+", "T5-"]:
        row = st.diff[_names(st)[src]]
        assert {st.names[t]: v for t, v in row.items()} == G.INCIDENCES[src], src


def test_published_incidence_list_is_not_a_differential():
    # applying the list twice to T14+ leaves -2 T19-
    table = G.INCIDENCES
    out = {}
    for mid, c in table["T14+"].items():
        for tgt, w in table[mid].items():
            out[tgt] = out.get(tgt, 0) + c * w
    assert {k: v for k, v in out.items() if v} == {"T19-": -2}


@pytest.mark.parametrize("name", ["trefoil", "hopf", "4_1", "5_2", "6_2"])
@pytest.mark.parametrize("variant", ["unreduced", "lee"])
def test_combinatorial_incidence_equals_morse(name, variant):
    st = st_complex(name, variant)
    for a, b in itertools.product(range(len(st)), repeat=2):
        got = incidence_combinatorial(st, st.keys[a], st.keys[b])
        assert got == st.diff[a].get(b, 0)


def test_combinatorial_incidence_8_20_chain_example():
    st = st_complex("8_20", "unreduced")
    n = _names(st)
    key = lambda s: st.keys[n[s]]
    assert incidence_combinatorial(st, key("T9+"), key("T19+")) == st.incidence(key("T9+"), key("T19+"))
    assert incidence_combinatorial(st, key("T9+"), key("T10-")) == -2
    # different degrees give nothing
    assert incidence_combinatorial(st, key("T9+"), key("T21+")) == 0


@pytest.mark.parametrize("name", ["trefoil", "4_1", "5_2", "6_1", "7_4"])
def test_homology_is_invariant_under_edge_order(name):
    g = tait(name)
    want = homology_of(build_khovanov_complex(g))
    rng = random.Random(name)
    for _ in range(3):
        order = list(range(g.n_edges))
        rng.shuffle(order)
        st = build_st_complex(g.with_order(order), "unreduced")
        assert homology_of(st) == want


def test_single_live_edge_rooted_negative_subpath():
    st = st_complex("trefoil", "unreduced")
    (k,) = [k for k, t in enumerate(st.trees) if str(activity_word(st.g, t)) == "lDD"]
    gt = st.twist_trees[k]
    assert subpath_shapes(gt, "rooted_negative") == [gt.live]
    assert len(subpath_census(st, k, "rooted_negative")) == 1


def test_trefoil_two_positive_twists_have_no_negative_subpaths():
    st = st_complex("trefoil", "reduced_plus")
    (k,) = [k for k, t in enumerate(st.trees) if str(activity_word(st.g, t)) == "LLd"]
    assert subpath_shapes(st.twist_trees[k], "negative") == []
    assert subpath_census(st, k, "negative") == []


def test_8_20_t13_has_rooted_negative_subpaths():
    st = st_complex("8_20", "unreduced")
    k = st.tree_names.index("T13")
    assert subpath_shapes(st.twist_trees[k], "rooted_negative")
    assert subpath_census(st, k, "rooted_negative")


def test_census_requires_matching_variant():
    with pytest.raises(ValueError):
        subpath_census(st_complex("trefoil", "unreduced"), 0, "negative")


@pytest.mark.parametrize("name", ALTERNATING)
def test_torsion_witness(name):
    cert = torsion_witness_alternating(tait(name))
    assert cert.ok
    assert abs(cert.incidence) == 2 and cert.torsion_at


def test_figure_eight_witness():
    cert = torsion_witness_alternating(tait("4_1"))
    assert cert.ok and len(cert.cycle) % 2 == 1


def test_hopf_is_too_small():
    with pytest.raises(TooSmall):
        torsion_witness_alternating(tait("hopf"))


def test_non_alternating_is_rejected():
    with pytest.raises(NotAlternating):
        torsion_witness_alternating(tait("8_20"))
