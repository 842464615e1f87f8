import itertools
import os
import subprocess
import sys

import numpy as np
import pytest

from conftest import CORPUS_NAMES, KNOTS, st_complex, tait
from khtree import _kernels
from khtree.corpus import get_knot
from khtree.cube import (VARIANTS, Resolver, band_diagram, build_khovanov_complex,
                         build_lee_complex, chain_to_indices, frobenius_merge, frobenius_split,
                         oriented_resolution_generator, oriented_state, saddle_map)
from khtree.diagram import LinkDiagram, checkerboard_and_tait
from khtree.errors import IncompatibleBand, KhError
from khtree.homology import homology_of, jones_khovanov, rational_homology_ranks
from khtree.stc import state_tree_map
from khtree.trees import TreeOrder

import golden_8_20 as G


def test_crossingless_unknot():
    cx = build_khovanov_complex(checkerboard_and_tait(LinkDiagram([])))
    assert sorted(cx.grading) == [(0, -1), (0, 1)]
    assert all(not row for row in cx.diff)


def test_trefoil_unreduced_homology(trefoil):
    cx = build_khovanov_complex(trefoil)
    res = cx.resolver
    assert len(cx) == sum(2 ** int(c) for c in res.counts)
    h = homology_of(cx).normalised()
    assert h == {(0, 1): (1, ()), (0, 3): (1, ()), (2, 5): (1, ()), (3, 9): (1, ()),
                 (3, 7): (0, (2,))}


def test_8_20_unreduced_homology(g820):
    h = homology_of(build_khovanov_complex(g820)).normalised()
    assert h == G.HOMOLOGY


@pytest.mark.parametrize("name", ["unknot", "trefoil", "8_20"])
def test_lee_homology_has_rank_two(name):
    assert rational_homology_ranks(build_lee_complex(tait(name))) == {0: 2}


def test_unknot_oriented_generators():
    g = checkerboard_and_tait(LinkDiagram([]))
    x_minus_1 = {(0, 1): 1, (0, 0): -1}
    x_plus_1 = {(0, 1): 1, (0, 0): 1}
    gens = [oriented_resolution_generator(g, rev) for rev in (False, True)]
    assert sorted(map(sorted, (x.items() for x in gens))) == \
        sorted(map(sorted, (x_minus_1.items(), x_plus_1.items())))


def test_trefoil_oriented_generator(trefoil):
    res = Resolver(trefoil.diagram)
    s = oriented_state(trefoil.diagram)
    assert res.counts[s] == 2
    gen = oriented_resolution_generator(trefoil)
    assert len(gen) == 4
    lee = build_lee_complex(trefoil)
    assert not lee.apply_idx(chain_to_indices(lee, gen))


def test_frobenius_tables():
    assert frobenius_merge("1", "1") == "1"
    assert frobenius_merge("1", "x") == frobenius_merge("x", "1") == "x"
    assert frobenius_merge("x", "x") is None
    assert frobenius_split("1") == [("1", "x"), ("x", "1")]
    assert frobenius_split("x") == [("x", "x")]


@pytest.mark.parametrize("name", CORPUS_NAMES)
@pytest.mark.parametrize("variant", VARIANTS)
def test_differential_squares_to_zero(name, variant):
    build_khovanov_complex(tait(name), variant).check()


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_lee_differential_squares_to_zero(name):
    build_lee_complex(tait(name)).check()


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_euler_characteristic_is_jones(name):
    g = tait(name)
    assert build_khovanov_complex(g).euler() == jones_khovanov(g.diagram)


def test_jones_examples(trefoil):
    assert jones_khovanov(LinkDiagram([])) == {-1: 1, 1: 1}
    assert jones_khovanov(trefoil.diagram) == {1: 1, 3: 1, 5: 1, 9: -1}


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_generator_counts(name):
    g = tait(name)
    full = build_khovanov_complex(g, "unreduced")
    res = full.resolver
    assert len(full) == sum(2 ** int(c) for c in res.counts)
    for v in ("reduced_plus", "reduced_minus"):
        assert 2 * len(build_khovanov_complex(g, v)) == len(full)


@pytest.mark.parametrize("name", [n for n in CORPUS_NAMES if tait(n).n_edges <= 7])
def test_cube_splits_over_trees(name):
    st = st_complex(name, "unreduced")
    cx = st.cube
    owner = state_tree_map(st)
    assert len(owner) == 1 << cx.g.n_edges
    order = TreeOrder(st.g, st.trees)
    for k, row in enumerate(cx.diff):
        a = owner[cx.keys[k][0]]
        for t in row:
            b = owner[cx.keys[t][0]]
            if a != b:
                assert b in order.below(a)


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_oriented_generators_are_lee_cycles(name):
    d = get_knot(name)
    for r in range(len(d.components) + 1):
        for comps in itertools.combinations(range(len(d.components)), r):
            dd = d.reversed(comps) if comps else d
            g = checkerboard_and_tait(dd)
            lee = build_lee_complex(g)
            for rev in (False, True):
                z = chain_to_indices(lee, oriented_resolution_generator(g, rev))
                assert z and not lee.apply_idx(z)


def _bands(d):
    for a in d.arcs:
        for b in d.arcs:
            try:
                yield (a, b), band_diagram(d, a, b)
            except KhError:
                continue


@pytest.mark.parametrize("name", ["trefoil", "4_1", "5_2", "hopf"])
def test_saddle_map_is_a_chain_map(name):
    d = get_knot(name)
    found = 0
    for band, d1 in _bands(d):
        g0, g1 = checkerboard_and_tait(d), checkerboard_and_tait(d1)
        phi, c0, c1 = saddle_map(g0, g1, band)
        for x in range(len(c0)):
            lhs, rhs = {}, {}
            for y, v in phi[x].items():
                for z, w in c1.diff[y].items():
                    lhs[z] = lhs.get(z, 0) + v * w
            for y, v in c0.diff[x].items():
                for z, w in phi[y].items():
                    rhs[z] = rhs.get(z, 0) + v * w
            assert {k: v for k, v in lhs.items() if v} == {k: v for k, v in rhs.items() if v}
        found += 1
    assert found


def test_band_between_far_arcs_is_rejected(trefoil):
    with pytest.raises(IncompatibleBand):
        band_diagram(trefoil.diagram, 1, 1)


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_numba_and_numpy_kernels_agree(name):
    d = get_knot(name)
    slots = np.array(d.slots_array(), dtype=np.int64).reshape(-1, 4)
    a = _kernels.resolve_all(slots, len(d.arcs))
    b = _kernels.resolve_all_numpy(slots, len(d.arcs))
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


def test_env_flag_disables_numba():
    env = dict(os.environ, KHTREE_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "from khtree import _kernels; print(_kernels.HAVE_NUMBA)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"


def test_fallback_homology_matches():
    code = ("from khtree.corpus import get_knot; from khtree.diagram import checkerboard_and_tait;"
            "from khtree.cube import build_khovanov_complex; from khtree.homology import homology_of;"
            "print(sorted(homology_of(build_khovanov_complex(checkerboard_and_tait(get_knot('5_2'))))"
            ".normalised().items()))")
    env = dict(os.environ, KHTREE_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True)
    h = homology_of(build_khovanov_complex(tait("5_2"))).normalised()
    assert out.stdout.strip() == str(sorted(h.items()))
