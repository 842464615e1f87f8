import pytest
from hypothesis import given, strategies as st

from khtree.chain import BigradedComplex
from khtree.errors import GradingMismatch
from khtree.homology import homology_of
from khtree.morse import (Matching, chain_map_check, compose, critical_cells,
                          homotopy_identities, morse_differential, verify_acyclic)
from randcx import homology_by_degree, oracle_homology, sample

seeds = st.integers(0, 2 ** 32 - 1)


def _square():
    # two cells below, two above, all four incidences are units
    return BigradedComplex("abcd", [(0, 0), (0, 0), (1, 0), (1, 0)],
                           [{2: 1, 3: 1}, {2: 1, 3: -1}, {}, {}])


def test_two_cycle_matching_is_rejected():
    cx = _square()
    rep = verify_acyclic(cx, Matching.from_pairs([(0, 2), (1, 3)]))
    assert not rep and rep.reason == "directed cycle"
    assert sorted(rep.witness) == [0, 1, 2, 3]


def test_single_pair_is_accepted():
    assert verify_acyclic(_square(), Matching.from_pairs([(0, 2)]))


def test_non_unit_weight_is_rejected():
    cx = BigradedComplex("ab", [(0, 0), (1, 0)], [{1: 2}, {}])
    rep = verify_acyclic(cx, Matching.from_pairs([(0, 1)]))
    assert not rep and "unit" in rep.reason


def test_matching_across_two_degrees_raises():
    cx = BigradedComplex("abc", [(0, 0), (1, 0), (2, 0)], [{1: 1}, {}, {}])
    with pytest.raises(GradingMismatch):
        verify_acyclic(cx, Matching.from_pairs([(0, 2)]))


def test_cell_cannot_be_matched_twice():
    m = Matching.from_pairs([(0, 2)])
    with pytest.raises(ValueError):
        m.add(0, 3)


def test_square_collapses_to_one_pair():
    cx = _square()
    mc = morse_differential(cx, Matching.from_pairs([(0, 2)]))
    # the surviving incidence is [b:d] - [b:c][a:c]^-1[a:d] = -1 - 1
    assert mc.diff == [{1: -2}, {}]
    assert homology_of(mc) == homology_of(cx)


def test_empty_matching_is_identity():
    cx, _ = sample(7)
    mc = morse_differential(cx, Matching())
    assert mc.diff == cx.diff
    assert critical_cells(cx, Matching()) == list(range(len(cx)))


@given(seeds)
def test_random_matching_is_acyclic(seed):
    cx, m = sample(seed)
    assert verify_acyclic(cx, m)


@given(seeds)
def test_morse_differential_squares_to_zero(seed):
    cx, m = sample(seed)
    mc = morse_differential(cx, m)
    assert all(not row for row in compose(mc.diff, mc.diff))


@given(seeds)
def test_morse_homology_is_integrally_isomorphic(seed):
    cx, m = sample(seed)
    want = oracle_homology(cx)
    assert homology_by_degree(homology_of(cx)) == want
    assert homology_by_degree(homology_of(morse_differential(cx, m))) == want


@given(seeds)
def test_homotopy_identities(seed):
    cx, m = sample(seed)
    mc = morse_differential(cx, m)
    assert homotopy_identities(mc) == (True, True)
    assert chain_map_check(mc) == (True, True)
