"""The orientation tree, Rasmussen's s-invariant and the distinguished cycle."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cube import (Resolver, build_lee_complex, chain_to_indices, oriented_resolution_generator,
                   oriented_state)
from .errors import NotAKnot, ObservationViolated
from .homology import filtered_homology_levels
from .stc import build_st_complex
from .trees import BAR, SpanningTree, activity_letters, build_twist_tree


@dataclass
class OrientationTree:
    g: object                 # the Tait graph carrying the induced edge order
    mask: int                 # edges of the tree
    red: frozenset
    order: tuple
    blocks: dict = field(default_factory=dict)

    @property
    def edges(self):
        return tuple(e for e in range(self.g.n_edges) if (self.mask >> e) & 1)

    def tree_index(self, trees):
        for k, t in enumerate(trees):
            if t.mask == self.mask:
                return k
        raise KeyError("orientation tree missing from the enumeration")


def _kruskal(n, edges, candidates, start=()):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    kept = []
    for e in list(start) + list(candidates):
        u, v, _ = edges[e]
        a, b = find(u), find(v)
        if a != b:
            parent[a] = b
            kept.append(e)
    return kept


def red_edges(g):
    """Edges whose Tait sign agrees with the sign of their crossing."""
    d = g.diagram
    return frozenset(e for e, (_, _, s) in enumerate(g.edges) if s == d.crossings[e].sign)


def build_orientation_tree(g):
    """Spanning tree whose critical resolution is the oriented resolution.

    Red edges are thinned to a forest keeping negative edges first, the
    black edges are then added (negative first) until the forest spans.
    The induced order lists removed red edges, black tree edges, red tree
    edges and removed black edges, each block by crossing id.
    """
    d = g.diagram
    if len(d.components) != 1:
        raise NotAKnot("the orientation tree is built for knots only")
    n, E = g.n_vertices, g.edges
    red = red_edges(g)
    by_sign = lambda pool, s: sorted(e for e in pool if E[e][2] == s)
    forest = _kruskal(n, E, by_sign(red, -1) + by_sign(red, 1))
    black = [e for e in range(g.n_edges) if e not in red]
    tree = _kruskal(n, E, by_sign(black, -1) + by_sign(black, 1), start=forest)
    mask = sum(1 << e for e in tree)
    if len(tree) != n - 1:
        raise ObservationViolated("red and black edges do not span the Tait graph")
    intree = set(tree)
    blocks = {
        "red_removed": sorted(e for e in red if e not in intree),
        "black_tree": sorted(e for e in black if e in intree),
        "red_tree": sorted(e for e in red if e in intree),
        "black_removed": sorted(e for e in black if e not in intree),
    }
    order = tuple(blocks["red_removed"] + blocks["black_tree"]
                  + blocks["red_tree"] + blocks["black_removed"])
    go = g.with_order(order)
    ot = OrientationTree(go, mask, red, order, blocks)
    _check_observations(ot)
    return ot


_EXPECTED = {
    "red_removed": {"l", "l" + BAR},
    "black_removed": {"d", "d" + BAR},
    "red_tree": {"D", "D" + BAR},
    "black_tree": {"L", "L" + BAR},
}


def _check_observations(ot):
    g = ot.g
    letters = activity_letters(g, SpanningTree(ot.mask))
    for block, allowed in _EXPECTED.items():
        for e in ot.blocks[block]:
            if letters[e] not in allowed:
                raise ObservationViolated(
                    f"edge {e + 1} in block {block} has activity {letters[e]}")
    # every red edge lies on a cycle of red edges
    E = g.edges
    red = ot.red
    for e in red:
        u, v, _ = E[e]
        others = [f for f in red if f != e]
        if u != v and not _connected_by(g.n_vertices, E, others, u, v):
            raise ObservationViolated(f"red edge {e + 1} is not on a red cycle")
    gt = build_twist_tree(g, SpanningTree(ot.mask))
    if gt.critical_state != oriented_state(g.diagram):
        raise ObservationViolated("critical resolution differs from the oriented resolution")


def _connected_by(n, E, pool, a, b):
    adj = {}
    for f in pool:
        u, v, _ = E[f]
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    seen, stack = {a}, [a]
    while stack:
        x = stack.pop()
        if x == b:
            return True
        for y in adj.get(x, ()):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return False


# -- s-invariant -------------------------------------------------------------------

@dataclass
class SInvariantReport:
    s_plus: int
    s_minus: int
    s: int
    j_plus: int
    lobb: int
    seifert_bound: int
    oracle_s: int = None

    @property
    def bound_holds(self):
        return self.s >= self.lobb

    def to_json(self):
        return {"s_ST(+)": self.s_plus, "s_ST(-)": self.s_minus, "s": self.s,
                "j(To+)": self.j_plus, "lobb_bound": self.lobb,
                "seifert_bound": self.seifert_bound, "oracle_s": self.oracle_s,
                "bound_holds": self.bound_holds}


def _mean(a, b):
    m = Fraction(a + b, 2)
    return int(m) if m.denominator == 1 else m


def orientation_st_complex(ot, variant):
    st = build_st_complex(ot.g, variant)
    k = ot.tree_index(st.trees)
    return st, k


def verify_cycle(ot, st=None):
    """``(ok, offending)``: both generators of the tree are Lee cycles in degree 0."""
    if st is None:
        st, k = orientation_st_complex(ot, "lee")
    else:
        k = ot.tree_index(st.trees)
    bad = []
    for sign in "+-":
        idx = st.index[(k, sign)]
        if st.grading[idx][0] != 0:
            bad.append((st.names[idx], "degree", st.grading[idx][0]))
        for t, v in st.diff[idx].items():
            bad.append((st.names[idx], st.names[t], v))
    return not bad, bad


def s_invariant(g, oracle=True):
    """s from the filtration levels of the two orientation-tree generators."""
    if len(g.diagram.components) != 1:
        raise NotAKnot("s is computed for knots only")
    ot = build_orientation_tree(g)
    st, k = orientation_st_complex(ot, "lee")
    lp, lm = filtered_homology_levels(st, [{st.index[(k, "+")]: 1}, {st.index[(k, "-")]: 1}])
    j_plus = st.grading[st.index[(k, "+")]][1]
    rep = SInvariantReport(lp, lm, _mean(lp, lm), j_plus, j_plus - 1, seifert_bound(g))
    if oracle:
        rep.oracle_s = s_invariant_oracle(g)
    return rep


def s_invariant_oracle(g):
    """s from the cube Lee complex and the two oriented-resolution generators."""
    res = Resolver(g.diagram)
    lee = build_lee_complex(g, resolver=res)
    so = chain_to_indices(lee, oriented_resolution_generator(g, False, res))
    sb = chain_to_indices(lee, oriented_resolution_generator(g, True, res))
    keys = set(so) | set(sb)
    plus = {k: so.get(k, 0) + sb.get(k, 0) for k in keys}
    minus = {k: so.get(k, 0) - sb.get(k, 0) for k in keys}
    a, b = filtered_homology_levels(lee, [plus, minus])
    return _mean(a, b)


def seifert_bound(g):
    """w(D) - #Seifert circles + 2 #components(positive part of the Seifert graph) - 1."""
    d = g.diagram
    res = Resolver(d)
    s = oriented_state(d)
    circ = res.labels[s]
    m = int(res.counts[s])
    parent = list(range(m))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for x in d.crossings:
        if x.sign > 0:
            a = find(int(circ[d.arc_index[x.arcs[0]]]))
            b = find(int(circ[d.arc_index[x.arcs[2]]]))
            parent[a] = b
    comps = len({find(c) for c in range(m)})
    return d.writhe - m + 2 * comps - 1


def lobb_bound(g):
    """``(j(To+) - 1, Seifert-graph expression)``; the two should agree."""
    ot = build_orientation_tree(g)
    st, k = orientation_st_complex(ot, "reduced_plus")
    return st.grading[st.index[(k, "+")]][1] - 1, seifert_bound(g)


# -- the distinguished cycle ---------------------------------------------------------

def distinguished_cycle(ot):
    """f(To+) in the unreduced cube complex, as ``{(state, enhancement): coef}``."""
    st, k = orientation_st_complex(ot, "unreduced")
    c = _critical_cell(st, k, "+")
    phi = st.morse.paths.P(c)
    cx = st.cube
    return {cx.keys[x]: v for x, v in phi.items()}, st


def _critical_cell(st, tree, sign):
    for cell, key in st.km.critical.items():
        if key == (tree, sign):
            return cell
    raise KeyError((tree, sign))


def lee_generator_image(ot):
    """g(s_o + s_ō) and g(s_o - s_ō) in the Lee tree complex, keyed by generator name."""
    st, k = orientation_st_complex(ot, "lee")
    cx = st.cube
    res = cx.resolver
    so = chain_to_indices(cx, oriented_resolution_generator(ot.g, False, res))
    sb = chain_to_indices(cx, oriented_resolution_generator(ot.g, True, res))
    G = st.morse.paths.G
    pos = st.morse.position
    out = []
    for sgn in (1, -1):
        acc = {}
        for x in set(so) | set(sb):
            w = so.get(x, 0) + sgn * sb.get(x, 0)
            if not w:
                continue
            for c, v in G(x).items():
                t = pos[c]
                acc[t] = acc.get(t, 0) + w * v
        out.append({st.names[st.morse_position[t]]: v for t, v in acc.items() if v})
    return out, st.tree_names[k]
