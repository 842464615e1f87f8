"""Spanning trees, activity words, partial smoothings and twist trees."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

BAR = "̄"
LIVE = frozenset({"L", "l", "L" + BAR, "l" + BAR})

# smoothing of a dead edge, and of a live edge in the critical resolution
SMOOTHING = {
    "L": "B", "D": "A", "l": "A", "d": "B",
    "L" + BAR: "A", "D" + BAR: "B", "l" + BAR: "B", "d" + BAR: "A",
}


def bits(mask):
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True)
class SpanningTree:
    mask: int
    index: int = -1

    @property
    def edges(self):
        return tuple(bits(self.mask))

    def __contains__(self, e):
        return (self.mask >> e) & 1 == 1


class _Components:
    """Union-find over vertices, rebuilt per query (graphs are tiny)."""

    def __init__(self, n, edges, mask):
        self.p = list(range(n))
        for e in bits(mask):
            u, v, _ = edges[e]
            self.union(u, v)

    def find(self, x):
        p = self.p
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a != b:
            self.p[max(a, b)] = min(a, b)
            return True
        return False


def enumerate_spanning_trees(g):
    """All spanning trees of ``g`` by include/exclude branching.

    Edges are branched on in the edge order of ``g``; trees come out with
    the smallest edges included first.
    """
    n, E = g.n_vertices, g.edges
    order = list(g.order)
    out = []

    def connected(mask):
        c = _Components(n, E, mask)
        return len({c.find(v) for v in range(n)}) == 1

    def rec(k, chosen, comps, allowed):
        if len(bits(chosen)) == n - 1:
            out.append(chosen)
            return
        if k == len(order):
            return
        e = order[k]
        u, v, _ = E[e]
        cu, cv = comps.find(u), comps.find(v)
        if cu != cv:
            nc = _Components(n, E, chosen | (1 << e))
            rec(k + 1, chosen | (1 << e), nc, allowed)
        rest = allowed & ~(1 << e)
        if connected(rest):
            rec(k + 1, chosen, comps, rest)

    full = (1 << len(E)) - 1
    if n == 1:
        return [SpanningTree(0, 0)]
    if not connected(full):
        return []
    rec(0, 0, _Components(n, E, 0), full)
    return [SpanningTree(m, i) for i, m in enumerate(out)]


def matrix_tree_count(g):
    """Determinant of the reduced Laplacian, computed exactly."""
    from .homology import integer_determinant
    n = g.n_vertices
    if n == 1:
        return 1
    L = [[0] * n for _ in range(n)]
    for u, v, _ in g.edges:
        if u == v:
            continue
        L[u][u] += 1
        L[v][v] += 1
        L[u][v] -= 1
        L[v][u] -= 1
    return abs(integer_determinant([row[1:] for row in L[1:]]))


def cut_set(g, t, e):
    """Edges joining the two sides of ``t - e`` (contains ``e``)."""
    c = _Components(g.n_vertices, g.edges, t.mask & ~(1 << e))
    return [f for f, (u, v, _) in enumerate(g.edges) if c.find(u) != c.find(v)]


def cyc_set(g, t, f):
    """Edges of the unique cycle of ``t + f`` (contains ``f``)."""
    u0, v0, _ = g.edges[f]
    if u0 == v0:
        return [f]
    adj = {}
    for e in bits(t.mask):
        u, v, _ = g.edges[e]
        adj.setdefault(u, []).append((v, e))
        adj.setdefault(v, []).append((u, e))
    prev = {u0: None}
    stack = [u0]
    while stack:
        x = stack.pop()
        for y, e in adj.get(x, ()):
            if y not in prev:
                prev[y] = (x, e)
                stack.append(y)
    path = [f]
    x = v0
    while prev[x] is not None:
        x, e = prev[x]
        path.append(e)
    return path


def activity_letters(g, t):
    """Letter of every edge, indexed by edge id."""
    out = []
    for e in range(g.n_edges):
        if e in t:
            live = min(cut_set(g, t, e), key=g.rank.__getitem__) == e
            ch = "L" if live else "D"
        else:
            live = min(cyc_set(g, t, e), key=g.rank.__getitem__) == e
            ch = "l" if live else "d"
        out.append(ch if g.sign(e) > 0 else ch + BAR)
    return tuple(out)


@dataclass(frozen=True)
class ActivityWord:
    letters: tuple  # in edge order

    def __str__(self):
        return "".join(self.letters)

    @property
    def live(self):
        return [k for k, ch in enumerate(self.letters) if ch in LIVE]


def activity_word(g, t):
    by_id = activity_letters(g, t)
    return ActivityWord(tuple(by_id[e] for e in g.order))


def parse_word(word):
    """Split a word such as ``'lDDd̄'`` into letters."""
    out = []
    for ch in word:
        if ch == BAR:
            out[-1] += BAR
        else:
            out.append(ch)
    return tuple(out)


def partial_smoothing(g, t):
    """Marker per crossing id: '*' on live edges, 'A'/'B' on dead ones."""
    return tuple("*" if ch in LIVE else SMOOTHING[ch] for ch in activity_letters(g, t))


def critical_smoothing(g, t):
    """Every crossing smoothed by the table, live ones included."""
    return tuple(SMOOTHING[ch] for ch in activity_letters(g, t))


def tree_greater(g, t1, t2, _cache=None):
    """Generating relation ``t1 > t2`` on partial smoothings."""
    x = partial_smoothing(g, t1)
    y = partial_smoothing(g, t2)
    return _greater(x, y)


def _greater(x, y):
    strict = False
    for a, b in zip(x, y):
        if b == "A" and a not in ("A", "*"):
            return False
        if a == "A" and b == "B":
            strict = True
    return strict


class TreeOrder:
    """The generating relation on all trees of ``g``, precomputed."""

    def __init__(self, g, trees=None):
        self.g = g
        self.trees = trees if trees is not None else enumerate_spanning_trees(g)
        self.smooth = [partial_smoothing(g, t) for t in self.trees]
        m = len(self.trees)
        self.succ = [[b for b in range(m) if _greater(self.smooth[a], self.smooth[b])]
                     for a in range(m)]
        self._below = {}

    def below(self, a):
        """All trees reachable from ``a`` by the relation (transitively)."""
        if a not in self._below:
            seen = set()
            stack = list(self.succ[a])
            while stack:
                b = stack.pop()
                if b not in seen:
                    seen.add(b)
                    stack.extend(self.succ[b])
            self._below[a] = seen
        return self._below[a]

    def chains(self, a, b, keep=None):
        """Every chain ``a = T_1 > ... > T_n = b`` of the generating relation.

        ``keep(k)`` may reject intermediate trees; a == b gives no chains.
        """
        if a == b:
            return []
        out = []

        @lru_cache(maxsize=None)
        def rec(x):
            if x == b:
                return ((b,),)
            res = []
            for y in self.succ[x]:
                if y != b and (b not in self.below(y)):
                    continue
                if y != b and keep is not None and not keep(y):
                    continue
                for tail in rec(y):
                    res.append((x,) + tail)
            return tuple(res)

        out = [list(c) for c in rec(a)]
        return out


def enumerate_chains(g, t_from, t_to, order=None):
    order = order or TreeOrder(g)
    idx = {t.mask: k for k, t in enumerate(order.trees)}
    return [[order.trees[k] for k in c] for c in order.chains(idx[t_from.mask], idx[t_to.mask])]


# -- twist trees ---------------------------------------------------------------

@dataclass
class TwistTree:
    """G(T): vertices are circles of the critical resolution, edges are the
    live crossings.  ``steps`` is the inductive matching sequence: tuples
    ``(edge, leaf_vertex, twist)`` with twist -1 (negative) or +1."""
    tree: SpanningTree
    critical_state: int       # bit k set = crossing k B-smoothed
    live: tuple               # live edge ids
    ends: dict                # live edge -> (circle, circle)
    root: int
    twist: dict               # live edge -> -1 / +1
    steps: tuple
    n_vertices: int
    letters: tuple            # by edge id

    def matching_word(self, g):
        # the last edge matched is the base of the induction and comes first
        return MatchingWord(tuple((self.letters[e], g.rank[e] + 1)
                                  for e, _, _ in reversed(self.steps)))


@dataclass(frozen=True)
class MatchingWord:
    symbols: tuple  # (letter, position of the edge in the edge order)

    def __str__(self):
        return "".join(f"{ch}{k}" for ch, k in self.symbols)

    def pretty(self):
        sub = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")
        return "".join(f"{ch}{str(k).translate(sub)}" for ch, k in self.symbols)


def state_of(smoothing):
    return sum(1 << k for k, x in enumerate(smoothing) if x == "B")


def build_twist_tree(g, t, resolver=None):
    """G(T) for tree ``t`` of a Tait graph that carries its diagram."""
    from .cube import Resolver
    if resolver is None:
        resolver = Resolver(g.diagram)
    letters = activity_letters(g, t)
    crit = state_of([SMOOTHING[ch] for ch in letters])
    live = tuple(e for e in range(g.n_edges) if letters[e] in LIVE)
    d = g.diagram
    circ = resolver.labels[crit]
    ends = {}
    for e in live:
        a, b, c, _ = (d.arc_index[x] for x in d.pd[e])
        # the two strands of the current smoothing at e
        x, y = int(circ[a]), int(circ[c])
        if x == y:
            raise AssertionError(f"live edge {e} does not join two circles")
        ends[e] = (x, y)
    nv = int(resolver.counts[crit])
    if nv != len(live) + 1:
        raise AssertionError("critical resolution of U(T) is not a tree of circles")
    root = int(circ[d.arc_index[d.dotted_arc]])
    twist = {e: (-1 if SMOOTHING[letters[e]] == "B" else 1) for e in live}
    steps = []
    remaining = set(live)
    while remaining:
        deg = {}
        for e in remaining:
            for v in ends[e]:
                deg[v] = deg.get(v, 0) + 1
        cands = []
        for e in remaining:
            for v in ends[e]:
                if deg[v] == 1 and v != root:
                    cands.append((g.rank[e], e, v))
        if not cands:
            raise AssertionError("G(T) is not a tree")
        _, e, v = min(cands)
        steps.append((e, v, twist[e]))
        remaining.discard(e)
    return TwistTree(t, crit, live, ends, root, twist, tuple(steps), nv, letters)


def matching_word(g, gt):
    return gt.matching_word(g)
