"""Algebraic discrete Morse theory for cochain complexes.

The Hasse diagram of a complex has an edge ``u -> d`` whenever ``[u:d] != 0``
(so edges raise the degree).  A matching pairs some of these edges; in the
graph G_M matched edges are reversed and carry weight ``-1/[u:d]``.  Paths
from a critical cell to a critical cell one degree up give the Morse
differential.
"""
from __future__ import annotations

import sys
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from .chain import BigradedComplex
from .errors import GradingMismatch, NonUnitWeight

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


@dataclass
class Matching:
    """Pairs ``(u, d)`` of generator indices with ``d`` one degree above ``u``."""
    up: dict = field(default_factory=dict)     # lower -> upper
    down: dict = field(default_factory=dict)   # upper -> lower

    @classmethod
    def from_pairs(cls, pairs):
        m = cls()
        for u, d in pairs:
            m.add(u, d)
        return m

    def add(self, u, d):
        if u in self.up or u in self.down or d in self.up or d in self.down:
            raise ValueError(f"cell matched twice: {u}, {d}")
        self.up[u] = d
        self.down[d] = u

    def partner(self, k):
        if k in self.up:
            return self.up[k]
        return self.down.get(k)

    def is_matched(self, k):
        return k in self.up or k in self.down

    def pairs(self):
        return sorted(self.up.items())

    def __len__(self):
        return len(self.up)


@dataclass
class AcyclicityReport:
    ok: bool
    witness: list = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def _unit(w, ring):
    if ring == "Z":
        return w in (1, -1)
    return w != 0


def _inv_neg(w, ring):
    """-1/w, kept integral over Z."""
    if ring == "Z":
        return -w
    return Fraction(-1) / w


def verify_acyclic(cx, m):
    """Check the three matching conditions; returns an AcyclicityReport."""
    seen = set()
    for u, d in m.up.items():
        if u in seen or d in seen:
            return AcyclicityReport(False, [u, d], "cell in two matched edges")
        seen.update((u, d))
        if cx.grading[d][0] != cx.grading[u][0] + 1:
            raise GradingMismatch(f"matched cells {u}, {d} are not in adjacent degrees")
        w = cx.diff[u].get(d, 0)
        if not _unit(w, cx.ring):
            return AcyclicityReport(False, [u, d], f"matched weight {w} is not a unit")
    # directed cycle search in G_M (iterative colouring DFS)
    n = len(cx)
    colour = [0] * n
    parent = {}

    def succ(x):
        for t in cx.diff[x]:
            if m.up.get(x) != t:
                yield t
        if x in m.down:
            yield m.down[x]

    for s in range(n):
        if colour[s]:
            continue
        stack = [(s, succ(s))]
        colour[s] = 1
        while stack:
            x, it = stack[-1]
            for y in it:
                if colour[y] == 0:
                    colour[y] = 1
                    parent[y] = x
                    stack.append((y, succ(y)))
                    break
                if colour[y] == 1:
                    cyc = [x]
                    while cyc[-1] != y:
                        cyc.append(parent[cyc[-1]])
                    return AcyclicityReport(False, cyc[::-1], "directed cycle")
            else:
                colour[x] = 2
                stack.pop()
    return AcyclicityReport(True)


class _Paths:
    """Memoised path sums in G_M."""

    def __init__(self, cx, m):
        self.cx, self.m = cx, m
        self.ring = cx.ring
        self._F = {}
        self._P = {}
        self._G = {}
        for u, d in m.up.items():
            w = cx.diff[u].get(d, 0)
            if not _unit(w, cx.ring):
                raise NonUnitWeight(f"matched weight {w} between {u} and {d}")

    def back(self, d):
        """Weight of the reversed matched edge out of ``d``."""
        u = self.m.down[d]
        return u, _inv_neg(self.cx.diff[u][d], self.ring)

    def F(self, u):
        """Sum over zigzags from ``u`` ending at critical cells one degree up."""
        if u in self._F:
            return self._F[u]
        out = defaultdict(int)
        skip = self.m.up.get(u)
        for d, w in self.cx.diff[u].items():
            if d == skip:
                continue
            if not self.m.is_matched(d):
                out[d] += w
            elif d in self.m.down:
                u2, b = self.back(d)
                for c, v in self.F(u2).items():
                    out[c] += w * b * v
        res = {c: v for c, v in out.items() if v}
        self._F[u] = res
        return res

    def P(self, u):
        """Sum over zigzags from ``u`` ending anywhere in the same degree."""
        if u in self._P:
            return self._P[u]
        out = defaultdict(int)
        out[u] += 1
        skip = self.m.up.get(u)
        for d, w in self.cx.diff[u].items():
            if d == skip or d not in self.m.down:
                continue
            u2, b = self.back(d)
            for c, v in self.P(u2).items():
                out[c] += w * b * v
        res = {c: v for c, v in out.items() if v}
        self._P[u] = res
        return res

    def G(self, x):
        """Sum over paths from ``x`` to critical cells of the same degree."""
        if x in self._G:
            return self._G[x]
        if not self.m.is_matched(x):
            res = {x: 1}
        elif x in self.m.up:
            res = {}
        else:
            u, b = self.back(x)
            out = defaultdict(int)
            for d, w in self.cx.diff[u].items():
                if d == x:
                    continue
                for c, v in self.G(d).items():
                    out[c] += b * w * v
            res = {c: v for c, v in out.items() if v}
        self._G[x] = res
        return res

    def chi(self, x):
        if x not in self.m.down:
            return {}
        u, b = self.back(x)
        return {c: b * v for c, v in self.P(u).items()}


class MorseComplex(BigradedComplex):
    """Complex on the critical cells; ``crit[k]`` is the original index."""

    def __init__(self, parent, crit, diff, paths):
        keys = [parent.keys[c] for c in crit]
        grading = [parent.grading[c] for c in crit]
        names = [parent.name(c) for c in crit]
        super().__init__(keys, grading, diff, parent.ring, parent.filtered, names)
        self.parent = parent
        self.crit = crit
        self.paths = paths
        self.position = {c: k for k, c in enumerate(crit)}


def critical_cells(cx, m):
    return [k for k in range(len(cx)) if not m.is_matched(k)]


def morse_differential(cx, m, sources=None):
    """Morse complex of ``cx`` under the acyclic matching ``m``."""
    paths = _Paths(cx, m)
    crit = critical_cells(cx, m)
    pos = {c: k for k, c in enumerate(crit)}
    diff = []
    for c in crit:
        if sources is not None and c not in sources:
            diff.append({})
            continue
        diff.append({pos[t]: v for t, v in paths.F(c).items()})
    return MorseComplex(cx, crit, diff, paths)


def f_map(mc):
    """Morse -> original: ``f(c) = c + sum of zigzags to same-degree cells``."""
    return [dict(mc.paths.P(c)) for c in mc.crit]


def g_map(mc):
    """Original -> Morse, as a list over original generators."""
    pos = mc.position
    return [{pos[c]: v for c, v in mc.paths.G(x).items()} for x in range(len(mc.parent))]


def chi_map(mc):
    """Chain homotopy C^k -> C^(k-1)."""
    return [mc.paths.chi(x) for x in range(len(mc.parent))]


def compose(a, b):
    """Sparse composition: ``(a after b)[x] = sum b[x][y] * a[y]``."""
    out = []
    for row in b:
        acc = defaultdict(int)
        for y, v in row.items():
            for z, w in a[y].items():
                acc[z] += v * w
        out.append({z: v for z, v in acc.items() if v})
    return out


def homotopy_identities(mc):
    """Check g∘f = id and f∘g - id = dχ + χd entrywise; returns (bool, bool)."""
    f, g, chi = f_map(mc), g_map(mc), chi_map(mc)
    cx = mc.parent
    gf = compose(g, f)
    ok1 = all(gf[k] == {k: 1} for k in range(len(mc.crit)))
    fg = compose(f, g)
    d = cx.diff
    dchi = compose(d, chi)
    chid = compose(chi, d)
    ok2 = True
    for x in range(len(cx)):
        lhs = defaultdict(int, fg[x])
        lhs[x] -= 1
        rhs = defaultdict(int)
        for z, v in dchi[x].items():
            rhs[z] += v
        for z, v in chid[x].items():
            rhs[z] += v
        if {k: v for k, v in lhs.items() if v} != {k: v for k, v in rhs.items() if v}:
            ok2 = False
            break
    return ok1, ok2


def chain_map_check(mc):
    """d∘f = f∘d_M and g∘d = d_M∘g."""
    f, g = f_map(mc), g_map(mc)
    cx = mc.parent
    ok_f = compose(cx.diff, f) == compose(f, mc.diff)
    ok_g = compose(g, cx.diff) == compose(mc.diff, g)
    return ok_f, ok_g


# -- the Khovanov matching ------------------------------------------------------------

@dataclass
class KhovanovMatching:
    matching: Matching
    critical: dict      # generator index -> (tree index, '+' or '-')
    twist_trees: list
    trees: list


def _state_labels(res, s, crit, lab, rep, v):
    return int(res.labels[s][rep[v]])


def khovanov_matching(g, cx, trees=None, twist_trees=None):
    """Union over spanning trees of the inductive matchings on CKh(U(T)).

    Works for every variant built on ``g`` (and for the Lee complex, which
    shares its generators).  Critical cells are recorded with their tree
    and the label of the dotted circle ('+' for 1, '-' for x).
    """
    from .trees import build_twist_tree, enumerate_spanning_trees
    res = cx.resolver
    if trees is None:
        trees = enumerate_spanning_trees(g)
    if twist_trees is None:
        twist_trees = [build_twist_tree(g, t, res) for t in trees]
    m = Matching()
    critical = {}
    index = cx.index
    for ti, gt in enumerate(twist_trees):
        crit = gt.critical_state
        circ0 = res.labels[crit]
        rep = {}
        for a, c in enumerate(circ0):
            rep.setdefault(int(c), a)
        live = list(gt.live)
        for pattern in range(1 << len(live)):
            s = crit
            S = set()
            for k, e in enumerate(live):
                if (pattern >> k) & 1:
                    s ^= 1 << e
                    S.add(e)
            circ = res.labels[s]
            if int(res.counts[s]) != gt.n_vertices - len(S):
                raise AssertionError("state of U(T) is not a forest of circles")
            m_s = int(res.counts[s])
            for lab in range(1 << m_s):
                key = (s, lab)
                if key not in index:
                    continue
                k = index[key]
                if m.is_matched(k):
                    continue
                partner = _partner(res, gt, s, S, lab, rep, circ)
                if partner is None:
                    dl = (lab >> int(circ[rep[gt.root]])) & 1
                    critical[k] = (ti, "-" if dl else "+")
                    continue
                p = index.get(partner)
                if p is None:
                    raise AssertionError(f"partner {partner} of {key} is not a generator")
                back = _partner(res, gt, partner[0],
                                S ^ {e for e in live if (partner[0] ^ s) >> e & 1},
                                partner[1], rep, res.labels[partner[0]])
                if back != key:
                    raise AssertionError("matching rule is not symmetric")
                u, d = (k, p) if cx.grading[k][0] < cx.grading[p][0] else (p, k)
                m.add(u, d)
    return KhovanovMatching(m, critical, twist_trees, trees)


def _partner(res, gt, s, S, lab, rep, circ):
    """Partner of generator ``(s, lab)`` inside CKh(U(T)), or None if critical."""
    for e, v, tw in gt.steps:
        Lb = 1 if tw < 0 else 0
        cv = int(circ[rep[v]])
        w = gt.ends[e][0] if gt.ends[e][1] == v else gt.ends[e][1]
        t = s ^ (1 << e)
        circ_t = res.labels[t]
        if e in S:
            # split v off: v gets the twist label, the rest keeps its label
            keep = (lab >> cv) & 1
            lab2 = _carry(circ, circ_t, lab, skip={cv})
            lab2 |= (Lb << int(circ_t[rep[v]]))
            lab2 |= (keep << int(circ_t[rep[w]]))
            return (t, lab2)
        if (lab >> cv) & 1 == Lb:
            cw = int(circ[rep[w]])
            keep = (lab >> cw) & 1
            lab2 = _carry(circ, circ_t, lab, skip={cv, cw})
            lab2 |= keep << int(circ_t[rep[v]])
            return (t, lab2)
    return None


def _carry(circ_s, circ_t, lab, skip):
    out = 0
    seen = set()
    for a, c in enumerate(circ_s):
        c = int(c)
        if c in seen:
            continue
        seen.add(c)
        if c in skip:
            continue
        if (lab >> c) & 1:
            out |= 1 << int(circ_t[a])
    return out
