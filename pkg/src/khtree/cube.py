"""Khovanov and Lee cube complexes in the enhanced-spanning-subgraph model.

A resolution is an integer ``s`` whose bit ``k`` is 1 when crossing ``k`` is
B-smoothed.  Circles of ``s`` are numbered by their smallest arc.  An
enhancement is a bitmask over those circles with bit 1 meaning ``x``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .chain import BigradedComplex
from .errors import DisconnectedTait, IncompatibleBand, MissingOrientation

MAX_CUBE_CROSSINGS = 22
VARIANTS = ("unreduced", "reduced_plus", "reduced_minus")


class Resolver:
    """Circle table for every resolution of a diagram."""

    def __init__(self, d):
        self.d = d
        n = d.n
        if n > MAX_CUBE_CROSSINGS:
            raise ValueError(f"cube enumeration is capped at {MAX_CUBE_CROSSINGS} crossings")
        self.slots = np.array(d.slots_array(), dtype=np.int64).reshape(-1, 4)
        self.labels, self.counts = _kernels.resolve_all(self.slots, len(d.arcs))
        self.dot = d.arc_index[d.dotted_arc]

    def circles(self, s):
        lab = self.labels[s]
        out = [[] for _ in range(int(self.counts[s]))]
        for a, c in enumerate(lab):
            out[int(c)].append(self.d.arcs[a])
        return out

    def dotted_circle(self, s):
        return int(self.labels[s][self.dot])


def _popcount(x):
    return bin(x).count("1")


@dataclass(frozen=True)
class EnhancedState:
    """A spanning subgraph ``H`` of the Tait graph with labelled circles."""
    H: int
    labels: tuple   # '1' or 'x' per circle
    i: int
    j: int
    state: int

    def __str__(self):
        return f"H={bin(self.H)} eps={''.join(self.labels)} ({self.i},{self.j})"


def subgraph_of_state(g, s):
    """Edges in H: positive edges A-smoothed, negative edges B-smoothed."""
    H = 0
    for e, (_, _, sign) in enumerate(g.edges):
        b = (s >> e) & 1
        if (sign > 0 and b == 0) or (sign < 0 and b == 1):
            H |= 1 << e
    return H


def state_of_subgraph(g, H):
    s = 0
    for e, (_, _, sign) in enumerate(g.edges):
        inH = (H >> e) & 1
        if (sign > 0 and not inH) or (sign < 0 and inH):
            s |= 1 << e
    return s


class CubeComplex(BigradedComplex):
    """Bigraded complex whose keys are ``(state, enhancement)`` pairs."""

    def __init__(self, g, resolver, keys, grading, diff, variant, lee):
        super().__init__(keys, grading, diff, "Z", filtered=lee)
        self.g = g
        self.resolver = resolver
        self.variant = variant
        self.lee = lee

    def enhanced_state(self, k):
        s, lab = self.keys[k]
        m = int(self.resolver.counts[s])
        labels = tuple("x" if (lab >> c) & 1 else "1" for c in range(m))
        i, j = self.grading[k]
        return EnhancedState(subgraph_of_state(self.g, s), labels, i, j, s)

    def name(self, k):
        s, lab = self.keys[k]
        m = int(self.resolver.counts[s])
        n = self.g.n_edges
        st = "".join("B" if (s >> c) & 1 else "A" for c in range(n))
        return st + ":" + "".join("x" if (lab >> c) & 1 else "1" for c in range(m))


def _grading(d, s, lab, m):
    i = _popcount(s) - d.n_minus
    j = i + m - 2 * _popcount(lab) + d.n_plus - d.n_minus
    return i, j


def build_khovanov_complex(g, variant="unreduced", lee=False, resolver=None):
    """Full cube complex of the diagram behind ``g``.

    The sign of the edge at crossing ``e`` is ``(-1)^w`` with ``w`` the
    number of B-smoothed crossings that come before ``e`` in the edge order
    of ``g``.  ``reduced_plus`` is the quotient on generators whose dotted
    circle is 1; ``reduced_minus`` the subcomplex where it is x.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if lee and variant != "unreduced":
        raise ValueError("the Lee complex is built unreduced")
    if not g.is_connected():
        raise DisconnectedTait("Tait graph is disconnected")
    d = g.diagram
    if d is None:
        raise MissingOrientation("Tait graph has no diagram attached")
    res = resolver or Resolver(d)
    n = d.n
    labels, counts = res.labels, res.counts
    dot = res.dot
    keys, grading = [], []
    for s in range(1 << n):
        m = int(counts[s])
        dc = int(labels[s][dot])
        for lab in range(1 << m):
            if variant == "reduced_plus" and (lab >> dc) & 1:
                continue
            if variant == "reduced_minus" and not (lab >> dc) & 1:
                continue
            keys.append((s, lab))
            grading.append(_grading(d, s, lab, m))
    index = {k: t for t, k in enumerate(keys)}
    diff = []
    for s, lab in keys:
        row = {}
        for key, v in generator_differential(g, res, s, lab, lee).items():
            if key in index:   # others are projected away in the quotient
                row[index[key]] = v
        diff.append(row)
    return CubeComplex(g, res, keys, grading, diff, variant, lee)


def generator_differential(g, res, s, lab, lee=False):
    """Unreduced differential of the generator ``(s, lab)`` as ``{(t, lab2): coef}``."""
    n = g.n_edges
    rank = g.rank
    circ = res.labels[s]
    m = int(res.counts[s])
    out = {}
    for c in range(n):
        if (s >> c) & 1:
            continue
        t = s | (1 << c)
        w = sum(1 for f in range(n) if (s >> f) & 1 and rank[f] < rank[c])
        sign = -1 if w % 2 else 1
        for lab2, coef in _edge_map(circ, res.labels[t], m, lab, res.slots[c], lee):
            key = (t, lab2)
            out[key] = out.get(key, 0) + sign * coef
    return {k: v for k, v in out.items() if v}


def _transport(circ_s, circ_t, m, lab, skip):
    """Carry the labels of circles not in ``skip`` over to the new state."""
    out = 0
    rep = {}
    for a, c in enumerate(circ_s):
        c = int(c)
        if c not in rep:
            rep[c] = a
    for c in range(m):
        if c in skip:
            continue
        if (lab >> c) & 1:
            out |= 1 << int(circ_t[rep[c]])
    return out


def _edge_map(circ_s, circ_t, m, lab, slot, lee):
    """Merge or split at one crossing; yields ``(new_enhancement, coef)``."""
    a0, a1, a2 = int(slot[0]), int(slot[1]), int(slot[2])
    c1, c2 = int(circ_s[a0]), int(circ_s[a2])
    if c1 != c2:
        base = _transport(circ_s, circ_t, m, lab, {c1, c2})
        M = int(circ_t[a0])
        x1, x2 = (lab >> c1) & 1, (lab >> c2) & 1
        if x1 and x2:
            if lee:
                yield base, 1
        elif x1 or x2:
            yield base | (1 << M), 1
        else:
            yield base, 1
    else:
        base = _transport(circ_s, circ_t, m, lab, {c1})
        P, Q = int(circ_t[a0]), int(circ_t[a1])
        if (lab >> c1) & 1:
            yield base | (1 << P) | (1 << Q), 1
            if lee:
                yield base, 1
        else:
            yield base | (1 << Q), 1
            yield base | (1 << P), 1


def build_lee_complex(g, resolver=None):
    return build_khovanov_complex(g, "unreduced", lee=True, resolver=resolver)


# -- Lee generators ----------------------------------------------------------

def oriented_state(d):
    """Resolution that follows the orientation: B exactly at negative crossings."""
    return sum(1 << x.id for x in d.crossings if x.sign < 0)


def seifert_labels(d, resolver=None):
    """Label ``'a'`` (x + 1) or ``'b'`` (x - 1) for every Seifert circle.

    Adjacent circles get opposite labels.  A circle touching the outer face
    (taken to be the face with most corners) has nesting 0, and the label of
    such a circle is x - 1 when it runs counterclockwise, x + 1 otherwise.
    """
    res = resolver or Resolver(d)
    s = oriented_state(d)
    if d.n == 0:
        return ["b"]
    circ = res.labels[s]
    m = int(res.counts[s])
    outer = max(range(len(d.faces)), key=lambda f: (len(d.faces[f]), -f))
    anchor = None
    for a in d.arcs:
        if d.face_of[d.right_corner(a)] == outer:
            anchor = (int(circ[d.arc_index[a]]), "b")   # counterclockwise
            break
        if d.face_of[d.left_corner(a)] == outer:
            anchor = (int(circ[d.arc_index[a]]), "a")
            break
    adj = [set() for _ in range(m)]
    for x in d.crossings:
        p = int(circ[d.arc_index[x.arcs[0]]])
        q = int(circ[d.arc_index[x.arcs[2]]])
        if p == q:
            raise AssertionError("Seifert graph has a loop")
        adj[p].add(q)
        adj[q].add(p)
    lab = [None] * m
    lab[anchor[0]] = anchor[1]
    stack = [anchor[0]]
    while stack:
        c = stack.pop()
        for c2 in adj[c]:
            want = "a" if lab[c] == "b" else "b"
            if lab[c2] is None:
                lab[c2] = want
                stack.append(c2)
            elif lab[c2] != want:
                raise AssertionError("Seifert graph is not bipartite")
    return lab


def oriented_resolution_generator(g, reverse=False, resolver=None):
    """The Lee generator of the orientation as a chain ``{(state, enh): coef}``.

    ``reverse`` gives the generator of the reversed orientation, which swaps
    the two labels on every circle.
    """
    d = g.diagram
    if d is None:
        raise MissingOrientation("no diagram attached")
    res = resolver or Resolver(d)
    s = oriented_state(d)
    lab = seifert_labels(d, res)
    if reverse:
        lab = ["a" if v == "b" else "b" for v in lab]
    chain = {0: 1}
    for c, v in enumerate(lab):
        one = 1 if v == "a" else -1
        new = {}
        for e, w in chain.items():
            new[e | (1 << c)] = new.get(e | (1 << c), 0) + w
            new[e] = new.get(e, 0) + one * w
        chain = new
    return {(s, e): w for e, w in chain.items() if w}


def chain_to_indices(cx, chain):
    return {cx.index[k]: Fraction(w) if cx.ring == "Q" else w for k, w in chain.items()}


# -- saddle maps ---------------------------------------------------------------

def band_diagram(d, arc_a, arc_b):
    """Diagram after an oriented band joining arcs ``arc_a`` and ``arc_b``.

    The arcs must run antiparallel along a common face; the band swaps
    their heads, so crossings and signs are unchanged.
    """
    from .diagram import LinkDiagram
    if arc_a not in d.arcs or arc_b not in d.arcs or arc_a == arc_b:
        raise IncompatibleBand("band endpoints must be two distinct arcs")
    fa = {d.face_of[d.left_corner(arc_a)], d.face_of[d.right_corner(arc_a)]}
    shared = [f for f in (d.face_of[d.left_corner(arc_a)],) if f == d.face_of[d.left_corner(arc_b)]]
    shared += [f for f in (d.face_of[d.right_corner(arc_a)],) if f == d.face_of[d.right_corner(arc_b)]]
    if not shared or not fa:
        raise IncompatibleBand("arcs do not run antiparallel along a common face")
    pd = [list(x) for x in d.pd]
    (ca, sa), (cb, sb) = d.head[arc_a], d.head[arc_b]
    pd[ca][sa], pd[cb][sb] = arc_b, arc_a
    return LinkDiagram(pd, dotted_arc=d.dotted_arc)


def saddle_map(g_from, g_to, band):
    """Chain map induced by the band ``(arc_a, arc_b)`` of ``g_from``.

    Both graphs must come from diagrams with the same crossings, ``g_to``
    being ``band_diagram(g_from.diagram, *band)``.  Returns a dict from
    generator index of the source unreduced complex to ``{target: coef}``
    together with both complexes.
    """
    arc_a, arc_b = band
    d0, d1 = g_from.diagram, g_to.diagram
    if d0.n != d1.n or [x.sign for x in d0.crossings] != [x.sign for x in d1.crossings]:
        raise IncompatibleBand("diagrams differ away from the band")
    expect = band_diagram(d0, arc_a, arc_b)
    if expect.pd != d1.pd:
        raise IncompatibleBand("target diagram is not the band move of the source")
    c0 = build_khovanov_complex(g_from)
    c1 = build_khovanov_complex(g_to.with_order(g_from.order))
    r0, r1 = c0.resolver, c1.resolver
    ia, ib = d0.arc_index[arc_a], d0.arc_index[arc_b]
    phi = []
    for k, (s, lab) in enumerate(c0.keys):
        circ_s, circ_t = r0.labels[s], r1.labels[s]
        m = int(r0.counts[s])
        out = {}
        for lab2, coef in _band_map(circ_s, circ_t, m, lab, ia, ib):
            t = c1.index[(s, lab2)]
            out[t] = out.get(t, 0) + coef
        phi.append({t: v for t, v in out.items() if v})
    return phi, c0, c1


def _band_map(circ_s, circ_t, m, lab, ia, ib):
    c1, c2 = int(circ_s[ia]), int(circ_s[ib])
    if c1 != c2:
        base = _transport(circ_s, circ_t, m, lab, {c1, c2})
        M = int(circ_t[ia])
        x1, x2 = (lab >> c1) & 1, (lab >> c2) & 1
        if not (x1 and x2):
            yield (base | (1 << M)) if (x1 or x2) else base, 1
    else:
        base = _transport(circ_s, circ_t, m, lab, {c1})
        P, Q = int(circ_t[ia]), int(circ_t[ib])
        if (lab >> c1) & 1:
            yield base | (1 << P) | (1 << Q), 1
        else:
            yield base | (1 << Q), 1
            yield base | (1 << P), 1


def frobenius_merge(a, b):
    """m on labels '1'/'x'; returns the label or None for zero."""
    if a == "x" and b == "x":
        return None
    return "x" if "x" in (a, b) else "1"


def frobenius_split(a):
    return [("1", "x"), ("x", "1")] if a == "1" else [("x", "x")]
