"""Planar diagrams, checkerboard colouring and signed Tait graphs.

Conventions
-----------
A crossing ``[a, b, c, d]`` lists its four arcs counterclockwise starting
from the incoming under-strand, so the under-strand runs ``a -> c``.  The
crossing is positive when the over-strand runs ``d -> b``.

Corner ``s`` of a crossing is the sector between slots ``s`` and ``s + 1``.
The A-smoothing joins slots (0, 1) and (2, 3); it merges corners 1 and 3,
which are therefore called the A-corners.  A Tait edge is positive exactly
when its black corners are the A-corners, so a positive edge lies in the
spanning subgraph of a state iff its crossing is A-smoothed.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product

from .errors import DanglingArc, MalformedCode, MissingOrientation, SplitDiagram


@dataclass(frozen=True)
class Crossing:
    id: int
    arcs: tuple
    sign: int

    @property
    def under(self):
        return self.arcs[0], self.arcs[2]

    @property
    def over(self):
        # listed in the direction of travel
        if self.sign > 0:
            return self.arcs[3], self.arcs[1]
        return self.arcs[1], self.arcs[3]


class _UF:
    def __init__(self, items):
        self.p = {x: x for x in items}

    def find(self, x):
        p = self.p
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a == b:
            return False
        if b < a:
            a, b = b, a
        self.p[b] = a
        return True


class LinkDiagram:
    """An oriented planar link diagram given by PD code.

    Orientation comes from the PD convention (under-strands run from slot 0
    to slot 2).  Components that never pass under anything are oriented so
    that arc labels increase along them.
    """

    def __init__(self, pd, dotted_arc=None, edge_order=None, reverse=()):
        pd = [tuple(int(a) for a in x) for x in pd]
        for x in pd:
            if len(x) != 4:
                raise MalformedCode(f"crossing {x} does not have four arcs")
        if reverse:
            pd = _reverse_pd(pd, reverse)
        self.pd = tuple(pd)
        n = len(pd)
        ends = {}
        for c, x in enumerate(pd):
            for s, a in enumerate(x):
                ends.setdefault(a, []).append((c, s))
        bad = sorted(a for a, e in ends.items() if len(e) != 2)
        if bad:
            raise DanglingArc(f"arcs {bad} do not appear exactly twice")
        self.arcs = tuple(sorted(ends)) if n else (1,)
        self._ends = ends
        self._other = {}
        for a, (p, q) in ends.items():
            self._other[p] = q
            self._other[q] = p
        if n:
            uf = _UF(range(n))
            for (c1, _), (c2, _) in ends.values():
                uf.union(c1, c2)
            if len({uf.find(c) for c in range(n)}) > 1:
                raise SplitDiagram("underlying 4-valent graph is disconnected")
        self._orient()
        self.crossings = tuple(
            Crossing(c, pd[c], self._sign(c)) for c in range(n))
        if n:
            self._faces()
            if len(self.faces) != n + 2:
                raise MalformedCode(
                    f"PD code is not planar: {len(self.faces)} faces for {n} crossings")
        if dotted_arc is None:
            dotted_arc = self.arcs[0]
        if dotted_arc not in self.arcs:
            raise MalformedCode(f"dotted arc {dotted_arc} is not an arc label")
        self.dotted_arc = dotted_arc
        self.edge_order = None if edge_order is None else tuple(edge_order)
        self.arc_index = {a: k for k, a in enumerate(self.arcs)}

    def with_dot(self, arc):
        return LinkDiagram(self.pd, dotted_arc=arc, edge_order=self.edge_order)

    # -- orientation -----------------------------------------------------
    def _orient(self):
        """Set ``head[a]`` / ``tail[a]`` slots and the component list."""
        self.head, self.tail = {}, {}
        comps = []
        seen = set()
        for a0 in self.arcs if self.pd else ():
            if a0 in seen:
                continue
            # walk with a0 entering its second listed end; record the walk
            walk = []
            start = self._ends[a0][1]
            slot = start
            while True:
                c, s = slot
                a = self.pd[c][s]
                walk.append((a, self._other[slot], slot))
                # leave through the opposite slot; land on the next entering end
                slot = self._other[(c, (s + 2) % 4)]
                if slot == start:
                    break
            # heads at slot 0 agree with this direction, at slot 2 disagree
            votes = {s % 4 for _, _, (c, s) in walk if s in (0, 2)}
            if votes == {0, 2}:
                raise MalformedCode("under-strands are not consistently oriented")
            if votes == {2} or (not votes and not _increasing(walk)):
                walk = [(a, h, t) for a, t, h in reversed(walk)]
            for a, t, h in walk:
                self.tail[a] = t
                self.head[a] = h
                seen.add(a)
            comps.append(tuple(a for a, _, _ in walk))
        if not self.pd:
            comps = [(1,)]
        # rotate each component to start at its smallest arc
        out = []
        for comp in comps:
            k = comp.index(min(comp))
            out.append(comp[k:] + comp[:k])
        self.components = tuple(sorted(out))

    def _sign(self, c):
        # positive iff the over-strand enters at slot 3
        return 1 if self.head[self.pd[c][3]] == (c, 3) else -1

    # -- faces -----------------------------------------------------------
    def _next_corner(self, c, s):
        return self._other[(c, (s + 1) % 4)]

    def _faces(self):
        n = len(self.pd)
        face_of = {}
        faces = []
        for c, s in product(range(n), range(4)):
            if (c, s) in face_of:
                continue
            orbit = []
            cur = (c, s)
            while cur not in face_of:
                face_of[cur] = len(faces)
                orbit.append(cur)
                cur = self._next_corner(*cur)
            faces.append(tuple(orbit))
        self.faces = faces
        self.face_of = face_of
        # two-colour the corners: colour(c, s) = (s + off[c]) % 2
        off = {0: 0}
        stack = [0]
        while stack:
            c = stack.pop()
            for s in range(4):
                c2, t = self._next_corner(c, s)
                want = (s + off[c] - t) % 2
                if c2 not in off:
                    off[c2] = want
                    stack.append(c2)
                elif off[c2] != want:
                    raise MalformedCode("diagram is not checkerboard colourable")
        self._colour_off = off

    def corner_colour(self, c, s):
        return (s + self._colour_off[c]) % 2

    def left_corner(self, a):
        """Corner on the left of arc ``a`` just before its head."""
        c, s = self.head[a]
        return c, (s - 1) % 4

    def right_corner(self, a):
        c, s = self.head[a]
        return c, s

    # -- basic data ------------------------------------------------------
    @property
    def n(self):
        return len(self.crossings)

    @property
    def n_plus(self):
        return sum(1 for x in self.crossings if x.sign > 0)

    @property
    def n_minus(self):
        return sum(1 for x in self.crossings if x.sign < 0)

    @property
    def writhe(self):
        return self.n_plus - self.n_minus

    def slots_array(self):
        """(n, 4) arc indices, the input of the resolution kernels."""
        return [[self.arc_index[a] for a in x] for x in self.pd]

    def component_of_arc(self, a):
        for k, comp in enumerate(self.components):
            if a in comp:
                return k
        raise KeyError(a)

    def mirror(self):
        """Switch every crossing; orientation is kept."""
        pd = []
        for x in self.crossings:
            a, b, c, d = x.arcs
            # the old over-strand becomes the under-strand
            pd.append([d, a, b, c] if x.sign > 0 else [b, c, d, a])
        return LinkDiagram(pd, dotted_arc=self.dotted_arc, edge_order=self.edge_order)

    def reversed(self, components=None):
        if components is None:
            components = range(len(self.components))
        return LinkDiagram(_reverse_pd(list(self.pd), [self.components[k] for k in components]),
                           dotted_arc=self.dotted_arc, edge_order=self.edge_order)

    def to_json(self):
        out = {"pd": [list(x) for x in self.pd], "dotted_arc": self.dotted_arc}
        if self.edge_order is not None:
            out["edge_order"] = list(self.edge_order)
        return out

    def __repr__(self):
        return f"LinkDiagram(pd={[list(x) for x in self.pd]})"


def _increasing(walk):
    a0 = walk[0][0]
    a1 = walk[1][0] if len(walk) > 1 else a0
    return a1 > a0 or len(walk) == 1


def _reverse_pd(pd, reverse):
    """Reverse the components given as collections of arc labels."""
    rev = set()
    for comp in reverse:
        rev.update(comp)
    out = []
    for x in pd:
        x = list(x)
        if x[0] in rev and x[2] in rev:
            x = x[2:] + x[:2]
        out.append(x)
    return out


def crossing_signs(d):
    if d.n and not d.head:
        raise MissingOrientation("diagram has no orientation")
    return d.n_plus, d.n_minus


# -- parsing ---------------------------------------------------------------

def parse_diagram(text):
    """Parse PD (JSON) or DT notation into a :class:`LinkDiagram`.

    Accepted inputs: a JSON array of 4-tuples, a JSON object with a ``"pd"``
    (or ``"dt"``) key and optional ``"dotted_arc"``, ``"edge_order"``,
    ``"orientation"`` and ``"signs"`` fields, or a string ``"DT: [...]"``.
    """
    if isinstance(text, LinkDiagram):
        return text
    obj = text
    if isinstance(text, str):
        s = text.strip()
        if s.upper().startswith("DT"):
            from .dt import dt_to_pd, parse_dt
            return LinkDiagram(dt_to_pd(parse_dt(s)))
        try:
            obj = json.loads(s)
        except json.JSONDecodeError as exc:
            raise MalformedCode(f"not JSON: {exc}") from None
    if isinstance(obj, dict):
        if "dt" in obj:
            from .dt import dt_to_pd, parse_dt
            pd = dt_to_pd(parse_dt(obj["dt"]))
        elif "pd" in obj:
            pd = obj["pd"]
        else:
            raise MalformedCode("object needs a 'pd' or 'dt' field")
        opts = obj
    elif isinstance(obj, list):
        pd, opts = obj, {}
    else:
        raise MalformedCode("expected a list of crossings")
    if not all(isinstance(x, (list, tuple)) for x in pd):
        raise MalformedCode("each crossing must be a list of four arcs")
    try:
        pd = [[int(a) for a in x] for x in pd]
    except (TypeError, ValueError):
        raise MalformedCode("arc labels must be integers") from None
    reverse = ()
    orient = opts.get("orientation")
    if orient is not None:
        d0 = LinkDiagram(pd)
        if len(orient) != len(d0.components):
            raise MalformedCode("orientation needs one entry per component")
        reverse = [d0.components[k] for k, o in enumerate(orient) if int(o) < 0]
    d = LinkDiagram(pd, dotted_arc=opts.get("dotted_arc"),
                    edge_order=opts.get("edge_order"), reverse=reverse)
    signs = opts.get("signs")
    if signs is not None and [int(v) for v in signs] != [x.sign for x in d.crossings]:
        raise MalformedCode("given signs disagree with the PD orientation")
    return d


# -- Tait graphs -------------------------------------------------------------

@dataclass
class TaitGraph:
    """Signed plane multigraph.

    ``edges[e] = (u, v, sign)``; edge ``e`` is the crossing with id ``e``.
    ``order`` lists edge ids from smallest to largest.  ``rotation[v]`` is
    the counterclockwise list of edge ends ``(e, side)`` at ``v`` where side
    0 is ``u`` and side 1 is ``v`` of that edge.
    """
    n_vertices: int
    edges: list
    order: tuple = None
    rotation: list = None
    diagram: LinkDiagram = None
    flipped: bool = False
    vertex_faces: list = field(default=None, repr=False)

    def __post_init__(self):
        if self.order is None:
            self.order = tuple(range(len(self.edges)))
        self.order = tuple(self.order)
        if sorted(self.order) != list(range(len(self.edges))):
            raise ValueError("edge order must be a permutation of the edges")
        self.rank = [0] * len(self.edges)
        for k, e in enumerate(self.order):
            self.rank[e] = k

    @property
    def n_edges(self):
        return len(self.edges)

    def sign(self, e):
        return self.edges[e][2]

    @property
    def dotted_arc(self):
        return None if self.diagram is None else self.diagram.dotted_arc

    def with_order(self, order):
        return TaitGraph(self.n_vertices, list(self.edges), tuple(order), self.rotation,
                         self.diagram, self.flipped, self.vertex_faces)

    def is_connected(self):
        uf = _UF(range(self.n_vertices))
        for u, v, _ in self.edges:
            uf.union(u, v)
        return len({uf.find(x) for x in range(self.n_vertices)}) == 1

    def faces(self):
        """Faces of the embedded graph as cyclic lists of edge ends."""
        if self.rotation is None:
            raise ValueError("graph has no embedding")
        pos = {}
        for v, rot in enumerate(self.rotation):
            for k, end in enumerate(rot):
                pos[end] = (v, k)
        seen, out = set(), []
        for v, rot in enumerate(self.rotation):
            for end in rot:
                if end in seen:
                    continue
                orbit = []
                cur = end
                while cur not in seen:
                    seen.add(cur)
                    orbit.append(cur)
                    e, side = cur
                    w, k = pos[(e, 1 - side)]
                    # next edge clockwise at the far end keeps the face on the left
                    rot_w = self.rotation[w]
                    cur = rot_w[(k - 1) % len(rot_w)]
                out.append(orbit)
        return out

    def to_json(self):
        return {
            "vertices": self.n_vertices,
            "edges": [{"id": e, "ends": [u, v], "sign": "+" if s > 0 else "-"}
                      for e, (u, v, s) in enumerate(self.edges)],
            "order": [e + 1 for e in self.order],
            "dotted_arc": self.dotted_arc,
        }


def checkerboard_and_tait(d, order=None, flip=False):
    """Signed Tait graph of ``d``.

    Black regions are those of the colour class on the left of the smallest
    arc label; ``flip`` selects the other class (the planar dual).
    """
    if order is None:
        order = d.edge_order
    if order is not None:
        order = [int(e) for e in order]
        if sorted(order) == list(range(1, d.n + 1)):
            order = [e - 1 for e in order]
    if d.n == 0:
        return TaitGraph(1, [], (), [[]], d, flip, [None])
    black = d.corner_colour(*d.left_corner(d.arcs[0]))
    if flip:
        black = 1 - black
    vid = {}
    vfaces = []
    for f, orbit in enumerate(d.faces):
        c, s = orbit[0]
        if d.corner_colour(c, s) == black:
            vid[f] = len(vfaces)
            vfaces.append(f)
    edges, base = [], []
    for c in range(d.n):
        b = 0 if d.corner_colour(c, 0) == black else 1
        base.append(b)
        u = vid[d.face_of[(c, b)]]
        v = vid[d.face_of[(c, b + 2)]]
        edges.append((u, v, 1 if b == 1 else -1))
    rotation = []
    for f in vfaces:
        # face orbits run clockwise around the region
        rot = [(c, 0 if s == base[c] else 1) for c, s in reversed(d.faces[f])]
        rotation.append(rot)
    return TaitGraph(len(vfaces), edges, order, rotation, d, flip, vfaces)


def arcs_around_vertex(g, v):
    """Arc labels running along the boundary of the black region ``v``."""
    d = g.diagram
    f = g.vertex_faces[v]
    if f is None:
        return list(d.arcs)
    return [a for a in d.arcs
            if f in (d.face_of[d.left_corner(a)], d.face_of[d.right_corner(a)])]


def redot(g, arc):
    """The same Tait graph with the dot moved to ``arc``."""
    g2 = checkerboard_and_tait(g.diagram.with_dot(arc), g.order, g.flipped)
    assert g2.edges == g.edges
    return g2


def dual_tait(g):
    """Planar dual; every edge keeps its id and changes sign."""
    if g.diagram is not None:
        return checkerboard_and_tait(g.diagram, g.order, not g.flipped)
    if g.rotation is None:
        raise ValueError("dual needs an embedding")
    faces = g.faces()
    fid = {}
    for k, orbit in enumerate(faces):
        for end in orbit:
            fid[end] = k
    edges = []
    for e, (u, v, s) in enumerate(g.edges):
        # the face left of the end (e, 0) read from u
        edges.append((fid[(e, 0)], fid[(e, 1)], -s))
    rotation = [[] for _ in faces]
    for k, orbit in enumerate(faces):
        rotation[k] = [(e, 0 if side == 0 else 1) for e, side in orbit]
    return TaitGraph(len(faces), edges, g.order, rotation)


def diagram_from_tait(n_vertices, edges, rotation, dotted_arc=None, edge_order=None):
    """Medial construction: the link diagram whose Tait graph is given.

    ``rotation[v]`` is the counterclockwise list of edge ends at ``v``.
    Crossing ``e`` of the result is edge ``e``; arc 1 has the vertex regions
    on its left so the default colouring recovers this graph.
    """
    if not edges:
        return LinkDiagram([])
    NE, NW, SW, SE = 0, 1, 2, 3
    seg_start, seg_end = [], []
    for v, rot in enumerate(rotation):
        m = len(rot)
        for k in range(m):
            (ea, sa), (eb, sb) = rot[k], rot[(k + 1) % m]
            seg_start.append((ea, NW if sa == 0 else SE))
            seg_end.append((eb, SW if sb == 0 else NE))
    at = {}
    for i, p in enumerate(seg_start):
        at[p] = (i, 0)
    for i, p in enumerate(seg_end):
        at[p] = (i, 1)
    if len(at) != 4 * len(edges):
        raise MalformedCode("rotation system does not list every edge end once")
    label = {}
    head, tail = {}, {}
    nxt = 1
    for i0 in range(len(seg_start)):
        if i0 in label:
            continue
        i, fwd = i0, True
        while i not in label:
            label[i] = nxt
            a, b = (seg_start[i], seg_end[i]) if fwd else (seg_end[i], seg_start[i])
            tail[nxt], head[nxt] = a, b
            nxt += 1
            e, dr = b
            i, end = at[(e, (dr + 2) % 4)]
            fwd = end == 0
    slot_arc = {}
    for a in head:
        slot_arc[head[a]] = a
        slot_arc[tail[a]] = a
    pd = []
    for e, (u, v, s) in enumerate(edges):
        under = (NE, SW) if s > 0 else (NW, SE)
        start = next(dr for dr in under if head[slot_arc[(e, dr)]] == (e, dr))
        pd.append([slot_arc[(e, (start + k) % 4)] for k in range(4)])
    return LinkDiagram(pd, dotted_arc=dotted_arc, edge_order=edge_order)


def rotation_from_coordinates(coords, edges, bends=None):
    """Rotation system of a straight-line (optionally bent) drawing.

    ``bends[e]`` is an angle offset (radians) applied at both ends so that
    parallel edges can be told apart; positive bends the edge to its left.
    """
    import math
    rot = [[] for _ in coords]
    for e, (u, v, _s) in enumerate(edges):
        b = 0.0 if bends is None else bends.get(e, 0.0)
        (x0, y0), (x1, y1) = coords[u], coords[v]
        if u == v:
            ang = b
            rot[u].append((ang, (e, 0)))
            rot[u].append((ang + 0.5, (e, 1)))
            continue
        a_u = math.atan2(y1 - y0, x1 - x0) + b
        a_v = math.atan2(y0 - y1, x0 - x1) - b
        rot[u].append((a_u % (2 * math.pi), (e, 0)))
        rot[v].append((a_v % (2 * math.pi), (e, 1)))
    return [[end for _, end in sorted(r)] for r in rot]
