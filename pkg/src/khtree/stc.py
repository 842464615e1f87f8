"""The spanning-tree complex: one (reduced) or two (unreduced) generators per tree."""
from __future__ import annotations

from dataclasses import dataclass

from .chain import BigradedComplex
from .cube import Resolver, build_khovanov_complex, build_lee_complex
from .morse import khovanov_matching, morse_differential, verify_acyclic
from .trees import activity_word, build_twist_tree, enumerate_spanning_trees

VARIANTS = ("unreduced", "reduced_plus", "reduced_minus", "lee")


@dataclass(frozen=True)
class STGenerator:
    tree: int
    sign: str
    i: int
    j: int

    def label(self, names):
        return f"{names[self.tree]}{self.sign}"


class STComplex(BigradedComplex):
    """Morse complex of the cube under the tree matching, relabelled by trees.

    ``gens[k]`` describes generator ``k``; ``cube`` and ``morse`` keep the
    underlying complexes so the chain maps stay available.
    """

    def __init__(self, g, variant, cube, km, morse, tree_names):
        self.g = g
        self.variant = variant
        self.cube = cube
        self.km = km
        self.morse = morse
        self.trees = km.trees
        self.twist_trees = km.twist_trees
        self.tree_names = list(tree_names)
        order = sorted(range(len(morse)),
                       key=lambda k: (morse.grading[k], km.critical[morse.crit[k]]))
        pos = {k: n for n, k in enumerate(order)}
        gens, names, grading, diff = [], [], [], []
        for k in order:
            t, s = km.critical[morse.crit[k]]
            i, j = morse.grading[k]
            gen = STGenerator(t, s, i, j)
            gens.append(gen)
            names.append(gen.label(self.tree_names))
            grading.append((i, j))
            diff.append({pos[t2]: v for t2, v in morse.diff[k].items()})
        keys = [(gen.tree, gen.sign) for gen in gens]
        super().__init__(keys, grading, diff, cube.ring, cube.filtered, names)
        self.gens = gens
        self.morse_position = pos

    def generator(self, tree, sign):
        return self.index.get((tree, sign))

    def incidence(self, a, b):
        ka, kb = self.index[a], self.index[b]
        return self.diff[ka].get(kb, 0)

    def incidence_lines(self):
        """Lines like ``T11+ ↦ 2T6-``, one per generator, zero rows included."""
        out = []
        for k, row in enumerate(self.diff):
            terms = []
            for t in sorted(row, key=lambda t: self._tree_sort(t)):
                c = row[t]
                coef = "" if c == 1 else "-" if c == -1 else str(c)
                terms.append(f"{coef}{self.names[t]}")
            rhs = " + ".join(terms).replace("+ -", "- ") if terms else "0"
            out.append(f"{self.names[k]} ↦ {rhs}")
        return out

    def _tree_sort(self, k):
        return (self.gens[k].tree, self.gens[k].sign)

    def to_json(self):
        g = self.g
        return {
            "variant": self.variant,
            "trees": [
                {"name": self.tree_names[k], "edges": [e + 1 for e in t.edges],
                 "word": str(activity_word(g, t))}
                for k, t in enumerate(self.trees)
            ],
            "generators": [
                {"tree": self.tree_names[x.tree], "sign": x.sign, "i": x.i, "j": x.j}
                for x in self.gens
            ],
            "incidences": [
                {"from": self.names[k], "to": self.names[t], "coefficient": int(v)}
                for k, t, v in self.incidences()
            ],
        }


def build_st_complex(g, variant="unreduced", tree_names=None, check=True):
    """Spanning-tree complex of ``g`` for the given variant.

    The differential is the Morse differential of the cube complex under
    the union of the per-tree matchings.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    res = Resolver(g.diagram)
    if variant == "lee":
        cube = build_lee_complex(g, resolver=res)
    else:
        cube = build_khovanov_complex(g, variant, resolver=res)
    trees = enumerate_spanning_trees(g)
    tts = [build_twist_tree(g, t, res) for t in trees]
    km = khovanov_matching(g, cube, trees, tts)
    if check:
        rep = verify_acyclic(cube, km.matching)
        if not rep:
            raise AssertionError(f"tree matching is not acyclic: {rep.reason} {rep.witness}")
    morse = morse_differential(cube, km.matching)
    if tree_names is None:
        tree_names = [f"T{k + 1}" for k in range(len(trees))]
    return STComplex(g, variant, cube, km, morse, tree_names)


def names_from_words(g, trees, words):
    """Tree names ``T1..`` following a reference list of activity words."""
    idx = {w: k for k, w in enumerate(words)}
    out = []
    for t in trees:
        w = str(activity_word(g, t))
        if w not in idx:
            raise KeyError(f"activity word {w} not in the reference list")
        out.append(f"T{idx[w] + 1}")
    return out


# -- states of one twisted unknot ------------------------------------------------------

def tree_states(gt):
    """Every state of U(T): dead crossings fixed, live ones free."""
    out = []
    for p in range(1 << len(gt.live)):
        s = gt.critical_state
        for k, e in enumerate(gt.live):
            if (p >> k) & 1:
                s ^= 1 << e
        out.append(s)
    return out


def state_tree_map(st):
    out = {}
    for k, gt in enumerate(st.twist_trees):
        for s in tree_states(gt):
            out[s] = k
    return out


# -- subpaths ------------------------------------------------------------------------

SUBPATH_KINDS = {
    # kind: (variant, source sign, direction)
    "negative": ("reduced_plus", "+", "down"),
    "positive": ("reduced_plus", "+", "up"),
    "rooted_negative": ("unreduced", "+", "down"),
    "rooted_positive": ("unreduced", "-", "up"),
    "generalized_rooted_positive": ("lee", "+", "up"),
}


@dataclass(frozen=True)
class Subpath:
    """A state of U(T) joined to the critical cell by alternating paths.

    ``edges`` are the live edges resolved differently from the critical
    state, ``changed`` the circles of the critical resolution whose label
    differs (as ``(circle, label)``), ``weight`` the signed path count.
    """
    key: tuple
    edges: tuple
    changed: tuple
    weight: int


def subpath_census(st, tree, kind):
    """States reached inside U(T) by alternating paths of the given kind.

    ``down`` kinds follow paths leaving the critical cell (the support of
    the map to the original complex); ``up`` kinds follow paths arriving at
    it from cells of the same degree.  ``st`` must be built with the
    variant listed in ``SUBPATH_KINDS``.
    """
    variant, sign, direction = SUBPATH_KINDS[kind]
    if st.variant != variant:
        raise ValueError(f"{kind} subpaths live in the {variant} complex")
    cx, km = st.cube, st.km
    paths = st.morse.paths
    gt = st.twist_trees[tree]
    mine = set(tree_states(gt))
    crit = {v: k for k, v in km.critical.items()}
    c = crit[(tree, sign)]
    if direction == "down":
        found = {x: w for x, w in paths.P(c).items() if x != c}
    else:
        deg = cx.grading[c][0]
        found = {}
        for x in range(len(cx)):
            if x == c or cx.grading[x][0] != deg or cx.keys[x][0] not in mine:
                continue
            w = paths.G(x).get(c, 0)
            if w:
                found[x] = w
    res = cx.resolver
    circ0 = res.labels[gt.critical_state]
    lab0 = cx.keys[c][1]
    out = []
    for x, w in sorted(found.items()):
        s, lab = cx.keys[x]
        if s not in mine:
            continue
        edges = tuple(e for e in gt.live if (s ^ gt.critical_state) >> e & 1)
        circ = res.labels[s]
        changed = []
        seen = set()
        for a, v in enumerate(circ0):
            v = int(v)
            if v in seen:
                continue
            seen.add(v)
            now = (lab >> int(circ[a])) & 1
            if now != (lab0 >> v) & 1:
                changed.append((v, "x" if now else "1"))
        out.append(Subpath(cx.keys[x], edges, tuple(changed), int(w)))
    return out


def subpath_shapes(gt, kind):
    """Subgraphs of G(T) meeting the structural part of the subpath definitions.

    Each component must be a path running away from the root along one
    root-to-leaf path, using only the letters allowed for ``kind``; unless
    the kind is rooted, no component may start at the root.  Label
    conditions are not checked here.
    """
    from itertools import combinations
    from .trees import BAR
    neg = {"L" + BAR, "l"}
    pos = {"L", "l" + BAR}
    allowed = neg if kind.endswith("negative") else pos
    rooted = kind.startswith(("rooted", "generalized"))
    adj = {}
    for e in gt.live:
        a, b = gt.ends[e]
        adj.setdefault(a, []).append((b, e))
        adj.setdefault(b, []).append((a, e))
    parent_edge = {gt.root: None}
    upper = {}
    stack = [gt.root]
    while stack:
        x = stack.pop()
        for y, e in adj.get(x, ()):
            if y not in parent_edge:
                parent_edge[y] = e
                upper[e] = x
                stack.append(y)
    ok = [e for e in gt.live if gt.letters[e] in allowed]
    out = []
    for r in range(1, len(ok) + 1):
        for sub in combinations(ok, r):
            chosen = set(sub)
            tops = [upper[e] for e in chosen]
            if len(set(tops)) != len(tops):
                continue    # a vertex with two chosen child edges branches
            starts = [upper[e] for e in chosen if parent_edge[upper[e]] not in chosen]
            if not rooted and gt.root in starts:
                continue
            out.append(tuple(sorted(chosen)))
    return out


# -- incidences through chains of trees ------------------------------------------------

def incidence_combinatorial(st, src, dst, order=None):
    """Γ(src, dst) summed chain by chain.

    ``src`` and ``dst`` are ``(tree, sign)`` keys.  For every chain
    ``T = T_1 > ... > T_n = T'`` of the generating relation, alternating
    paths whose trees follow exactly that chain are counted with a lazy
    search that uses only the local differential and the per-tree matching
    rule.  Returns 0 when no chain exists.
    """
    from .cube import generator_differential
    from .morse import _inv_neg, _partner
    from .trees import TreeOrder
    a, b = src[0], dst[0]
    ia = st.grading[st.index[src]][0]
    ib = st.grading[st.index[dst]][0]
    if ib != ia + 1:
        return 0
    if order is None:
        order = TreeOrder(st.g, st.trees)
    g, cx = st.g, st.cube
    res = cx.resolver
    tree_of = state_tree_map(st)
    lee = st.variant == "lee"
    crit = {v: cx.keys[k] for k, v in st.km.critical.items()}
    start, goal = crit[src], crit[dst]
    allowed = set(cx.index)
    reps = []
    for gt in st.twist_trees:
        rep = {}
        for arc, c in enumerate(res.labels[gt.critical_state]):
            rep.setdefault(int(c), arc)
        reps.append(rep)

    def live_set(k, s):
        gt = st.twist_trees[k]
        return {e for e in gt.live if (s ^ gt.critical_state) >> e & 1}

    def partner(key):
        s, lab = key
        k = tree_of[s]
        gt = st.twist_trees[k]
        return _partner(res, gt, s, live_set(k, s), lab, reps[k], res.labels[s])

    def up_of(key):
        return [(t, v) for t, v in generator_differential(g, res, key[0], key[1], lee).items()
                if t in allowed]

    ring = cx.ring
    chains = [[a, b]] if b in order.succ[a] else []
    chains += [c for c in order.chains(a, b) if len(c) > 2]
    chains = [list(c) for c in {tuple(c) for c in chains}]
    total = 0
    for chain in sorted(chains):
        memo = {}

        def walk(key, pos):
            if (key, pos) in memo:
                return memo[(key, pos)]
            acc = 0
            skip = partner(key)
            for t, w in up_of(key):
                if t == skip:
                    continue
                if t == goal:
                    # the last step may itself cross into the final tree
                    if pos >= len(chain) - 2:
                        acc += w
                    continue
                u = partner(t)
                if u is None or cx.grading[cx.index[u]][0] != cx.grading[cx.index[t]][0] - 1:
                    continue
                q = tree_of[u[0]]
                if q == chain[pos]:
                    nxt = pos
                elif pos + 1 < len(chain) and q == chain[pos + 1]:
                    nxt = pos + 1
                else:
                    continue
                back = _inv_neg(dict(up_of(u))[t], ring)
                acc += w * back * walk(u, nxt)
            memo[(key, pos)] = acc
            return acc

        total += walk(start, 0)
    return total


# -- the torsion certificate for alternating diagrams ----------------------------------

@dataclass
class TorsionCertificate:
    order: tuple          # edge ids, smallest first
    cycle: tuple          # edges of G_0 from the root around
    ears: list
    tree: int             # T, whose minus generator is hit twice
    tree_prime: int       # T'
    incidence: int
    expected: int
    torsion_at: list      # bidegrees with Z/2 in the computed homology
    complex: STComplex = None

    @property
    def ok(self):
        return self.incidence == self.expected and bool(self.torsion_at)


def _cycles(n, edges):
    """Simple cycles of length >= 3 as ``(verts, edges)``, shortest first.

    Each cycle is an edge plus a path between its ends that avoids the
    edge's parallel class; ``verts`` starts at the first end of that edge.
    """
    out = []
    for e0, (u0, v0, _) in enumerate(edges):
        if u0 == v0:
            continue
        stack = [(u0, [u0], [])]
        while stack:
            x, verts, path = stack.pop()
            for e, (p, q, _) in enumerate(edges):
                if {p, q} == {u0, v0} or p == q or x not in (p, q):
                    continue
                y = q if p == x else p
                if y == v0:
                    out.append((verts + [v0], path + [e] + [e0]))
                elif y not in verts:
                    stack.append((y, verts + [y], path + [e]))
    out.sort(key=lambda c: (len(c[1]), c[1]))
    return out


def _simple_cycle(n, edges, odd=False):
    """A cycle of length >= 3, odd if asked and possible."""
    cycles = _cycles(n, edges)
    if odd:
        for c in cycles:
            if len(c[1]) % 2:
                return c
    return cycles[0] if cycles else None


def ear_decomposition(g, odd=False):
    """``(cycle_vertices, cycle_edges, ears)`` with each ear a list of edge ids.

    With ``odd`` the starting cycle has odd length whenever one exists.
    """
    from .errors import TooSmall
    found = _simple_cycle(g.n_vertices, g.edges, odd)
    if found is None:
        raise TooSmall("no cycle of length at least 3 in the Tait graph")
    verts, cyc = found
    used_e = set(cyc)
    used_v = set(verts)
    ears = []
    while len(used_e) < g.n_edges:
        progress = False
        for e, (u, v, _) in enumerate(g.edges):
            if e in used_e:
                continue
            if u in used_v and v in used_v:
                ears.append([e])
                used_e.add(e)
                progress = True
                continue
            if u not in used_v and v not in used_v:
                continue
            a, b = (u, v) if u in used_v else (v, u)
            # search from b through new vertices back to the graph, avoiding a
            prev = {b: None}
            queue = [b]
            hit = None
            while queue and hit is None:
                x = queue.pop(0)
                for f, (p, q, _) in enumerate(g.edges):
                    if f in used_e or f == e or x not in (p, q):
                        continue
                    y = q if p == x else p
                    if y in prev:
                        continue
                    if y in used_v:
                        if y != a:
                            prev[y] = (x, f)
                            hit = y
                            break
                        continue
                    prev[y] = (x, f)
                    queue.append(y)
            if hit is None:
                continue
            path = []
            z = hit
            while prev[z] is not None:
                z, f = prev[z]
                path.append(f)
            ear = [e] + path[::-1]
            ears.append(ear)
            used_e.update(ear)
            for f in ear:
                used_v.update(g.edges[f][:2])
            progress = True
        if not progress:
            from .errors import NotAlternating
            raise NotAlternating("Tait graph is not 2-connected")
    return verts, cyc, ears


def _positive_colouring(d, order):
    from .diagram import checkerboard_and_tait
    for flip in (False, True):
        g = checkerboard_and_tait(d, order, flip)
        if all(sgn > 0 for _, _, sgn in g.edges):
            return g
    return None


def torsion_witness_alternating(g):
    """Build the tree pair (T, T') whose incidence is ±2 and check the torsion.

    ``g`` must come from an alternating diagram (all edges one sign).  The
    construction runs on the all-positive checkerboard colouring and wants
    an odd starting cycle of length three or more.  When that graph has none
    (the left trefoil gives a theta graph) the mirror image is used instead,
    which carries the same torsion.  ``torsion_at`` always refers to the diagram that was passed in.
    """
    from .diagram import arcs_around_vertex, redot
    from .errors import NotAlternating, TooSmall
    from .homology import homology_of
    from .trees import activity_word
    if len({s for _, _, s in g.edges}) > 1:
        raise NotAlternating("edges of both signs")
    if g.n_edges < 3:
        raise TooSmall("the unknot and the Hopf link carry no such pair")
    d = g.diagram
    options = []
    for mirrored, dd in ((False, d), (True, d.mirror())):
        gp = _positive_colouring(dd, None)
        if gp is None:
            raise NotAlternating("no checkerboard colouring has all edges positive")
        try:
            options.append((mirrored, gp, ear_decomposition(gp, odd=True)))
        except TooSmall:
            continue
    if not options:
        raise TooSmall("every cycle of the Tait graph has length two")
    # with an even starting cycle the two alternating paths cancel
    odd = [o for o in options if len(o[2][1]) % 2]
    found = (odd or options)[0]
    mirrored, gp, (verts, cyc, ears) = found
    order = list(cyc) + [e for ear in ears for e in ear]
    gp = gp.with_order(order)
    gp = redot(gp, min(arcs_around_vertex(gp, verts[0]))).with_order(order)
    st = build_st_complex(gp, "unreduced")
    masks = {t.mask: k for k, t in enumerate(st.trees)}
    t_mask = (1 << gp.n_edges) - 1
    for e in [cyc[-1]] + [ear[-1] for ear in ears]:
        t_mask &= ~(1 << e)
    tp_mask = (t_mask | (1 << cyc[-1])) & ~(1 << cyc[-2])
    T, Tp = masks[t_mask], masks[tp_mask]
    inc = st.incidence((Tp, "+"), (T, "-"))
    expected = 2 * (-1) ** (len(cyc) - 1)
    own = st if not mirrored else build_st_complex(g, "unreduced")
    h = homology_of(own)
    tors = sorted(ij for ij, (_, t) in h.groups.items() if 2 in t)
    cert = TorsionCertificate(tuple(order), tuple(cyc), ears, T, Tp, inc, expected, tors, st)
    cert.mirrored = mirrored
    cert.words = (str(activity_word(gp, st.trees[T])), str(activity_word(gp, st.trees[Tp])))
    return cert
