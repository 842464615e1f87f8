"""Dowker-Thistlethwaite codes.

A code is a sequence of tuples of signed even integers, one tuple per link
component; the k-th entry overall is the even partner of the odd label
2k - 1.  A positive entry means the odd visit passes under.  The planar
embedding is recovered by searching crossing handedness until the diagram
has n + 2 faces, so codes only determine a diagram up to reflection.
"""
import ast
from itertools import product

from .errors import MalformedCode

MAX_DT_CROSSINGS = 20


def parse_dt(text):
    if isinstance(text, (list, tuple)):
        obj = text
    else:
        s = text.strip()
        if s.upper().startswith("DT"):
            s = s[2:].lstrip(" :")
        if s.replace("-", "").replace(" ", "").isdigit():
            s = "(" + ",".join(s.split()) + ",)"
        try:
            obj = ast.literal_eval(s)
        except (ValueError, SyntaxError):
            raise MalformedCode(f"cannot read DT code {text!r}") from None
    # "[(..),(..)], [flips]" evaluates to a 2-tuple whose second item is flat
    if (isinstance(obj, tuple) and len(obj) == 2 and isinstance(obj[0], list)
            and all(isinstance(v, int) for v in obj[1])):
        obj = obj[0]
    if isinstance(obj, tuple) and all(isinstance(v, int) for v in obj):
        obj = [obj]
    if isinstance(obj, list) and obj and all(isinstance(v, int) for v in obj):
        obj = [tuple(obj)]
    try:
        comps = [tuple(int(v) for v in comp) for comp in obj]
    except TypeError:
        raise MalformedCode(f"cannot read DT code {text!r}") from None
    evens = sorted(abs(v) for comp in comps for v in comp)
    n = len(evens)
    if evens != list(range(2, 2 * n + 1, 2)):
        raise MalformedCode("DT entries must be a signed permutation of 2, 4, ..., 2n")
    return comps


def _strands(comps):
    n = sum(len(c) for c in comps)
    nxt, prv = {}, {}
    lo = 1
    for comp in comps:
        hi = lo + 2 * len(comp) - 1
        for p in range(lo, hi + 1):
            q = p + 1 if p < hi else lo
            nxt[p], prv[q] = q, p
        lo = hi + 1
    pairs = []
    k = 0
    for comp in comps:
        for v in comp:
            pairs.append((2 * k + 1, abs(v), v > 0))
            k += 1
    return n, prv, pairs


def _pd_for(pairs, prv, hands):
    pd = []
    for (o, e, odd_under), h in zip(pairs, hands):
        u, w = (o, e) if odd_under else (e, o)
        u_in, u_out = prv[u], u
        w_in, w_out = prv[w], w
        if h > 0:
            pd.append([u_in, w_out, u_out, w_in])
        else:
            pd.append([u_in, w_in, u_out, w_out])
    return pd


def _face_count(pd):
    other = {}
    ends = {}
    for c, x in enumerate(pd):
        for s, a in enumerate(x):
            ends.setdefault(a, []).append((c, s))
    for p, q in ends.values():
        other[p], other[q] = q, p
    seen = set()
    faces = 0
    for c in range(len(pd)):
        for s in range(4):
            if (c, s) in seen:
                continue
            faces += 1
            cur = (c, s)
            while cur not in seen:
                seen.add(cur)
                c2, s2 = cur
                cur = other[(c2, (s2 + 1) % 4)]
    return faces


def dt_to_pd(comps):
    n, prv, pairs = _strands(comps)
    if n == 0:
        return []
    if n > MAX_DT_CROSSINGS:
        raise MalformedCode(f"DT realisation is limited to {MAX_DT_CROSSINGS} crossings")
    for rest in product((1, -1), repeat=n - 1):
        pd = _pd_for(pairs, prv, (1,) + rest)
        if _face_count(pd) == n + 2:
            return pd
    raise MalformedCode("DT code is not realisable as a planar diagram")


def to_dt(d):
    """DT code of a knot diagram, starting at the tail of its smallest arc."""
    from .errors import NotAKnot
    if len(d.components) != 1:
        raise NotAKnot("DT export is implemented for knots only")
    if d.n == 0:
        return [()]
    visits = {}
    a = d.components[0][0]
    p = 1
    for a in d.components[0]:
        c, s = d.head[a]
        visits.setdefault(c, []).append((p, s in (0, 2)))
        p += 1
    odd_to_even = {}
    for c, vs in visits.items():
        (p1, under1), (p2, _) = vs
        o, e = (p1, p2) if p1 % 2 else (p2, p1)
        odd_under = under1 if o == p1 else not under1
        odd_to_even[o] = e if odd_under else -e
    return [tuple(odd_to_even[o] for o in range(1, 2 * d.n, 2))]


def format_dt(comps):
    return "DT: [" + ",".join("(" + ",".join(str(v) for v in c) + ")" for c in comps) + "]"
