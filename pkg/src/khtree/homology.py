"""Smith normal form, integral and filtered homology, Jones polynomials."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from math import gcd

from .errors import NotAComplex, NotACycle


# -- Smith normal form -----------------------------------------------------------

@dataclass
class SNFResult:
    factors: list          # nonzero invariant factors, d1 | d2 | ...

    @property
    def rank(self):
        return len(self.factors)

    @property
    def torsion(self):
        return [d for d in self.factors if d > 1]


def smith_normal_form(M):
    """Invariant factors of an integer matrix (list of rows)."""
    rows = [{c: int(v) for c, v in enumerate(r) if v} for r in M]
    return SNFResult(_snf_sparse(rows))


def _unit_eliminate(rows):
    """Remove unit pivots from sparse rows; returns (units, remaining rows)."""
    rows = [dict(r) for r in rows if r]
    alive = set(range(len(rows)))
    cols = defaultdict(set)
    for k, r in enumerate(rows):
        for c in r:
            cols[c].add(k)
    units = 0
    queue = [k for k in alive]
    while queue:
        k = queue.pop()
        if k not in alive:
            continue
        r = rows[k]
        piv = next((c for c, v in r.items() if v in (1, -1)), None)
        if piv is None:
            continue
        p = r[piv]
        alive.discard(k)
        for c in r:
            cols[c].discard(k)
        units += 1
        for k2 in list(cols[piv]):
            r2 = rows[k2]
            f = r2[piv] * p      # p is its own inverse
            for c, v in r.items():
                nv = r2.get(c, 0) - f * v
                if nv:
                    if c not in r2:
                        cols[c].add(k2)
                    r2[c] = nv
                elif c in r2:
                    del r2[c]
                    cols[c].discard(k2)
            if not r2:
                alive.discard(k2)
            else:
                queue.append(k2)
        del cols[piv]
    return units, [rows[k] for k in sorted(alive)]


def _snf_sparse(rows):
    units, rest = _unit_eliminate(rows)
    factors = [1] * units
    if rest:
        colset = sorted({c for r in rest for c in r})
        cidx = {c: n for n, c in enumerate(colset)}
        A = [[0] * len(colset) for _ in rest]
        for i, r in enumerate(rest):
            for c, v in r.items():
                A[i][cidx[c]] = v
        factors += _snf_dense(A)
    factors.sort()
    return factors


def _snf_dense(A):
    """Diagonalise in place and return the invariant factors."""
    A = [row[:] for row in A]
    m = len(A)
    n = len(A[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero absolute value in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = A[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            p = A[t][t]
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    if q:
                        ri, rt = A[i], A[t]
                        for j in range(t, n):
                            ri[j] -= q * rt[j]
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    if q:
                        for i in range(t, m):
                            A[i][j] -= q * A[i][t]
                    if A[t][j]:
                        done = False
            if done:
                # divisibility with the rest of the block
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if A[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                rt, rb = A[t], A[bad]
                for j in range(t, n):
                    rt[j] += rb[j]
                continue
            # move the smallest remaining entry of row/column t to the pivot
            best = (abs(p), t, t)
            for i in range(t + 1, m):
                if A[i][t] and abs(A[i][t]) < best[0]:
                    best = (abs(A[i][t]), i, t)
            for j in range(t + 1, n):
                if A[t][j] and abs(A[t][j]) < best[0]:
                    best = (abs(A[t][j]), t, j)
            _, i, j = best
            A[t], A[i] = A[i], A[t]
            for row in A:
                row[t], row[j] = row[j], row[t]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def integer_determinant(M):
    n = len(M)
    if n == 0:
        return 1
    f = smith_normal_form(M).factors
    if len(f) < n:
        return 0
    # |det| is the product of invariant factors; recover the sign by Bareiss
    A = [list(r) for r in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if A[i][k]), None)
            if sw is None:
                return 0
            A[k], A[sw] = A[sw], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


# -- ranks over Q ------------------------------------------------------------------

def rank_rational(rows):
    """Rank of a matrix given as sparse integer/rational rows."""
    return len(_echelon(rows))


def _normalise(r):
    g = 0
    for v in r.values():
        g = gcd(g, int(v))
    if g > 1:
        return {c: v // g for c, v in r.items()}
    return r


def _to_int_row(r):
    from fractions import Fraction
    den = 1
    for v in r.values():
        if isinstance(v, Fraction):
            den = den * v.denominator // gcd(den, v.denominator)
    return {c: int(v * den) for c, v in r.items() if v}


def _echelon(rows):
    """Fraction-free echelon form; returns {pivot_col: row}."""
    piv = {}
    for r in rows:
        r = _to_int_row(r)
        while r:
            c = min(r)
            if c not in piv:
                piv[c] = _normalise(r)
                break
            p = piv[c]
            a, b = p[c], r[c]
            new = {}
            for k in set(r) | set(p):
                v = a * r.get(k, 0) - b * p.get(k, 0)
                if v:
                    new[k] = v
            r = _normalise(new)
    return piv


def in_span(piv, vec):
    r = _to_int_row(vec)
    while r:
        c = min(r)
        if c not in piv:
            return False
        p = piv[c]
        a, b = p[c], r[c]
        new = {}
        for k in set(r) | set(p):
            v = a * r.get(k, 0) - b * p.get(k, 0)
            if v:
                new[k] = v
        r = _normalise(new)
    return True


# -- homology -----------------------------------------------------------------------

@dataclass
class BigradedHomology:
    groups: dict = field(default_factory=dict)   # (i, j) -> (rank, [torsion])

    def __eq__(self, other):
        return isinstance(other, BigradedHomology) and self.normalised() == other.normalised()

    def normalised(self):
        return {k: (r, tuple(sorted(t))) for k, (r, t) in self.groups.items() if r or t}

    def poincare(self):
        return {k: r for k, (r, _) in self.groups.items() if r}

    def torsion(self):
        return {k: t for k, (_, t) in self.groups.items() if t}

    def euler(self):
        out = defaultdict(int)
        for (i, j), (r, _) in self.groups.items():
            out[j] += -r if i % 2 else r
        return {j: c for j, c in sorted(out.items()) if c}

    def total_rank(self):
        return sum(r for r, _ in self.groups.values())

    def to_json(self):
        return [{"i": i, "j": j, "rank": r, "torsion": list(t)}
                for (i, j), (r, t) in sorted(self.normalised().items())]

    def format_group(self, key):
        r, t = self.groups.get(key, (0, ()))
        parts = ["Z"] * r + [f"Z{d}" for d in t]
        return "+".join(parts) if parts else "0"

    def table(self):
        keys = sorted(self.normalised())
        if not keys:
            return "(zero)"
        iis = sorted({i for i, _ in keys})
        jjs = sorted({j for _, j in keys}, reverse=True)
        cells = [[self.format_group((i, j)) if (i, j) in self.groups else "" for i in iis]
                 for j in jjs]
        w = max([len(str(i)) for i in iis] + [len(c) for row in cells for c in row] + [1])
        lines = ["j\\i  " + " ".join(f"{i:>{w}}" for i in iis)]
        for j, row in zip(jjs, cells):
            lines.append(f"{j:>4} " + " ".join(f"{c:>{w}}" for c in row))
        return "\n".join(lines)


def homology_of(cx, check=True):
    """Integral homology per bidegree of a j-preserving complex."""
    if cx.filtered:
        raise ValueError("use filtered_ranks for filtered complexes")
    if check:
        cx.check()
    bid = cx.by_bidegree()
    snf = {}

    def factors(i, j):
        if (i, j) not in snf:
            src, tgt, rows = cx.block(i, j)
            snf[(i, j)] = _snf_sparse(rows) if src and tgt else []
        return snf[(i, j)]

    out = {}
    for (i, j), gens in bid.items():
        out_f = factors(i, j)
        in_f = factors(i - 1, j)
        r = len(gens) - len(out_f) - len(in_f)
        tors = [d for d in in_f if d > 1]
        if r or tors:
            out[(i, j)] = (r, tors)
    return BigradedHomology(out)


def euler_polynomial(cx):
    return cx.euler()


def rational_homology_ranks(cx):
    """Betti numbers per homological degree (any complex)."""
    deg = cx.by_degree()
    rk = {}
    for i, gens in deg.items():
        rk[i] = rank_rational([cx.diff[k] for k in gens])
    return {i: len(gens) - rk.get(i, 0) - rk.get(i - 1, 0) for i, gens in sorted(deg.items())
            if len(gens) - rk.get(i, 0) - rk.get(i - 1, 0)}


def filtered_ranks(cx):
    """For each degree ``i``: the jumps of ``p -> dim im(H^i(F_p) -> H^i)``.

    ``F_p`` is spanned by generators with ``j >= p``.  Only the levels where
    the dimension grows (reading ``p`` downwards) are reported, so complexes
    with different generators but the same filtered homology agree.
    """
    deg = cx.by_degree()
    out = {}
    for i, gens in sorted(deg.items()):
        prev = deg.get(i - 1, [])
        r_prev = rank_rational([cx.diff[k] for k in prev])
        levels = sorted({cx.grading[k][1] for k in gens})
        res = {}
        for p in levels:
            Fp = [k for k in gens if cx.grading[k][1] >= p]
            r_out = rank_rational([cx.diff[k] for k in Fp])
            below = [{t: w for t, w in cx.diff[k].items() if cx.grading[t][1] < p} for k in prev]
            r_below = rank_rational(below)
            dim = len(Fp) - r_out - r_prev + r_below
            res[p] = dim
        jumps, last = {}, 0
        for p in sorted(res, reverse=True):
            if res[p] != last:
                jumps[p] = last = res[p]
        if jumps:
            out[i] = dict(sorted(jumps.items()))
    return out


def filtered_homology_levels(cx, classes):
    """Largest ``p`` with each class represented in ``F_p`` (None if zero)."""
    out = []
    for z in classes:
        z = {k: v for k, v in z.items() if v}
        if not z:
            out.append(None)
            continue
        if cx.apply_idx(z):
            raise NotACycle("class representative is not a cycle")
        i = cx.grading[next(iter(z))][0]
        prev = cx.by_degree().get(i - 1, [])
        levels = sorted({cx.grading[k][1] for k in cx.by_degree()[i]}, reverse=True)
        level = None
        for p in levels:
            below = [{t: w for t, w in cx.diff[k].items() if cx.grading[t][1] < p} for k in prev]
            zb = {t: w for t, w in z.items() if cx.grading[t][1] < p}
            if not zb or in_span(_echelon(below), zb):
                level = p
                break
        if level is None:
            # only a boundary survives every projection test at the bottom level
            level = min(levels)
        full = [dict(cx.diff[k]) for k in prev]
        if in_span(_echelon(full), z):
            level = None
        out.append(level)
    return out


# -- Jones polynomial via the Kauffman bracket --------------------------------------

def _padd(p, q, s=1):
    out = dict(p)
    for k, v in q.items():
        out[k] = out.get(k, 0) + s * v
    return {k: v for k, v in out.items() if v}


def _pmul(p, q):
    out = defaultdict(int)
    for a, x in p.items():
        for b, y in q.items():
            out[a + b] += x * y
    return {k: v for k, v in out.items() if v}


def kauffman_bracket(d):
    """Unnormalised bracket (the unknot is -A^2 - A^-2) as ``{exp: coef}``.

    Crossings are absorbed one at a time into a sum over pairings of the
    open arc ends, so no resolution of the whole diagram is ever listed.
    """
    delta = {2: -1, -2: -1}
    if d.n == 0:
        return delta
    # a state: frozenset of pairs of open labels, plus closed loop count
    states = {frozenset(): {0: 1}}
    for x in d.pd:
        a, b, c, e = x
        new = defaultdict(dict)
        for pairs, poly in states.items():
            for w, joins in ((1, ((a, b), (c, e))), (-1, ((a, e), (b, c)))):
                mate = {}
                for p, q in pairs:
                    mate[p], mate[q] = q, p
                loops = 0
                for p, q in joins:
                    # join ends p and q, each possibly already paired
                    if p == q:
                        loops += 1
                        continue
                    if mate.get(p) == q:
                        del mate[p], mate[q]
                        loops += 1
                        continue
                    pp, qq = mate.pop(p, None), mate.pop(q, None)
                    if pp is not None:
                        del mate[pp]
                    if qq is not None:
                        del mate[qq]
                    ends = [pp if pp is not None else p, qq if qq is not None else q]
                    if ends[0] == ends[1]:
                        loops += 1
                        continue
                    mate[ends[0]], mate[ends[1]] = ends[1], ends[0]
                key = frozenset(tuple(sorted((p, q))) for p, q in mate.items() if p < q)
                term = {w: 1}
                for _ in range(loops):
                    term = _pmul(term, delta)
                new[key] = _padd(new[key], _pmul(poly, term))
        states = {k: v for k, v in new.items() if v}
    total = states.get(frozenset(), {})
    # every arc label closes up; the final loop was counted when it closed
    return total


def jones_khovanov(d):
    """Unnormalised Jones polynomial in Khovanov's normalisation, ``{j: c}``.

    J = (-A^3)^(-w) <D> with A^2 = -q^(-1); the unknot gives q + q^-1.
    """
    br = kauffman_bracket(d)
    w = d.writhe
    pref = {-3 * w: (-1) ** (w % 2)}
    poly = _pmul(pref, br)
    out = {}
    for e, c in poly.items():
        if e % 2:
            raise ValueError("odd power of A in the normalised bracket")
        k = e // 2
        out[-k] = out.get(-k, 0) + c * (-1) ** (k % 2)
    return {j: c for j, c in sorted(out.items()) if c}
