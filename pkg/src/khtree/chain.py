"""Sparse bigraded cochain complexes over Z or Q."""
from __future__ import annotations

from collections import defaultdict
from fractions import Fraction

from .errors import NotAComplex


class BigradedComplex:
    """Free complex with generators graded by ``(i, j)``.

    ``diff[k]`` maps target index to a nonzero coefficient.  The
    differential raises ``i`` by one; for Khovanov complexes it keeps ``j``,
    for Lee complexes (``filtered=True``) it may raise ``j``.
    """

    def __init__(self, keys, grading, diff, ring="Z", filtered=False, names=None):
        self.keys = list(keys)
        self.grading = list(grading)
        self.diff = [dict(d) for d in diff]
        self.ring = ring
        self.filtered = filtered
        self.names = names
        self.index = {k: n for n, k in enumerate(self.keys)}

    def __len__(self):
        return len(self.keys)

    def name(self, k):
        return self.names[k] if self.names else str(self.keys[k])

    def by_degree(self):
        out = defaultdict(list)
        for k, (i, _) in enumerate(self.grading):
            out[i].append(k)
        return dict(out)

    def by_bidegree(self):
        out = defaultdict(list)
        for k, ij in enumerate(self.grading):
            out[ij].append(k)
        return dict(out)

    def apply(self, chain):
        out = defaultdict(int)
        for k, c in chain.items():
            for t, w in self.diff[self.index[k] if not isinstance(k, int) else k].items():
                out[t] += c * w
        return {t: c for t, c in out.items() if c}

    def apply_idx(self, chain):
        out = defaultdict(int)
        for k, c in chain.items():
            for t, w in self.diff[k].items():
                out[t] += c * w
        return {t: c for t, c in out.items() if c}

    def check(self):
        """Raise NotAComplex unless d∘d = 0 and the gradings are respected."""
        for k, row in enumerate(self.diff):
            i, j = self.grading[k]
            for t in row:
                ti, tj = self.grading[t]
                if ti != i + 1 or (tj != j if not self.filtered else tj < j):
                    raise NotAComplex(f"bad grading on {self.name(k)} -> {self.name(t)}",
                                      (k, t))
            dd = self.apply_idx({k: 1})
            dd = self.apply_idx(dd)
            if dd:
                t = next(iter(dd))
                raise NotAComplex(f"d^2 != 0 at {self.name(k)}", (k, t))
        return True

    def euler(self):
        """Graded Euler characteristic as ``{j: coefficient}``."""
        out = defaultdict(int)
        for i, j in self.grading:
            out[j] += -1 if i % 2 else 1
        return {j: c for j, c in sorted(out.items()) if c}

    def block(self, i, j=None, j_to=None):
        """Rows = sources at ``(i, j)``, columns = targets at ``(i+1, j_to)``."""
        src = [k for k, g in enumerate(self.grading) if g[0] == i and (j is None or g[1] == j)]
        tj = j if j_to is None else j_to
        tgt = [k for k, g in enumerate(self.grading)
               if g[0] == i + 1 and (tj is None or g[1] == tj)]
        col = {t: n for n, t in enumerate(tgt)}
        rows = []
        for k in src:
            rows.append({col[t]: w for t, w in self.diff[k].items() if t in col})
        return src, tgt, rows

    def transpose_entries(self):
        out = [dict() for _ in self.keys]
        for k, row in enumerate(self.diff):
            for t, w in row.items():
                out[t][k] = w
        return out

    def to_rational(self):
        diff = [{t: Fraction(w) for t, w in row.items()} for row in self.diff]
        return BigradedComplex(self.keys, self.grading, diff, "Q", self.filtered, self.names)

    def incidences(self):
        """``(source, target, coefficient)`` triples in index order."""
        for k, row in enumerate(self.diff):
            for t in sorted(row):
                yield k, t, row[t]


def write_matrix_market(cx, directory):
    """One ``d_i_j.mtx`` file per nonzero ``(i, j)`` block of the differential.

    Filtered complexes do not split by ``j``; they get one ``d_i.mtx`` per degree.
    """
    from pathlib import Path

    import scipy.io
    import scipy.sparse

    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    blocks = sorted(cx.by_degree()) if cx.filtered else sorted(cx.by_bidegree())
    for key in blocks:
        i, j = (key, None) if cx.filtered else key
        src, tgt, rows = cx.block(i, j)
        if not src or not tgt:
            continue
        r, c, v = [], [], []
        for a, row in enumerate(rows):
            for b, w in sorted(row.items()):
                r.append(a)
                c.append(b)
                v.append(int(w) if cx.ring == "Z" else float(w))
        m = scipy.sparse.coo_matrix((v, (r, c)), shape=(len(src), len(tgt)),
                                    dtype=int if cx.ring == "Z" else float)
        path = out / (f"d_{i}.mtx" if cx.filtered else f"d_{i}_{j}.mtx")
        scipy.io.mmwrite(str(path), m, field="integer" if cx.ring == "Z" else "real")
        written.append(path)
    return written
