"""Hot loops over the resolution cube.

The numba versions are used unless ``KHTREE_NO_NUMBA`` is set to a truthy
value (or numba fails to import); the fallbacks are vectorised numpy and
produce identical arrays.
"""
import os

import numpy as np

_DISABLED = os.environ.get("KHTREE_NO_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via the env flag
    HAVE_NUMBA = False


def _resolve_numpy(slots, n_arcs):
    """Circle labels of every resolution by min-label propagation.

    ``slots`` is an (n, 4) array of arc indices per crossing.  Bit k of a
    state is 0 for the A-smoothing of crossing k (joins slots 0-1 and 2-3)
    and 1 for the B-smoothing (joins 0-3 and 1-2).
    """
    n = slots.shape[0]
    states = np.arange(1 << n, dtype=np.int64)
    lab = np.broadcast_to(np.arange(n_arcs, dtype=np.int32), (1 << n, n_arcs)).copy()
    rows = np.arange(1 << n)
    bits = [((states >> k) & 1).astype(bool) for k in range(n)]
    while True:
        changed = False
        for k in range(n):
            a, b, c, d = slots[k]
            # partner of slot 0 is 1 (A) or 3 (B); partner of 2 is 3 (A) or 1 (B)
            p0 = np.where(bits[k], d, b)
            p2 = np.where(bits[k], b, d)
            for x, y in ((np.full(1 << n, a), p0), (np.full(1 << n, c), p2)):
                lx = lab[rows, x]
                ly = lab[rows, y]
                m = np.minimum(lx, ly)
                if np.any(lx != ly):
                    changed = True
                    # relabel whole classes so propagation converges quickly
                    hi = np.maximum(lx, ly)
                    lab = np.where(lab == hi[:, None], m[:, None], lab)
        if not changed:
            break
    return _canonical_numpy(lab)


def _canonical_numpy(lab):
    # renumber classes 0,1,2,... in order of their smallest arc
    n_states, n_arcs = lab.shape
    out = np.empty_like(lab)
    counts = np.zeros(n_states, dtype=np.int32)
    first = lab == np.arange(n_arcs)[None, :]
    ids = np.cumsum(first, axis=1) - 1
    counts[:] = first.sum(axis=1)
    rows = np.arange(n_states)[:, None]
    out[:] = ids[rows, lab]
    return out.astype(np.int16), counts


if HAVE_NUMBA:
    @njit(cache=True)
    def _resolve_jit(slots, n_arcs):
        n = slots.shape[0]
        n_states = 1 << n
        out = np.empty((n_states, n_arcs), dtype=np.int16)
        counts = np.empty(n_states, dtype=np.int32)
        parent = np.empty(n_arcs, dtype=np.int32)
        for s in range(n_states):
            for a in range(n_arcs):
                parent[a] = a
            for k in range(n):
                if (s >> k) & 1:
                    pairs = ((slots[k, 0], slots[k, 3]), (slots[k, 1], slots[k, 2]))
                else:
                    pairs = ((slots[k, 0], slots[k, 1]), (slots[k, 2], slots[k, 3]))
                for x, y in pairs:
                    while parent[x] != x:
                        parent[x] = parent[parent[x]]
                        x = parent[x]
                    while parent[y] != y:
                        parent[y] = parent[parent[y]]
                        y = parent[y]
                    if x < y:
                        parent[y] = x
                    elif y < x:
                        parent[x] = y
            c = 0
            for a in range(n_arcs):
                r = a
                while parent[r] != r:
                    r = parent[r]
                if r == a:
                    out[s, a] = c
                    c += 1
                else:
                    out[s, a] = out[s, r]
            counts[s] = c
        return out, counts


def resolve_all(slots, n_arcs):
    """Return ``(labels, counts)`` for all 2**n resolutions.

    ``labels[s, a]`` is the circle index of arc ``a`` in state ``s``; circles
    are numbered by their smallest arc.  ``counts[s]`` is the circle count.
    """
    slots = np.ascontiguousarray(slots, dtype=np.int64).reshape(-1, 4)
    if slots.shape[0] == 0:
        return np.zeros((1, n_arcs), dtype=np.int16), np.ones(1, dtype=np.int32)
    if HAVE_NUMBA:
        return _resolve_jit(slots, n_arcs)
    return _resolve_numpy(slots, n_arcs)


def resolve_all_numpy(slots, n_arcs):
    slots = np.ascontiguousarray(slots, dtype=np.int64).reshape(-1, 4)
    if slots.shape[0] == 0:
        return np.zeros((1, n_arcs), dtype=np.int16), np.ones(1, dtype=np.int32)
    return _resolve_numpy(slots, n_arcs)
