"""Resolution-cube kernel: numba against the numpy fallback.

Run ``python3 benchmarks/bench_kernels.py``.  Both paths are timed in the
same process; the arrays they return are compared before timing.
"""
import math
import timeit

import numpy as np

from khtree import _kernels
from khtree.corpus import get_knot
from khtree.diagram import diagram_from_tait, rotation_from_coordinates


def cycle_diagram(n):
    coords = [(math.cos(2 * math.pi * k / n), math.sin(2 * math.pi * k / n)) for k in range(n)]
    edges = [(k, (k + 1) % n, 1) for k in range(n)]
    return diagram_from_tait(n, edges, rotation_from_coordinates(coords, edges))


def cases():
    yield "trefoil", get_knot("trefoil")
    yield "7_4", get_knot("7_4")
    yield "8_20", get_knot("8_20")
    for n in (10, 12, 14):
        yield f"C{n} torus link", cycle_diagram(n)


def main(repeat=3):
    if not _kernels.HAVE_NUMBA:
        print("numba unavailable or disabled; only the numpy path is timed")
    print(f"{'diagram':<16}{'states':>8}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    for name, d in cases():
        slots = np.array(d.slots_array(), dtype=np.int64)
        n_arcs = len(d.arcs)
        ref = _kernels.resolve_all_numpy(slots, n_arcs)
        t_np = min(timeit.repeat(lambda: _kernels.resolve_all_numpy(slots, n_arcs),
                                 number=1, repeat=repeat))
        if _kernels.HAVE_NUMBA:
            got = _kernels.resolve_all(slots, n_arcs)  # compiles on first call
            assert np.array_equal(ref[0], got[0]) and np.array_equal(ref[1], got[1])
            t_nb = min(timeit.repeat(lambda: _kernels.resolve_all(slots, n_arcs),
                                     number=1, repeat=repeat))
            print(f"{name:<16}{1 << d.n:>8}{t_np * 1e3:>12.2f}{t_nb * 1e3:>12.2f}"
                  f"{t_np / t_nb:>10.1f}")
        else:
            print(f"{name:<16}{1 << d.n:>8}{t_np * 1e3:>12.2f}{'-':>12}{'-':>10}")


if __name__ == "__main__":
    main()
