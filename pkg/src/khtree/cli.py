"""Command-line front end: ``compute <command> [options]``."""
from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import corpus
from .cube import VARIANTS, build_khovanov_complex, build_lee_complex
from .diagram import LinkDiagram, checkerboard_and_tait
from .errors import KhError
from .homology import (filtered_ranks, homology_of, jones_khovanov, rational_homology_ranks)
from .trees import (activity_word, build_twist_tree, critical_smoothing,
                    enumerate_spanning_trees, matrix_tree_count, partial_smoothing)

ALL_VARIANTS = VARIANTS + ("lee",)
SWEEP_CHECKS = ("homology", "euler", "torsion", "s", "orientation")


class VerificationFailed(Exception):
    def __init__(self, report):
        super().__init__("verification mismatch")
        self.report = report


# -- input ----------------------------------------------------------------------

def _diagram_from_obj(obj):
    from .dt import dt_to_pd, parse_dt
    if isinstance(obj, dict):
        if "pd" in obj:
            return LinkDiagram([tuple(x) for x in obj["pd"]], dotted_arc=obj.get("dotted_arc")), obj
        if "dt" in obj:
            return LinkDiagram(dt_to_pd(parse_dt(obj["dt"]))), obj
        raise KhError("input object needs a 'pd' or 'dt' field")
    return LinkDiagram([tuple(x) for x in obj]), {}


def load_input(args):
    """``(diagram, entry)``; ``entry`` carries optional corpus metadata."""
    from .dt import dt_to_pd, parse_dt
    if args.pd is not None:
        return _diagram_from_obj(json.loads(args.pd))
    if getattr(args, "dt", None) is not None:
        return LinkDiagram(dt_to_pd(parse_dt(args.dt))), {}
    if args.knot is None:
        raise KhError("give --knot, --pd or --dt")
    path = Path(args.knot)
    if path.is_file():
        text = path.read_text()
        try:
            return _diagram_from_obj(json.loads(text))
        except json.JSONDecodeError:
            return LinkDiagram(dt_to_pd(parse_dt(text))), {}
    try:
        entry = corpus.find_entry(args.knot, args.corpus)
    except KeyError as exc:
        raise KhError(str(exc)) from None
    return corpus.diagram_of(entry), entry


def edge_order(args, n):
    text = args.edge_order
    if text is None:
        return None
    if text == "random":
        perm = list(range(n))
        random.Random(args.seed).shuffle(perm)
        return tuple(perm)
    try:
        perm = [int(x) - 1 for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise KhError(f"bad edge order {text!r}") from None
    if sorted(perm) != list(range(n)):
        raise KhError(f"edge order must be a permutation of 1..{n}")
    return tuple(perm)


def tait_graph(args):
    d, entry = load_input(args)
    order = edge_order(args, d.n)
    g = checkerboard_and_tait(d, order, getattr(args, "flip", False))
    return g, entry


def tree_names(g, entry, trees):
    from .stc import names_from_words
    words = entry.get("tree_words")
    if words:
        try:
            return names_from_words(g, trees, words)
        except (KeyError, ValueError):
            pass
    return [f"T{k + 1}" for k in range(len(trees))]


def build_st(g, entry, variant):
    from .stc import build_st_complex
    trees = enumerate_spanning_trees(g)
    return build_st_complex(g, variant, tree_names=tree_names(g, entry, trees))


# -- commands ---------------------------------------------------------------------

def cmd_tait(args):
    g, _ = tait_graph(args)
    d = g.diagram
    out = g.to_json()
    out["flipped"] = g.flipped
    out["crossings"] = [{"id": x.id + 1, "arcs": list(x.arcs), "sign": x.sign} for x in d.crossings]
    out["n_plus"], out["n_minus"] = d.n_plus, d.n_minus
    out["connected"] = g.is_connected()
    return out


def trees_report(g, entry):
    trees = enumerate_spanning_trees(g)
    names = tree_names(g, entry, trees)
    rows = []
    for k, t in enumerate(trees):
        gt = build_twist_tree(g, t)
        rows.append({
            "name": names[k],
            "edges": [e + 1 for e in t.edges],
            "word": str(activity_word(g, t)),
            "partial_smoothing": "".join(partial_smoothing(g, t)),
            "critical_smoothing": "".join(critical_smoothing(g, t)),
            "matching_word": gt.matching_word(g).pretty(),
        })
    return {"count": len(trees), "matrix_tree_count": matrix_tree_count(g),
            "order": [e + 1 for e in g.order], "trees": rows}


def cmd_trees(args):
    g, entry = tait_graph(args)
    return trees_report(g, entry)


def cmd_stcomplex(args):
    g, entry = tait_graph(args)
    st = build_st(g, entry, args.variant)
    out = st.to_json()
    out["lines"] = st.incidence_lines()
    if args.dump_matching:
        cx = st.cube
        out["matching"] = [[cx.name(u), cx.name(d)] for u, d in st.km.matching.pairs()]
        out["critical"] = {cx.name(c): st.tree_names[t] + s
                           for c, (t, s) in sorted(st.km.critical.items())}
    if args.dump_trees:
        out["tree_table"] = trees_report(g, entry)["trees"]
    if args.export:
        from .chain import write_matrix_market
        out["exported"] = [str(p) for p in write_matrix_market(st, args.export)]
    return out


def _homology(cx):
    if cx.filtered:
        return {"ranks": {str(i): r for i, r in rational_homology_ranks(cx).items()},
                "filtered": {str(i): {str(p): v for p, v in lv.items()}
                             for i, lv in filtered_ranks(cx).items()}}
    return homology_of(cx)


def _cube(g, variant):
    if variant == "lee":
        return build_lee_complex(g)
    return build_khovanov_complex(g, variant)


def cmd_homology(args):
    g, entry = tait_graph(args)
    method = "cube" if args.oracle else args.method
    res = {}
    if method in ("st", "both"):
        res["st"] = _homology(build_st(g, entry, args.variant))
    if method in ("cube", "both"):
        res["cube"] = _homology(_cube(g, args.variant))
    out = {"variant": args.variant}
    tables = args.format == "table"
    for k, h in res.items():
        if hasattr(h, "to_json"):
            if not tables:
                out[k] = h.to_json()
        else:
            out[k] = h
    if tables:
        out["_tables"] = {k: h.table() for k, h in res.items() if hasattr(h, "table")}
    if method == "both":
        out["agree"] = res["st"] == res["cube"]
        if not out["agree"]:
            raise VerificationFailed(out)
    return out


def cmd_s_invariant(args):
    from .sinv import s_invariant, s_invariant_oracle
    g, _ = tait_graph(args)
    if args.oracle:
        return {"oracle_s": s_invariant_oracle(g)}
    rep = s_invariant(g, oracle=args.method != "st")
    out = rep.to_json()
    out = {k: (str(v) if not isinstance(v, (int, bool, type(None))) else v) for k, v in out.items()}
    if rep.oracle_s is not None and rep.oracle_s != rep.s:
        raise VerificationFailed(out)
    return out


def cmd_verify(args):
    g, entry = tait_graph(args)
    variants = ALL_VARIANTS if args.variant == "all" else (args.variant,)
    out = {}
    for v in variants:
        st = build_st(g, entry, v)
        if v == "lee":
            ok = (rational_homology_ranks(st) == rational_homology_ranks(st.cube)
                  and filtered_ranks(st) == filtered_ranks(st.cube))
        else:
            ok = homology_of(st) == homology_of(st.cube)
        out[v] = "st == cube: " + ("OK" if ok else "MISMATCH")
    if any(not v.endswith("OK") for v in out.values()):
        raise VerificationFailed(out)
    return out


def cmd_euler(args):
    g, _ = tait_graph(args)
    h = homology_of(build_khovanov_complex(g, "unreduced"))
    e, jn = h.euler(), jones_khovanov(g.diagram)
    out = {"euler": {str(k): v for k, v in e.items()},
           "jones": {str(k): v for k, v in jn.items()}, "agree": e == jn}
    if not out["agree"]:
        raise VerificationFailed(out)
    return out


def sweep_entry(entry, checks, corpus_path=None):
    """Run the requested checks on one corpus entry; values are True/False/None/str."""
    from .sinv import build_orientation_tree, distinguished_cycle, s_invariant, verify_cycle
    from .stc import build_st_complex, torsion_witness_alternating
    from .cube import oriented_state
    d = corpus.diagram_of(entry)
    g = checkerboard_and_tait(d)
    exp = entry.get("expected", {})
    knot = len(d.components) == 1
    res = {}
    try:
        if "homology" in checks:
            ok = True
            for v in ALL_VARIANTS:
                st = build_st_complex(g, v)
                if v == "lee":
                    ok &= filtered_ranks(st) == filtered_ranks(st.cube)
                else:
                    ok &= homology_of(st) == homology_of(st.cube)
            res["homology"] = ok
        if "euler" in checks:
            e = homology_of(build_khovanov_complex(g, "unreduced")).euler()
            jn = jones_khovanov(d)
            want = {int(k): v for k, v in exp.get("jones", {}).items()} or jn
            res["euler"] = e == jn == want
        if "torsion" in checks:
            if entry.get("alternating") and d.n >= 3:
                c = torsion_witness_alternating(g)
                res["torsion"] = "Z2" if c.ok else "certificate failed"
            else:
                res["torsion"] = None
        if "s" in checks:
            if knot:
                r = s_invariant(g)
                res["s"] = int(r.s) if r.s == r.oracle_s and r.bound_holds else "mismatch"
            else:
                res["s"] = None
        if "orientation" in checks:
            if knot:
                ot = build_orientation_tree(g)
                phi, st = distinguished_cycle(ot)
                cx = st.cube
                closed = not cx.apply_idx({cx.index[k]: v for k, v in phi.items()})
                on_state = all(k[0] == oriented_state(d) for k in phi)
                res["orientation"] = verify_cycle(ot)[0] and closed and on_state
            else:
                res["orientation"] = None
    except KhError as exc:
        res["error"] = f"{type(exc).__name__}: {exc}"
    return entry["name"], res


def _failed(res):
    return any(v is False or (isinstance(v, str) and v not in ("Z2",)) for v in res.values())


def cmd_sweep(args):
    checks = SWEEP_CHECKS if args.check in (None, "all") else tuple(args.check.split(","))
    bad = [c for c in checks if c not in SWEEP_CHECKS]
    if bad:
        raise KhError(f"unknown checks {bad}")
    entries = [e for e in corpus.load_corpus(args.corpus)
               if args.max_crossings is None or e["crossings"] <= args.max_crossings]
    results = {}
    if args.jobs > 1 and not args.fail_fast:
        with ProcessPoolExecutor(args.jobs) as pool:
            for name, res in pool.map(sweep_entry, entries, [checks] * len(entries)):
                results[name] = res
    else:
        for e in entries:
            name, res = sweep_entry(e, checks)
            results[name] = res
            if args.fail_fast and _failed(res):
                break
    failed = sorted(n for n, r in results.items() if _failed(r))
    out = {"checks": list(checks), "entries": len(results), "failed": failed, "results": results}
    if failed:
        raise VerificationFailed(out)
    return out


COMMANDS = {
    "tait": cmd_tait, "trees": cmd_trees, "stcomplex": cmd_stcomplex, "homology": cmd_homology,
    "s-invariant": cmd_s_invariant, "verify": cmd_verify, "euler": cmd_euler, "sweep": cmd_sweep,
}


# -- output -----------------------------------------------------------------------

def _table(obj, indent=""):
    lines = []
    if isinstance(obj, dict):
        tables = obj.pop("_tables", None)
        width = max((len(str(k)) for k in obj), default=0)
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{indent}{k}:")
                lines.extend(_table(v, indent + "  "))
            else:
                lines.append(f"{indent}{str(k).ljust(width)}  {v}")
        if tables:
            for k, t in tables.items():
                lines.append(f"{indent}{k} homology:")
                lines.extend(indent + "  " + row for row in t.splitlines())
    elif isinstance(obj, list):
        if obj and all(isinstance(x, dict) for x in obj):
            cols = list(dict.fromkeys(c for x in obj for c in x))
            cells = [[str(x.get(c, "")) for c in cols] for x in obj]
            widths = [max(len(c), *(len(r[n]) for r in cells)) for n, c in enumerate(cols)]
            lines.append(indent + "  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip())
            for r in cells:
                lines.append(indent + "  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())
        else:
            lines.extend(f"{indent}{x}" for x in obj)
    else:
        lines.append(f"{indent}{obj}")
    return lines


def emit(obj, fmt, stream=None):
    stream = stream or sys.stdout
    if fmt == "table":
        stream.write("\n".join(_table(dict(obj) if isinstance(obj, dict) else obj)) + "\n")
    else:
        if isinstance(obj, dict):
            obj = {k: v for k, v in obj.items() if k != "_tables"}
        stream.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")


def build_parser():
    p = argparse.ArgumentParser(prog="compute", description=__doc__)
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--knot", help="corpus name or path to a PD/DT file")
    p.add_argument("--pd", help="inline PD code as JSON")
    p.add_argument("--dt", help="inline DT code, e.g. '4 6 2'")
    p.add_argument("--corpus", help="alternative corpus file")
    p.add_argument("--variant", default="unreduced",
                   help="unreduced, reduced_plus, reduced_minus, lee (verify also takes 'all')")
    p.add_argument("--method", choices=("st", "cube", "both"), default="st")
    p.add_argument("--edge-order", help="comma separated edge ids, smallest first, or 'random'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--flip", action="store_true", help="use the dual Tait graph")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.add_argument("--oracle", action="store_true", help="compute on the cube complex")
    p.add_argument("--dump-trees", action="store_true")
    p.add_argument("--dump-matching", action="store_true")
    p.add_argument("--export", metavar="DIR", help="write differential blocks as .mtx files")
    p.add_argument("--check", help="sweep checks, comma separated: " + ",".join(SWEEP_CHECKS))
    p.add_argument("--max-crossings", type=int)
    p.add_argument("--fail-fast", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "verify" and args.variant == "unreduced" and "--variant" not in (argv or sys.argv):
        args.variant = "all"
    if args.variant not in ALL_VARIANTS + ("all",):
        print(f"error: unknown variant {args.variant!r}", file=sys.stderr)
        return 1
    if args.variant == "all" and args.command != "verify":
        print("error: --variant all is only meaningful for verify", file=sys.stderr)
        return 1
    try:
        out = COMMANDS[args.command](args)
    except VerificationFailed as exc:
        emit(exc.report, args.format)
        print("error: verification mismatch", file=sys.stderr)
        return 2
    except (KhError, ValueError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.command == "verify" and args.format == "table":
        sys.stdout.write("".join(f"{v}: {r}\n" for v, r in out.items()))
    else:
        emit(out, args.format)
    return 0


if __name__ == "__main__":
    sys.exit(main())
