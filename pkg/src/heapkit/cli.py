"""Command line front end: ``heapkit <command> ...``.

Exit codes: 0 success, 1 a verification failed (report JSON on stdout),
2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys

from .cartan import Orientation, affine_cartan
from .catalog import FAMILIES, build, catalog_table, fold_heap, synthesize_full_heaps
from .crystal import (
    build_crystal_graph,
    verify_crystal_axioms,
    verify_cyclicity_sample,
    verify_quantum_relations,
    verify_tl_annihilation,
    verify_weyl,
)
from .errors import HeapkitError
from .heap import verify_axioms
from .report import Report
from .rep import (
    chevalley_table,
    find_root_heaps,
    finite_roots,
    verify_affine_layer,
    verify_defining_relations,
    verify_maximal_element_cases,
    verify_root_representability,
)

# diagrams known to carry no full heap
NO_FULL_HEAP = {"F4affine": "F4^(1)", "E8affine": "E8^(1)", "E6twisted": "E6^(2)"}
SYNTH_DIAGRAMS = {"E6": ("E6", None), "E7": ("E7", None), "E8": ("E8", None), "F4": ("F4", None),
                  "E6tw": ("E6tw", None), "A": ("A", "rank"), "C": ("C", "rank"), "D": ("D", "rank"),
                  "B": ("B", "rank")}
SUITES = ("axioms", "relations", "chevalley", "roots", "affine", "crystal", "weyl", "quantum")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- helpers


def _heap(args):
    fam = args.family
    if fam is None:
        raise UsageError("--family is required")
    if fam in NO_FULL_HEAP:
        raise UsageError(f"no full heap exists over {NO_FULL_HEAP[fam]}; "
                         f"`heapkit catalog synth --family {fam[:2]}` reproduces the empty search")
    if fam not in FAMILIES:
        raise UsageError(f"unknown family {fam!r}; choose from {', '.join(FAMILIES)}")
    try:
        return build(fam, args.rank, args.variant)
    except HeapkitError as e:
        raise UsageError(str(e)) from e


def _orientation(heap, text):
    """'0>1,2>1' lists arrows; unlisted edges keep the default direction."""
    if not text:
        return None
    o = Orientation.default(heap.cartan)
    for part in text.split(","):
        try:
            i, j = (int(x) for x in part.split(">"))
        except ValueError:
            raise UsageError(f"bad arrow {part!r}, expected i>j") from None
        if (i, j) in o.arrows:
            continue
        if (j, i) not in o.arrows:
            raise UsageError(f"{i} and {j} are not joined in {heap.cartan.name}")
        o = o.flip(j, i)
    return o


def _vector(text, n):
    try:
        v = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"bad vector {text!r}") from None
    if len(v) != n:
        raise UsageError(f"vector {text!r} needs {n} entries")
    return v


def _emit(args, text):
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(rows, cols):
    widths = [max(len(str(c)), *(len(str(r[c])) for r in rows)) for c in cols]
    lines = [[str(c) for c in cols]] + [[str(r[c]) for c in cols] for r in rows]
    return "\n".join("  ".join(x.ljust(w) for x, w in zip(line, widths)).rstrip() for line in lines)


# ---------------------------------------------------------------- verification


def run_suite(name, heap, orientation=None, window=1, seed=0) -> Report:
    cuts = heap.ideals_in_heights(-window, window)
    if name == "axioms":
        return verify_axioms(heap)
    if name == "relations":
        rep = verify_defining_relations(heap, cuts, orientation)
        return rep.merge(verify_maximal_element_cases(heap, cuts))
    if name == "chevalley":
        return chevalley_table(heap, orientation).report
    if name == "roots":
        if not heap.cartan.simply_laced or heap.fold is not None:
            rep = Report("roots")
            rep.meta["skipped"] = "root heaps are checked on simply laced unfolded heaps"
            return rep
        return verify_root_representability(heap, orientation=orientation)
    if name == "affine":
        return verify_affine_layer(heap, orientation)
    if name == "crystal":
        rep = verify_crystal_axioms(build_crystal_graph(heap, range(-window, window + 1)))
        rep.suite = "crystal"
        return rep
    if name == "weyl":
        rep = verify_weyl(heap, cuts)
        rep.merge(verify_tl_annihilation(heap, cuts))
        rep.merge(verify_cyclicity_sample(heap, pairs=100, seed=seed))
        rep.suite = "weyl"
        return rep
    if name == "quantum":
        return verify_quantum_relations(heap)
    raise UsageError(f"unknown suite {name!r}")


def cmd_verify(args):
    heap = _heap(args)
    o = _orientation(heap, args.orientation)
    names = SUITES if args.suite == "all" else (args.suite,)
    reports = []
    for s in names:
        rep = run_suite(s, heap, o, args.window, args.seed)
        rep.suite = s
        reports.append(rep)
    ok = all(r.passed for r in reports)
    if args.format == "json" or not ok:
        payload = [_wrap(r) for r in reports]
        _emit(args, json.dumps(payload[0] if len(payload) == 1 else payload, sort_keys=True, indent=1))
    else:
        _emit(args, "\n".join(f"{r.suite}: PASS ({r.checks} checks)" for r in reports))
    return 0 if ok else 1


def _wrap(rep):
    d = {"suite": rep.suite, "passed": rep.passed, "checks": rep.checks, "failures": rep.failures[:20]}
    if rep.meta:
        d["meta"] = rep.to_dict().get("meta")
    return d


# ---------------------------------------------------------------- other commands


def cmd_catalog(args):
    if args.action == "list":
        rows = catalog_table()
        if args.format == "json":
            return _emit(args, json.dumps(rows, indent=1))
        for r in rows:
            r["rank"] = "-" if r["rank"] is None else r["rank"]
            r["period"] = ",".join(map(str, r["period"]))
        return _emit(args, _table(rows, ["family", "rank", "variant", "diagram", "motif", "period",
                                         "height_zero_ideals"]))
    if args.action == "show":
        heap = _heap(args)
        if args.format == "json":
            return _emit(args, heap.to_json())
        lines = [f"name: {heap.name}", f"diagram: {heap.cartan.name}",
                 f"period: {list(heap.period)}", f"motif size: {len(heap.motif_elements)}",
                 f"base ideal: {list(heap.base_ideal)}",
                 f"height-zero ideals: {len(heap.height_zero_ideals)}"]
        if heap.fold is not None:
            lines.append(f"folded from {heap.fold.cover.name} by {list(heap.fold.mu)}")
        return _emit(args, "\n".join(lines))
    if args.action == "synth":
        if args.family not in SYNTH_DIAGRAMS:
            raise UsageError(f"synthesis runs over {', '.join(SYNTH_DIAGRAMS)}")
        fam, needs = SYNTH_DIAGRAMS[args.family]
        if needs and args.rank is None:
            raise UsageError("--rank is required for this diagram")
        cartan = affine_cartan(fam, args.rank if needs else None)
        res = synthesize_full_heaps(cartan)
        out = {"diagram": cartan.name, "classes": len(res.heaps), "cycles": res.cycles,
               "periods": [list(h.period) for h in res.heaps]}
        if args.format == "json":
            return _emit(args, json.dumps(out, indent=1))
        return _emit(args, f"{cartan.name}: {len(res.heaps)} full heap(s) up to isomorphism")
    raise UsageError(args.action)


def cmd_ideals(args):
    heap = _heap(args)
    lo, hi = args.heights
    cuts = sorted(heap.ideals_in_heights(lo, hi))
    if args.action == "count":
        return _emit(args, str(len(cuts)))
    if args.format == "json":
        return _emit(args, json.dumps([list(c) for c in cuts]))
    return _emit(args, "\n".join(" ".join(map(str, c)) for c in cuts))


def cmd_roots(args):
    heap = _heap(args)
    if args.action == "list":
        roots = finite_roots(heap.cartan)
        if args.format == "json":
            return _emit(args, json.dumps([list(r) for r in roots]))
        return _emit(args, "\n".join(" ".join(map(str, r)) for r in roots))
    if args.root is None:
        raise UsageError("roots heaps needs --root")
    alpha = _vector(args.root, heap.n)
    found = find_root_heaps(alpha, heap.materialize(args.window))
    if args.format == "json":
        return _emit(args, json.dumps([[list(x) for x in L] for L in found]))
    return _emit(args, "\n".join(" ".join(f"{p}@{z}" for p, z in L) for L in found) or "none")


def _diagram_name(cartan):
    """Name of a known affine matrix equal to cartan, else its own name."""
    l = cartan.n - 1
    candidates = [(f, l) for f in ("A", "B", "C", "D", "A2", "D2")] + [(f, None) for f in ("E6", "E7", "E8", "F4", "E6tw")]
    for fam, rank in candidates:
        try:
            known = affine_cartan(fam, rank)
        except HeapkitError:
            continue
        if known.a == cartan.a:
            return known.name
    return cartan.name


def cmd_fold(args):
    heap = _heap(args)
    if args.mu is None:
        raise UsageError("fold needs --mu")
    mu = _vector(args.mu, heap.n)
    try:
        folded = fold_heap(heap, mu)
    except HeapkitError as e:
        raise UsageError(str(e)) from e
    rep = verify_axioms(folded)
    if args.format == "json":
        _emit(args, folded.to_json())
    else:
        _emit(args, f"{folded.name}: diagram {_diagram_name(folded.cartan)}, period {list(folded.period)}, "
                    f"axioms {'PASS' if rep.passed else 'FAIL'}")
    return 0 if rep.passed else 1


def cmd_render(args):
    heap = _heap(args)
    fmt = args.format
    if args.what == "heap":
        return _emit(args, heap.materialize(args.window).render(fmt or "text"))
    if args.what == "crystal":
        lo, hi = args.heights
        G = build_crystal_graph(heap, range(lo, hi + 1), quotient=args.quotient)
        return _emit(args, G.render(fmt or "dot"))
    if args.what == "chevalley":
        if fmt not in (None, "csv"):
            raise UsageError("chevalley tables render as csv")
        return _emit(args, chevalley_table(heap, _orientation(heap, args.orientation)).to_csv())
    raise UsageError(args.what)


# ---------------------------------------------------------------- parser


def _selectors(p):
    p.add_argument("--family")
    p.add_argument("--rank", type=int)
    p.add_argument("--variant", default="")
    p.add_argument("--out")


def build_parser():
    parser = argparse.ArgumentParser(prog="heapkit", description="Full heaps over affine Dynkin diagrams.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list, show or synthesize heaps")
    p.add_argument("action", choices=["list", "show", "synth"])
    _selectors(p)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("verify", help="run verification suites")
    _selectors(p)
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--window", type=int, default=1, help="heights -k..k are sampled")
    p.add_argument("--orientation")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("ideals", help="count or list proper ideals by height")
    p.add_argument("action", choices=["count", "list"])
    _selectors(p)
    p.add_argument("--heights", type=int, nargs=2, default=(0, 0), metavar=("LO", "HI"))
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_ideals)

    p = sub.add_parser("roots", help="positive roots and their root heaps")
    p.add_argument("action", choices=["list", "heaps"])
    _selectors(p)
    p.add_argument("--root", help="comma separated coefficients, vertex 0 first")
    p.add_argument("--window", type=int, default=1)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("fold", help="fold a heap by a diagram involution")
    _selectors(p)
    p.add_argument("--mu", help="image of each vertex, comma separated")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_fold)

    p = sub.add_parser("render", help="render a heap window, a crystal graph or a Chevalley table")
    p.add_argument("what", choices=["heap", "crystal", "chevalley"])
    _selectors(p)
    p.add_argument("--window", type=int, default=1)
    p.add_argument("--heights", type=int, nargs=2, default=(0, 0), metavar=("LO", "HI"))
    p.add_argument("--quotient", action="store_true")
    p.add_argument("--orientation")
    p.add_argument("--format", choices=["text", "json", "dot", "csv"])
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if getattr(args, "window", 1) < 1:
        print("heapkit: --window must be at least 1", file=sys.stderr)
        return 2
    try:
        code = args.func(args)
    except UsageError as e:
        print(f"heapkit: {e}", file=sys.stderr)
        return 2
    except HeapkitError as e:
        print(f"heapkit: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    return code or 0


if __name__ == "__main__":
    sys.exit(main())
