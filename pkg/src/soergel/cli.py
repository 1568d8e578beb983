"""Command line interface.

Every command prints a human-readable summary, or JSON with ``--json``.
Realizations come from ``--type`` (geometric realization of a named type) or
``--config`` (a JSON or TOML file with colors, coxeter and cartan keys).
"""
from __future__ import annotations

import argparse
import functools
import json
import os
import sys
import time
from pathlib import Path

from .errors import (RadiusExceeded, RelationFailed, SoergelError, VertexUnavailable)

EXIT_OK, EXIT_ERROR, EXIT_RELATION, EXIT_RESOURCE = 0, 1, 2, 3
DEFAULT_TYPE = "A2"


# --------------------------------------------------------------------------
# Helpers
# --------------------------------------------------------------------------

def _realization(args):
    from .ring import realization_from_config, realization_of_type

    if getattr(args, "config", None):
        return realization_from_config(args.config)
    return realization_of_type(args.type or DEFAULT_TYPE)


def _system(real, args):
    from .bimod import default_system
    from .coxeter import CoxeterSystem

    if getattr(args, "radius", None) is not None:
        W = CoxeterSystem(real, radius=args.radius)
        real.__dict__["_system"] = W
        return W
    return default_system(real)


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True, default=str))
    else:
        print(text)


def _load_diagram(real, path):
    from .diagram import DiagramWord
    from .errors import BadDiagramFile

    try:
        data = json.loads(Path(path).read_text())
        return DiagramWord.from_json(data, real)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise BadDiagramFile(f"{path}: {exc}") from exc


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------

def cmd_check_realization(args) -> int:
    from .coxeter import CoxeterSystem

    real = _realization(args)
    W = CoxeterSystem(real, radius=args.radius)
    qn = {}
    for s in range(real.rank):
        for t in range(s + 1, real.rank):
            m = real.coxeter[s][t]
            if m:
                qn[f"{real.colors[s]}{real.colors[t]}"] = {
                    "m": m, "[m]_x": str(real.qnum(s, t, m, "x")), "[m]_y": str(real.qnum(s, t, m, "y")),
                    "[m-1]_x": str(real.qnum(s, t, m - 1, "x")), "[m-1]_y": str(real.qnum(s, t, m - 1, "y"))}
    payload = {"realization": real.to_json(), "balanced": real.balanced, "technical": True,
               "braids": True, "group_size": len(W), "complete": W.complete, "quantum_numbers": qn}
    lines = [f"realization {real!r}", "  technical condition: ok", "  braid relations on h*: ok",
             f"  balanced: {real.balanced}", f"  elements generated: {len(W)} (complete: {W.complete})"]
    for k, v in qn.items():
        lines.append(f"  {k}: m={v['m']}  [m]_x={v['[m]_x']}  [m]_y={v['[m]_y']}  "
                     f"[m-1]_x={v['[m-1]_x']}  [m-1]_y={v['[m-1]_y']}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_hecke(args) -> int:
    from .hecke import (deodhar_expand, graded_hom_rank, kl_element, kl_polynomial,
                        product_of_kl_gens)

    real = _realization(args)
    W = _system(real, args)
    if args.op == "kl":
        w = W.element(W.parse_word(args.w))
        if args.x is not None:
            x = W.element(W.parse_word(args.x))
            p = kl_polynomial(W, x, w)
            _emit(args, {"x": W.word_names(x.word), "w": W.word_names(w.word), "h": p.to_json()},
                  f"h_{{{W.word_str(x.word) or '1'},{W.word_str(w.word) or '1'}}} = {p}")
        else:
            h = kl_element(W, w)
            _emit(args, {"w": W.word_names(w.word), "kl_element": h.to_json()},
                  f"KL basis element of {W.word_str(w.word) or '1'}:\n  {h}")
    elif args.op == "deodhar":
        word = W.parse_word(args.word)
        a, b = deodhar_expand(W, word), product_of_kl_gens(W, word)
        _emit(args, {"word": W.word_names(word), "expansion": a.to_json(), "agrees": a == b},
              f"{a}\n  agrees with the product of KL generators: {a == b}")
    elif args.op == "pairing":
        x, y = W.parse_word(args.x), W.parse_word(args.y)
        p = graded_hom_rank(W, x, y)
        _emit(args, {"x": W.word_names(x), "y": W.word_names(y), "pairing": p.to_json()},
              f"graded rank of Hom(B_{W.word_str(x)}, B_{W.word_str(y)}) = {p}")
    return EXIT_OK


def cmd_ll(args) -> int:
    from .diagram import ChoiceData, light_leaf
    from .localize import ll_coefficients

    real = _realization(args)
    W = _system(real, args)
    choices = ChoiceData(W)
    x = W.parse_word(args.word)
    if args.op == "enumerate":
        subs = W.all_subexpressions(x)
        if args.w is not None:
            target = W.element(W.parse_word(args.w)).index
            subs = [e for e in subs if e.endpoint == target]
        rows = []
        for e in subs:
            d, rex = light_leaf(x, e, choices)
            rows.append({"bits": str(e), "decorations": list(e.decorations), "defect": e.defect,
                         "endpoint": W.word_names(W.words[e.endpoint]), "target_rex": W.word_names(rex),
                         "degree": d.degree(), "diagram": d.to_json()})
        text = "\n".join(f"{r['bits']}  {' '.join(r['decorations'])}  defect {r['defect']:+d}  "
                         f"-> {' '.join(r['endpoint']) or '1'}  ({len(r['diagram']['slices'])} slices)"
                         for r in rows)
        _emit(args, {"word": W.word_names(x), "light_leaves": rows}, text)
    else:
        w = W.element(W.parse_word(args.w)).index
        C = ll_coefficients(x, w, choices)
        n = len(x)
        bitstr = lambda mask: "".join(str(mask >> i & 1) for i in range(n))
        entries = [{"e": bitstr(em), "f": bitstr(fm), "value": str(v)}
                   for (em, fm), v in sorted(C.coeffs.items())]
        bad = C.violations(W)
        text = [f"p^e_f for {W.word_str(x)} expressing {W.word_str(W.words[w]) or '1'}"]
        text += [f"  e={r['e']} f={r['f']}: {r['value']}" for r in entries]
        text.append(f"  triangularity violations: {len(bad)}")
        _emit(args, {"entries": entries, "violations": [str(v) for v in bad]}, "\n".join(text))
    return EXIT_OK


def cmd_eval(args) -> int:
    from .localize import eval_diagram, oracle_check

    real = _realization(args)
    _system(real, args)
    d = _load_diagram(real, args.diagram)
    M = eval_diagram(d, mode=args.mode)
    payload = {"diagram": d.to_json(), "degree": d.degree(), "matrix": M.to_json(), "nnz": M.nnz}
    text = [str(d), f"  degree {d.degree()}, {M.nnz} nonzero entries"]
    for (f, e), v in sorted(M.entries(), key=lambda t: (t[0][1], t[0][0])):
        text.append(f"  [{f:0{len(d.top)}b} <- {e:0{len(d.bottom)}b}] {v}")
    if args.oracle:
        ok, witness = oracle_check(d)
        payload["oracle_agrees"] = ok
        text.append(f"  tensor backend agrees: {ok} {witness}")
    _emit(args, payload, "\n".join(text))
    return EXIT_OK


@functools.lru_cache(maxsize=None)
def _worker_realization(config, type_, radius):
    from .bimod import default_system
    from .coxeter import CoxeterSystem
    from .ring import realization_from_config, realization_of_type

    real = realization_from_config(config) if config else realization_of_type(type_ or DEFAULT_TYPE)
    if radius is not None:
        real.__dict__["_system"] = CoxeterSystem(real, radius=radius)
    default_system(real)
    return real


def _run_unit(source: tuple, kind: str, colors: tuple, strict: bool) -> list:
    """One independent piece of a relation suite; returns plain check tuples."""
    from .jw import verify_dot2m
    from .relations import (one_color_relations, three_color_relations, two_color_relations,
                            vertex_available)
    from .report import Report

    real = _worker_realization(*source)
    rep = Report(kind)
    if kind == "one":
        one_color_relations(real, colors[0], rep)
    elif kind in ("two", "jw", "two+jw"):
        s, t = colors
        if not vertex_available(real, s, t):
            if strict:
                raise VertexUnavailable(f"no vertex for {real.colors[s]}{real.colors[t]}")
            rep.add(f"vertex[{real.colors[s]}{real.colors[t]}]", False, "vertex unavailable")
        elif kind == "jw":
            rep.extend(verify_dot2m(real, s, t))
        else:
            two_color_relations(real, s, t, rep, jw=kind == "two+jw")
    else:
        three_color_relations(real, colors, rep)
    return [(c.name, c.passed, c.witness, c.seconds) for c in rep.checks]


def _verify_units(real, suite: str, max_m) -> list:
    from itertools import combinations

    n = real.rank
    pairs = [(s, t) for s, t in combinations(range(n), 2)
             if real.coxeter[s][t] and not (max_m and real.coxeter[s][t] > max_m)]
    units = []
    if suite in ("one-color", "all"):
        units += [("one", (s,)) for s in range(n)]
    if suite in ("two-color", "jw", "all"):
        kind = {"two-color": "two", "jw": "jw", "all": "two+jw"}[suite]
        for s, t in pairs:
            units += [(kind, (s, t)), (kind, (t, s))]
    if suite in ("three-color", "all"):
        ok = set(pairs)
        for J in combinations(range(n), 3):
            if suite == "three-color" or all(p in ok or real.coxeter[p[0]][p[1]] == 2
                                             for p in combinations(J, 2)):
                units.append(("three", J))
    return units


def cmd_verify(args) -> int:
    from .report import Check, Report

    if args.gram:
        return cmd_gram(args)
    suites = {"one-color", "two-color", "three-color", "jw", "all"}
    if args.suite not in suites:
        raise SystemExit(f"unknown suite {args.suite}")
    source = (args.config, args.type, args.radius)
    real = _worker_realization(*source)
    report = Report(f"verify {args.suite} on {args.config or args.type or DEFAULT_TYPE}")
    units = _verify_units(real, args.suite, args.max_m)
    strict = args.suite != "all"
    jobs = max(1, min(args.jobs or os.cpu_count() or 1, len(units) or 1))
    if jobs == 1:
        results = [_run_unit(source, k, c, strict) for k, c in units]
    else:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_run_unit, source, k, c, strict) for k, c in units]
            results = [f.result() for f in futures]
    for checks in results:
        report.checks += [Check(*c) for c in checks]
    payload = report.to_json()
    payload["jobs"] = jobs
    _emit(args, payload, report.render())
    return EXIT_OK if report.ok else EXIT_RELATION


def cmd_gram(args) -> int:
    from .diagram import ChoiceData
    from .localize import double_leaves_gram, gram_pattern

    real = _realization(args)
    W = _system(real, args)
    choices = ChoiceData(W)
    t0 = time.perf_counter()
    rep = double_leaves_gram(args.source, args.target, choices)
    payload = rep.to_json()
    payload["seconds"] = round(time.perf_counter() - t0, 3)
    text = (f"double leaves {W.word_str(rep.source)} -> {W.word_str(rep.target)}: {rep.count}\n"
            f"  degrees  {rep.degrees}\n  pairing  {rep.expected}\n"
            f"  triangular {rep.triangular}, invertible diagonal {rep.diagonal_invertible}\n"
            f"  {'OK' if rep.ok else 'FAILED'}")
    if getattr(args, "heatmap", None):
        from .plotting import plot_gram

        labels, grid = gram_pattern(args.source, args.target, choices)
        plot_gram(grid, args.heatmap, f"double leaves {W.word_str(rep.source)} -> {W.word_str(rep.target)}")
        payload["heatmap"] = str(args.heatmap)
    _emit(args, payload, text)
    return EXIT_OK if rep.ok else EXIT_RELATION


def cmd_jw(args) -> int:
    from .jw import jones_wenzl, matching_to_soergel
    from .ring import realization_from_config, realization_of_type

    if args.config:
        real = realization_from_config(args.config)
    elif args.type:
        real = realization_of_type(args.type)
    else:
        real = realization_of_type(f"I2({args.m})")
    names = [c.strip() for c in args.colors.split(",")]
    s, t = real.color_index(names[0]), real.color_index(names[1])
    m = real.coxeter[s][t]
    n = m - 1 if args.n is None else args.n
    out = {}
    lines = []
    for left, other in ((s, t), (t, s)):
        J = jones_wenzl(real, n, left, other)
        key = f"left={real.colors[left]}"
        terms = []
        lines.append(f"JW_{n} with leftmost region {real.colors[left]}:")
        for mt, c in sorted(J.terms.items(), key=lambda kv: kv[0].partner):
            d = matching_to_soergel(real, mt, left, other)
            terms.append({"matching": str(mt), "coefficient": str(c), "soergel": d.to_json()})
            lines.append(f"  {str(c):>14}  {mt}  ->  {', '.join(sl.describe(real) for sl in d.slices) or 'identity'}")
        out[key] = terms
    _emit(args, {"n": n, "m": m, "projectors": out}, "\n".join(lines))
    return EXIT_OK


def cmd_render(args) -> int:
    from .render import to_ascii, to_tikz

    real = _realization(args)
    d = _load_diagram(real, args.diagram)
    if args.format == "png":
        from .plotting import plot_diagram

        out = args.out or "diagram.png"
        plot_diagram(d, out, str(d))
        print(out)
        return EXIT_OK
    text = to_tikz(d) if args.format == "tikz" else to_ascii(d)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_bimod(args) -> int:
    from .bimod import localized_vertex, vertex_cache

    real = _realization(args)
    W = _system(real, args)
    names = [c.strip() for c in args.colors.split(",")]
    s, t = real.color_index(names[0]), real.color_index(names[1])
    t0 = time.perf_counter()
    V = vertex_cache(real).get(s, t)
    payload = V.to_json()
    payload["nullity"] = V.nullity
    payload["unknowns"] = V.num_unknowns
    payload["seconds"] = round(time.perf_counter() - t0, 3)
    L = localized_vertex(V, W)
    top = (1 << V.m) - 1
    payload["localized_top_entry"] = str(L.get(top, {}).get(top))
    text = [f"vertex {names[0]}{names[1]} (m={V.m}): {len(V.entries)} nonzero coefficients, "
            f"nullity {V.nullity}, {V.num_unknowns} unknowns, localized top entry {payload['localized_top_entry']}"]
    for e in payload["entries"][: args.limit]:
        text.append(f"  {''.join(map(str, e['target_label']))} <- {''.join(map(str, e['source_label']))}: "
                    f"{e['poly']}")
    _emit(args, payload, "\n".join(text))
    return EXIT_OK


def cmd_report(args) -> int:
    """Render figures for one type: a light leaf picture, a localized matrix
    support heatmap and a double-leaves pattern, plus a JSON summary."""
    from .diagram import ChoiceData, DiagramWord, Slice, alternating, light_leaf
    from .localize import double_leaves_gram, eval_diagram, gram_pattern
    from .plotting import plot_diagram, plot_gram, plot_support

    real = _realization(args)
    W = _system(real, args)
    choices = ChoiceData(W)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    x = W.parse_word(args.word)
    subs = W.all_subexpressions(x)
    e = max(subs, key=lambda e: (len({sl.kind for sl in light_leaf(x, e, choices)[0].slices}), e.mask))
    leaf, _ = light_leaf(x, e, choices)
    plot_diagram(leaf, out / "light_leaf.png", f"light leaf {W.word_str(x)}, e = {e}")
    files = ["light_leaf.png"]
    if real.rank >= 2 and real.coxeter[0][1]:
        m = real.coxeter[0][1]
        V = DiagramWord(real, alternating(0, 1, m), [Slice("braid", 0, 0, 1)])
        plot_diagram(V, out / "vertex.png", "2m-valent vertex")
        plot_support(eval_diagram(V), out / "vertex_support.png", "vertex: localized support")
        files += ["vertex.png", "vertex_support.png"]
    labels, grid = gram_pattern(x, x, choices)
    plot_gram(grid, out / "double_leaves.png", f"double leaves End(B_{W.word_str(x)})")
    files.append("double_leaves.png")
    rep = double_leaves_gram(x, x, choices)
    summary = {"type": args.type or DEFAULT_TYPE, "word": W.word_names(x), "files": files, "gram": rep.to_json(),
               "leaf_labels": [list(lbl) for lbl in labels]}
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True))
    _emit(args, summary, "\n".join(str(out / f) for f in files + ["summary.json"]))
    return EXIT_OK


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="soergel", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", default=None, help=f"named type (default {DEFAULT_TYPE}) for the geometric realization")
    common.add_argument("--config", help="realization file (JSON or TOML)")
    common.add_argument("--radius", type=int, default=None, help="Coxeter ball radius")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("check-realization", parents=[common])
    sp.set_defaults(func=cmd_check_realization)

    sp = sub.add_parser("hecke", parents=[common])
    sp.add_argument("op", choices=["kl", "deodhar", "pairing"])
    sp.add_argument("--w")
    sp.add_argument("--x")
    sp.add_argument("--y")
    sp.add_argument("--word")
    sp.set_defaults(func=cmd_hecke)

    sp = sub.add_parser("ll", parents=[common])
    sp.add_argument("op", choices=["enumerate", "coeffs"])
    sp.add_argument("--word", required=True)
    sp.add_argument("--w")
    sp.set_defaults(func=cmd_ll)

    sp = sub.add_parser("eval", parents=[common])
    sp.add_argument("--diagram", required=True)
    sp.add_argument("--mode", choices=["std", "scaled"], default="std")
    sp.add_argument("--oracle", action="store_true", help="compare with the tensor backend")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("verify", parents=[common])
    sp.add_argument("--suite", default="all")
    sp.add_argument("--max-m", type=int, default=None, dest="max_m")
    sp.add_argument("--gram", action="store_true")
    sp.add_argument("--source")
    sp.add_argument("--target")
    sp.add_argument("--heatmap")
    sp.add_argument("--jobs", type=int, default=None,
                    help="worker processes (default: available cores)")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("gram", parents=[common])
    sp.add_argument("--source", required=True)
    sp.add_argument("--target", required=True)
    sp.add_argument("--heatmap", help="write the double-leaves pattern as a PNG")
    sp.set_defaults(func=cmd_gram)

    sp = sub.add_parser("jw", parents=[common])
    sp.add_argument("op", choices=["dump"])
    sp.add_argument("--m", type=int, default=4)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--colors", default="s,t")
    sp.set_defaults(func=cmd_jw)

    sp = sub.add_parser("render", parents=[common])
    sp.add_argument("--diagram", required=True)
    sp.add_argument("--format", choices=["tikz", "ascii", "png"], default="ascii")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("bimod", parents=[common])
    sp.add_argument("op", choices=["dump-vertex"])
    sp.add_argument("--colors", default="s,t")
    sp.add_argument("--limit", type=int, default=20)
    sp.set_defaults(func=cmd_bimod)

    sp = sub.add_parser("report", parents=[common])
    sp.add_argument("--word", default="s t s")
    sp.add_argument("--out", default="report")
    sp.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except RelationFailed as exc:
        print(f"relation failed: {exc}", file=sys.stderr)
        return EXIT_RELATION
    except (RadiusExceeded, VertexUnavailable, MemoryError) as exc:
        print(f"resource limit: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (SoergelError, OSError, ValueError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
