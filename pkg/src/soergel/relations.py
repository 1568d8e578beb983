"""The defining relations of the diagrammatic Hecke category, checked by
localization.

Each relation is a linear combination of diagrams with a common boundary; it
holds when the evaluated standard-basis matrices agree exactly.  Relations that
only make sense after localization (the dashed calculus) are checked on the
top block, where every sign and normalization ambiguity is absent.
"""
from __future__ import annotations

from collections import deque
from itertools import combinations

from .coxeter import CoxeterSystem
from .diagram import DiagramWord, Slice, alternating, rex_move_slices
from .errors import RelationFailed, VertexUnavailable
from .localize import StdMatrix, default_system, evaluator
from .report import Report
from .ring import Poly, Realization, act, demazure


# --------------------------------------------------------------------------
# Helpers
# --------------------------------------------------------------------------

def D(real: Realization, bottom, *slices) -> DiagramWord:
    return DiagramWord(real, tuple(bottom), list(slices))


def box(f: Poly, gap: int) -> Slice:
    return Slice("box", -1, gap, -1, f)


def ev(d: DiagramWord) -> StdMatrix:
    return evaluator(d.real).eval(d)


def combo(terms) -> StdMatrix:
    """Sum of c * eval(d) over (c, d) pairs."""
    out = None
    for c, d in terms:
        M = ev(d)
        if c != 1:
            M = M.scale(c)
        out = M if out is None else out + M
    return out


def _witness(A: StdMatrix, B: StdMatrix) -> str:
    diff = A.difference(B)
    if diff is None:
        return ""
    f, e, a, b = diff
    return f"entry (f={f:b}, e={e:b}): {a} != {b}"


def _equal(box_, A: StdMatrix, B: StdMatrix) -> None:
    box_["passed"] = A == B
    if not box_["passed"]:
        box_["witness"] = _witness(A, B)


def _zero(box_, A: StdMatrix) -> None:
    box_["passed"] = A.is_zero()
    if not box_["passed"]:
        box_["witness"] = f"{A.nnz} nonzero entries"


def top_entry(M: StdMatrix):
    return M.entry((1 << len(M.target)) - 1, (1 << len(M.source)) - 1)


def test_polynomials(real: Realization) -> list:
    """A fixed family: every variable, every simple root and one quadratic."""
    out = [real.delta(c) for c in range(real.rank)]
    out += [real.alpha(c) for c in range(real.rank)]
    out.append(real.delta(0) * real.delta(real.rank - 1) + real.alpha(0))
    return out


# --------------------------------------------------------------------------
# One color
# --------------------------------------------------------------------------

def one_color_relations(real: Realization, s: int, report: Report) -> None:
    n = real.colors[s]
    a_s, d_s = real.alpha(s), real.delta(s)
    sd = act(real, s, d_s)
    one = Slice

    with report.timed(f"barbell[{n}]") as b:
        _equal(b, ev(D(real, (), one("startdot", s, 0), one("enddot", s, 0))),
               ev(D(real, (), box(a_s, 0))))

    for k, f in enumerate(test_polynomials(real)):
        with report.timed(f"polynomial-forcing[{n}][{k}]") as b:
            lhs = ev(D(real, (s,), box(f, 0)))
            rhs = combo([(1, D(real, (s,), box(act(real, s, f), 1))),
                         (1, D(real, (s,), one("enddot", s, 0), box(demazure(real, s, f), 0),
                                one("startdot", s, 0)))])
            _equal(b, lhs, rhs)

    ident = ev(D(real, (s,)))
    with report.timed(f"unit[{n}]") as b:
        A = ev(D(real, (s,), one("startdot", s, 0), one("merge", s, 0)))
        B = ev(D(real, (s,), one("startdot", s, 1), one("merge", s, 0)))
        b["passed"] = A == ident and B == ident
        b["witness"] = _witness(A, ident) or _witness(B, ident)
    with report.timed(f"counit[{n}]") as b:
        A = ev(D(real, (s,), one("split", s, 0), one("enddot", s, 0)))
        B = ev(D(real, (s,), one("split", s, 0), one("enddot", s, 1)))
        b["passed"] = A == ident and B == ident
        b["witness"] = _witness(A, ident) or _witness(B, ident)
    with report.timed(f"associativity[{n}]") as b:
        _equal(b, ev(D(real, (s, s, s), one("merge", s, 0), one("merge", s, 0))),
               ev(D(real, (s, s, s), one("merge", s, 1), one("merge", s, 0))))
    with report.timed(f"coassociativity[{n}]") as b:
        _equal(b, ev(D(real, (s,), one("split", s, 0), one("split", s, 0))),
               ev(D(real, (s,), one("split", s, 0), one("split", s, 1))))
    with report.timed(f"frobenius[{n}]") as b:
        mid = ev(D(real, (s, s), one("merge", s, 0), one("split", s, 0)))
        A = ev(D(real, (s, s), one("split", s, 1), one("merge", s, 0)))
        B = ev(D(real, (s, s), one("split", s, 0), one("merge", s, 1)))
        b["passed"] = A == mid and B == mid
        b["witness"] = _witness(A, mid) or _witness(B, mid)
    with report.timed(f"needle[{n}]") as b:
        A = ev(D(real, (s,), one("split", s, 0), one("cap", s, 0)))
        B = ev(D(real, (), one("cup", s, 0), one("merge", s, 0)))
        b["passed"] = A.is_zero() and B.is_zero()
        b["witness"] = "" if b["passed"] else "needle does not vanish"
    with report.timed(f"zigzag[{n}]") as b:
        A = ev(D(real, (s,), one("cup", s, 1), one("cap", s, 0)))
        B = ev(D(real, (s,), one("cup", s, 0), one("cap", s, 1)))
        b["passed"] = A == ident and B == ident
        b["witness"] = _witness(A, ident) or _witness(B, ident)
    with report.timed(f"invariant-sliding[{n}]") as b:
        invariants = [a_s * a_s, d_s + sd]
        invariants += [real.delta(t) for t in range(real.rank) if t != s]
        bad = [str(f) for f in invariants
               if ev(D(real, (s,), box(f, 0))) != ev(D(real, (s,), box(f, 1)))]
        b["passed"] = not bad
        b["witness"] = ", ".join(bad)

    # B_s B_s = B_s(1) + B_s(-1): two orthogonal idempotents summing to 1
    i1 = D(real, (s,), one("split", s, 0), box(d_s, 1))
    p1 = D(real, (s, s), one("merge", s, 0))
    i2 = D(real, (s,), one("split", s, 0))
    p2 = D(real, (s, s), box(sd, 1), one("merge", s, 0))
    E1, P1, E2, P2 = ev(i1), ev(p1), ev(i2), ev(p2).scale(-1)
    with report.timed(f"bsbs-decomposition[{n}]") as b:
        fails = []
        if P1 @ E1 != ident:
            fails.append("p1 i1 != 1")
        if P2 @ E2 != ident:
            fails.append("p2 i2 != 1")
        if not (P1 @ E2).is_zero():
            fails.append("p1 i2 != 0")
        if not (P2 @ E1).is_zero():
            fails.append("p2 i1 != 0")
        if (E1 @ P1) + (E2 @ P2) != ev(D(real, (s, s))):
            fails.append("i1 p1 + i2 p2 != 1")
        b["passed"] = not fails
        b["witness"] = "; ".join(fails)

    # dashed: the standard summand of B_s is R_s(1) with the polynomial twisted
    with report.timed(f"dashed-sliding[{n}]") as b:
        bad = []
        for f in test_polynomials(real):
            A = top_entry(ev(D(real, (s,), box(f, 0))))
            B = top_entry(ev(D(real, (s,), box(act(real, s, f), 1))))
            if A != B:
                bad.append(str(f))
        b["passed"] = not bad
        b["witness"] = ", ".join(bad)


# --------------------------------------------------------------------------
# Two colors
# --------------------------------------------------------------------------

def vertex_available(real: Realization, s: int, t: int) -> bool:
    try:
        evaluator(real).vertex_local(s, t)
        evaluator(real).vertex_local(t, s)
        return True
    except VertexUnavailable:
        return False


def two_color_relations(real: Realization, s: int, t: int, report: Report,
                        jw: bool = True) -> None:
    m = real.coxeter[s][t]
    tag = f"[{real.colors[s]}{real.colors[t]}]"
    src, tgt = alternating(s, t, m), alternating(t, s, m)
    V = Slice("braid", s, 0, t)
    Vb = Slice("braid", t, 0, s)

    with report.timed(f"two-color-associativity{tag}") as b:
        c = tgt[m - 1]
        lhs = ev(D(real, (s,) + src, Slice("merge", s, 0), V))
        rhs = ev(D(real, (s,) + src, Slice("braid", s, 1, t), V, Slice("merge", c, m - 1)))
        _equal(b, lhs, rhs)

    with report.timed(f"doubled-vertex-idempotent{tag}") as b:
        once = ev(D(real, src, V, Vb))
        twice = ev(D(real, src, V, Vb, V, Vb))
        _equal(b, once, twice)

    with report.timed(f"vertex-rotation{tag}") as b:
        # bending the left input of V_st up equals bending the right input of V_ts up
        c = alternating(t, s, m)[m - 1]
        left = D(real, tgt[:m - 1], Slice("cup", s, 0), V.shifted(1))
        right = D(real, tgt[:m - 1], Slice("cup", c, m - 1), Vb)
        _equal(b, ev(left), ev(right))

    with report.timed(f"dashed-vertex-inverse{tag}") as b:
        v = top_entry(ev(D(real, src, V, Vb)))
        b["passed"] = v == 1
        b["witness"] = "" if b["passed"] else f"top entry {v}"

    if jw:
        from .jw import verify_dot2m
        report.extend(verify_dot2m(real, s, t))


# --------------------------------------------------------------------------
# Three colors
# --------------------------------------------------------------------------

def parabolic_longest(W: CoxeterSystem, J) -> int:
    """Index of the longest element of the parabolic subgroup on colors J."""
    w = 0
    grew = True
    while grew:
        grew = False
        for s in J:
            ws = W.right_mul_index(w, s)
            if W.lengths[ws] > W.lengths[w]:
                w, grew = ws, True
    return w


def three_color_type(real: Realization, J) -> str | None:
    s, t, u = J
    ms = sorted((real.coxeter[s][t], real.coxeter[s][u], real.coxeter[t][u]))
    if 0 in ms:
        return None
    if ms[1] == 2:
        return f"A1xI2({ms[2]})" if ms[2] > 2 else "A1xA1xA1"
    if ms == [2, 3, 3]:
        return "A3"
    if ms == [2, 3, 4]:
        return "B3"
    if ms == [2, 3, 5]:
        return "H3"
    return None


def _commutation_classes(W: CoxeterSystem, rexes: list) -> dict:
    cls: dict = {}
    k = 0
    for x in rexes:
        if x in cls:
            continue
        cls[x] = k
        queue = deque([x])
        while queue:
            y = queue.popleft()
            for e in W.braid_moves(y):
                if e.distant:
                    z = e.apply(y)
                    if z not in cls:
                        cls[z] = k
                        queue.append(z)
        k += 1
    return cls


def _distant_path(W: CoxeterSystem, x: tuple, y: tuple) -> list:
    if x == y:
        return []
    prev = {x: None}
    queue = deque([x])
    while queue:
        a = queue.popleft()
        for e in W.braid_moves(a):
            if not e.distant:
                continue
            b = e.apply(a)
            if b in prev:
                continue
            prev[b] = (a, e)
            if b == y:
                out = []
                while prev[b] is not None:
                    a2, e2 = prev[b]
                    out.append(e2)
                    b = a2
                return out[::-1]
            queue.append(b)
    raise ValueError("rexes are not commutation equivalent")


def _step_into(W: CoxeterSystem, cls: dict, cur: tuple, target: int):
    """Distant moves inside the class of cur, then one move into class target."""
    prev = {cur: None}
    queue = deque([cur])
    while queue:
        a = queue.popleft()
        for e in W.braid_moves(a):
            b = e.apply(a)
            if not e.distant and cls[b] == target:
                path = [e]
                x = a
                while prev[x] is not None:
                    x0, e0 = prev[x]
                    path.append(e0)
                    x = x0
                return path[::-1], b
            if e.distant and b not in prev:
                prev[b] = (a, e)
                queue.append(b)
    raise ValueError("classes are not adjacent")


def class_cycle(W: CoxeterSystem, w: int):
    """Rexes, class map and the cyclic order of commutation classes, or None
    when the class graph of w is not a cycle."""
    rexes = W.enumerate_rex(W.words[w])
    cls = _commutation_classes(W, rexes)
    k = max(cls.values()) + 1
    adj = {i: set() for i in range(k)}
    for x in rexes:
        for e in W.braid_moves(x):
            if not e.distant:
                adj[cls[x]].add(cls[e.apply(x)])
    if k < 3 or any(len(v) != 2 for v in adj.values()):
        return rexes, cls, None
    order = [0]
    prev = None
    while True:
        nxt = [c for c in sorted(adj[order[-1]]) if c != prev]
        prev = order[-1]
        if nxt[0] == 0:
            break
        order.append(nxt[0])
    if len(order) != k:
        return rexes, cls, None
    return rexes, cls, order


def zamolodchikov_paths(W: CoxeterSystem, cls: dict, order: list, i: int, start: tuple):
    """The two arcs of the class cycle from position i to its antipode, lifted
    to braid-move paths from ``start`` ending at a common rex."""
    L = len(order)
    half = L // 2
    arcs = []
    for direction in (1, -1):
        cur = start
        moves = []
        for k in range(1, half + 1):
            path, cur = _step_into(W, cls, cur, order[(i + direction * k) % L])
            moves += path
        arcs.append((moves, cur))
    (m1, end1), (m2, end2) = arcs
    m2 = m2 + _distant_path(W, end2, end1)
    return m1, m2, end1


def three_color_relations(real: Realization, J, report: Report) -> None:
    W = default_system(real)
    kind = three_color_type(real, J)
    tag = "[" + "".join(real.colors[c] for c in J) + "]"
    if kind is None or kind == "H3":
        return
    if kind.startswith("A1xI2"):
        s, t, u = J
        # the commuting color is the one with m = 2 against both others
        for cand in J:
            others = [c for c in J if c != cand]
            if all(real.coxeter[cand][c] == 2 for c in others):
                u = cand
                s, t = others
        m = real.coxeter[s][t]
        src, tgt = alternating(s, t, m), alternating(t, s, m)

        def through(word, start):
            return [Slice("braid", u, start + k, c) for k, c in enumerate(word)]

        with report.timed(f"vertex-through-commuting{tag}") as b:
            lhs = D(real, (u,) + src, Slice("braid", s, 1, t), *through(tgt, 0))
            rhs = D(real, (u,) + src, *through(src, 0), Slice("braid", s, 0, t))
            _equal(b, ev(lhs), ev(rhs))
        return
    w0 = parabolic_longest(W, J)
    if kind == "A1xA1xA1":
        x = W.words[w0]
        y = x[::-1]
        with report.timed(f"zamolodchikov{tag}") as b:
            p1 = [e for e in W.rex_path(x, y)]
            # the other way around the hexagon
            a = x
            p2 = []
            for pos in (0, 1, 0):
                e = [e for e in W.braid_moves(a) if e.pos == pos][0]
                p2.append(e)
                a = e.apply(a)
            _equal(b, ev(D(real, x, *rex_move_slices(p1))), ev(D(real, x, *rex_move_slices(p2))))
        return
    rexes, cls, order = class_cycle(W, w0)
    with report.timed(f"zamolodchikov-{kind}{tag}") as b:
        if order is None:
            b["witness"] = "class graph is not a cycle"
            return
        L = len(order)
        good, tops_ok = [], True
        for i in range(L // 2):
            start = next(x for x in rexes if cls[x] == order[i])
            m1, m2, end = zamolodchikov_paths(W, cls, order, i, start)
            A = ev(D(real, start, *rex_move_slices(m1)))
            B = ev(D(real, start, *rex_move_slices(m2)))
            if top_entry(A) != 1 or top_entry(B) != 1:
                tops_ok = False
            if A == B:
                good.append(W.word_str(start) + "->" + W.word_str(end))
        b["passed"] = bool(good)
        b["witness"] = ("orientations: " + ", ".join(good)) if good else "no orientation gives equal paths"
        report.add(f"dashed-zamolodchikov-{kind}{tag}", tops_ok,
                   "" if tops_ok else "top entry of a path is not 1")


# --------------------------------------------------------------------------
# Suite
# --------------------------------------------------------------------------

def verify_relation_suite(real: Realization, colors=None, two_color: bool = True,
                          three_color: bool = True, jw: bool = True,
                          max_vertex_m: int | None = None,
                          raise_on_failure: bool = False) -> Report:
    """Check every relation that applies to the given colors."""
    cs = list(range(real.rank)) if colors is None else [real.color_index(c) for c in colors]
    report = Report(f"relations for {'/'.join(real.colors[c] for c in cs)}")
    for s in cs:
        one_color_relations(real, s, report)
    usable = set()
    if two_color:
        for s, t in combinations(cs, 2):
            m = real.coxeter[s][t]
            if m == 0 or (max_vertex_m is not None and m > max_vertex_m):
                continue
            if not vertex_available(real, s, t):
                report.add(f"vertex[{real.colors[s]}{real.colors[t]}]", False, "vertex unavailable")
                continue
            usable.add((s, t))
            two_color_relations(real, s, t, report, jw=jw)
            two_color_relations(real, t, s, report, jw=jw)
    if three_color:
        for J in combinations(cs, 3):
            if all((a, b) in usable or real.coxeter[a][b] == 2
                   for a, b in combinations(J, 2)):
                three_color_relations(real, J, report)
    if raise_on_failure and not report.ok:
        bad = report.failures()[0]
        raise RelationFailed(bad.name, bad.witness)
    return report
