"""Localization: diagrams as sparse matrices between standard summands.

After base change to the fraction field, B_x splits into summands indexed by
the 01-sequences e of x (bit i of the mask is e_{i+1}).  A diagram becomes a
matrix with entry (f, e) in the fraction field.  Two coordinate systems are
used:

* ``std``: inclusions carry no denominators and projections carry 1/alpha,
  so the identity diagram is the identity matrix;
* ``scaled``: entry (f, e) multiplied by K_e / K_f with
  K_e = prod_k v_{k-1}(alpha_{x_k}).  Light leaves are polynomial here and
  the row at the all-ones sequence of the target rex gives p^e_f.

Both are functorial, so composites may be evaluated in either.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .bimod import default_system, localized_vertex, vertex_cache
from .coxeter import CoxeterSystem, Subexpression
from .diagram import (ChoiceData, DiagramWord, Slice, alternating, light_leaf)
from .errors import (BoundaryMismatch, NoSolution, NonUniqueSolution, RankDeficient,
                     GradedRankMismatch, TriangularityViolated, VertexUnavailable)
from .hecke import (HeckeElt, LaurentPoly, epsilon, graded_hom_rank, multiply, omega,
                    product_of_kl_gens)
from .ring import Frac, Poly, Realization, _cancel


# --------------------------------------------------------------------------
# Sparse matrices over the fraction field
# --------------------------------------------------------------------------

@dataclass
class StdMatrix:
    """Sparse matrix from the summands of B_source to those of B_target.

    ``cols`` maps a source mask e to {target mask f: Frac}.
    """

    real: Realization = field(repr=False)
    source: tuple
    target: tuple
    cols: dict = field(default_factory=dict)
    mode: str = "std"

    def entry(self, f: int, e: int) -> Frac:
        v = self.cols.get(e, {}).get(f)
        return v if v is not None else Frac(self.real.ring, self.real.ring.zero_raw)

    def entries(self):
        for e, col in self.cols.items():
            for f, v in col.items():
                yield (f, e), v

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self.cols.values())

    def is_zero(self) -> bool:
        return self.nnz == 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, StdMatrix):
            return NotImplemented
        return self.difference(other) is None

    def difference(self, other: "StdMatrix"):
        """First differing entry as (f, e, mine, theirs), or None if equal."""
        if (self.source, self.target) != (other.source, other.target):
            raise BoundaryMismatch("matrices have different boundaries")
        zero = Frac(self.real.ring, self.real.ring.zero_raw)
        for e in sorted(set(self.cols) | set(other.cols)):
            a, b = self.cols.get(e, {}), other.cols.get(e, {})
            for f in sorted(set(a) | set(b)):
                x, y = a.get(f, zero), b.get(f, zero)
                if not x == y:
                    return f, e, x, y
        return None

    def __matmul__(self, other: "StdMatrix") -> "StdMatrix":
        """self after other."""
        if other.target != self.source:
            raise BoundaryMismatch("cannot multiply: boundaries differ")
        out = {}
        for e, col in other.cols.items():
            acc: dict = {}
            for g, v in col.items():
                for f, w in self.cols.get(g, {}).items():
                    t = v * w
                    acc[f] = acc[f] + t if f in acc else t
            acc = {f: v for f, v in acc.items() if not v.is_zero()}
            if acc:
                out[e] = acc
        return StdMatrix(self.real, other.source, self.target, out, self.mode)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def _combine(self, other, sign):
        if (self.source, self.target) != (other.source, other.target):
            raise BoundaryMismatch("matrices have different boundaries")
        out = {e: dict(c) for e, c in self.cols.items()}
        for e, col in other.cols.items():
            tgt = out.setdefault(e, {})
            for f, v in col.items():
                v = v if sign == 1 else -v
                tgt[f] = tgt[f] + v if f in tgt else v
        out = {e: {f: v for f, v in c.items() if not v.is_zero()} for e, c in out.items()}
        return StdMatrix(self.real, self.source, self.target, {e: c for e, c in out.items() if c}, self.mode)

    def scale(self, c) -> "StdMatrix":
        return StdMatrix(self.real, self.source, self.target,
                         {e: {f: v * c for f, v in col.items()} for e, col in self.cols.items()}, self.mode)

    def transpose_entries(self) -> dict:
        rows: dict = {}
        for (f, e), v in self.entries():
            rows.setdefault(f, {})[e] = v
        return rows

    def support(self, system: CoxeterSystem | None = None) -> set:
        """Endpoints w with a nonzero block."""
        W = system or default_system(self.real)
        return {W.stroll(self.source, _bits(e, len(self.source)))[-1] for (f, e), _ in self.entries()}

    def block_support_holds(self, system: CoxeterSystem | None = None) -> bool:
        W = system or default_system(self.real)
        for (f, e), _ in self.entries():
            if endpoint(W, self.source, e) != endpoint(W, self.target, f):
                return False
        return True

    def to_json(self) -> dict:
        real = self.real
        out = []
        for (f, e), v in sorted(self.entries(), key=lambda kv: (kv[0][1], kv[0][0])):
            out.append({"source_subseq": _bitstr(e, len(self.source)),
                        "target_subseq": _bitstr(f, len(self.target)),
                        "num": Poly(real.ring, v.num).to_json(),
                        "den": v.denominator().to_json()})
        return {"source": [real.colors[c] for c in self.source],
                "target": [real.colors[c] for c in self.target],
                "coordinates": self.mode, "entries": out}


def _bits(mask: int, d: int) -> tuple:
    return tuple(mask >> i & 1 for i in range(d))


def _bitstr(mask: int, d: int) -> str:
    return "".join(str(b) for b in _bits(mask, d))


def endpoint(W: CoxeterSystem, expr: tuple, mask: int) -> int:
    x = 0
    for i, s in enumerate(expr):
        if mask >> i & 1:
            x = W.right_mul_index(x, s)
    return x


def identity_matrix(real: Realization, expr, mode: str = "std") -> StdMatrix:
    expr = tuple(expr)
    one = Frac(real.ring, real.ring.one_raw)
    return StdMatrix(real, expr, expr, {e: {e: one} for e in range(1 << len(expr))}, mode)


# --------------------------------------------------------------------------
# Evaluation
# --------------------------------------------------------------------------

class Evaluator:
    """Cached local generator matrices and diagram evaluation."""

    def __init__(self, real: Realization, system: CoxeterSystem | None = None):
        self.real = real
        self.ring = real.ring
        self.W = system or default_system(real)
        self._roots: dict = {}
        self._ftwist: dict = {}
        self._local: dict = {}
        self._prefix: dict = {}
        self._vertex_loc: dict = {}

    # twisting --------------------------------------------------------------
    def root(self, u: int, s: int):
        """u(alpha_s) as a raw polynomial."""
        key = (u, s)
        r = self._roots.get(key)
        if r is None:
            r = self.real.compose_raw(self.real.alpha_raw[s], self.W.images(u))
            self._roots[key] = r
        return r

    def twist_raw(self, p, u: int):
        if u == 0:
            return p
        return self.real.compose_raw(p, self.W.images(u))

    def twist(self, F: Frac, u: int) -> Frac:
        if u == 0 or F.is_zero():
            return F
        ring = self.ring
        num = self.twist_raw(F.num, u)
        if not F.den:
            return Frac(ring, num)
        den: dict = {}
        for fid, k in F.den:
            key = (fid, u)
            tw = self._ftwist.get(key)
            if tw is None:
                unit, parts = ring.factorize(self.twist_raw(ring.factors[fid], u))
                tw = (ring.scalar_raw(ring.constant_scalar(unit).inverse()), parts)
                self._ftwist[key] = tw
            inv_unit, parts = tw
            for _ in range(k):
                num = ring.reduce(num * inv_unit)
            for pid, e in parts:
                den[pid] = den.get(pid, 0) + e * k
        return _cancel(ring, num, tuple(sorted(den.items())))

    def prefix_element(self, obj: tuple, p: int, low: int) -> int:
        key = (obj[:p], low)
        u = self._prefix.get(key)
        if u is None:
            u = endpoint(self.W, obj[:p], low)
            self._prefix[key] = u
        return u

    def K(self, expr: tuple, mask: int, u: int = 0):
        """prod_k v_{k-1}(alpha_{x_k}) with the stroll started at u."""
        ring = self.ring
        out = ring.one_raw
        x = u
        for i, s in enumerate(expr):
            out = ring.reduce(out * self.root(x, s))
            if mask >> i & 1:
                x = self.W.right_mul_index(x, s)
        return out

    # local matrices ----------------------------------------------------------
    def vertex_local(self, s: int, t: int) -> dict:
        L = self._vertex_loc.get((s, t))
        if L is None:
            try:
                V = vertex_cache(self.real).get(s, t)
            except (NoSolution, NonUniqueSolution) as exc:
                raise VertexUnavailable(str(exc)) from exc
            L = localized_vertex(V, self.W)
            self._vertex_loc[(s, t)] = L
        return L

    def local_matrix(self, sl: Slice, u: int, mode: str = "std"):
        """(arity_in, arity_out, {local_in: [(local_out, Frac)]}) twisted by u."""
        key = (sl.kind, sl.color, sl.color2, str(sl.poly) if sl.poly is not None else None, u, mode)
        hit = self._local.get(key)
        if hit is not None:
            return hit
        ring = self.ring
        k, s = sl.kind, sl.color
        F = lambda raw: Frac(ring, raw)
        if k == "box":
            val = F(self.twist_raw(sl.poly.p, u))
            out = (0, 0, {0: [(0, val)]} if not val.is_zero() else {})
            self._local[key] = out
            return out
        if k != "braid":
            ru = self.root(u, s)
            one = F(ring.one_raw)
            inv = Frac.quotient(Poly(ring, ring.one_raw), Poly(ring, ru))
            table = {
                "enddot": (1, 0, {0: [(0, one)]}),
                "startdot": (0, 1, {0: [(0, F(ru))]}),
                "merge": (2, 1, {0: [(0, inv)], 3: [(0, -inv)], 2: [(1, inv)], 1: [(1, -inv)]}),
                "split": (1, 2, {0: [(0, one), (3, one)], 1: [(2, one), (1, one)]}),
                "cap": (2, 0, {0: [(0, inv)], 3: [(0, -inv)]}),
                "cup": (0, 2, {0: [(0, F(ru)), (3, F(ru))]}),
            }
            a_in, a_out, cols = table[k]
            src = (s,) * a_in
            tgt = (s,) * a_out
        else:
            t = sl.color2
            m = self.real.coxeter[s][t]
            L = self.vertex_local(s, t)
            cols = {e: [(f, self.twist(v, u)) for f, v in sorted(col.items())] for e, col in L.items()}
            a_in = a_out = m
            src, tgt = alternating(s, t, m), alternating(t, s, m)
        if mode == "scaled":
            cols = {e: [(f, v * F(self.K(src, e, u)) / F(self.K(tgt, f, u))) for f, v in col]
                    for e, col in cols.items()}
        cols = {e: [(f, v, _unit_sign(v)) for f, v in col if not v.is_zero()] for e, col in cols.items()}
        out = (a_in, a_out, cols)
        self._local[key] = out
        return out

    # application -----------------------------------------------------------
    def apply_slice(self, sl: Slice, obj: tuple, vectors: dict, mode: str = "std") -> tuple:
        """Apply one slice to {column: {mask: Frac}}; returns (new obj, vectors)."""
        target = sl.apply(obj, self.real)
        p = sl.pos
        if sl.kind == "box":
            out = {}
            lowmask = (1 << p) - 1
            for e, vec in vectors.items():
                nv = {}
                for mask, val in vec.items():
                    u = self.prefix_element(obj, p, mask & lowmask)
                    _, _, cols = self.local_matrix(sl, u, mode)
                    if not cols:
                        continue
                    r = val * cols[0][0][1]
                    if not r.is_zero():
                        nv[mask] = r
                out[e] = nv
            return target, out
        lowmask = (1 << p) - 1
        out = {}
        a_in = a_out = None
        for e, vec in vectors.items():
            nv: dict = {}
            cancel = False
            for mask, val in vec.items():
                low = mask & lowmask
                u = self.prefix_element(obj, p, low)
                a_in, a_out, cols = self.local_matrix(sl, u, mode)
                local = (mask >> p) & ((1 << a_in) - 1)
                high = mask >> (p + a_in)
                for lo, coef, unit in cols.get(local, ()):
                    nm = low | (lo << p) | (high << (p + a_out))
                    t = val if unit == 1 else (-val if unit == -1 else val * coef)
                    if nm in nv:
                        nv[nm] = nv[nm] + t
                        cancel = True
                    else:
                        nv[nm] = t
            out[e] = {m: v for m, v in nv.items() if not v.is_zero()} if cancel else nv
        return target, out

    def eval(self, d: DiagramWord, columns=None, mode: str = "std") -> StdMatrix:
        ring = self.ring
        obj = tuple(d.bottom)
        if columns is None:
            columns = range(1 << len(obj))
        one = Frac(ring, ring.one_raw)
        vectors = {e: {e: one} for e in columns}
        for sl in d.slices:
            obj, vectors = self.apply_slice(sl, obj, vectors, mode)
        cols = {e: v for e, v in vectors.items() if v}
        return StdMatrix(self.real, tuple(d.bottom), obj, cols, mode)

    def eval_many(self, diagrams: list, columns=None, mode: str = "std") -> list:
        """Evaluate diagrams with a common bottom, sharing common slice prefixes."""
        if not diagrams:
            return []
        ring = self.ring
        bottom = tuple(diagrams[0].bottom)
        if columns is None:
            columns = range(1 << len(bottom))
        one = Frac(ring, ring.one_raw)
        keys = [tuple(_slice_key(sl) for sl in d.slices) for d in diagrams]
        order = sorted(range(len(diagrams)), key=lambda i: keys[i])
        stack = [(bottom, {e: {e: one} for e in columns})]
        prev: tuple = ()
        out = [None] * len(diagrams)
        for i in order:
            d, key = diagrams[i], keys[i]
            if tuple(d.bottom) != bottom:
                raise BoundaryMismatch("diagrams must share the bottom object")
            common = 0
            while common < min(len(prev), len(key)) and prev[common] == key[common]:
                common += 1
            del stack[common + 1:]
            for sl in d.slices[common:]:
                obj, vec = stack[-1]
                stack.append(self.apply_slice(sl, obj, vec, mode))
            obj, vec = stack[-1]
            out[i] = StdMatrix(self.real, bottom, obj, {e: v for e, v in vec.items() if v}, mode)
            prev = key
        return out

    def generator_matrix(self, sl: Slice, obj: tuple, mode: str = "std") -> StdMatrix:
        return self.eval(DiagramWord(self.real, obj, [sl]), mode=mode)

    def rescale(self, M: StdMatrix, mode: str) -> StdMatrix:
        """Convert between std and scaled coordinates."""
        if M.mode == mode:
            return M
        ring = self.ring
        out = {}
        for e, col in M.cols.items():
            Ke = Frac(ring, self.K(M.source, e))
            nc = {}
            for f, v in col.items():
                Kf = Frac(ring, self.K(M.target, f))
                nc[f] = v * Ke / Kf if mode == "scaled" else v * Kf / Ke
            out[e] = nc
        return StdMatrix(self.real, M.source, M.target, out, mode)


def _slice_key(sl: Slice) -> tuple:
    return (sl.kind, sl.color, sl.pos, sl.color2, str(sl.poly) if sl.poly is not None else "")


def _unit_sign(v: Frac) -> int:
    """1 or -1 if v is that constant, else 0."""
    if v.den or v.ring.wdeg(v.num) > 0:
        return 0
    if v.num == 1:
        return 1
    if v.num == -1:
        return -1
    return 0


def evaluator(real: Realization) -> Evaluator:
    ev = real.__dict__.get("_evaluator")
    if ev is None:
        ev = Evaluator(real)
        real.__dict__["_evaluator"] = ev
    return ev


def generator_matrix(sl: Slice, obj, real: Realization, mode: str = "std") -> StdMatrix:
    return evaluator(real).generator_matrix(sl, tuple(obj), mode)


def eval_diagram(d: DiagramWord, columns=None, mode: str = "std") -> StdMatrix:
    return evaluator(d.real).eval(d, columns, mode)


def morphisms_equal(a: DiagramWord, b: DiagramWord) -> bool:
    if a.bottom != b.bottom or a.top != b.top:
        raise BoundaryMismatch("morphisms have different boundaries")
    return eval_diagram(a) == eval_diagram(b)


def cell_support(d: DiagramWord) -> set:
    """Elements w whose block of the evaluated matrix is nonzero."""
    ev = evaluator(d.real)
    return eval_diagram(d).support(ev.W)


def random_poly_raw(real: Realization, rng, max_degree: int = 2, terms: int = 3):
    """A random polynomial with small integer coefficients (raw)."""
    ring = real.ring
    p = ring.zero_raw
    for _ in range(terms):
        m = ring.one_raw
        for _ in range(rng.randint(0, max_degree)):
            m = m * ring.vars[rng.randrange(real.rank)]
        p = p + rng.randint(-3, 3) * m
    return p


def oracle_check(d: DiagramWord, trials: int = 3, rng=None):
    """Compare the cached matrix of d with the tensor backend on random pure
    tensors.  Returns (agree, witness)."""
    import random

    from .bimod import TensorElt, apply_diagram, to_standard_coords

    rng = rng or random.Random(0)
    real = d.real
    ring = real.ring
    M = eval_diagram(d)
    zero = Frac(ring, ring.zero_raw)
    for _ in range(trials):
        slots = [random_poly_raw(real, rng) for _ in range(len(d.bottom) + 1)]
        v = TensorElt.pure(real, d.bottom, slots)
        c = to_standard_coords(v)
        img = to_standard_coords(apply_diagram(d, v))
        out: dict = {}
        for e, val in c.items():
            for f, x in M.cols.get(e, {}).items():
                out[f] = out[f] + val * x if f in out else val * x
        for f in set(out) | set(img):
            a, b = out.get(f, zero), img.get(f, zero)
            if not a == b:
                return False, f"summand {f:b}: matrix gives {a}, tensors give {b}"
    return True, ""


def verify_relation_suite(real: Realization, **kw):
    from .relations import verify_relation_suite as run
    return run(real, **kw)


# --------------------------------------------------------------------------
# Light leaves coefficients
# --------------------------------------------------------------------------

@dataclass
class LLCoefficients:
    """p^e_f for the subexpressions of x expressing w."""

    expr: tuple
    w: int
    subexpressions: list
    coeffs: dict            # (e mask, f mask) -> Frac (polynomial in practice)
    target_rex: tuple

    def diagonal(self) -> dict:
        return {e.mask: self.coeffs.get((e.mask, e.mask)) for e in self.subexpressions}

    def violations(self, system: CoxeterSystem) -> list:
        """Pairs (e, f) with p^e_f != 0 but f not below e in path dominance."""
        by_mask = {e.mask: e for e in self.subexpressions}
        out = []
        for (em, fm), v in self.coeffs.items():
            if v.is_zero() or em == fm:
                continue
            if not system.path_dominance_leq(by_mask[fm], by_mask[em]):
                out.append((em, fm))
        return out


def diagonal_formula(real: Realization, W: CoxeterSystem, e: Subexpression):
    """prod alpha_k: w_{k-1}(alpha) at U0, -w_{k-1}(alpha) at D1, 1 otherwise."""
    ev = evaluator(real)
    ring = real.ring
    out = ring.one_raw
    for k, (s, dec) in enumerate(zip(e.expr, e.decorations)):
        if dec == "U0":
            out = ring.reduce(out * ev.root(e.stroll[k], s))
        elif dec == "D1":
            out = ring.reduce(-out * ev.root(e.stroll[k], s))
    return Poly(ring, out)


def light_leaf_matrix(x, e: Subexpression, choices: ChoiceData, columns=None, mode: str = "scaled"):
    d, rex = light_leaf(x, e, choices)
    return evaluator(choices.system.realization).eval(d, columns, mode), d, rex


def ll_coefficients(x, w, choices: ChoiceData) -> LLCoefficients:
    W = choices.system
    x = tuple(W.parse_word(x))
    w = w if isinstance(w, int) else (w.index if hasattr(w, "index") else W._word_to_index(W.parse_word(w)))
    subs = [e for e in W.all_subexpressions(x) if e.endpoint == w]
    masks = [f.mask for f in subs]
    coeffs = {}
    rex = choices.canonical(w)
    top = (1 << len(rex)) - 1
    for e in subs:
        M, _, rex = light_leaf_matrix(x, e, choices, columns=masks)
        for f in masks:
            v = M.entry(top, f)
            if not v.is_zero():
                coeffs[(e.mask, f)] = v
    return LLCoefficients(x, w, subs, coeffs, rex)


# --------------------------------------------------------------------------
# Double leaves
# --------------------------------------------------------------------------

@dataclass
class GramReport:
    source: tuple
    target: tuple
    count: int
    degrees: LaurentPoly
    expected: LaurentPoly
    triangular: bool
    diagonal_invertible: bool
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.triangular and self.diagonal_invertible and self.degrees == self.expected

    def to_json(self) -> dict:
        return {"source": list(self.source), "target": list(self.target), "count": self.count,
                "degrees": self.degrees.to_json(), "expected": self.expected.to_json(),
                "triangular": self.triangular, "diagonal_invertible": self.diagonal_invertible,
                "violations": self.violations[:10], "ok": self.ok}


class LeafCache:
    """Evaluated light leaves: scaled coordinates for the leaf, standard
    coordinates for its flip, keyed by (expression, mask)."""

    def __init__(self, choices: ChoiceData):
        self.choices = choices
        self.ev = evaluator(choices.system.realization)
        self._ll: dict = {}
        self._flip: dict = {}

    def leaf(self, x: tuple, e: Subexpression):
        key = (x, e.mask)
        hit = self._ll.get(key)
        if hit is None:
            d, rex = light_leaf(x, e, self.choices)
            hit = (self.ev.eval(d, mode="scaled"), d.degree(), rex)
            self._ll[key] = hit
        return hit

    def flipped(self, y: tuple, f: Subexpression):
        key = (y, f.mask)
        hit = self._flip.get(key)
        if hit is None:
            d, rex = light_leaf(y, f, self.choices)
            M = self.ev.eval(d.flip(), mode="std")
            hit = (M.cols, d.degree(), rex)
            self._flip[key] = hit
        return hit


def double_leaf_columns(cache: LeafCache, x, e, y, f) -> dict:
    """Evaluated double leaf in std coordinates with source column e' scaled
    by K_{e'} (a nonzero factor): {e': {f': value}}."""
    ev = cache.ev
    ring = ev.ring
    B, _, rex = cache.leaf(x, e)
    A, _, _ = cache.flipped(y, f)
    out = {}
    for ep, col in B.cols.items():
        acc: dict = {}
        for g, v in col.items():
            row = A.get(g)
            if not row:
                continue
            vg = v * Frac(ring, ev.K(rex, g))
            for fp, a in row.items():
                t = vg * a
                acc[fp] = acc[fp] + t if fp in acc else t
        acc = {k: v for k, v in acc.items() if not v.is_zero()}
        if acc:
            out[ep] = acc
    return out


def double_leaves_gram(x, y, choices: ChoiceData, cache: LeafCache | None = None,
                       raise_on_failure: bool = False) -> GramReport:
    """Evaluate all double leaves B_x -> B_y; check block triangularity with
    invertible diagonal and compare the degree count with the Hecke pairing."""
    W = choices.system
    real = W.realization
    x = tuple(W.parse_word(x))
    y = tuple(W.parse_word(y))
    cache = cache or LeafCache(choices)
    xs = W.all_subexpressions(x)
    ys = W.all_subexpressions(y)
    y_by_end: dict = {}
    for f in ys:
        y_by_end.setdefault(f.endpoint, []).append(f)
    x_by_mask = {e.mask: e for e in xs}
    y_by_mask = {f.mask: f for f in ys}
    labels = set()
    degrees: dict = {}
    leaves = []
    for e in xs:
        for f in y_by_end.get(e.endpoint, []):
            labels.add((e.mask, f.mask))
            deg = e.defect + f.defect
            degrees[deg] = degrees.get(deg, 0) + 1
            leaves.append((e, f))
    triangular = True
    diag_ok = True
    violations = []
    for e, f in leaves:
        w = e.endpoint
        cols = double_leaf_columns(cache, x, e, y, f)
        if not cols.get(e.mask, {}).get(f.mask):
            diag_ok = False
            violations.append(("zero diagonal", e.mask, f.mask))
        for ep, col in cols.items():
            ee = x_by_mask[ep]
            for fp in col:
                ff = y_by_mask[fp]
                if ee.endpoint != ff.endpoint:
                    triangular = False
                    violations.append(("block support", e.mask, f.mask, ep, fp))
                    continue
                if (ep, fp) == (e.mask, f.mask):
                    continue
                v = ee.endpoint
                if v != w:
                    ok = W.bruhat_leq_index(v, w)
                else:
                    ok = W.path_dominance_leq(ee, e) and W.path_dominance_leq(ff, f)
                if not ok:
                    triangular = False
                    violations.append(("order", e.mask, f.mask, ep, fp))
    got = LaurentPoly({k: v for k, v in degrees.items() if v})
    expected = graded_hom_rank(W, x, y)
    rep = GramReport(x, y, len(leaves), got, expected, triangular, diag_ok, violations)
    if raise_on_failure:
        if not triangular:
            raise TriangularityViolated(str(violations[:3]))
        if not diag_ok:
            raise RankDeficient(str(violations[:3]))
        if got != expected:
            raise GradedRankMismatch(f"{got} != {expected}")
    return rep


def gram_pattern(x, y, choices: ChoiceData, cache: LeafCache | None = None):
    """Labels (w, e, f) of the double leaves B_x -> B_y and the 0/1 grid whose
    (i, j) entry records whether leaf i is nonzero at the diagonal position
    (e_j, f_j) of leaf j.  Leaves are sorted by endpoint length."""
    W = choices.system
    x = tuple(W.parse_word(x))
    y = tuple(W.parse_word(y))
    cache = cache or LeafCache(choices)
    ys = W.all_subexpressions(y)
    leaves = [(e, f) for e in W.all_subexpressions(x) for f in ys if f.endpoint == e.endpoint]
    leaves.sort(key=lambda ef: (W.lengths[ef[0].endpoint], ef[0].endpoint, ef[0].mask, ef[1].mask))
    grid = []
    for e, f in leaves:
        cols = double_leaf_columns(cache, x, e, y, f)
        grid.append([1 if cols.get(e2.mask, {}).get(f2.mask) else 0 for e2, f2 in leaves])
    labels = [(W.word_str(W.words[e.endpoint]) or "1", str(e), str(f)) for e, f in leaves]
    return labels, grid


# --------------------------------------------------------------------------
# Characters
# --------------------------------------------------------------------------

def character_bs(W: CoxeterSystem, x) -> HeckeElt:
    """sum_w (sum_{e expressing w} v^{d(e)}) H_w from the light leaves count."""
    x = tuple(W.parse_word(x))
    coeffs: dict = {}
    for e in W.all_subexpressions(x):
        lp = coeffs.setdefault(e.endpoint, {})
        lp[e.defect] = lp.get(e.defect, 0) + 1
    return HeckeElt(W, {w: LaurentPoly(c) for w, c in coeffs.items()})


# --------------------------------------------------------------------------
# Double leaves census at scale
# --------------------------------------------------------------------------

@dataclass
class LeafData:
    """Top-row data of the light leaves of one word for one endpoint w.

    ``top[e][e']`` is the coefficient at the all-ones sequence of the target
    rex (scaled coordinates for a leaf, standard coordinates for a flipped
    leaf read at the all-ones source column).
    """

    expr: tuple
    w: int
    degrees: dict           # e mask -> diagram degree
    top: dict               # e mask -> {e' mask: Frac}
    violations: list        # (e, e') with a nonzero entry off the dominance order
    zero_diagonal: list


def leaf_data(x: tuple, w: int, subs: list, choices: ChoiceData, flipped: bool,
              leaves: list | None = None) -> LeafData:
    W = choices.system
    ev = evaluator(W.realization)
    masks = [f.mask for f in subs]
    by_mask = {f.mask: f for f in subs}
    top_all = {}
    degrees = {}
    viol, zdiag = [], []
    if leaves is None:
        leaves = [light_leaf(x, e, choices) for e in subs]
    if not flipped:
        mats = ev.eval_many([d for d, _ in leaves], columns=masks, mode="scaled")
    for i, e in enumerate(subs):
        d, rex = leaves[i]
        degrees[e.mask] = d.degree()
        topmask = (1 << len(rex)) - 1
        if flipped:
            M = ev.eval(d.flip(), columns=[topmask], mode="std")
            row = {f: v for f, v in M.cols.get(topmask, {}).items() if f in by_mask}
        else:
            M = mats[i]
            row = {f: M.cols[f][topmask] for f in masks if topmask in M.cols.get(f, {})}
        top_all[e.mask] = row
        if e.mask not in row or row[e.mask].is_zero():
            zdiag.append(e.mask)
        for f, v in row.items():
            if f != e.mask and not W.path_dominance_leq(by_mask[f], e):
                viol.append((e.mask, f))
    return LeafData(x, w, degrees, top_all, viol, zdiag)


@dataclass
class CensusReport:
    system: str
    max_total: int
    pairs: int = 0
    leaves: int = 0
    words: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"system": self.system, "max_total": self.max_total, "pairs": self.pairs,
                "double_leaves": self.leaves, "words": self.words,
                "failures": self.failures[:20], "ok": self.ok}


def double_leaves_census(choices: ChoiceData, max_total: int, label: str = "") -> CensusReport:
    """Block triangularity, invertible diagonal and graded rank for every pair
    of expressions with total length at most max_total.

    Every generator matrix preserves endpoints, so an evaluated double leaf
    through w has entry (f', e') = sum_g A_f[f', g] K_g B_e[g, e'] with g
    running over subsequences of the rex of w expressing end(e').  Positions
    with end(e') = w see only the all-ones g; positions with end(e') < w are
    unconstrained and the rest vanish.  The family is therefore triangular
    with invertible diagonal exactly when the top rows of the leaves and of
    the flipped leaves are dominance triangular with nonzero diagonal, which
    is what is evaluated here, word by word.
    """
    from itertools import product as iproduct
    W = choices.system
    n = W.realization.rank
    rep = CensusReport(label, max_total)
    words = [w for L in range(max_total + 1) for w in iproduct(range(n), repeat=L)]
    rep.words = len(words)
    lengths = W.lengths
    # per word: endpoint -> (generating function of leaf degrees)
    gen_x: dict = {}
    gen_y: dict = {}
    hecke_of = {x: product_of_kl_gens(W, x) for x in words}
    omega_of = {x: omega(h) for x, h in hecke_of.items()}
    for x in words:
        budget = max_total - len(x)
        groups: dict = {}
        for e in W.all_subexpressions(x):
            if lengths[e.endpoint] <= budget:
                groups.setdefault(e.endpoint, []).append(e)
        gx, gy = {}, {}
        for w, subs in groups.items():
            leaves = [light_leaf(x, e, choices) for e in subs]
            for flipped, store in ((False, gx), (True, gy)):
                data = leaf_data(x, w, subs, choices, flipped, leaves)
                for e in subs:
                    if data.degrees[e.mask] != e.defect:
                        rep.failures.append(("degree", x, e.mask, flipped))
                if data.violations:
                    rep.failures.append(("triangularity", x, w, flipped, data.violations[:3]))
                if data.zero_diagonal:
                    rep.failures.append(("diagonal", x, w, flipped, data.zero_diagonal[:3]))
                lp: dict = {}
                for e in subs:
                    k = data.degrees[e.mask]
                    lp[k] = lp.get(k, 0) + 1
                store[w] = lp
        gen_x[x], gen_y[x] = gx, gy
    for x in words:
        for y in words:
            if len(x) + len(y) > max_total:
                continue
            rep.pairs += 1
            got: dict = {}
            for w, lx in gen_x[x].items():
                ly = gen_y[y].get(w)
                if not ly or lengths[w] > min(len(x), len(y)):
                    continue
                for a, ca in lx.items():
                    for b, cb in ly.items():
                        got[a + b] = got.get(a + b, 0) + ca * cb
                        rep.leaves += ca * cb
            got_lp = LaurentPoly({k: v for k, v in got.items() if v})
            expected = epsilon(multiply(hecke_of[y], omega_of[x]))
            if got_lp != expected:
                rep.failures.append(("graded rank", x, y, str(got_lp), str(expected)))
    return rep
