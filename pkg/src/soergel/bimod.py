"""Bott-Samelson bimodules on explicit tensor bases.

An element of B_x = R (x)_{R^s1} R (x) ... (x) R is stored as a sum of
c_b * (1 (x) d^b1 (x) ... (x) d^bd) with c_b in R and d = w_s the fixed
element with Demazure image 1.  Pure tensors are brought to this form from
right to left using f = d_s(f) d + (f - d_s(f) d), both parts s-invariant.

This module is the independent oracle for the cached localization matrices
and the place where the 2m-valent vertex is solved for.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct

from flint import fmpq

from .coxeter import CoxeterSystem
from .diagram import DiagramWord, Slice, alternating
from .errors import BoundaryMismatch, NonUniqueSolution, NoSolution
from .ring import Frac, Poly, Realization, Scalar, _cancel


# --------------------------------------------------------------------------
# Tensor elements
# --------------------------------------------------------------------------

def normalize_pure(real: Realization, expr: tuple, slots: list) -> dict:
    """Normal form of the pure tensor slots[0] (x) ... (x) slots[d] (raw polys)."""
    d = len(expr)
    ring = real.ring
    branches = {(): slots[d]}
    for k in range(d, 0, -1):
        s = expr[k - 1]
        left = slots[k - 1]
        delta = real.delta_raw[s]
        new: dict = {}
        for suffix, q in branches.items():
            if q.is_zero():
                continue
            g = real.demazure_raw(s, q)
            h = ring.reduce(q - g * delta) if not g.is_zero() else q
            if not g.is_zero():
                key = (1,) + suffix
                val = ring.reduce(left * g)
                new[key] = new[key] + val if key in new else val
            if not h.is_zero():
                key = (0,) + suffix
                val = ring.reduce(left * h)
                new[key] = new[key] + val if key in new else val
        branches = new
    return {k: v for k, v in branches.items() if not v.is_zero()}


@dataclass
class TensorElt:
    """Element of a Bott-Samelson bimodule in the normal-form basis."""

    real: Realization = field(repr=False)
    expr: tuple
    terms: dict = field(default_factory=dict)   # label tuple -> raw poly

    @staticmethod
    def one_tensor(real: Realization, expr) -> "TensorElt":
        expr = tuple(expr)
        return TensorElt(real, expr, {(0,) * len(expr): real.ring.one_raw})

    @staticmethod
    def basis(real: Realization, expr, label) -> "TensorElt":
        return TensorElt(real, tuple(expr), {tuple(label): real.ring.one_raw})

    @staticmethod
    def pure(real: Realization, expr, slots) -> "TensorElt":
        raw = [s.p if isinstance(s, Poly) else s for s in slots]
        return TensorElt(real, tuple(expr), normalize_pure(real, tuple(expr), raw))

    def slots_of(self, label) -> list:
        ring = self.real.ring
        return [ring.one_raw] + [self.real.delta_raw[s] if b else ring.one_raw
                                 for s, b in zip(self.expr, label)]

    def __add__(self, other):
        if other.expr != self.expr:
            raise BoundaryMismatch("adding tensors of different bimodules")
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return TensorElt(self.real, self.expr, {k: v for k, v in out.items() if not v.is_zero()})

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, f) -> "TensorElt":
        """Left multiplication by a polynomial or scalar."""
        ring = self.real.ring
        raw = f.p if isinstance(f, Poly) else ring.scalar_raw(f)
        return TensorElt(self.real, self.expr,
                         {k: ring.reduce(v * raw) for k, v in self.terms.items()
                          if not ring.reduce(v * raw).is_zero()})

    def __eq__(self, other):
        if not isinstance(other, TensorElt) or other.expr != self.expr:
            return False
        diff = self - other
        return not diff.terms

    def coefficient(self, label) -> Poly:
        return Poly(self.real.ring, self.terms.get(tuple(label), self.real.ring.zero_raw))

    def _accumulate(self, expr, pure_list) -> "TensorElt":
        out: dict = {}
        for slots in pure_list:
            for k, v in normalize_pure(self.real, expr, slots).items():
                out[k] = out[k] + v if k in out else v
        return TensorElt(self.real, expr, {k: v for k, v in out.items() if not v.is_zero()})


def right_mul(v: TensorElt, f) -> TensorElt:
    """Right multiplication by a polynomial, renormalized."""
    ring = v.real.ring
    raw = f.p if isinstance(f, Poly) else ring.scalar_raw(f)
    pures = []
    for label, c in v.terms.items():
        slots = v.slots_of(label)
        slots[0] = c
        slots[-1] = ring.reduce(slots[-1] * raw)
        pures.append(slots)
    return v._accumulate(v.expr, pures)


def apply_generator(sl: Slice, v: TensorElt, vertices=None) -> TensorElt:
    """Image of a tensor element under the bimodule map of one slice."""
    real = v.real
    ring = real.ring
    target = sl.apply(v.expr, real)
    k, s, p = sl.kind, sl.color, sl.pos
    pures = []
    for label, c in v.terms.items():
        slots = v.slots_of(label)
        slots[0] = c
        if k == "enddot":
            pures.append(slots[:p] + [ring.reduce(slots[p] * slots[p + 1])] + slots[p + 2:])
        elif k == "startdot":
            q = slots[p]
            d = real.delta_raw[s]
            pures.append(slots[:p] + [ring.reduce(q * d), ring.one_raw] + slots[p + 1:])
            pures.append(slots[:p] + [-q, real.reflect_raw(s, d)] + slots[p + 1:])
        elif k == "merge":
            mid = ring.reduce(slots[p] * real.demazure_raw(s, slots[p + 1]))
            pures.append(slots[:p] + [mid] + slots[p + 2:])
        elif k == "split":
            pures.append(slots[:p + 1] + [ring.one_raw] + slots[p + 1:])
        elif k == "cap":
            mid = ring.reduce(slots[p] * real.demazure_raw(s, slots[p + 1]) * slots[p + 2])
            pures.append(slots[:p] + [mid] + slots[p + 3:])
        elif k == "cup":
            q = slots[p]
            d = real.delta_raw[s]
            one = ring.one_raw
            pures.append(slots[:p] + [ring.reduce(q * d), one, one] + slots[p + 1:])
            pures.append(slots[:p] + [-q, one, real.reflect_raw(s, d)] + slots[p + 1:])
        elif k == "box":
            slots[p] = ring.reduce(slots[p] * sl.poly.p)
            pures.append(slots)
        elif k == "braid":
            t = sl.color2
            m = real.coxeter[s][t]
            V = (vertices or vertex_cache(real)).get(s, t)
            src = alternating(s, t, m)
            local = normalize_pure(real, src, [ring.one_raw] + slots[p + 1:p + m + 1])
            for b, cb in local.items():
                for cl, entry in V.column(b).items():
                    coef = ring.reduce(slots[p] * cb * entry)
                    if coef.is_zero():
                        continue
                    new_local = [real.delta_raw[col] if bit else ring.one_raw
                                 for col, bit in zip(alternating(t, s, m), cl)]
                    pures.append(slots[:p] + [coef] + new_local + slots[p + m + 1:])
        else:  # pragma: no cover
            raise ValueError(k)
    return v._accumulate(target, pures)


def apply_diagram(d: DiagramWord, v: TensorElt, vertices=None) -> TensorElt:
    if d.bottom != v.expr:
        raise BoundaryMismatch("diagram bottom does not match the tensor's bimodule")
    for sl in d.slices:
        v = apply_generator(sl, v, vertices)
    return v


def to_standard_coords(v: TensorElt, system: CoxeterSystem | None = None) -> dict:
    """Coordinates in the localized standard summands, indexed by bitmask e:
    f0 * v1(f1) * ... * vd(fd) with v_i the stroll of e."""
    real = v.real
    ring = real.ring
    W = system or default_system(real)
    d = len(v.expr)
    out = {}
    for mask in range(1 << d):
        # stroll images
        x = 0
        acc_terms = {}
        strolls = []
        for i, s in enumerate(v.expr):
            if mask >> i & 1:
                x = W.right_mul_index(x, s)
            strolls.append(x)
        total = ring.zero_raw
        for label, c in v.terms.items():
            val = c
            for i, (s, b) in enumerate(zip(v.expr, label)):
                if b:
                    val = ring.reduce(val * real.compose_raw(real.delta_raw[s], W.images(strolls[i])))
            total = total + val
        if not total.is_zero():
            out[mask] = Frac(ring, total)
    return out


def default_system(real: Realization) -> CoxeterSystem:
    W = real.__dict__.get("_system")
    if W is None:
        W = CoxeterSystem(real)
        real.__dict__["_system"] = W
    return W


# --------------------------------------------------------------------------
# The 2m-valent vertex
# --------------------------------------------------------------------------

def right_mul_matrix(real: Realization, expr: tuple, u: int) -> dict:
    """A[b][b'] : (1 (x) d^b) * w_u = sum_b' A[b][b'] (1 (x) d^b')."""
    ring = real.ring
    out = {}
    for b in iproduct((0, 1), repeat=len(expr)):
        slots = [ring.one_raw] + [real.delta_raw[s] if bit else ring.one_raw for s, bit in zip(expr, b)]
        slots[-1] = ring.reduce(slots[-1] * ring.vars[u])
        out[b] = normalize_pure(real, expr, slots)
    return out


def _monomials(n: int, deg: int):
    if deg < 0:
        return []
    if n == 1:
        return [(deg,)]
    out = []
    for k in range(deg, -1, -1):
        for rest in _monomials(n - 1, deg - k):
            out.append((k,) + rest)
    return out


RHS = -1  # column key of the constant term


class _SparseSystem:
    """Incremental sparse row echelon form over Q."""

    def __init__(self):
        self.pivots: dict = {}   # pivot column -> row (dict col -> fmpq), pivot entry 1

    def reduce(self, row: dict) -> dict:
        # pivot rows are fully reduced, so a single pass suffices
        row = {k: v for k, v in row.items() if v != 0}
        for col in [k for k in row if k in self.pivots]:
            c = row.get(col)
            if c is None:
                continue
            for k, v in self.pivots[col].items():
                nv = row.get(k, 0) - c * v
                if nv == 0:
                    row.pop(k, None)
                else:
                    row[k] = nv
        return row

    def add(self, row: dict) -> bool:
        """Add an equation sum row[col] x_col = -row[RHS]; False if inconsistent."""
        row = self.reduce(row)
        cols = [k for k in row if k != RHS]
        if not cols:
            return RHS not in row
        piv = min(cols)
        c = row[piv]
        row = {k: v / c for k, v in row.items()}
        # keep existing pivot rows reduced with respect to the new pivot
        for pc, prow in self.pivots.items():
            if piv in prow:
                f = prow[piv]
                for k, v in row.items():
                    nv = prow.get(k, 0) - f * v
                    if nv == 0:
                        prow.pop(k, None)
                    else:
                        prow[k] = nv
        self.pivots[piv] = row
        return True

    def rank(self) -> int:
        return len(self.pivots)

    def solution(self, ncols: int) -> dict:
        """Particular solution with free variables set to zero."""
        out = {}
        for col, row in self.pivots.items():
            out[col] = -row.get(RHS, fmpq(0))
        return out


@dataclass
class VertexMatrix:
    """Degree zero bimodule map between the two alternating Bott-Samelsons."""

    real: Realization = field(repr=False)
    s: int
    t: int
    m: int
    entries: dict          # (c, b) -> raw poly: coefficient of basis c in V(basis b)
    nullity: int           # dimension over the field of the homogeneous solution space
    num_unknowns: int

    def column(self, b) -> dict:
        cache = self.__dict__.setdefault("_cols", {})
        col = cache.get(b)
        if col is None:
            col = {c: v for (c, bb), v in self.entries.items() if bb == b}
            cache[b] = col
        return col

    def source(self) -> tuple:
        return alternating(self.s, self.t, self.m)

    def target(self) -> tuple:
        return alternating(self.t, self.s, self.m)

    def apply(self, v: TensorElt) -> TensorElt:
        sl = Slice("braid", self.s, 0, self.t)
        return apply_generator(sl, v, _SingleVertex(self))

    def to_json(self) -> dict:
        real = self.real
        return {"colors": [real.colors[self.s], real.colors[self.t]], "m": self.m,
                "source": [real.colors[c] for c in self.source()],
                "target": [real.colors[c] for c in self.target()],
                "entries": [{"source_label": list(b), "target_label": list(c),
                             "poly": Poly(real.ring, v).to_json()}
                            for (c, b), v in sorted(self.entries.items())]}


class _SingleVertex:
    def __init__(self, V):
        self.V = V

    def get(self, s, t):
        return self.V


def solve_braid_vertex(real: Realization, s, t) -> VertexMatrix:
    """Solve P A_X(u) = A_Y(u) P for all variables u with P(1) = 1.

    Unknowns are the coefficients of P[c][b], homogeneous of polynomial degree
    |b| - |c|.  Over Q(sqrt d) each unknown is split into rational and
    irrational parts so that elimination runs over Q.
    """
    s = real.color_index(s)
    t = real.color_index(t)
    m = real.coxeter[s][t]
    if m == 0:
        raise NoSolution("no vertex for m = infinity")
    ring = real.ring
    n = real.rank
    X = alternating(s, t, m)
    Y = alternating(t, s, m)
    labels = list(iproduct((0, 1), repeat=m))
    # unknown indexing
    unknowns = {}
    for c in labels:
        for b in labels:
            deg = sum(b) - sum(c)
            for mono in _monomials(n, deg):
                unknowns[(c, b, mono)] = len(unknowns)
    nu = len(unknowns)
    parts = 2 if ring.d else 1

    def var(key, part):
        return unknowns[key] * parts + part

    AX = [right_mul_matrix(real, X, u) for u in range(n)]
    AY = [right_mul_matrix(real, Y, u) for u in range(n)]

    def terms(raw):
        return ring.terms_raw(raw)

    def add_product(eq, sign, c, b, poly_terms):
        """eq += sign * P[c][b] * poly (coefficient dict keyed by monomial)."""
        deg = sum(b) - sum(c)
        if deg < 0:
            return
        for mono in _monomials(n, deg):
            key = (c, b, mono)
            for pm, coef in poly_terms.items():
                tot = tuple(a + bb for a, bb in zip(mono, pm))
                row = eq.setdefault(tot, {})
                coef = coef * sign
                # (x0 + x1 r) (a + b r) = (a x0 + b d x1) + (b x0 + a x1) r
                if parts == 1:
                    col = var(key, 0)
                    row[(0, col)] = row.get((0, col), 0) + coef.a
                else:
                    c0, c1 = var(key, 0), var(key, 1)
                    a, bb_ = coef.a, coef.b
                    for (prt, col, val) in ((0, c0, a), (0, c1, bb_ * ring.d),
                                            (1, c0, bb_), (1, c1, a)):
                        if val != 0:
                            row[(prt, col)] = row.get((prt, col), 0) + val

    system = _SparseSystem()
    consistent = True
    for u in range(n):
        ax, ay = AX[u], AY[u]
        for cp in labels:
            for b in labels:
                eq: dict = {}
                # (P AX)[cp][b] = sum_b' P[cp][b'] AX[b'][b] where AX[b] maps to b'
                for bprime, raw in ax[b].items():
                    add_product(eq, 1, cp, bprime, terms(raw))
                # (AY P)[cp][b] = sum_c AY[c][cp] P[c][b]
                for c in labels:
                    raw = ay[c].get(cp)
                    if raw is not None:
                        add_product(eq, -1, c, b, terms(raw))
                for mono, row in eq.items():
                    for prt in range(parts):
                        r = {col: v for (pp, col), v in row.items() if pp == prt and v != 0}
                        if r:
                            consistent &= system.add(r)
    homogeneous_rank = system.rank()
    nullity_q = nu * parts - homogeneous_rank
    nullity = nullity_q // parts
    # normalization P[0][0] = 1
    zero = (0,) * m
    key = (zero, zero, (0,) * n)
    consistent &= system.add({var(key, 0): fmpq(1), RHS: fmpq(-1)})
    if parts == 2:
        consistent &= system.add({var(key, 1): fmpq(1)})
    if not consistent:
        raise NoSolution(f"vertex system for ({real.colors[s]},{real.colors[t]}) is inconsistent")
    if system.rank() != nu * parts:
        raise NonUniqueSolution(
            f"vertex for ({real.colors[s]},{real.colors[t]}) has a {nu * parts - system.rank()}-dim family")
    sol = system.solution(nu * parts)
    entries = {}
    for (c, b, mono), idx in unknowns.items():
        if parts == 1:
            val = Scalar(sol.get(idx, fmpq(0)))
        else:
            val = Scalar(sol.get(2 * idx, fmpq(0)), sol.get(2 * idx + 1, fmpq(0)), ring.d)
        if val:
            mono_raw = ring.one_raw
            for vv, e in zip(ring.vars, mono):
                if e:
                    mono_raw = mono_raw * vv ** e
            term = ring.reduce(ring.scalar_raw(val) * mono_raw)
            entries[(c, b)] = entries[(c, b)] + term if (c, b) in entries else term
    return VertexMatrix(real, s, t, m, entries, nullity, nu)


class VertexCache:
    """Write-once cache of solved vertices for one realization."""

    def __init__(self, real: Realization):
        self.real = real
        self._cache: dict = {}

    def get(self, s: int, t: int) -> VertexMatrix:
        key = (s, t)
        V = self._cache.get(key)
        if V is None:
            V = solve_braid_vertex(self.real, s, t)
            self._cache[key] = V
        return V

    def precompute(self):
        n = self.real.rank
        for s in range(n):
            for t in range(n):
                if s != t and self.real.coxeter[s][t]:
                    self.get(s, t)


def vertex_cache(real: Realization) -> VertexCache:
    vc = real.__dict__.get("_vertices")
    if vc is None:
        vc = VertexCache(real)
        real.__dict__["_vertices"] = vc
    return vc


# --------------------------------------------------------------------------
# Localized vertex
# --------------------------------------------------------------------------

def _mask_bits(mask: int, d: int) -> tuple:
    return tuple(mask >> i & 1 for i in range(d))


def coord_matrix(real: Realization, expr: tuple, system=None) -> dict:
    """C[e][b]: coordinate at subsequence e of the basis tensor b."""
    W = system or default_system(real)
    ring = real.ring
    d = len(expr)
    out = {}
    for e in range(1 << d):
        x = 0
        col = {}
        vals = []
        for i, s in enumerate(expr):
            if e >> i & 1:
                x = W.right_mul_index(x, s)
            vals.append(real.compose_raw(real.delta_raw[s], W.images(x)))
        for b in iproduct((0, 1), repeat=d):
            v = ring.one_raw
            for bit, val in zip(b, vals):
                if bit:
                    v = ring.reduce(v * val)
            col[b] = v
        out[e] = col
    return out


def coord_matrix_inverse(real: Realization, expr: tuple, system=None) -> dict:
    """Cinv[b][e] = prod_i Dinv_i[b_i][e_i] with D_i = [[1, u(d)], [1, u(s d)]]."""
    W = system or default_system(real)
    ring = real.ring
    d = len(expr)
    out: dict = {b: {} for b in iproduct((0, 1), repeat=d)}
    for e in range(1 << d):
        x = 0
        factors = []
        for i, s in enumerate(expr):
            imgs = W.images(x)
            ud = real.compose_raw(real.delta_raw[s], imgs)
            usd = real.compose_raw(real.reflect_raw(s, real.delta_raw[s]), imgs)
            det = Frac(ring, usd - ud)
            inv_det = Frac(ring, ring.one_raw) / det
            Dinv = {(0, 0): inv_det * Frac(ring, usd), (0, 1): inv_det * Frac(ring, -ud),
                    (1, 0): -inv_det, (1, 1): inv_det}
            factors.append(Dinv)
            if e >> i & 1:
                x = W.right_mul_index(x, s)
        ebits = _mask_bits(e, d)
        for b in out:
            val = Frac(ring, ring.one_raw)
            for i in range(d):
                val = val * factors[i][(b[i], ebits[i])]
            if not val.is_zero():
                out[b][e] = val
    return out


def localized_vertex(V: VertexMatrix, system=None) -> dict:
    """Standard-coordinate matrix of the vertex: {e (source mask): {f: Frac}}."""
    real = V.real
    ring = real.ring
    X, Y = V.source(), V.target()
    Cinv = coord_matrix_inverse(real, X, system)
    CY = coord_matrix(real, Y, system)
    m = V.m
    labels = list(iproduct((0, 1), repeat=m))
    # T[c][e] = sum_b P[c][b] Cinv[b][e]
    T = {c: {} for c in labels}
    for (c, b), raw in V.entries.items():
        p = Frac(ring, raw)
        for e, val in Cinv[b].items():
            prod = p * val
            cur = T[c].get(e)
            T[c][e] = prod if cur is None else cur + prod
    out: dict = {}
    for e in range(1 << m):
        col = {}
        for f in range(1 << m):
            acc = None
            row = CY[f]
            for c in labels:
                tv = T[c].get(e)
                if tv is None or tv.is_zero():
                    continue
                term = tv * Frac(ring, row[c])
                acc = term if acc is None else acc + term
            if acc is not None and not acc.is_zero():
                col[f] = acc
        out[e] = col
    return out
