"""Exact coefficient fields, the polynomial ring R with its W-action, Demazure
operators, the fraction field Q and two-colored quantum numbers.

Scalars live in Q or in a single real quadratic field Q(sqrt d).  Polynomials
are python-flint ``fmpq_mpoly`` objects; for a quadratic field an extra
generator ``r`` with ``r^2 = d`` is adjoined and every product is reduced
modulo ``r^2 - d``.  The variables ``w_s`` are the basis of h* dual to the
simple coroots, so ``alpha_t = sum_s a_st w_s`` and ``d_s(w_s) = 1``.
"""
from __future__ import annotations

import ast
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from flint import fmpq, fmpq_mpoly_ctx

from .errors import (BraidRelationFailed, InternalDivisionFailure,
                     TechnicalConditionFailed, UnbalancedRealization,
                     UnsupportedCoxeterEntry, UnsupportedFieldExtension)

SUPPORTED_M = (2, 3, 4, 5, 6, 0)  # 0 encodes infinity


def _squarefree_split(n: int):
    """Return (c, d) with n = c^2 d and d squarefree."""
    c, d = 1, 1
    k = 2
    m = n
    while k * k <= m:
        while m % (k * k) == 0:
            m //= k * k
            c *= k
        k += 1
    d = m
    return c, d


# --------------------------------------------------------------------------
# Scalars
# --------------------------------------------------------------------------

class Scalar:
    """An element a + b*sqrt(d) of Q or of a real quadratic field.

    ``d == 0`` marks a rational number; sqrt(d) is the positive root.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d=0):
        self.a = a if isinstance(a, fmpq) else fmpq(a)
        self.b = b if isinstance(b, fmpq) else fmpq(b)
        self.d = d if self.b != 0 else 0

    @staticmethod
    def coerce(x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, fmpq)):
            return Scalar(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Scalar")

    def _field(self, other):
        if self.d and other.d and self.d != other.d:
            raise UnsupportedFieldExtension(
                f"mixing sqrt({self.d}) and sqrt({other.d})")
        return self.d or other.d

    def __add__(self, other):
        try:
            o = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return Scalar(self.a + o.a, self.b + o.b, self._field(o))

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.a, -self.b, self.d)

    def __sub__(self, other):
        try:
            o = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return Scalar(self.a - o.a, self.b - o.b, self._field(o))

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __mul__(self, other):
        try:
            o = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        d = self._field(o)
        return Scalar(self.a * o.a + self.b * o.b * d,
                      self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        n = self.a * self.a - self.b * self.b * self.d
        if n == 0:
            raise ZeroDivisionError("inverse of zero scalar")
        return Scalar(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        try:
            o = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return Scalar.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = Scalar(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            o = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((int(self.a.p), int(self.a.q), int(self.b.p), int(self.b.q), self.d))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def conj(self) -> "Scalar":
        return Scalar(self.a, -self.b, self.d)

    def sign(self) -> int:
        """Exact sign under the embedding with sqrt(d) > 0."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 d
        diff = self.a * self.a - self.b * self.b * self.d
        return sa if diff > 0 else sb

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d or 0)

    def is_rational(self) -> bool:
        return self.b == 0

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        a = "" if self.a == 0 else f"{self.a}"
        b = self.b
        sgn = "-" if b < 0 else ("+" if a else "")
        mag = -b if b < 0 else b
        coef = "" if mag == 1 else f"{mag}*"
        return f"{a}{sgn}{coef}sqrt({self.d})"

    def __repr__(self):
        return f"Scalar({self})"


def _sqrt_scalar(n) -> Scalar:
    if isinstance(n, Scalar):
        if not n.is_rational():
            raise UnsupportedFieldExtension("nested square roots")
        n = n.a
    n = fmpq(n)
    if n < 0:
        raise UnsupportedFieldExtension("square root of a negative number")
    # sqrt(p/q) = sqrt(p q)/q
    num = int(n.p) * int(n.q)
    c, d = _squarefree_split(num)
    if d == 1:
        return Scalar(fmpq(c, int(n.q)))
    return Scalar(0, fmpq(c, int(n.q)), d)


PHI = Scalar(fmpq(1, 2), fmpq(1, 2), 5)


def _eval_ast(node, names):
    if isinstance(node, ast.Expression):
        return _eval_ast(node.body, names)
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return names["__const__"](node.value)
    if isinstance(node, ast.Name):
        if node.id not in names:
            raise ValueError(f"unknown name {node.id!r}")
        return names[node.id]
    if isinstance(node, ast.UnaryOp):
        v = _eval_ast(node.operand, names)
        if isinstance(node.op, ast.USub):
            return -v
        if isinstance(node.op, ast.UAdd):
            return v
    if isinstance(node, ast.BinOp):
        lhs = _eval_ast(node.left, names)
        if isinstance(node.op, ast.Pow):
            if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                raise ValueError("exponents must be integer literals")
            return lhs ** node.right.value
        rhs = _eval_ast(node.right, names)
        if isinstance(node.op, ast.Add):
            return lhs + rhs
        if isinstance(node.op, ast.Sub):
            return lhs - rhs
        if isinstance(node.op, ast.Mult):
            return lhs * rhs
        if isinstance(node.op, ast.Div):
            return lhs / rhs
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "sqrt":
        if len(node.args) != 1:
            raise ValueError("sqrt takes one argument")
        arg = _eval_ast(node.args[0], names)
        if isinstance(arg, Poly):
            arg = arg.constant_value()
        s = _sqrt_scalar(arg)
        return names["__lift__"](s)
    raise ValueError(f"unsupported expression: {ast.dump(node)}")


def parse_scalar(text) -> Scalar:
    """Parse strings like "-1", "-phi", "1/2+3*sqrt(5)", "-sqrt(2)"."""
    if isinstance(text, (int, fmpq)):
        return Scalar(text)
    if isinstance(text, Scalar):
        return text
    names = {"phi": PHI, "__const__": Scalar, "__lift__": lambda s: s}
    return Scalar.coerce(_eval_ast(ast.parse(str(text).strip().replace("^", "**"), mode="eval"), names))


# --------------------------------------------------------------------------
# Polynomials
# --------------------------------------------------------------------------

class PolyRing:
    """The ring R = k[w_1..w_n] over Q or Q(sqrt d)."""

    def __init__(self, names, d: int = 0):
        self.names = tuple(names)
        self.n = len(self.names)
        self.d = int(d)
        gens = [f"w{i}" for i in range(self.n)]
        if self.d:
            gens = ["r"] + gens
        self.ctx = fmpq_mpoly_ctx.get(tuple(gens), "degrevlex")
        g = self.ctx.gens()
        if self.d:
            self.r = g[0]
            self.vars = tuple(g[1:])
            self.rel = self.r ** 2 - self.d
            self._off = 1
        else:
            self.r = None
            self.vars = tuple(g)
            self.rel = None
            self._off = 0
        self.zero_raw = self.ctx.from_dict({})
        self.one_raw = self.zero_raw + 1
        # denominator factor registry for Frac
        self._factor_ids: dict[str, int] = {}
        self.factors: list = []       # raw normalized factors
        self._factor_conj: list = []
        self._factor_norm: list = []
        self._pow_cache: dict = {}
        self._den_cache: dict = {(): self.one_raw}

    # raw helpers ---------------------------------------------------------
    def reduce(self, p):
        if self.d and p.degrees()[0] >= 2:
            p = divmod(p, self.rel)[1]
        return p

    def wdeg(self, p) -> int:
        """Total degree in the w variables (ignores the sqrt generator)."""
        if p.is_zero():
            return -1
        if not self.d:
            return p.total_degree()
        return max(sum(e[1:]) for e in p.monoms())

    def scalar_raw(self, s) -> object:
        s = Scalar.coerce(s)
        if s.b == 0:
            return self.zero_raw + s.a
        if s.d != self.d:
            raise UnsupportedFieldExtension(
                f"scalar in Q(sqrt {s.d}) used in a ring over Q(sqrt {self.d})" if self.d
                else f"scalar {s} is irrational but the ring is over Q")
        return self.r * s.b + s.a

    def conj_raw(self, p):
        if not self.d:
            return p
        return p.compose(-self.r, *self.vars)

    def constant_scalar(self, p) -> Scalar:
        """Scalar value of a constant raw polynomial."""
        out = Scalar(0)
        for exps, c in zip(p.monoms(), p.coeffs()):
            if any(exps[self._off:]):
                raise ValueError("polynomial is not constant")
            out = out + (Scalar(0, c, self.d) if (self.d and exps[0]) else Scalar(c))
        return out

    def terms_raw(self, p) -> dict:
        """Map monomial exponent tuple (in the w variables) to a Scalar."""
        out: dict = {}
        for exps, c in zip(p.monoms(), p.coeffs()):
            key = tuple(exps[self._off:])
            val = Scalar(0, c, self.d) if (self.d and exps[0]) else Scalar(c)
            out[key] = out[key] + val if key in out else val
        return {k: v for k, v in out.items() if v}

    def from_terms(self, terms: dict) -> "Poly":
        p = self.zero_raw
        for exps, c in terms.items():
            mono = self.one_raw
            for v, e in zip(self.vars, exps):
                if e:
                    mono = mono * v ** e
            p = p + self.scalar_raw(c) * mono
        return Poly(self, self.reduce(p))

    def normalize_raw(self, p):
        """Return (unit, q) with p = unit*q, q having leading coefficient 1."""
        terms = self.terms_raw(p)
        if not terms:
            raise ZeroDivisionError("zero polynomial")
        lead = max(terms, key=lambda e: (sum(e), e))
        c = terms[lead]
        q = self.reduce(p * self.scalar_raw(c.inverse()))
        return c, q

    def factor_id(self, q) -> int:
        """Register a normalized factor and return its id."""
        key = str(q)
        fid = self._factor_ids.get(key)
        if fid is None:
            fid = len(self.factors)
            self._factor_ids[key] = fid
            self.factors.append(q)
            if self.d:
                cq = self.conj_raw(q)
                self._factor_conj.append(cq)
                self._factor_norm.append(self.reduce(q * cq))
            else:
                self._factor_conj.append(None)
                self._factor_norm.append(None)
        return fid

    def factor_pow(self, fid: int, k: int):
        key = (fid, k)
        out = self._pow_cache.get(key)
        if out is None:
            out = self.reduce(self.factors[fid] ** k)
            self._pow_cache[key] = out
        return out

    def den_raw(self, den: tuple):
        out = self._den_cache.get(den)
        if out is None:
            out = self.one_raw
            for fid, k in den:
                out = self.reduce(out * self.factor_pow(fid, k))
            self._den_cache[den] = out
        return out

    def try_divide(self, p, fid: int):
        """Exact quotient p / factor or None."""
        f = self.factors[fid]
        if not self.d:
            q, rem = divmod(p, f)
            return q if rem.is_zero() else None
        t = self.reduce(p * self._factor_conj[fid])
        q, rem = divmod(t, self._factor_norm[fid])
        return q if rem.is_zero() else None

    def exact_div(self, p, q):
        """Exact division of raw polynomials; raises on a nonzero remainder."""
        if not self.d:
            quo, rem = divmod(p, q)
        else:
            cq = self.conj_raw(q)
            quo, rem = divmod(self.reduce(p * cq), self.reduce(q * cq))
        if not rem.is_zero():
            raise InternalDivisionFailure(f"{p} is not divisible by {q}")
        return quo

    def factorize(self, p):
        """Return (unit raw, den-style tuple of (fid, exp)) with p = unit * prod."""
        if p.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.wdeg(p) == 0:
            return p, ()
        parts = []
        if not self.d or p.degrees()[0] == 0:
            c, facs = p.factor()
            unit = self.zero_raw + c
            for f, e in facs:
                if self.wdeg(f) == 0:
                    unit = unit * f ** e
                    continue
                u, q = self.normalize_raw(f)
                unit = self.reduce(unit * self.scalar_raw(u ** e))
                parts.append((self.factor_id(q), e))
        else:
            # peel off already registered factors (roots), keep the rest whole
            for fid in range(len(self.factors)):
                if self.wdeg(p) == 0:
                    break
                while True:
                    q = self.try_divide(p, fid)
                    if q is None:
                        break
                    p = q
                    parts.append((fid, 1))
            if self.wdeg(p) == 0:
                unit = p
            else:
                u, q = self.normalize_raw(p)
                unit = self.scalar_raw(u)
                parts.append((self.factor_id(q), 1))
        merged: dict = {}
        for fid, e in parts:
            merged[fid] = merged.get(fid, 0) + e
        return unit, tuple(sorted(merged.items()))

    # public constructors -------------------------------------------------
    def gen(self, i: int) -> "Poly":
        return Poly(self, self.vars[i])

    def const(self, c) -> "Poly":
        return Poly(self, self.scalar_raw(c))

    def zero(self) -> "Poly":
        return Poly(self, self.zero_raw)

    def one(self) -> "Poly":
        return Poly(self, self.one_raw)


class Poly:
    """Polynomial in R; graded degree is twice the total degree."""

    __slots__ = ("ring", "p")

    def __init__(self, ring: PolyRing, p):
        self.ring = ring
        self.p = p

    def _lift(self, other):
        if isinstance(other, Poly):
            return other.p
        if isinstance(other, (int, fmpq, Scalar)):
            return self.ring.scalar_raw(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Poly(self.ring, self.p + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Poly(self.ring, self.p - o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Poly(self.ring, o - self.p)

    def __neg__(self):
        return Poly(self.ring, -self.p)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Poly(self.ring, self.ring.reduce(self.p * o))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return Poly(self.ring, self.ring.reduce(self.p ** k))

    def __truediv__(self, other):
        if isinstance(other, Poly):
            if other.total_degree() == 0:
                other = other.constant_value()
            else:
                return Frac.quotient(self, other)
        return self * Scalar.coerce(other).inverse()

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.p == o

    def __hash__(self):
        return hash(str(self.p))

    def __bool__(self):
        return not self.p.is_zero()

    def is_zero(self) -> bool:
        return self.p.is_zero()

    def total_degree(self) -> int:
        return self.ring.wdeg(self.p)

    def degree(self) -> int:
        """Graded degree (h* sits in degree 2)."""
        return 2 * self.total_degree()

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms()}
        return len(degs) <= 1

    def terms(self) -> dict:
        return self.ring.terms_raw(self.p)

    def constant_value(self) -> Scalar:
        return self.ring.constant_scalar(self.p)

    def conj(self) -> "Poly":
        return Poly(self.ring, self.ring.conj_raw(self.p))

    def to_json(self) -> list:
        """Sparse monomial map: list of [exponents, coefficient string]."""
        return [[list(e), str(c)] for e, c in sorted(self.terms().items())]

    def __str__(self):
        terms = self.terms()
        if not terms:
            return "0"
        parts = []
        for exps in sorted(terms, key=lambda e: (-sum(e), tuple(-x for x in e))):
            c = terms[exps]
            mono = "*".join(
                f"w_{self.ring.names[i]}" + (f"^{e}" if e > 1 else "")
                for i, e in enumerate(exps) if e)
            cs = str(c)
            if not c.is_rational():
                cs = f"({cs})"
            if not mono:
                parts.append(cs)
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


# --------------------------------------------------------------------------
# Fractions with factored denominators
# --------------------------------------------------------------------------

class Frac:
    """Element of the fraction field Q of R.

    The denominator is kept as a product of registered normalized factors;
    equality is decided by cross-multiplication.
    """

    __slots__ = ("ring", "num", "den")

    def __init__(self, ring: PolyRing, num, den: tuple = ()):
        self.ring = ring
        self.num = num
        self.den = den if not num.is_zero() else ()

    @staticmethod
    def from_poly(p: Poly) -> "Frac":
        return Frac(p.ring, p.p)

    @staticmethod
    def quotient(a: Poly, b: Poly) -> "Frac":
        ring = a.ring
        unit, den = ring.factorize(b.p)
        num = ring.exact_div(a.p, unit)
        return _cancel(ring, num, den)

    def denominator(self) -> Poly:
        return Poly(self.ring, self.ring.den_raw(self.den))

    def numerator(self) -> Poly:
        return Poly(self.ring, self.num)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def _coerce(self, other):
        if isinstance(other, Frac):
            return other
        if isinstance(other, Poly):
            return Frac(self.ring, other.p)
        if isinstance(other, (int, fmpq, Scalar)):
            return Frac(self.ring, self.ring.scalar_raw(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return frac_add(self, o)

    __radd__ = __add__

    def __neg__(self):
        return Frac(self.ring, -self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return frac_add(self, -o)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return frac_mul(self, o)

    __rmul__ = __mul__

    def inverse(self) -> "Frac":
        ring = self.ring
        unit, fden = ring.factorize(self.num)
        num = ring.reduce(ring.den_raw(self.den) * ring.scalar_raw(ring.constant_scalar(unit).inverse()))
        return _cancel(ring, num, fden)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return frac_mul(self, o.inverse())

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return self.num == o.num
        ring = self.ring
        return ring.reduce(self.num * ring.den_raw(o.den)) == ring.reduce(o.num * ring.den_raw(self.den))

    def __hash__(self):
        raise TypeError("Frac is unhashable; equality is by cross-multiplication")

    def is_polynomial(self) -> bool:
        return not self.den

    def to_json(self) -> dict:
        return {"num": Poly(self.ring, self.num).to_json(),
                "den": self.denominator().to_json()}

    def __str__(self):
        n = str(Poly(self.ring, self.num))
        if not self.den:
            return n
        ds = []
        for fid, k in self.den:
            f = f"({Poly(self.ring, self.ring.factors[fid])})"
            ds.append(f + (f"^{k}" if k > 1 else ""))
        return f"({n})/" + "*".join(ds)

    __repr__ = __str__


def _cancel(ring: PolyRing, num, den: tuple) -> Frac:
    if not den or num.is_zero():
        return Frac(ring, num, ())
    out = []
    changed = False
    for fid, k in den:
        while k:
            q = ring.try_divide(num, fid)
            if q is None:
                break
            num = q
            k -= 1
            changed = True
        if k:
            out.append((fid, k))
    return Frac(ring, num, tuple(out) if changed else den)


def frac_mul(a: Frac, b: Frac) -> Frac:
    ring = a.ring
    if a.num.is_zero() or b.num.is_zero():
        return Frac(ring, ring.zero_raw)
    num = ring.reduce(a.num * b.num)
    if not a.den:
        if not b.den:
            return Frac(ring, num)
        return _cancel(ring, num, b.den)
    if not b.den:
        return _cancel(ring, num, a.den)
    merged = dict(a.den)
    for fid, k in b.den:
        merged[fid] = merged.get(fid, 0) + k
    return _cancel(ring, num, tuple(sorted(merged.items())))


def frac_add(a: Frac, b: Frac) -> Frac:
    ring = a.ring
    if a.num.is_zero():
        return b
    if b.num.is_zero():
        return a
    if a.den == b.den:
        num = a.num + b.num
        if not a.den:
            return Frac(ring, num)
        return _cancel(ring, num, a.den)
    da, db = dict(a.den), dict(b.den)
    lcd = dict(da)
    for fid, k in db.items():
        if k > lcd.get(fid, 0):
            lcd[fid] = k
    na, nb = a.num, b.num
    for fid, k in lcd.items():
        ea = k - da.get(fid, 0)
        if ea:
            na = na * ring.factor_pow(fid, ea)
        eb = k - db.get(fid, 0)
        if eb:
            nb = nb * ring.factor_pow(fid, eb)
    num = ring.reduce(na + nb)
    return _cancel(ring, num, tuple(sorted(lcd.items())))


# --------------------------------------------------------------------------
# Quantum numbers
# --------------------------------------------------------------------------

def quantum_number(k: int, flavor: str, at) -> object:
    """Two-colored quantum number [k]_x or [k]_y evaluated at (x, y).

    Uses [0]=0, [1]=1, [2]_x=x, [2]_y=y and [2]_x [k]_y = [k+1]_x + [k-1]_x.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    x, y = at
    zero = x * 0
    one = zero + 1
    if k == 0:
        return zero
    X = [zero, one]
    Y = [zero, one]
    for j in range(1, k):
        X.append(x * Y[j] - X[j - 1])
        Y.append(y * X[j] - Y[j - 1])
    return X[k] if flavor == "x" else Y[k]


# --------------------------------------------------------------------------
# Realizations
# --------------------------------------------------------------------------

def _mat_mul(A, B):
    n = len(A)
    return tuple(tuple(sum((A[i][k] * B[k][j] for k in range(n)), Scalar(0))
                       for j in range(n)) for i in range(n))


def _identity(n):
    return tuple(tuple(Scalar(1 if i == j else 0) for j in range(n)) for i in range(n))


@dataclass
class Realization:
    """Minimal realization with Cartan matrix a[s][t] = <alpha_s^vee, alpha_t>."""

    colors: tuple
    coxeter: tuple
    cartan: tuple
    field_d: int = 0
    balanced: bool = True
    ring: PolyRing = field(init=False, repr=False)

    def __post_init__(self):
        n = len(self.colors)
        self.ring = PolyRing(self.colors, self.field_d)
        ring = self.ring
        self.index = {c: i for i, c in enumerate(self.colors)}
        # alpha_t = sum_s a_st w_s
        self.alpha_raw = []
        for t in range(n):
            p = ring.zero_raw
            for s in range(n):
                p = p + ring.scalar_raw(self.cartan[s][t]) * ring.vars[s]
            self.alpha_raw.append(p)
        self.delta_raw = list(ring.vars)
        # substitution images of each reflection: s(w_j) = w_j - delta_sj alpha_s
        self.refl_images = []
        for s in range(n):
            imgs = list(ring.vars)
            imgs[s] = ring.vars[s] - self.alpha_raw[s]
            self.refl_images.append(tuple(imgs))
        # matrices on h* in the w-basis: column j = coordinates of s(w_j)
        self.refl_matrices = []
        for s in range(n):
            M = [[Scalar(1 if i == j else 0) for j in range(n)] for i in range(n)]
            for i in range(n):
                M[i][s] = M[i][s] - self.cartan[i][s]
            self.refl_matrices.append(tuple(tuple(r) for r in M))

    @property
    def rank(self) -> int:
        return len(self.colors)

    def color_index(self, c) -> int:
        if isinstance(c, int):
            return c
        return self.index[c]

    def m(self, s: int, t: int) -> int:
        return self.coxeter[s][t]

    def alpha(self, s) -> Poly:
        return Poly(self.ring, self.alpha_raw[self.color_index(s)])

    def delta(self, s) -> Poly:
        return Poly(self.ring, self.delta_raw[self.color_index(s)])

    def var(self, s) -> Poly:
        return self.delta(s)

    def compose_raw(self, p, images):
        ring = self.ring
        if ring.d:
            return ring.reduce(p.compose(ring.r, *images))
        return p.compose(*images)

    def reflect_raw(self, s: int, p):
        return self.compose_raw(p, self.refl_images[s])

    def demazure_raw(self, s: int, p):
        if p.is_zero():
            return p
        return self.ring.exact_div(p - self.reflect_raw(s, p), self.alpha_raw[s])

    def qnum(self, s: int, t: int, k: int, flavor: str = "x") -> Scalar:
        """[k] at x = -a_st, y = -a_ts (the sign convention used throughout)."""
        return quantum_number(k, flavor, (-self.cartan[s][t], -self.cartan[t][s]))

    def __repr__(self):
        return (f"Realization(colors={list(self.colors)}, coxeter={[list(r) for r in self.coxeter]}, "
                f"cartan={[[str(a) for a in r] for r in self.cartan]}, field_d={self.field_d})")

    def to_json(self) -> dict:
        return {"colors": list(self.colors),
                "coxeter": [list(r) for r in self.coxeter],
                "cartan": [[str(a) for a in r] for r in self.cartan],
                "field": "Q" if not self.field_d else {"Qsqrt": self.field_d}}


def _check_technical(colors, coxeter, cartan):
    n = len(colors)
    balanced = True
    for s in range(n):
        for t in range(n):
            if s == t:
                continue
            m = coxeter[s][t]
            if m == 0:
                continue
            at = (-cartan[s][t], -cartan[t][s])
            for fl in "xy":
                if quantum_number(m, fl, at) != 0:
                    raise TechnicalConditionFailed(
                        f"[{m}]_{fl} != 0 for colors ({colors[s]}, {colors[t]})")
                if quantum_number(m - 1, fl, at) != 1:
                    balanced = False
    return balanced


def _check_braids(real: Realization):
    n = real.rank
    I = _identity(n)
    for s in range(n):
        Ms = real.refl_matrices[s]
        if _mat_mul(Ms, Ms) != I:
            raise BraidRelationFailed(f"s^2 != 1 for {real.colors[s]}")
        for t in range(s + 1, n):
            m = real.coxeter[s][t]
            if m == 0:
                continue
            P = _mat_mul(Ms, real.refl_matrices[t])
            acc = I
            for k in range(1, m + 1):
                acc = _mat_mul(acc, P)
                if k < m and acc == I:
                    raise BraidRelationFailed(
                        f"(st) has order {k} < {m} for ({real.colors[s]},{real.colors[t]})")
            if acc != I:
                raise BraidRelationFailed(
                    f"(st)^{m} != 1 for ({real.colors[s]},{real.colors[t]})")


def build_realization(coxeter, cartan, field=None, colors=None) -> Realization:
    """Validate Coxeter and Cartan data and return the minimal realization."""
    n = len(coxeter)
    if colors is None:
        colors = tuple("stuvxyz"[:n]) if n <= 7 else tuple(str(i) for i in range(n))
    colors = tuple(str(c) for c in colors)
    if len(colors) != n or len(cartan) != n or any(len(r) != n for r in cartan) \
            or any(len(r) != n for r in coxeter):
        raise ValueError("Coxeter and Cartan matrices must be square of equal rank")
    cox = tuple(tuple(int(x) for x in row) for row in coxeter)
    car = tuple(tuple(parse_scalar(x) for x in row) for row in cartan)
    for s in range(n):
        if car[s][s] != 2:
            raise ValueError(f"a_ss must be 2 (color {colors[s]})")
        for t in range(n):
            if cox[s][t] != cox[t][s]:
                raise ValueError("Coxeter matrix must be symmetric")
            if s != t and cox[s][t] not in SUPPORTED_M:
                raise UnsupportedCoxeterEntry(f"m = {cox[s][t]} is not supported")
            if s == t and cox[s][t] not in (1,):
                if cox[s][t] != 1:
                    raise ValueError("diagonal Coxeter entries must be 1")
    d = _field_of(field, car)
    balanced = _check_technical(colors, cox, car)
    if not balanced:
        raise UnbalancedRealization("[m-1]_x or [m-1]_y differs from 1")
    real = Realization(colors, cox, car, d, balanced)
    _check_braids(real)
    return real


def _field_of(field, cartan) -> int:
    ds = {a.d for row in cartan for a in row if a.d}
    if len(ds) > 1:
        raise UnsupportedFieldExtension(f"entries need several square roots: {sorted(ds)}")
    need = ds.pop() if ds else 0
    if field is None or field == "Q" or field == {"Q": None}:
        d = 0
    elif isinstance(field, dict) and "Qsqrt" in field:
        c, d = _squarefree_split(int(field["Qsqrt"]))
        if d == 1:
            d = 0
    elif isinstance(field, dict) and "Q" in field:
        d = 0
    elif isinstance(field, int):
        d = field
    else:
        raise ValueError(f"bad field spec {field!r}")
    if field is None:
        d = need
    if need and need != d:
        raise UnsupportedFieldExtension(f"Cartan entries need sqrt({need}) but field is "
                                        + ("Q" if not d else f"Q(sqrt {d})"))
    return d


_GEOMETRIC = {2: Scalar(0), 3: Scalar(-1), 4: Scalar(0, -1, 2),
              5: -PHI, 6: Scalar(0, -1, 3), 0: Scalar(-2)}


def geometric_realization(coxeter, colors=None) -> Realization:
    """Cartan entries -2cos(pi/m) over the smallest supported field."""
    n = len(coxeter)
    cartan = [[Scalar(2) if s == t else None for t in range(n)] for s in range(n)]
    for s in range(n):
        for t in range(n):
            if s != t:
                m = int(coxeter[s][t])
                if m not in _GEOMETRIC:
                    raise UnsupportedCoxeterEntry(f"m = {m} is not supported")
                cartan[s][t] = _GEOMETRIC[m]
    ds = {a.d for row in cartan for a in row if a.d}
    if len(ds) > 1:
        raise UnsupportedFieldExtension(f"geometric realization needs several square roots: {sorted(ds)}")
    return build_realization(coxeter, cartan, None, colors)


# --------------------------------------------------------------------------
# Coxeter types and config files
# --------------------------------------------------------------------------

def coxeter_matrix_of_type(name: str):
    """Coxeter matrix for a named type such as A2, B3, G2, I2(5), A1xA1."""
    name = name.replace(" ", "").upper().replace("×", "X")
    if "X" in name:
        blocks = [coxeter_matrix_of_type(p) for p in name.split("X")]
        n = sum(len(b) for b in blocks)
        M = [[2] * n for _ in range(n)]
        off = 0
        for b in blocks:
            for i in range(len(b)):
                for j in range(len(b)):
                    M[off + i][off + j] = b[i][j]
            off += len(b)
        for i in range(n):
            M[i][i] = 1
        return M
    if name.startswith("I2(") and name.endswith(")"):
        m = int(name[3:-1])
        return [[1, m], [m, 1]]
    kind, rank = name[0], int(name[1:])
    M = [[1 if i == j else 2 for j in range(rank)] for i in range(rank)]

    def link(i, j, m):
        M[i][j] = M[j][i] = m

    for i in range(rank - 1):
        link(i, i + 1, 3)
    if kind == "A":
        pass
    elif kind in "BC":
        link(rank - 2, rank - 1, 4)
    elif kind == "G" and rank == 2:
        link(0, 1, 6)
    elif kind == "H":
        link(0, 1, 5)
    elif kind == "F" and rank == 4:
        link(1, 2, 4)
    elif kind == "D":
        M[rank - 2][rank - 1] = M[rank - 1][rank - 2] = 2
        link(rank - 3, rank - 1, 3)
    else:
        raise ValueError(f"unknown type {name}")
    return M


def realization_of_type(name: str, colors=None) -> Realization:
    return geometric_realization(coxeter_matrix_of_type(name), colors)


def load_config(path) -> dict:
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".toml":
        if sys.version_info >= (3, 11):
            import tomllib
        else:
            import tomli as tomllib
        return tomllib.loads(text)
    return json.loads(text)


def realization_from_config(cfg) -> Realization:
    """Build a realization from a config dict or file path.

    Keys: colors, coxeter (0 = infinity), cartan (strings), field ("Q" or
    {"Qsqrt": d}).  A "type" key (e.g. "B3") requests the geometric
    realization instead of explicit matrices.
    """
    if not isinstance(cfg, dict):
        cfg = load_config(cfg)
    colors = cfg.get("colors")
    if "type" in cfg and "cartan" not in cfg:
        return realization_of_type(cfg["type"], colors)
    if "cartan" not in cfg:
        return geometric_realization(cfg["coxeter"], colors)
    return build_realization(cfg["coxeter"], cfg["cartan"], cfg.get("field"), colors)


# --------------------------------------------------------------------------
# Public helpers on polynomials
# --------------------------------------------------------------------------

def act(r: Realization, w, f: Poly) -> Poly:
    """Image of f under a color (name or index) or a Coxeter group Element."""
    if hasattr(w, "images"):
        return Poly(r.ring, r.compose_raw(f.p, w.images()))
    return Poly(r.ring, r.reflect_raw(r.color_index(w), f.p))


def demazure(r: Realization, s, f: Poly) -> Poly:
    return Poly(r.ring, r.demazure_raw(r.color_index(s), f.p))


def root(r: Realization, w, s) -> Poly:
    return act(r, w, r.alpha(s))


def parse_poly(r: Realization, text) -> Poly:
    """Parse polynomials written with alpha_c, w_c (or delta_c), phi and sqrt."""
    if isinstance(text, Poly):
        return text
    ring = r.ring
    names = {"__const__": ring.const, "__lift__": lambda s: ring.const(s)}
    if ring.d == 5:
        names["phi"] = ring.const(PHI)
    for c in r.colors:
        names[f"alpha_{c}"] = r.alpha(c)
        names[f"w_{c}"] = r.delta(c)
        names[f"delta_{c}"] = r.delta(c)
    return _eval_ast(ast.parse(str(text).strip().replace("^", "**"), mode="eval"), names) * 1
