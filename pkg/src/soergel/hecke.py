"""The Hecke algebra over Z[v, v^-1] in the standard basis {H_w}.

Conventions: H_s^2 = (v^-1 - v) H_s + 1, the Kazhdan-Lusztig generator is
H_s + v, and the bar involution sends v to v^-1 and H_s to H_s^-1.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .coxeter import CoxeterSystem, Element


class LaurentPoly:
    """Sparse Laurent polynomial in v with integer coefficients."""

    __slots__ = ("c",)

    def __init__(self, coeffs=None):
        if coeffs is None:
            coeffs = {}
        elif isinstance(coeffs, int):
            coeffs = {0: coeffs}
        self.c = {k: v for k, v in coeffs.items() if v}

    @staticmethod
    def v(k: int = 1, coeff: int = 1) -> "LaurentPoly":
        return LaurentPoly({k: coeff})

    def __add__(self, other):
        other = _lp(other)
        out = dict(self.c)
        for k, v in other.c.items():
            out[k] = out.get(k, 0) + v
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -v for k, v in self.c.items()})

    def __sub__(self, other):
        return self + (-_lp(other))

    def __rsub__(self, other):
        return _lp(other) - self

    def __mul__(self, other):
        other = _lp(other)
        out: dict = {}
        for a, x in self.c.items():
            for b, y in other.c.items():
                out[a + b] = out.get(a + b, 0) + x * y
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            return self.c == _lp(other).c
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.c.items())))

    def __bool__(self):
        return bool(self.c)

    def bar(self) -> "LaurentPoly":
        return LaurentPoly({-k: v for k, v in self.c.items()})

    def shift(self, k: int) -> "LaurentPoly":
        return LaurentPoly({e + k: v for e, v in self.c.items()})

    def coeff(self, k: int) -> int:
        return self.c.get(k, 0)

    def degrees(self) -> list:
        return sorted(self.c)

    def __str__(self):
        if not self.c:
            return "0"
        parts = []
        for k in sorted(self.c):
            c = self.c[k]
            mono = "" if k == 0 else ("v" if k == 1 else f"v^{k}" if k > 0 else f"v^({k})")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__

    def to_json(self) -> dict:
        return {str(k): v for k, v in sorted(self.c.items())}


def _lp(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly({0: x})
    raise TypeError(f"cannot convert {type(x).__name__} to LaurentPoly")


V = LaurentPoly.v(1)
VINV = LaurentPoly.v(-1)


@dataclass
class HeckeElt:
    """Sparse vector {element index: LaurentPoly} in the standard basis."""

    system: CoxeterSystem = field(repr=False)
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        self.coeffs = {k: v for k, v in self.coeffs.items() if v}

    @staticmethod
    def std(system: CoxeterSystem, w) -> "HeckeElt":
        i = w.index if isinstance(w, Element) else system.element(w).index
        return HeckeElt(system, {i: LaurentPoly(1)})

    @staticmethod
    def one(system: CoxeterSystem) -> "HeckeElt":
        return HeckeElt(system, {0: LaurentPoly(1)})

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return HeckeElt(self.system, out)

    def __neg__(self):
        return HeckeElt(self.system, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "HeckeElt":
        c = _lp(c)
        return HeckeElt(self.system, {k: v * c for k, v in self.coeffs.items()})

    def __rmul__(self, c):
        if isinstance(c, (int, LaurentPoly)):
            return self.scale(c)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            return self.scale(other)
        if isinstance(other, HeckeElt):
            return multiply(self, other)
        return NotImplemented

    def __eq__(self, other):
        return isinstance(other, HeckeElt) and self.coeffs == other.coeffs

    def coeff(self, w) -> LaurentPoly:
        i = w.index if isinstance(w, Element) else self.system.element(w).index
        return self.coeffs.get(i, LaurentPoly())

    def __str__(self):
        if not self.coeffs:
            return "0"
        W = self.system
        parts = []
        for i in sorted(self.coeffs, key=lambda i: (-W.lengths[i], W.words[i])):
            name = "H_" + ("".join(W.colors[s] for s in W.words[i]) if W.words[i] else "e")
            parts.append(f"({self.coeffs[i]})*{name}")
        return " + ".join(parts)

    __repr__ = __str__

    def to_json(self) -> dict:
        W = self.system
        return {W.word_str(W.words[i]) or "e": p.to_json()
                for i, p in sorted(self.coeffs.items(), key=lambda kv: (W.lengths[kv[0]], W.words[kv[0]]))}


def mul_gen_std(h: HeckeElt, s) -> HeckeElt:
    """Right multiplication by H_s."""
    W = h.system
    s = W.color_index(s)
    out: dict = {}
    for x, p in h.coeffs.items():
        xs = W.right_mul_index(x, s)
        out[xs] = out[xs] + p if xs in out else p
        if W.lengths[xs] < W.lengths[x]:
            q = p * (VINV - V)
            out[x] = out[x] + q if x in out else q
    return HeckeElt(W, out)


def mul_kl_gen(h: HeckeElt, s) -> HeckeElt:
    """Right multiplication by the Kazhdan-Lusztig generator H_s + v."""
    W = h.system
    s = W.color_index(s)
    out: dict = {}
    for x, p in h.coeffs.items():
        xs = W.right_mul_index(x, s)
        out[xs] = out[xs] + p if xs in out else p
        q = p * (V if W.lengths[xs] > W.lengths[x] else VINV)
        out[x] = out[x] + q if x in out else q
    return HeckeElt(W, out)


def multiply(a: HeckeElt, b: HeckeElt) -> HeckeElt:
    """Product a*b, expanding each H_w of b as a word in the H_s."""
    W = a.system
    out = HeckeElt(W)
    for w, p in b.coeffs.items():
        acc = a
        for s in W.words[w]:
            acc = mul_gen_std(acc, s)
        out = out + acc.scale(p)
    return out


def product_of_kl_gens(system: CoxeterSystem, word) -> HeckeElt:
    h = HeckeElt.one(system)
    for s in system.parse_word(word):
        h = mul_kl_gen(h, s)
    return h


def _std_inverse(system: CoxeterSystem, w: int) -> HeckeElt:
    """H_w^{-1} = H_{s_k}^{-1} ... H_{s_1}^{-1} with H_s^{-1} = H_s + v - v^-1."""
    h = HeckeElt.one(system)
    for s in reversed(system.words[w]):
        h = mul_gen_std(h, s) + h.scale(V - VINV)
    return h


def bar(h: HeckeElt) -> HeckeElt:
    W = h.system
    out = HeckeElt(W)
    for w, p in h.coeffs.items():
        # bar(H_w) = (H_{w^-1})^{-1}
        winv = W._word_to_index(tuple(reversed(W.words[w])))
        out = out + _std_inverse(W, winv).scale(p.bar())
    return out


def kl_element(system: CoxeterSystem, w) -> HeckeElt:
    """Kazhdan-Lusztig basis element, memoized per system."""
    i = w.index if isinstance(w, Element) else system.element(w).index
    cache = system.__dict__.setdefault("_kl_cache", {})
    if i in cache:
        return cache[i]
    if i == 0:
        out = HeckeElt.one(system)
    else:
        word = system.words[i]
        prev = system._word_to_index(word[:-1])
        c = mul_kl_gen(kl_element(system, Element(system, prev)), word[-1])
        # remove constant terms below the top, longest elements first
        while True:
            bad = [y for y, p in c.coeffs.items() if y != i and p.coeff(0) != 0]
            if not bad:
                break
            y = max(bad, key=lambda y: (system.lengths[y], system.words[y]))
            c = c - kl_element(system, Element(system, y)).scale(c.coeffs[y].coeff(0))
        out = c
    cache[i] = out
    return out


def kl_polynomial(system: CoxeterSystem, x, w) -> LaurentPoly:
    """h_{x,w}, the coefficient of H_x in the KL basis element of w."""
    return kl_element(system, w).coeff(x)


def epsilon(h: HeckeElt) -> LaurentPoly:
    return h.coeffs.get(0, LaurentPoly())


def omega(h: HeckeElt) -> HeckeElt:
    """Antiinvolution with H_s -> H_s^-1 ... fixing each H_s + v and v -> v^-1.

    On the standard basis: sum p_w H_w -> sum bar(p_w) (H_{w^-1})^{-1} read
    backwards, i.e. omega(H_w) = bar(H_{w^{-1}}).
    """
    W = h.system
    out = HeckeElt(W)
    for w, p in h.coeffs.items():
        winv = W._word_to_index(tuple(reversed(W.words[w])))
        out = out + bar(HeckeElt.std(W, Element(W, winv))).scale(p.bar())
    return out


def pairing(a: HeckeElt, b: HeckeElt) -> LaurentPoly:
    """(a, b) = epsilon(b * omega(a))."""
    return epsilon(multiply(b, omega(a)))


def deodhar_expand(system: CoxeterSystem, word) -> HeckeElt:
    """Sum over all 01-sequences e of v^{defect(e)} H_{endpoint(e)}."""
    out: dict = {}
    for e in system.all_subexpressions(word):
        d = e.defect
        x = e.endpoint
        out[x] = out[x] + LaurentPoly.v(d) if x in out else LaurentPoly.v(d)
    return HeckeElt(system, out)


def graded_hom_rank(system: CoxeterSystem, x, y) -> LaurentPoly:
    """Graded rank of Hom(B_x, B_y): pairing of the two products of generators."""
    return pairing(product_of_kl_gens(system, x), product_of_kl_gens(system, y))


def kl_coordinates(system: CoxeterSystem, h: HeckeElt) -> dict:
    """Coordinates of h in the Kazhdan-Lusztig basis (top-down elimination)."""
    out: dict = {}
    h = HeckeElt(system, dict(h.coeffs))
    while h.coeffs:
        y = max(h.coeffs, key=lambda y: (system.lengths[y], system.words[y]))
        c = h.coeffs[y]
        out[y] = c
        h = h - kl_element(system, Element(system, y)).scale(c)
    return out


def rank2_product_expansion(system: CoxeterSystem, s, t, k: int) -> dict:
    """Expand the alternating product of k+1 KL generators starting with s in
    the KL basis; returns {length of the dihedral element: coefficient}."""
    s = system.color_index(s)
    t = system.color_index(t)
    m = system.coxeter[s][t]
    if m and k + 1 > m:
        raise ValueError("k + 1 must not exceed m_st")
    word = tuple(s if i % 2 == 0 else t for i in range(k + 1))
    coords = kl_coordinates(system, product_of_kl_gens(system, word))
    out = {}
    for y, c in coords.items():
        if c.c.keys() - {0}:
            raise ValueError("non-constant KL coordinate in a rank two product")
        out[system.lengths[y]] = c.coeff(0)
    return dict(sorted(out.items(), reverse=True))


def rank2_kl_as_products(system: CoxeterSystem, s, t, k: int) -> dict:
    """Inverse of the rank two expansion: write the KL element of the
    alternating word of length k+1 starting with s as a combination of
    alternating products of generators; returns {number of factors: coeff}."""
    out: dict = {}
    target = {k + 1: 1}
    # triangular in the length: peel off the top product repeatedly
    residual = dict(target)
    while residual:
        top = max(residual)
        c = residual.pop(top)
        if c == 0:
            continue
        out[top] = out.get(top, 0) + c
        for length, coeff in rank2_product_expansion(system, s, t, top - 1).items():
            if length == top:
                continue
            residual[length] = residual.get(length, 0) - c * coeff
        residual = {kk: vv for kk, vv in residual.items() if vv}
    return dict(sorted(out.items(), reverse=True))
