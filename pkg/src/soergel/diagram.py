"""Soergel diagrams as slice words, metrics, flips and the light leaves and
double leaves builders.

A diagram is a bottom object (a tuple of color indices) followed by a list of
generator slices.  Positions index strands of the current object; a box sits
in a gap, gap 0 being the leftmost region.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .coxeter import CoxeterSystem, Subexpression
from .errors import BoundaryMismatch, EndpointMismatch, InvalidSubexpression
from .ring import Poly, Realization, parse_poly

KINDS = ("startdot", "enddot", "merge", "split", "cap", "cup", "braid", "box")
_FLIP = {"startdot": "enddot", "enddot": "startdot", "merge": "split", "split": "merge",
         "cap": "cup", "cup": "cap", "braid": "braid", "box": "box"}
_DEGREE = {"startdot": 1, "enddot": 1, "merge": -1, "split": -1,
           "cap": 0, "cup": 0, "braid": 0}
POSITIVE = {"startdot", "split", "cup"}
NEGATIVE = {"enddot", "merge", "cap"}


def alternating(s: int, t: int, m: int) -> tuple:
    return tuple(s if i % 2 == 0 else t for i in range(m))


@dataclass(frozen=True, eq=False)
class Slice:
    """One generator placed at a strand position (or gap, for boxes)."""

    kind: str
    color: int = -1
    pos: int = 0
    color2: int = -1           # second color of a braid vertex
    poly: Poly | None = None   # box label

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown slice kind {self.kind!r}")

    def __eq__(self, other):
        if not isinstance(other, Slice):
            return NotImplemented
        if (self.kind, self.color, self.pos, self.color2) != (other.kind, other.color, other.pos, other.color2):
            return False
        if self.kind == "box":
            return self.poly == other.poly
        return True

    def __hash__(self):
        return hash((self.kind, self.color, self.pos, self.color2))

    def degree(self) -> int:
        if self.kind == "box":
            return self.poly.degree() if self.poly else 0
        return _DEGREE[self.kind]

    def arity(self, real: Realization) -> tuple:
        k = self.kind
        if k == "braid":
            m = real.coxeter[self.color][self.color2]
            return m, m
        return {"startdot": (0, 1), "enddot": (1, 0), "merge": (2, 1), "split": (1, 2),
                "cap": (2, 0), "cup": (0, 2), "box": (0, 0)}[k]

    def flipped(self) -> "Slice":
        if self.kind == "braid":
            return Slice("braid", self.color2, self.pos, self.color)
        return Slice(_FLIP[self.kind], self.color, self.pos, self.color2, self.poly)

    def shifted(self, k: int) -> "Slice":
        return Slice(self.kind, self.color, self.pos + k, self.color2, self.poly)

    def apply(self, obj: tuple, real: Realization) -> tuple:
        """Target object after applying this slice; validates the boundary."""
        k, s, p = self.kind, self.color, self.pos
        n = len(obj)

        def need(cond, msg):
            if not cond:
                raise BoundaryMismatch(f"{msg} (slice {self.describe(real)} on {_names(obj, real)})")

        if k == "box":
            need(0 <= p <= n, "gap out of range")
            return obj
        if k in ("startdot", "cup"):
            need(0 <= p <= n, "position out of range")
            return obj[:p] + ((s,) if k == "startdot" else (s, s)) + obj[p:]
        if k in ("enddot", "split"):
            need(0 <= p < n and obj[p] == s, "color mismatch")
            return obj[:p] + (() if k == "enddot" else (s, s)) + obj[p + 1:]
        if k in ("merge", "cap"):
            need(0 <= p and p + 1 < n and obj[p] == s and obj[p + 1] == s, "color mismatch")
            return obj[:p] + ((s,) if k == "merge" else ()) + obj[p + 2:]
        # braid
        t = self.color2
        m = real.coxeter[s][t]
        need(m != 0 and s != t, "braid vertex needs finite m_st")
        src = alternating(s, t, m)
        need(obj[p:p + m] == src, "braid source mismatch")
        return obj[:p] + alternating(t, s, m) + obj[p + m:]

    def describe(self, real: Realization | None = None) -> str:
        name = (lambda c: real.colors[c]) if real else str
        if self.kind == "box":
            return f"box({self.poly})@{self.pos}"
        if self.kind == "braid":
            return f"braid({name(self.color)},{name(self.color2)})@{self.pos}"
        return f"{self.kind}({name(self.color)})@{self.pos}"

    def to_json(self, real: Realization) -> dict:
        if self.kind == "box":
            return {"kind": "box", "poly": str(self.poly), "gap": self.pos}
        d = {"kind": self.kind, "color": real.colors[self.color], "pos": self.pos}
        if self.kind == "braid":
            d["color2"] = real.colors[self.color2]
        return d

    @staticmethod
    def from_json(d: dict, real: Realization) -> "Slice":
        kind = d["kind"].lower()
        if kind == "box":
            return Slice("box", -1, int(d.get("gap", d.get("pos", 0))), -1, parse_poly(real, d["poly"]))
        s = real.color_index(d["color"])
        t = real.color_index(d["color2"]) if "color2" in d else -1
        return Slice(kind, s, int(d.get("pos", 0)), t)


def _names(obj, real):
    return [real.colors[c] for c in obj]


class DiagramWord:
    """A morphism between Bott-Samelson objects, as a word of slices."""

    def __init__(self, real: Realization, bottom, slices=()):
        self.real = real
        self.bottom = tuple(bottom)
        self.slices = tuple(slices)
        objs = [self.bottom]
        for sl in self.slices:
            objs.append(sl.apply(objs[-1], real))
        self.objects = objs

    # structure -------------------------------------------------------------
    @property
    def top(self) -> tuple:
        return self.objects[-1]

    def __len__(self):
        return len(self.slices)

    def __eq__(self, other):
        return (isinstance(other, DiagramWord) and self.bottom == other.bottom
                and self.slices == other.slices)

    def __hash__(self):
        return hash((self.bottom, self.slices))

    @staticmethod
    def identity(real: Realization, obj) -> "DiagramWord":
        return DiagramWord(real, obj, ())

    def then(self, *slices) -> "DiagramWord":
        """Append slices on top."""
        return DiagramWord(self.real, self.bottom, self.slices + tuple(slices))

    def degree(self) -> int:
        return sum(sl.degree() for sl in self.slices)

    def width_profile(self) -> list:
        return [len(o) for o in self.objects]

    def maxwidth(self) -> int:
        return max(self.width_profile())

    def is_negative_positive(self) -> bool:
        """No width-decreasing slice occurs above a width-increasing one."""
        seen_pos = False
        for sl in self.slices:
            if sl.kind in POSITIVE:
                seen_pos = True
            elif sl.kind in NEGATIVE and seen_pos:
                return False
        return True

    def is_strictly_negative_positive(self) -> bool:
        """Negative-positive and factoring through a narrower object."""
        prof = self.width_profile()
        return self.is_negative_positive() and min(prof) < min(prof[0], prof[-1])

    def flip(self) -> "DiagramWord":
        return DiagramWord(self.real, self.top, tuple(sl.flipped() for sl in reversed(self.slices)))

    def expand_caps_cups(self) -> "DiagramWord":
        out = []
        for sl in self.slices:
            if sl.kind == "cap":
                out += [Slice("merge", sl.color, sl.pos), Slice("enddot", sl.color, sl.pos)]
            elif sl.kind == "cup":
                out += [Slice("startdot", sl.color, sl.pos), Slice("split", sl.color, sl.pos)]
            else:
                out.append(sl)
        return DiagramWord(self.real, self.bottom, out)

    # serialization ---------------------------------------------------------
    def to_json(self) -> dict:
        return {"bottom": _names(self.bottom, self.real),
                "slices": [sl.to_json(self.real) for sl in self.slices]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @staticmethod
    def from_json(d, real: Realization) -> "DiagramWord":
        if isinstance(d, str):
            d = json.loads(d)
        bottom = [real.color_index(c) for c in d["bottom"]]
        return DiagramWord(real, bottom, [Slice.from_json(x, real) for x in d.get("slices", [])])

    def __str__(self):
        return (f"DiagramWord({' '.join(_names(self.bottom, self.real)) or '-'} -> "
                f"{' '.join(_names(self.top, self.real)) or '-'}: "
                + ", ".join(sl.describe(self.real) for sl in self.slices) + ")")

    __repr__ = __str__


def compose(f: DiagramWord, g: DiagramWord) -> DiagramWord:
    """f after g."""
    if g.top != f.bottom:
        raise BoundaryMismatch(f"cannot compose: top {g.top} != bottom {f.bottom}")
    return DiagramWord(f.real, g.bottom, g.slices + f.slices)


def tensor(f: DiagramWord, g: DiagramWord) -> DiagramWord:
    """f placed to the left of g."""
    k = len(f.top)
    slices = f.slices + tuple(sl.shifted(k) for sl in g.slices)
    return DiagramWord(f.real, f.bottom + g.bottom, slices)


def flip(f: DiagramWord) -> DiagramWord:
    return f.flip()


def expand_caps_cups(f: DiagramWord) -> DiagramWord:
    return f.expand_caps_cups()


def rex_move_slices(edges, offset: int = 0) -> list:
    """Braid slices realizing a path of braid moves."""
    return [Slice("braid", e.a, e.pos + offset, e.b) for e in edges]


# --------------------------------------------------------------------------
# Light leaves
# --------------------------------------------------------------------------

class ChoiceData:
    """The fixed choices behind light leaves: ShortLex canonical rexes, rexes
    ending in a given descent, and shortest braid-move paths."""

    def __init__(self, system: CoxeterSystem):
        self.system = system

    def canonical(self, w: int) -> tuple:
        return self.system.words[w]

    def ending_in(self, w: int, s: int) -> tuple:
        W = self.system
        ws = W.right_mul_index(w, s)
        if W.lengths[ws] > W.lengths[w]:
            raise InvalidSubexpression(f"{W.colors[s]} is not a right descent")
        return W.words[ws] + (s,)

    def move(self, x: tuple, y: tuple) -> list:
        return self.system.rex_path(x, y)

    def to_json(self) -> dict:
        return {"canonical_rex": "shortlex", "color_order": list(self.system.colors),
                "rex_ending_in_s": "canonical(ws)+s", "rex_moves": "bfs-shortest"}


def light_leaf(x, e: Subexpression, choices: ChoiceData):
    """Light leaf morphism B_x -> B_w for the canonical rex w of the endpoint.

    Returns (DiagramWord, target rex).
    """
    W = choices.system
    real = W.realization
    x = tuple(W.parse_word(x))
    if tuple(e.expr) != x:
        raise InvalidSubexpression("subexpression of a different expression")
    slices: list = []
    cur: tuple = ()
    for k, (s, dec) in enumerate(zip(x, e.decorations)):
        w = e.stroll[k]
        L = len(cur)
        if dec == "U1":
            cur = cur + (s,)
        elif dec == "U0":
            slices.append(Slice("enddot", s, L))
        else:
            target = choices.ending_in(w, s)
            slices += rex_move_slices(choices.move(cur, target))
            if dec == "D1":
                slices.append(Slice("cap", s, L - 1))
                cur = target[:-1]
            else:
                slices.append(Slice("merge", s, L - 1))
                cur = target
    final = choices.canonical(e.endpoint)
    slices += rex_move_slices(choices.move(cur, final))
    d = DiagramWord(real, x, slices)
    return d, final


def double_leaf(x, e: Subexpression, y, f: Subexpression, choices: ChoiceData) -> DiagramWord:
    if e.endpoint != f.endpoint:
        raise EndpointMismatch("subexpressions have different endpoints")
    top, _ = light_leaf(y, f, choices)
    bot, _ = light_leaf(x, e, choices)
    return compose(top.flip(), bot)


def enumerate_double_leaves(x, y, choices: ChoiceData) -> list:
    """All double leaves B_x -> B_y as (w, e, f, diagram)."""
    W = choices.system
    xs = W.all_subexpressions(x)
    ys = W.all_subexpressions(y)
    by_end: dict = {}
    for f in ys:
        by_end.setdefault(f.endpoint, []).append(f)
    out = []
    for e in xs:
        for f in by_end.get(e.endpoint, []):
            out.append((e.endpoint, e, f, double_leaf(x, e, y, f, choices)))
    return out
