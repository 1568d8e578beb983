"""Coxeter groups as explicit balls of elements, Bruhat order, reduced
expression graphs and subexpressions with their Bruhat strolls.

Elements are materialized by a breadth-first search over words in ShortLex
order, identified through their exact action on h*.  Expressions are tuples of
color indices.
"""
from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

from .errors import MismatchedExpressions, NotReducedExpression, RadiusExceeded
from .ring import Realization, _mat_mul

DEFAULT_RADIUS = 12
FULL_GROUP_LIMIT = 14400


def _radius_from_env(default):
    val = os.environ.get("SOERGEL_RADIUS")
    return int(val) if val else default


@dataclass(frozen=True, eq=False)
class Element:
    """Handle into the ball table of a CoxeterSystem."""

    system: "CoxeterSystem" = field(repr=False)
    index: int

    @property
    def word(self) -> tuple:
        return self.system.words[self.index]

    @property
    def length(self) -> int:
        return len(self.system.words[self.index])

    def __len__(self):
        return self.length

    def __eq__(self, other):
        return isinstance(other, Element) and other.index == self.index and other.system is self.system

    def __hash__(self):
        return hash(self.index)

    def __mul__(self, other):
        return self.system.mul(self, other)

    def inverse(self) -> "Element":
        return self.system.inv(self)

    def images(self):
        return self.system.images(self.index)

    def __le__(self, other):
        return self.system.bruhat_leq(self, other)

    def __str__(self):
        return self.system.word_str(self.word) or "e"

    def __repr__(self):
        return f"Element({self})"


@dataclass(frozen=True)
class Subexpression:
    """A 01-sequence on an expression with its stroll and decorations."""

    expr: tuple
    bits: tuple
    stroll: tuple          # element indices x_0 .. x_d
    decorations: tuple     # "U0", "U1", "D0", "D1"

    @property
    def defect(self) -> int:
        return self.decorations.count("U0") - self.decorations.count("D0")

    @property
    def endpoint(self) -> int:
        return self.stroll[-1]

    @cached_property
    def mask(self) -> int:
        return sum(1 << i for i, b in enumerate(self.bits) if b)

    def __str__(self):
        return "".join(map(str, self.bits))


@dataclass(frozen=True)
class Edge:
    """One braid move: at ``pos`` the alternating word of length m starting
    with color ``a`` is replaced by the one starting with ``b``."""

    pos: int
    a: int
    b: int
    m: int

    @property
    def distant(self) -> bool:
        return self.m == 2

    def apply(self, word: tuple) -> tuple:
        alt = tuple(self.b if i % 2 == 0 else self.a for i in range(self.m))
        return word[:self.pos] + alt + word[self.pos + self.m:]


@dataclass
class RexGraph:
    vertices: list
    edges: list            # (i, j, Edge) with vertices[i] -> vertices[j]

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj = {i: set() for i in range(len(self.vertices))}
        for i, j, _ in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        seen = {0}
        stack = [0]
        while stack:
            for j in adj[stack.pop()]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        return len(seen) == len(self.vertices)


class CoxeterSystem:
    """Ball of radius L in W, generated in ShortLex order."""

    def __init__(self, realization: Realization, radius: int | None = None):
        self.realization = realization
        self.n = realization.rank
        self.colors = realization.colors
        self.coxeter = realization.coxeter
        finite = self._finite_order()
        if radius is None:
            if finite is not None and finite <= FULL_GROUP_LIMIT:
                radius = None
            else:
                radius = _radius_from_env(DEFAULT_RADIUS)
        self.radius = radius
        self._build()
        self._images: dict = {0: tuple(realization.ring.vars)}
        self._bruhat: dict = {}

    def _finite_order(self):
        """Order of W for the irreducible components if finite, else None."""
        n = self.n
        M = self.coxeter
        if any(M[i][j] == 0 for i in range(n) for j in range(n) if i != j):
            return None
        # components
        comp = []
        seen = set()
        for i in range(n):
            if i in seen:
                continue
            stack, c = [i], []
            seen.add(i)
            while stack:
                a = stack.pop()
                c.append(a)
                for b in range(n):
                    if b not in seen and b != a and M[a][b] > 2:
                        seen.add(b)
                        stack.append(b)
            comp.append(c)
        order = 1
        for c in comp:
            o = _irreducible_order(M, c)
            if o is None:
                return None
            order *= o
        return order

    def _build(self):
        real = self.realization
        n = self.n
        start = tuple(tuple(row) for row in _identity_matrix(n))
        self.words = [()]
        self.mats = [start]
        index = {start: 0}
        self.rmul = [[-1] * n]
        layer = [0]
        length = 0
        while layer:
            if self.radius is not None and length >= self.radius:
                break
            nxt = []
            for i in layer:
                for s in range(n):
                    if self.rmul[i][s] != -1:
                        continue
                    M = _mat_mul(self.mats[i], real.refl_matrices[s])
                    j = index.get(M)
                    if j is None:
                        j = len(self.words)
                        index[M] = j
                        self.words.append(self.words[i] + (s,))
                        self.mats.append(M)
                        self.rmul.append([-1] * n)
                        nxt.append(j)
                    self.rmul[i][s] = j
                    self.rmul[j][s] = i
            layer = nxt
            length += 1
        self.complete = not layer
        self._index_of_word = {w: i for i, w in enumerate(self.words)}
        self.lengths = [len(w) for w in self.words]
        self.lmul = [[-1] * n for _ in self.words]
        for i, w in enumerate(self.words):
            for s in range(n):
                j = self._word_to_index((s,) + w, strict=False)
                self.lmul[i][s] = j

    # basic queries ---------------------------------------------------------
    def __len__(self):
        return len(self.words)

    @property
    def identity(self) -> Element:
        return Element(self, 0)

    def elements(self):
        return [Element(self, i) for i in range(len(self.words))]

    def color_index(self, c) -> int:
        return self.realization.color_index(c)

    def gen(self, s) -> Element:
        return Element(self, self.rmul[0][self.color_index(s)])

    def _step(self, i: int, s: int) -> int:
        j = self.rmul[i][s]
        if j < 0:
            raise RadiusExceeded(f"{self.word_str(self.words[i] + (s,))} leaves the ball of radius {self.radius}")
        return j

    def _word_to_index(self, word, strict=True) -> int:
        i = 0
        for s in word:
            j = self.rmul[i][s]
            if j < 0:
                if strict:
                    raise RadiusExceeded(f"word {self.word_str(word)} leaves the ball")
                return -1
            i = j
        return i

    def element(self, word) -> Element:
        return Element(self, self._word_to_index(self.parse_word(word)))

    def mul(self, a: Element, b: Element) -> Element:
        i = a.index
        for s in b.word:
            i = self._step(i, s)
        return Element(self, i)

    def inv(self, a: Element) -> Element:
        return Element(self, self._word_to_index(tuple(reversed(a.word))))

    def length(self, a: Element) -> int:
        return self.lengths[a.index]

    def descents(self, a: Element, side: str = "right") -> set:
        table = self.rmul if side == "right" else self.lmul
        out = set()
        for s in range(self.n):
            j = table[a.index][s]
            if j >= 0 and self.lengths[j] < self.lengths[a.index]:
                out.add(self.colors[s])
        return out

    def right_mul_index(self, i: int, s: int) -> int:
        return self._step(i, s)

    def is_up(self, i: int, s: int) -> bool:
        """True iff x s > x for x the element with index i."""
        j = self.rmul[i][s]
        if j < 0:
            return True
        return self.lengths[j] > self.lengths[i]

    def images(self, i: int):
        """Substitution images of the variables under the element i."""
        out = self._images.get(i)
        if out is None:
            w = self.words[i]
            prev = self.images(self._word_to_index(w[:-1]))
            s = w[-1]
            real = self.realization
            out = tuple(real.compose_raw(p, prev) for p in real.refl_images[s])
            self._images[i] = out
        return out

    # words -----------------------------------------------------------------
    def parse_word(self, word) -> tuple:
        """Accept a tuple of indices/names or a string like "s t s"."""
        if isinstance(word, Element):
            return word.word
        if isinstance(word, str):
            toks = word.replace(",", " ").split()
            if len(toks) == 1 and toks[0] not in self.realization.index:
                if all(ch in self.realization.index for ch in toks[0]):
                    toks = list(toks[0])
            if toks == ["e"] and "e" not in self.realization.index:
                toks = []
            if toks == ["-"] or toks == ["()"]:
                toks = []
            return tuple(self.realization.index[t] for t in toks)
        return tuple(self.color_index(c) for c in word)

    def word_str(self, word) -> str:
        return " ".join(self.colors[s] for s in word)

    def word_names(self, word) -> list:
        return [self.colors[s] for s in word]

    def is_reduced(self, word) -> bool:
        i = 0
        for s in word:
            j = self.rmul[i][s]
            if j < 0:
                raise RadiusExceeded("word leaves the ball")
            if self.lengths[j] < self.lengths[i]:
                return False
            i = j
        return True

    # Bruhat order ----------------------------------------------------------
    def bruhat_leq(self, v: Element, w: Element) -> bool:
        return self._leq(v.index, w.index)

    def _leq(self, v: int, w: int) -> bool:
        if self.lengths[v] > self.lengths[w]:
            return False
        if w == 0:
            return v == 0
        if v == 0:
            return True
        key = (v, w)
        out = self._bruhat.get(key)
        if out is not None:
            return out
        s = self.words[w][0]          # a left descent of w
        sw = self.lmul[w][s]
        sv = self.lmul[v][s]
        if sv >= 0 and self.lengths[sv] < self.lengths[v]:
            vv = sv
        else:
            vv = v
        out = self._leq(vv, sw)
        self._bruhat[key] = out
        return out

    def bruhat_leq_index(self, v: int, w: int) -> bool:
        return self._leq(v, w)

    # subexpressions --------------------------------------------------------
    def stroll(self, expr, bits) -> tuple:
        x = 0
        out = [0]
        for s, b in zip(expr, bits):
            if b:
                x = self._step(x, s)
            out.append(x)
        return tuple(out)

    def subexpression(self, expr, bits) -> Subexpression:
        expr = tuple(expr)
        bits = tuple(int(b) for b in bits)
        if len(bits) != len(expr):
            raise MismatchedExpressions("01-sequence length differs from expression length")
        x = 0
        stroll = [0]
        decs = []
        for s, b in zip(expr, bits):
            up = self.is_up(x, s)
            decs.append(("U" if up else "D") + str(b))
            if b:
                x = self._step(x, s)
            stroll.append(x)
        return Subexpression(expr, bits, tuple(stroll), tuple(decs))

    def all_subexpressions(self, expr) -> list:
        expr = tuple(self.parse_word(expr))
        out = []
        d = len(expr)

        def rec(k, x, bits, stroll, decs):
            if k == d:
                out.append(Subexpression(expr, tuple(bits), tuple(stroll), tuple(decs)))
                return
            s = expr[k]
            up = self.is_up(x, s)
            for b in (0, 1):
                y = self._step(x, s) if b else x
                rec(k + 1, y, bits + [b], stroll + [y], decs + [("U" if up else "D") + str(b)])

        rec(0, 0, [], [0], [])
        return out

    def subexpressions(self, expr, w) -> list:
        wi = w.index if isinstance(w, Element) else self.element(w).index
        return [e for e in self.all_subexpressions(expr) if e.endpoint == wi]

    def path_dominance_leq(self, a: Subexpression, b: Subexpression) -> bool:
        """a <= b iff every stroll entry of a lies below b's in Bruhat order."""
        if a.expr != b.expr:
            raise MismatchedExpressions("subexpressions of different expressions")
        return all(self._leq(x, y) for x, y in zip(a.stroll, b.stroll))

    # reduced expressions ---------------------------------------------------
    def braid_moves(self, word: tuple):
        """All single braid moves applicable to a word, in a fixed order."""
        out = []
        d = len(word)
        for pos in range(d):
            a = word[pos]
            if pos + 1 >= d:
                break
            b = word[pos + 1]
            if a == b:
                continue
            m = self.coxeter[a][b]
            if m == 0 or pos + m > d:
                continue
            if all(word[pos + i] == (a if i % 2 == 0 else b) for i in range(m)):
                out.append(Edge(pos, a, b, m))
        return out

    def enumerate_rex(self, w) -> list:
        if not isinstance(w, Element):
            w = self.element(w)
        start = w.word
        seen = {start: 0}
        order = [start]
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for e in self.braid_moves(x):
                y = e.apply(x)
                if y not in seen:
                    seen[y] = len(order)
                    order.append(y)
                    queue.append(y)
        return sorted(order)

    def rex_graph(self, w) -> RexGraph:
        verts = self.enumerate_rex(w)
        idx = {v: i for i, v in enumerate(verts)}
        edges = []
        for i, v in enumerate(verts):
            for e in self.braid_moves(v):
                j = idx[e.apply(v)]
                if i < j:
                    edges.append((i, j, e))
        return RexGraph(verts, edges)

    def rex_path(self, x, y) -> list:
        """Shortest sequence of braid moves from rex x to rex y (BFS)."""
        x = tuple(self.parse_word(x))
        y = tuple(self.parse_word(y))
        return list(self._rex_path(x, y))

    @lru_cache(maxsize=None)
    def _rex_path(self, x: tuple, y: tuple) -> tuple:
        if not self.is_reduced(x):
            raise NotReducedExpression(self.word_str(x))
        if not self.is_reduced(y):
            raise NotReducedExpression(self.word_str(y))
        if self._word_to_index(x) != self._word_to_index(y):
            raise MismatchedExpressions("rexes of different elements")
        if x == y:
            return ()
        prev = {x: None}
        queue = deque([x])
        while queue:
            u = queue.popleft()
            for e in self.braid_moves(u):
                v = e.apply(u)
                if v in prev:
                    continue
                prev[v] = (u, e)
                if v == y:
                    path = []
                    while prev[v] is not None:
                        u2, e2 = prev[v]
                        path.append(e2)
                        v = u2
                    return tuple(reversed(path))
                queue.append(v)
        raise MismatchedExpressions("rex graph is disconnected")  # pragma: no cover

    def longest_element(self) -> Element:
        if not self.complete:
            raise RadiusExceeded("the group is not finite within the ball")
        return Element(self, max(range(len(self.words)), key=lambda i: self.lengths[i]))


def _identity_matrix(n):
    from .ring import Scalar
    return [[Scalar(1 if i == j else 0) for j in range(n)] for i in range(n)]


def _irreducible_order(M, comp):
    """Order of an irreducible finite Coxeter group given by a component."""
    k = len(comp)
    if k == 1:
        return 2
    labels = sorted(M[a][b] for a in comp for b in comp if a < b and M[a][b] > 2)
    if k == 2:
        return 2 * M[comp[0]][comp[1]]
    degree = {a: sum(1 for b in comp if b != a and M[a][b] > 2) for a in comp}
    if max(degree.values()) > 3 or len(labels) != k - 1:
        return None
    if max(degree.values()) == 3:
        # D_n or E_6,7,8 (only simply laced)
        if any(x != 3 for x in labels):
            return None
        import math
        branch = [a for a in comp if degree[a] == 3][0]
        arms = []
        for nb in [b for b in comp if b != branch and M[branch][b] > 2]:
            ln, prev, cur = 1, branch, nb
            while True:
                nxt = [c for c in comp if c not in (prev, cur) and M[cur][c] > 2]
                if not nxt:
                    break
                prev, cur = cur, nxt[0]
                ln += 1
            arms.append(ln)
        arms.sort()
        if arms[:2] == [1, 1]:
            return 2 ** (k - 1) * math.factorial(k)
        table = {(1, 2, 2): 51840, (1, 2, 3): 2903040, (1, 2, 4): 696729600}
        return table.get(tuple(arms))
    import math
    fours = labels.count(4)
    fives = labels.count(5)
    sixes = labels.count(6)
    if sixes:
        return None
    if not fours and not fives:
        return math.factorial(k + 1)
    if fours == 1 and not fives:
        # B_n if the 4 is at an end, F4 if in the middle
        ends = [a for a in comp if degree[a] == 1]
        if any(M[e][b] == 4 for e in ends for b in comp if b != e):
            return 2 ** k * math.factorial(k)
        if k == 4:
            return 1152
        return None
    if fives == 1 and not fours:
        return {3: 120, 4: 14400}.get(k)
    return None
