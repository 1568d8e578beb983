"""Shared cached objects for the test suite."""
from __future__ import annotations

import functools
import random
from itertools import product

from soergel.coxeter import CoxeterSystem
from soergel.diagram import ChoiceData, DiagramWord, Slice, alternating
from soergel.ring import Poly, realization_of_type
from soergel.localize import random_poly_raw


@functools.lru_cache(maxsize=None)
def real(name: str):
    return realization_of_type(name)


@functools.lru_cache(maxsize=None)
def system(name: str) -> CoxeterSystem:
    return CoxeterSystem(real(name))


@functools.lru_cache(maxsize=None)
def choices(name: str) -> ChoiceData:
    return ChoiceData(system(name))


def words(n: int, max_len: int, min_len: int = 0):
    for L in range(min_len, max_len + 1):
        yield from product(range(n), repeat=L)


def candidate_slices(r, obj: tuple, rng: random.Random, max_width: int = 4) -> list:
    """Every generator that can sit on top of obj without exceeding max_width."""
    n, out = r.rank, []
    L = len(obj)
    for c in range(n):
        if L + 1 <= max_width:
            out += [Slice("startdot", c, p) for p in range(L + 1)]
        if L + 2 <= max_width:
            out += [Slice("cup", c, p) for p in range(L + 1)]
    for p, c in enumerate(obj):
        out.append(Slice("enddot", c, p))
        if L + 1 <= max_width:
            out.append(Slice("split", c, p))
        if p + 1 < L and obj[p + 1] == c:
            out += [Slice("merge", c, p), Slice("cap", c, p)]
        for t in range(n):
            m = r.coxeter[c][t]
            if t != c and m and obj[p:p + m] == alternating(c, t, m):
                out.append(Slice("braid", c, p, t))
    gap = rng.randrange(L + 1)
    out.append(Slice("box", pos=gap, poly=Poly(r.ring, random_poly_raw(r, rng, 2, 2))))
    return out


def random_diagram(r, rng: random.Random, max_slices: int = 6, max_width: int = 4) -> DiagramWord:
    """A random valid slice word of 1..max_slices generators on at most max_width strands."""
    bottom = tuple(rng.randrange(r.rank) for _ in range(rng.randint(0, max_width)))
    obj, slices = bottom, []
    for _ in range(rng.randint(1, max_slices)):
        cands = candidate_slices(r, obj, rng, max_width)
        braids = [c for c in cands if c.kind == "braid"]
        sl = rng.choice(braids if braids and rng.random() < 0.5 else cands)
        slices.append(sl)
        obj = sl.apply(obj, r)
    return DiagramWord(r, bottom, slices)
