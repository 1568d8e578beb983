"""Deterministic layout of slice words and text renderings (TikZ, ASCII).

Level k is the object after k slices, drawn at height k with strands centred
on x = 0.  Every slice contributes lines, dots, vertices and box labels
between heights k and k + 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import DiagramWord

TIKZ_COLORS = ("red", "blue", "green!60!black", "orange", "violet", "cyan", "brown", "magenta")


@dataclass
class Layout:
    levels: list                               # objects, bottom to top
    lines: list = field(default_factory=list)  # (color, (x0, y0), (x1, y1))
    dots: list = field(default_factory=list)   # (color, (x, y))
    vertices: list = field(default_factory=list)
    labels: list = field(default_factory=list)  # (text, (x, y))

    @property
    def width(self) -> int:
        return max([len(o) for o in self.levels] + [1])


def _xs(n: int) -> list:
    return [i - (n - 1) / 2 for i in range(n)]


def layout(d: DiagramWord) -> Layout:
    real = d.real
    obj = d.bottom
    L = Layout([obj])
    for k, sl in enumerate(d.slices):
        new = sl.apply(obj, real)
        xin, xout = _xs(len(obj)), _xs(len(new))
        a, b = sl.arity(real)
        p = sl.pos
        y0, y1, ym = k, k + 1, k + 0.5
        for i in range(len(obj)):
            if i < p:
                L.lines.append((obj[i], (xin[i], y0), (xout[i], y1)))
            elif i >= p + a:
                j = i - a + b
                L.lines.append((obj[i], (xin[i], y0), (xout[j], y1)))
        if sl.kind == "box":
            xs = xin if obj else [0.0]
            if not obj:
                x = 0.0
            elif p == 0:
                x = xs[0] - 0.5
            elif p == len(obj):
                x = xs[-1] + 0.5
            else:
                x = (xs[p - 1] + xs[p]) / 2
            L.labels.append((str(sl.poly), (x, ym)))
        else:
            ins = [xin[i] for i in range(p, p + a)]
            outs = [xout[j] for j in range(p, p + b)]
            allx = ins + outs
            cx = sum(allx) / len(allx)
            for i, x in zip(range(p, p + a), ins):
                L.lines.append((obj[i], (x, y0), (cx, ym)))
            for j, x in zip(range(p, p + b), outs):
                L.lines.append((new[j], (cx, ym), (x, y1)))
            if sl.kind in ("startdot", "enddot"):
                L.dots.append((sl.color, (cx, ym)))
            elif sl.kind in ("merge", "split", "braid"):
                L.vertices.append((cx, ym))
        obj = new
        L.levels.append(obj)
    if not d.slices:
        # identity: draw straight strands of unit height
        xs = _xs(len(obj))
        for i, c in enumerate(obj):
            L.lines.append((c, (xs[i], 0), (xs[i], 1)))
    return L


def to_tikz(d: DiagramWord, scale: float = 1.0) -> str:
    L = layout(d)
    out = [f"\\begin{{tikzpicture}}[scale={scale}]"]
    for c, (x0, y0), (x1, y1) in L.lines:
        col = TIKZ_COLORS[c % len(TIKZ_COLORS)]
        out.append(f"  \\draw[{col}, thick] ({x0:.2f},{y0:.2f}) -- ({x1:.2f},{y1:.2f});")
    for c, (x, y) in L.dots:
        col = TIKZ_COLORS[c % len(TIKZ_COLORS)]
        out.append(f"  \\fill[{col}] ({x:.2f},{y:.2f}) circle (0.08);")
    for x, y in L.vertices:
        out.append(f"  \\fill[black] ({x:.2f},{y:.2f}) circle (0.04);")
    for text, (x, y) in L.labels:
        out.append(f"  \\node[draw, fill=white, font=\\scriptsize] at ({x:.2f},{y:.2f}) {{${text}$}};")
    out.append("\\end{tikzpicture}")
    return "\n".join(out)


_GLYPH = {"startdot": "o", "enddot": "o", "merge": "Y", "split": "^", "cap": "U",
          "cup": "n", "braid": "X", "box": "#"}


def to_ascii(d: DiagramWord) -> str:
    """Top-down text picture: one row per level, one row per slice."""
    real = d.real
    cell = max([len(c) for c in real.colors] + [1]) + 2
    levels = [d.bottom]
    for sl in d.slices:
        levels.append(sl.apply(levels[-1], real))
    width = max(len(o) for o in levels) if levels else 0

    def level_row(obj):
        pad = (width - len(obj)) * cell // 2
        return (" " * pad + "".join(real.colors[c].center(cell) for c in obj)).rstrip()

    rows = [level_row(levels[-1])]
    for k in range(len(d.slices) - 1, -1, -1):
        sl, obj = d.slices[k], levels[k]
        pad = (width - len(obj)) * cell // 2
        a, _ = sl.arity(real)
        marks = []
        for i in range(len(obj)):
            marks.append("|".center(cell))
        glyph = _GLYPH[sl.kind]
        text = f"{glyph} {sl.describe(real)}"
        at = min(sl.pos, len(obj))
        row = " " * pad + "".join(marks[:at]) + f"[{text}]" + "".join(marks[at + a:])
        rows.append(row.rstrip())
        rows.append(level_row(obj))
    if not d.slices:
        rows.append(level_row(d.bottom).replace(" ", " "))
    return "\n".join(rows)
