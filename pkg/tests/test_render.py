from soergel.diagram import DiagramWord, Slice
from soergel.localize import eval_diagram, gram_pattern
from soergel.plotting import plot_diagram, plot_gram, plot_support
from soergel.render import layout, to_ascii, to_tikz

from support import choices, real


def vertex_with_dot():
    r = real("A2")
    return DiagramWord(r, (0, 1, 0), [Slice("braid", 0, 0, 1), Slice("enddot", 1, 0),
                                      Slice("box", pos=1, poly=r.alpha(0))])


def test_layout_counts():
    L = layout(vertex_with_dot())
    assert L.levels[0] == (0, 1, 0) and L.levels[-1] == (0, 1)
    assert len(L.dots) == 1 and len(L.vertices) == 1 and len(L.labels) == 1
    assert L.width == 3


def test_identity_layout_draws_strands():
    r = real("A2")
    L = layout(DiagramWord.identity(r, (0, 1)))
    assert len(L.lines) == 2


def test_text_renderings():
    d = vertex_with_dot()
    tikz = to_tikz(d)
    assert tikz.startswith("\\begin{tikzpicture}") and tikz.count("circle") == 2
    art = to_ascii(d)
    assert "braid(s,t)@0" in art and "enddot(t)@0" in art


def test_figures_are_written(tmp_path):
    d = vertex_with_dot()
    plot_diagram(d, tmp_path / "d.png", "vertex")
    plot_support(eval_diagram(DiagramWord(d.real, (0, 1, 0), [Slice("braid", 0, 0, 1)])),
                 tmp_path / "s.png")
    _, grid = gram_pattern("st", "st", choices("A2"))
    plot_gram(grid, tmp_path / "g.png")
    for name in ("d.png", "s.png", "g.png"):
        assert (tmp_path / name).read_bytes()[:4] == b"\x89PNG"
