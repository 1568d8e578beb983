import pytest

from soergel.coxeter import CoxeterSystem
from soergel.errors import RadiusExceeded

from support import real, system

ORDERS = {"A2": 6, "B2": 8, "G2": 12, "A3": 24, "B3": 48, "A1xA1": 4, "I2(5)": 10, "H3": 120}


@pytest.mark.parametrize("name,order", sorted(ORDERS.items()))
def test_group_orders(name, order):
    W = system(name)
    assert W.complete and len(W) == order


def test_shortlex_words_are_reduced():
    W = system("B3")
    for i, w in enumerate(W.words):
        assert W.is_reduced(w) and W.lengths[i] == len(w)
        assert W.element(w).index == i


def test_longest_element():
    W = system("A3")
    w0 = W.longest_element()
    assert w0.length == 6
    assert W.descents(w0) == W.descents(w0, "left") == {"s", "t", "u"}


def test_multiplication_and_inverse():
    W = system("B2")
    for a in W.elements():
        assert W.mul(a, a.inverse()) == W.identity
        for b in W.elements():
            assert (a * b).length <= a.length + b.length


def test_bruhat_subword_property():
    W = system("A3")
    w = W.element("stus")
    below = {W.stroll(w.word, bits)[-1] for bits in _all_bits(4)}
    for v in W.elements():
        assert (v <= w) == (v.index in below)


def _all_bits(n):
    return [tuple((k >> i) & 1 for i in range(n)) for k in range(1 << n)]


def test_subexpression_decorations():
    W = system("A2")
    subs = W.all_subexpressions("sts")
    assert len(subs) == 8
    full = [e for e in subs if e.bits == (1, 1, 1)][0]
    assert full.decorations == ("U1", "U1", "U1") and full.defect == 0
    empty = [e for e in subs if e.bits == (0, 0, 0)][0]
    assert empty.decorations == ("U0", "U0", "U0") and empty.defect == 3


def test_path_dominance():
    W = system("A2")
    subs = {e.bits: e for e in W.all_subexpressions("sss")}
    assert W.path_dominance_leq(subs[(0, 0, 0)], subs[(1, 1, 0)])
    assert not W.path_dominance_leq(subs[(1, 1, 0)], subs[(0, 0, 0)])


@pytest.mark.parametrize("name,word,count", [("A2", "sts", 2), ("B2", "stst", 2),
                                             ("A3", "stusts", 16), ("A1xA1", "st", 2)])
def test_rex_enumeration(name, word, count):
    W = system(name)
    w = W.element(word)
    rexes = W.enumerate_rex(w)
    assert len(rexes) == count and all(W.element(x) == w for x in rexes)
    assert W.rex_graph(w).is_connected()


def test_rex_path_connects():
    W = system("A3")
    w0 = W.longest_element()
    rexes = W.enumerate_rex(w0)
    x, y = rexes[0], rexes[-1]
    cur = x
    for e in W.rex_path(x, y):
        cur = e.apply(cur)
    assert cur == y


def test_radius_limits_affine_ball():
    r = real("A2")
    W = CoxeterSystem(r, radius=4)
    assert W.complete and len(W) == 6
    from soergel.ring import build_realization
    aff = build_realization([[1, 0], [0, 1]], [[2, -2], [-2, 2]])
    Wa = CoxeterSystem(aff, radius=4)
    assert not Wa.complete and len(Wa) == 1 + 2 * 4
    with pytest.raises(RadiusExceeded):
        Wa.element("stststst")
