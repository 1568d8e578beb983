"""Property tests for the structural invariants."""
import random

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from soergel.diagram import DiagramWord, light_leaf
from soergel.hecke import LaurentPoly, bar, deodhar_expand, kl_element, product_of_kl_gens
from soergel.jw import (Flank, Matching, annihilated, jones_wenzl, matching_to_soergel,
                        tl_generator, tl_identity, tl_to_matrix)
from soergel.localize import oracle_check, random_poly_raw
from soergel.ring import Frac, Poly, act, demazure

from support import choices, random_diagram, real, system

SETTINGS = settings(max_examples=40, deadline=None,
                    suppress_health_check=[HealthCheck.too_slow])
RANK2 = ["A1xA1", "A2", "B2", "I2(5)", "G2"]
SMALL = ["A2", "B2", "A1xA1", "A3"]


def polys(name):
    r = real(name)
    return st.integers(0, 2 ** 32).map(
        lambda seed: Poly(r.ring, random_poly_raw(r, random.Random(seed), 3, 4)))


# ring ----------------------------------------------------------------------

@SETTINGS
@given(name=st.sampled_from(["A2", "B2", "G2", "A3"]), data=st.data())
def test_reflection_is_involution_and_demazure_twisted_leibniz(name, data):
    r = real(name)
    f, g = data.draw(polys(name)), data.draw(polys(name))
    s = data.draw(st.integers(0, r.rank - 1))
    assert act(r, s, act(r, s, f)) == f
    assert demazure(r, s, f * g) == demazure(r, s, f) * g + act(r, s, f) * demazure(r, s, g)
    assert demazure(r, s, demazure(r, s, f)).is_zero()
    inv = f + act(r, s, f)
    assert demazure(r, s, inv * g) == inv * demazure(r, s, g)


@SETTINGS
@given(data=st.data())
def test_fraction_field_axioms(data):
    r = real("B2")
    f, g, h = (data.draw(polys("B2")) for _ in range(3))
    if g.is_zero() or h.is_zero():
        return
    x, y = Frac.quotient(f, g), Frac.quotient(g + f, h)
    assert x + y == y + x and x * y == y * x
    assert (x + y) * x == x * x + y * x
    assert y * y.inverse() == 1 if not y.is_zero() else True


# hecke ---------------------------------------------------------------------

@SETTINGS
@given(name=st.sampled_from(["A2", "B2", "A3", "G2"]), data=st.data())
def test_deodhar_matches_product(name, data):
    W = system(name)
    word = data.draw(st.lists(st.integers(0, W.n - 1), max_size=7))
    h = product_of_kl_gens(W, tuple(word))
    assert deodhar_expand(W, tuple(word)) == h
    assert bar(h) == h


@SETTINGS
@given(name=st.sampled_from(RANK2), data=st.data())
def test_kl_elements_are_self_dual(name, data):
    W = system(name)
    w = data.draw(st.integers(0, len(W) - 1))
    C = kl_element(W, W.words[w])
    assert bar(C) == C and C.coeff(W.words[w]) == LaurentPoly(1)


# light leaves -------------------------------------------------------------

@SETTINGS
@given(name=st.sampled_from(SMALL), data=st.data())
def test_light_leaf_degree_is_defect(name, data):
    W, ch = system(name), choices(name)
    word = tuple(data.draw(st.lists(st.integers(0, W.n - 1), max_size=6)))
    bits = tuple(data.draw(st.lists(st.integers(0, 1), min_size=len(word), max_size=len(word))))
    e = W.subexpression(word, bits)
    d, rex = light_leaf(word, e, ch)
    assert d.degree() == e.defect and d.top == rex


# diagrams -------------------------------------------------------------------

@SETTINGS
@given(name=st.sampled_from(SMALL), seed=st.integers(0, 2 ** 32))
def test_diagram_flip_and_json_roundtrip(name, seed):
    r = real(name)
    d = random_diagram(r, random.Random(seed))
    assert d.flip().flip() == d
    assert DiagramWord.from_json(d.dumps(), r) == d
    assert d.flip().degree() == d.degree()


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(name=st.sampled_from(SMALL), seed=st.integers(0, 2 ** 32))
def test_tensor_backend_agrees_with_localization(name, seed):
    rng = random.Random(seed)
    d = random_diagram(real(name), rng)
    ok, witness = oracle_check(d, trials=2, rng=rng)
    assert ok, (str(d), witness)


# Temperley-Lieb ---------------------------------------------------------------

def jw_cases():
    out = []
    for name in RANK2:
        m = real(name).coxeter[0][1]
        for n in range(1, m):
            out.append((name, n))
    return out


@SETTINGS
@given(case=st.sampled_from(jw_cases()), left=st.integers(0, 1))
def test_jones_wenzl_is_an_annihilated_idempotent(case, left):
    name, n = case
    J = jones_wenzl(real(name), n, left, 1 - left)
    assert J @ J == J and annihilated(J, n)
    assert J.coefficient(Matching.identity(n)) == 1


@SETTINGS
@given(name=st.sampled_from(RANK2), left=st.integers(0, 1))
def test_top_projector_is_rotation_invariant(name, left):
    r = real(name)
    n = r.coxeter[0][1] - 1
    assert jones_wenzl(r, n, left, 1 - left).rotate() == jones_wenzl(r, n, 1 - left, left)


def tl_words(n):
    return st.lists(st.integers(0, n - 2), max_size=4)


@SETTINGS
@given(name=st.sampled_from(["A2", "B2"]), n=st.integers(2, 4), data=st.data())
def test_soergel_image_is_multiplicative(name, n, data):
    r = real(name)
    a, b = tl_identity(r, 0, 1, n), tl_identity(r, 0, 1, n)
    for i in data.draw(tl_words(n)):
        a = a @ tl_generator(r, 0, 1, n, i)
    for i in data.draw(tl_words(n)):
        b = b @ tl_generator(r, 0, 1, n, i)
    lhs = tl_to_matrix(a @ b, shape=(n, n))
    rhs = tl_to_matrix(a, shape=(n, n)) @ tl_to_matrix(b, shape=(n, n))
    assert lhs == rhs


@SETTINGS
@given(n=st.integers(2, 5), data=st.data())
def test_non_identity_matchings_factor_through_fewer_strands(n, data):
    r = real("A2")
    M = Matching.identity(n)
    J = tl_identity(r, 0, 1, n)
    for i in data.draw(st.lists(st.integers(0, n - 2), min_size=1, max_size=4)):
        J = J @ tl_generator(r, 0, 1, n, i)
    for M in J.terms:
        if M != Matching.identity(n):
            d = matching_to_soergel(r, M, 0, 1, Flank())
            assert d.is_strictly_negative_positive(), str(M)
