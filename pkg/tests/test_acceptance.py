"""Acceptance criteria.  Every check is exact; a summary line per criterion
is printed at the end of the run."""
import random
import time

import pytest

from soergel.bimod import TensorElt, localized_vertex, solve_braid_vertex
from soergel.diagram import alternating, light_leaf
from soergel.hecke import (HeckeElt, LaurentPoly, deodhar_expand, epsilon, graded_hom_rank,
                           kl_element, product_of_kl_gens, rank2_kl_as_products,
                           rank2_product_expansion)
from soergel.jw import jones_wenzl, verify_dot2m
from soergel.localize import (LeafCache, diagonal_formula, double_leaves_census,
                              double_leaves_gram, ll_coefficients, oracle_check)
from soergel.relations import two_color_relations, verify_relation_suite
from soergel.report import Report
from soergel.ring import Frac, build_realization

from support import choices, random_diagram, real, system, words

v = LaurentPoly.v
TWO_COLOR = ["A2", "B2", "A1xA1"]


def criterion(n):
    return pytest.mark.criterion(n)


# 1. relation suite -------------------------------------------------------

ONE_COLOR = {"barbell", "polynomial-forcing", "associativity", "unit", "needle"}
TWO_COLOR_CHECKS = {"two-color-associativity", "doubled-vertex-idempotent", "dot2m",
                    "twocoloridemp", "pitchfork"}


def _names(rep):
    return {c.name.split("[")[0] for c in rep.checks}


@criterion(1)
@pytest.mark.parametrize("name", ["A1xA1", "A2", "B2"])
def test_relations_rank_two(name):
    rep = verify_relation_suite(real(name))
    assert rep.ok, rep.render()
    assert ONE_COLOR <= _names(rep) and TWO_COLOR_CHECKS <= _names(rep)


@criterion(1)
@pytest.mark.parametrize("name,kind", [("A1xA1xA1", "zamolodchikov"),
                                       ("A1xA2", "vertex-through-commuting"),
                                       ("A1xB2", "vertex-through-commuting")])
def test_relations_three_color_products(name, kind):
    rep = verify_relation_suite(real(name))
    assert rep.ok, rep.render()
    assert kind in _names(rep)


@criterion(1)
def test_relations_a3_under_30_seconds():
    t0 = time.perf_counter()
    rep = verify_relation_suite(real("A3"))
    elapsed = time.perf_counter() - t0
    assert rep.ok, rep.render()
    assert "zamolodchikov-A3" in _names(rep) and "dashed-zamolodchikov-A3" in _names(rep)
    assert elapsed < 30, elapsed


@criterion(1)
@pytest.mark.slow
def test_relations_b3_under_5_minutes():
    t0 = time.perf_counter()
    rep = verify_relation_suite(real("B3"))
    elapsed = time.perf_counter() - t0
    assert rep.ok, rep.render()
    assert "zamolodchikov-B3" in _names(rep)
    assert elapsed < 300, elapsed


@criterion(1)
def test_dot2m_coefficient_two_in_type_b():
    r = build_realization([[1, 4], [4, 1]], [[2, -1], [-2, 2]])
    for s, t in ((0, 1), (1, 0)):
        J = jones_wenzl(r, 3, s, t)
        assert 2 in [c for c in J.terms.values()]
        rep = verify_dot2m(r, s, t)
        assert rep.ok, rep.render()


# 2. Deodhar identity ----------------------------------------------------------

@criterion(2)
@pytest.mark.parametrize("name,max_len", [("A2", 8), ("B2", 8), ("A3", 6)])
def test_deodhar_identity_exhaustive(name, max_len):
    W = system(name)
    count = 0
    for x in words(W.n, max_len):
        assert deodhar_expand(W, x) == product_of_kl_gens(W, x), x
        count += 1
    assert count == sum(W.n ** k for k in range(max_len + 1))


@criterion(2)
def test_deodhar_worked_values():
    W = system("A2")
    h = deodhar_expand(W, "sss")
    assert epsilon(h) == v(-1) + v(1) * 2 + v(3)
    assert h.coeff("s") == v(-2) + LaurentPoly(2) + v(2)
    sts = deodhar_expand(W, "sts")
    assert epsilon(sts) == v(1) + v(3)
    assert sts == (HeckeElt.std(W, "sts") + HeckeElt.std(W, "ts").scale(v(1))
                   + HeckeElt.std(W, "st").scale(v(1)) + HeckeElt.std(W, "t").scale(v(2))
                   + HeckeElt.std(W, "s").scale(LaurentPoly(1) + v(2))
                   + HeckeElt.std(W, "").scale(v(1) + v(3)))


# 3. light-leaves triangularity ---------------------------------------------

LL_SCALES = [("A2", 6), ("B2", 6), ("A1xA1", 6), ("A3", 5)]


@criterion(3)
@pytest.mark.parametrize("name,max_len", LL_SCALES)
def test_light_leaves_triangular_with_product_diagonal(name, max_len):
    ch = choices(name)
    W, r = ch.system, ch.system.realization
    checked = 0
    for x in words(W.n, max_len):
        subs = W.all_subexpressions(x)
        by_mask = {e.mask: e for e in subs}
        for w in sorted({e.endpoint for e in subs}):
            co = ll_coefficients(x, w, ch)
            assert co.violations(W) == [], (x, w)
            for mask, val in co.diagonal().items():
                expected = diagonal_formula(r, W, by_mask[mask])
                assert val is not None and val == Frac.from_poly(expected), (x, mask)
            assert all(c.is_polynomial() for c in co.coeffs.values())
            checked += len(co.subexpressions)
    assert checked == sum(2 ** k * W.n ** k for k in range(max_len + 1))


# 4. double-leaves basis ----------------------------------------------------------

@criterion(4)
@pytest.mark.slow
@pytest.mark.parametrize("name,max_total", [("A2", 9), ("B2", 9), ("A1xA1", 9), ("A3", 8)])
def test_double_leaves_census(name, max_total):
    rep = double_leaves_census(choices(name), max_total, name)
    assert rep.ok, rep.failures[:5]
    n = system(name).n
    assert rep.pairs == sum((k + 1) * n ** k for k in range(max_total + 1))


@criterion(4)
@pytest.mark.parametrize("name,max_total", [("A2", 6), ("B2", 6), ("A1xA1", 6), ("A3", 5)])
def test_double_leaves_full_gram(name, max_total):
    ch = choices(name)
    cache = LeafCache(ch)
    W = ch.system
    for x in words(W.n, max_total):
        for y in words(W.n, max_total - len(x)):
            rep = double_leaves_gram(x, y, ch, cache)
            assert rep.ok, rep.to_json()


@criterion(4)
def test_endomorphisms_of_bs():
    W = system("A2")
    assert graded_hom_rank(W, "s", "s") == LaurentPoly(1) + v(2)
    rep = double_leaves_gram("s", "s", choices("A2"))
    assert rep.ok and rep.degrees == LaurentPoly(1) + v(2) and rep.count == 2


# 5. oracle equivalence ------------------------------------------------------------

@criterion(5)
def test_tensor_backend_matches_localization():
    rng = random.Random(20240601)
    names = ["A2", "B2", "A1xA1", "A3"]
    kinds = set()
    for i in range(200):
        d = random_diagram(real(names[i % 4]), rng, max_slices=6, max_width=4)
        assert 1 <= len(d.slices) <= 6 and d.maxwidth() <= 4
        assert all(sl.poly.total_degree() <= 2 for sl in d.slices if sl.kind == "box")
        kinds |= {sl.kind for sl in d.slices}
        ok, witness = oracle_check(d, trials=3, rng=rng)
        assert ok, (i, str(d), witness)
    assert {"braid", "box", "merge", "split", "startdot", "enddot"} <= kinds


# 6. vertex solver ------------------------------------------------------------------------

@criterion(6)
@pytest.mark.parametrize("name", ["A1xA1", "A2", "B2"])
@pytest.mark.parametrize("order", [(0, 1), (1, 0)])
def test_vertex_solution(name, order):
    r = real(name)
    s, t = order
    V = solve_braid_vertex(r, s, t)
    assert V.nullity == 1
    src, tgt = alternating(s, t, V.m), alternating(t, s, V.m)
    assert V.apply(TensorElt.one_tensor(r, src)) == TensorElt.one_tensor(r, tgt)
    assert all(r.ring.wdeg(p) == sum(b) - sum(c) for (c, b), p in V.entries.items())
    top = (1 << V.m) - 1
    assert localized_vertex(V)[top][top] == 1
    rep = Report("vertex")
    two_color_relations(r, s, t, rep, jw=False)
    assoc = [c for c in rep.checks if c.name.startswith("two-color-associativity")]
    assert assoc and all(c.passed for c in assoc)


# 7. KL sanity --------------------------------------------------------------------------

@criterion(7)
@pytest.mark.parametrize("name", ["A2", "B2", "A3", "G2"])
def test_kl_generator(name):
    W = system(name)
    for s in range(W.n):
        assert kl_element(W, (s,)) == HeckeElt.std(W, (s,)) + HeckeElt.one(W).scale(v(1))


@criterion(7)
@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_dihedral_smoothness(m):
    W = system(f"I2({m})")
    for w in W.elements():
        expected = HeckeElt(W, {y.index: v(w.length - y.length) for y in W.elements() if y <= w})
        assert kl_element(W, w) == expected, str(w)


@criterion(7)
def test_rank_two_identities():
    def P(W, word):
        return product_of_kl_gens(W, word)

    W = system("A1xA1")
    assert P(W, "st") == P(W, "ts")
    W = system("A2")
    assert P(W, "sts") - P(W, "s") == P(W, "tst") - P(W, "t") == kl_element(W, "sts")
    W = system("B2")
    lhs = P(W, "stst") - P(W, "st").scale(2)
    assert lhs == P(W, "tsts") - P(W, "ts").scale(2) == kl_element(W, "stst")
    W = system("I2(5)")
    lhs = P(W, "ststs") - P(W, "sts").scale(3) + P(W, "s")
    assert lhs == P(W, "tstst") - P(W, "tst").scale(3) + P(W, "t") == kl_element(W, "ststs")
    assert rank2_kl_as_products(system("A2"), 0, 1, 2) == {3: 1, 1: -1}
    assert rank2_kl_as_products(system("B2"), 0, 1, 3) == {4: 1, 2: -2}
    assert rank2_kl_as_products(system("I2(5)"), 0, 1, 4) == {5: 1, 3: -3, 1: 1}
    assert rank2_product_expansion(system("B2"), 0, 1, 2) == {3: 1, 1: 1}


# 8. defect bookkeeping ----------------------------------------------------------------

@criterion(8)
@pytest.mark.parametrize("name,max_len", LL_SCALES)
def test_light_leaf_degree_is_defect(name, max_len):
    ch = choices(name)
    W = ch.system
    for x in words(W.n, max_len):
        for e in W.all_subexpressions(x):
            d, _ = light_leaf(x, e, ch)
            assert d.degree() == e.defect, (x, e.bits)


@criterion(8)
def test_defect_tables():
    W = system("A2")
    e = W.identity.index
    sss = {x.bits: x.defect for x in W.all_subexpressions("sss") if x.endpoint == e}
    assert sss == {(1, 1, 0): 1, (0, 1, 1): 1, (1, 0, 1): -1, (0, 0, 0): 3}
    s = W.element("s").index
    sts = {x.bits: x.defect for x in W.all_subexpressions("sts") if x.endpoint == s}
    assert sorted(sts.values()) == [0, 2]
    assert sts == {(1, 0, 0): 0, (0, 0, 1): 2}
