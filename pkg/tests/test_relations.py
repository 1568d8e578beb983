import pytest

from soergel.diagram import Slice
from soergel.errors import RelationFailed
from soergel.relations import (D, class_cycle, ev, parabolic_longest, three_color_type,
                               top_entry, verify_relation_suite)
from soergel.relations import _equal
from soergel.report import Report

from support import real, system


@pytest.mark.parametrize("name", ["A1xA1", "A2", "B2"])
def test_rank_two_suites(name):
    rep = verify_relation_suite(real(name), raise_on_failure=True)
    assert rep.ok
    names = {c.name.split("[")[0] for c in rep.checks}
    for expected in ("barbell", "needle", "two-color-associativity", "dot2m", "pitchfork"):
        assert expected in names


def test_three_color_classification():
    assert three_color_type(real("A3"), (0, 1, 2)) == "A3"
    assert three_color_type(real("B3"), (0, 1, 2)) == "B3"
    assert three_color_type(real("A1xA2"), (0, 1, 2)) == "A1xI2(3)"
    assert three_color_type(real("A1xA1xA1"), (0, 1, 2)) == "A1xA1xA1"
    assert three_color_type(real("H3"), (0, 1, 2)) == "H3"


@pytest.mark.parametrize("name,classes", [("A3", 8), ("B3", 14)])
def test_commutation_classes_form_a_cycle(name, classes):
    W = system(name)
    w0 = parabolic_longest(W, (0, 1, 2))
    assert w0 == W.longest_element().index
    rexes, cls, order = class_cycle(W, w0)
    assert order is not None and len(order) == classes


def test_failed_equality_produces_witness():
    r = real("A2")
    rep = Report("probe")
    with rep.timed("wrong") as b:
        _equal(b, ev(D(r, (0,), Slice("enddot", 0, 0), Slice("startdot", 0, 0))),
               ev(D(r, (0,))))
    assert not rep.ok and rep.failures()[0].witness
    with rep.timed("crash") as b:
        raise ZeroDivisionError("boom")
    assert "ZeroDivisionError" in rep.checks[-1].witness
    assert "FAIL" in rep.render() and rep.to_json()["ok"] is False


def test_raise_on_failure_carries_name(monkeypatch):
    import soergel.relations as rel

    def broken(real_, s, report):
        report.add("planted", False, "forced")

    monkeypatch.setattr(rel, "one_color_relations", broken)
    with pytest.raises(RelationFailed) as info:
        verify_relation_suite(real("A2"), two_color=False, raise_on_failure=True)
    assert "planted" in str(info.value)


def test_vertex_top_entry_is_one():
    r = real("B2")
    assert top_entry(ev(D(r, (0, 1, 0, 1), Slice("braid", 0, 0, 1)))) == 1
