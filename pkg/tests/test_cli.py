import json

import pytest

from soergel.cli import EXIT_ERROR, EXIT_OK, EXIT_RELATION, EXIT_RESOURCE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_check_realization(capsys):
    code, data = run_json(capsys, "check-realization", "--type", "B2")
    assert code == EXIT_OK and data["group_size"] == 8 and data["balanced"]


def test_check_realization_from_config(capsys, tmp_path):
    cfg = tmp_path / "r.json"
    cfg.write_text(json.dumps({"colors": ["a", "b"], "coxeter": [[1, 4], [4, 1]],
                               "cartan": [["2", "-1"], ["-2", "2"]]}))
    code, data = run_json(capsys, "check-realization", "--config", str(cfg))
    assert code == EXIT_OK and data["realization"]["colors"] == ["a", "b"]


def test_hecke_commands(capsys):
    code, data = run_json(capsys, "hecke", "pairing", "--x", "s", "--y", "s")
    assert code == EXIT_OK and data["pairing"] == {"0": 1, "2": 1}
    code, data = run_json(capsys, "hecke", "kl", "--w", "sts")
    assert data["kl_element"]["e"] == {"3": 1}
    code, out = run(capsys, "hecke", "deodhar", "--word", "s s s")
    assert code == EXIT_OK and "H_e" in out


def test_light_leaf_commands(capsys):
    code, data = run_json(capsys, "ll", "coeffs", "--word", "sts", "--w", "s")
    assert code == EXIT_OK and data["violations"] == []
    code, out = run(capsys, "ll", "enumerate", "--word", "sts")
    assert code == EXIT_OK and out.strip()


def test_eval_and_render(capsys, tmp_path):
    d = tmp_path / "d.json"
    d.write_text(json.dumps({"bottom": ["s", "t", "s"], "slices": [
        {"kind": "braid", "color": "s", "color2": "t", "pos": 0},
        {"kind": "enddot", "color": "t", "pos": 0},
        {"kind": "box", "poly": "alpha_s", "gap": 1}]}))
    code, out = run(capsys, "eval", "--diagram", str(d), "--oracle")
    assert code == EXIT_OK and "agrees: True" in out
    code, out = run(capsys, "render", "--diagram", str(d), "--format", "tikz")
    assert code == EXIT_OK and "tikzpicture" in out
    png = tmp_path / "d.png"
    code, _ = run(capsys, "render", "--diagram", str(d), "--format", "png", "--out", str(png))
    assert code == EXIT_OK and png.stat().st_size > 0


def test_bad_diagram_is_an_error(capsys, tmp_path):
    d = tmp_path / "bad.json"
    d.write_text(json.dumps({"bottom": ["s"], "slices": [{"kind": "merge", "color": "s", "pos": 0}]}))
    code, _ = run(capsys, "eval", "--diagram", str(d))
    assert code == EXIT_ERROR
    code, _ = run(capsys, "check-realization", "--config", str(tmp_path / "missing.json"))
    assert code == EXIT_ERROR


def test_verify_and_gram(capsys, tmp_path):
    code, data = run_json(capsys, "verify", "--suite", "two-color", "--type", "B2")
    assert code == EXIT_OK and data["ok"]
    heat = tmp_path / "g.png"
    code, data = run_json(capsys, "gram", "--source", "sts", "--target", "sts", "--heatmap", str(heat))
    assert code == EXIT_OK and heat.exists()


def test_verify_reports_relation_failure(capsys, monkeypatch):
    import soergel.relations as rel

    def broken(real_, s, report):
        report.add("planted", False, "forced")

    monkeypatch.setattr(rel, "one_color_relations", broken)
    code, _ = run(capsys, "verify", "--suite", "one-color", "--jobs", "1")
    assert code == EXIT_RELATION


def test_parallel_verify_matches_serial(capsys):
    argv = ("verify", "--suite", "all", "--type", "A1xA2")
    _, serial = run_json(capsys, *argv, "--jobs", "1")
    _, parallel = run_json(capsys, *argv, "--jobs", "2")
    strip = lambda d: [(c["name"], c["passed"]) for c in d["checks"]]
    assert parallel["jobs"] == 2 and serial["ok"]
    assert strip(serial) == strip(parallel)


def test_resource_limit_exit_code(capsys):
    code, _ = run(capsys, "hecke", "kl", "--type", "I2(5)", "--radius", "2", "--w", "ststs")
    assert code == EXIT_RESOURCE


def test_jw_and_vertex_dumps(capsys):
    code, data = run_json(capsys, "jw", "dump", "--m", "4")
    assert code == EXIT_OK and data["n"] == 3
    code, data = run_json(capsys, "bimod", "dump-vertex")
    assert code == EXIT_OK and data["nullity"] == 1 and data["localized_top_entry"] == "1"
    code, out = run(capsys, "bimod", "dump-vertex", "--limit", "3")
    assert len(out.strip().splitlines()) == 4


def test_report_writes_figures(capsys, tmp_path):
    out = tmp_path / "rep"
    code, _ = run(capsys, "report", "--type", "B2", "--word", "s t s t", "--out", str(out))
    assert code == EXIT_OK
    for name in ("light_leaf.png", "vertex.png", "vertex_support.png", "double_leaves.png",
                 "summary.json"):
        assert (out / name).stat().st_size > 0


def test_parser_rejects_unknown_command():
    with pytest.raises(SystemExit):
        main(["frobnicate"])
