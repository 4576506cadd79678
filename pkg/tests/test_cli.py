import json

import pytest

from dehntwist.cli import main, parse_bivariate_terms, parse_exponents, BadInput
from dehntwist.distance import is_nontrivial_logical
from dehntwist.io import read_bundle
from dehntwist.lgroup import gl_order

BP5 = ["build", "bp", "--q", "5", "--p1", "0,1,5", "--p2", "0,2,7"]
BB5 = ["build", "bb", "--A", "a9,b1,b2", "--B", "e,a2,a7", "--j", "15", "--k", "3"]


def run(capsys, *argv):
    rc = main(list(argv))
    return rc, capsys.readouterr().out


@pytest.fixture
def out(tmp_path):
    return str(tmp_path)


def test_flag_syntax():
    assert parse_exponents("0,1,5") == [0, 1, 5]
    assert parse_bivariate_terms("a9,b1,b2") == [(9, 0), (0, 1), (0, 2)]
    assert parse_bivariate_terms("e,a2,a7,a12b1,ab") == [(0, 0), (2, 0), (7, 0), (12, 1), (1, 1)]
    for bad in ("", "0,y", "-1"):
        with pytest.raises(BadInput):
            parse_exponents(bad)
    with pytest.raises(BadInput):
        parse_bivariate_terms("c3")


def test_build_examples(capsys, out, tmp_path):
    rc, text = run(capsys, *BP5, "--out", out, "--alist")
    assert rc == 0 and "[[90,8]]" in text
    assert (tmp_path / "bp_q5_hx.alist").exists()
    data = json.loads((tmp_path / "bp_q5.json").read_text())
    assert data["config"]["p1"] == "0,1,5" and data["k"] == 8
    rc, text = run(capsys, "build", "hgp", "--q", "1", "--out", out)
    assert rc == 0 and "[[18,8]]" in text
    rc, text = run(capsys, *BB5, "--out", out)
    assert rc == 0 and "[[90,8]]" in text


def test_build_bad_input(capsys, out):
    rc, _ = run(capsys, "build", "bp", "--q", "5", "--p1", "0,1", "--out", out)
    assert rc == 4
    rc, _ = run(capsys, "build", "bp", "--q", "5", "--p1", "0,z", "--out", out)
    assert rc == 4
    with pytest.raises(SystemExit) as exc:
        main(["build", "nope"])
    assert exc.value.code == 4


def test_build_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run(capsys, *BP5, "--out", str(a))
    run(capsys, *BP5, "--out", str(b))
    da = json.loads((a / "bp_q5.json").read_text())
    db = json.loads((b / "bp_q5.json").read_text())
    da["config"].pop("out"), db["config"].pop("out")
    assert da == db


def test_env_out_dir(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("DEHNTWIST_OUT", str(tmp_path / "env"))
    assert run(capsys, "build", "hgp", "--q", "1")[0] == 0
    assert (tmp_path / "env" / "hgp_q1.json").exists()


def test_verify(capsys, out, tmp_path):
    run(capsys, *BP5, "--out", out)
    run(capsys, *BB5, "--out", out)
    rc, text = run(capsys, "verify", str(tmp_path / "bp_q5.json"), "--out", out)
    assert rc == 0 and text.strip().endswith("verify: pass")
    rc, text = run(capsys, "verify", str(tmp_path / "bb_15x3.json"), "--against",
                   str(tmp_path / "bp_q5.json"), "--out", out)
    assert rc == 0 and "PASS equivalence" in text
    data = json.loads((tmp_path / "bp_q5.json").read_text())
    row = data["hx"][0]
    data["hx"][0] = row[:-1] if row[-1] != 89 else row[:-1]
    (tmp_path / "flipped.json").write_text(json.dumps(data))
    rc, text = run(capsys, "verify", str(tmp_path / "flipped.json"), "--out", out)
    assert rc == 2 and "FAIL commutation" in text
    report = json.loads((tmp_path / "verify_flipped.json").read_text())
    assert not report["passed"]


def test_twist_hgp_catalog(capsys, out, tmp_path):
    run(capsys, "build", "hgp", "--q", "3", "--out", out)
    rc, text = run(capsys, "twist", str(tmp_path / "hgp_q3.json"), "--catalog", "--out", out,
                   "--threads", "1")
    assert rc == 0
    s = json.loads((tmp_path / "catalog_summary.json").read_text())
    assert s["all_closed"] and s["max_weight"] == 9 and s["full_gl"]
    assert int(s["group_order"]) == gl_order(8)
    assert len(list(tmp_path.glob("twist_*.json"))) == 16


def test_twist_bp_catalog(capsys, out, tmp_path):
    run(capsys, *BP5, "--out", out)
    rc, text = run(capsys, "twist", str(tmp_path / "bp_q5.json"), "--catalog", "--out", out,
                   "--threads", "1")
    s = json.loads((tmp_path / "catalog_summary.json").read_text())
    assert rc == 0 and s["all_closed"] and s["max_weight"] == 16 and s["anchor_overlaps"] == [5]


def test_twist_bb_single_with_certificates(capsys, out, tmp_path):
    run(capsys, *BB5, "--out", out)
    rc, text = run(capsys, "twist", str(tmp_path / "bb_15x3.json"), "--orientation", "v",
                   "--from", "1", "--to", "0", "--target-t", "2", "--certify-wmax", "5",
                   "--out", out)
    assert rc == 0
    rep = json.loads((tmp_path / "twist_v10t2X.json").read_text())
    assert rep["via_balanced"]["balanced_p1"] == [0, 2, 7]
    assert rep["closed"] and all(c["min_lower"] >= 6 for c in rep["certificates"])


@pytest.mark.slow
def test_twist_bp_weight_6_intermediate(capsys, out, tmp_path):
    # at weight <= 6 one intermediate code of this twist has a weight-6 logical
    run(capsys, *BP5, "--out", out)
    rc, _ = run(capsys, "twist", str(tmp_path / "bp_q5.json"), "--orientation", "v",
                "--from", "0", "--to", "0", "--target-t", "1", "--certify-wmax", "6", "--out", out)
    rep = json.loads((tmp_path / "twist_v00t1X.json").read_text())
    lowers = [c["min_lower"] for c in rep["certificates"]]
    assert rc == 0 and min(lowers) == 6 and lowers.count(6) == 1
    third = rep["certificates"][2]
    assert third["X"]["witness"] is not None and len(third["X"]["witness"]) == 6


@pytest.mark.slow
def test_twist_bb_weight_6_spot_check(capsys, out, tmp_path):
    run(capsys, *BB5, "--out", out)
    rc, _ = run(capsys, "twist", str(tmp_path / "bb_15x3.json"), "--orientation", "v",
                "--from", "0", "--to", "0", "--certify-wmax", "6", "--out", out)
    rep = json.loads((tmp_path / "twist_v00t1X.json").read_text())
    assert rc == 0 and min(c["min_lower"] for c in rep["certificates"]) == 7


def test_twist_errors(capsys, out, tmp_path):
    assert run(capsys, "twist", str(tmp_path / "missing.json"), "--catalog")[0] == 4
    run(capsys, "build", "bp", "--q", "2", "--out", out)
    assert run(capsys, "twist", str(tmp_path / "bp_q2.json"), "--catalog", "--out", out)[0] == 4
    run(capsys, "build", "hgp", "--q", "1", "--out", out)
    assert run(capsys, "twist", str(tmp_path / "hgp_q1.json"), "--out", out)[0] == 4


def test_distance_commands(capsys, out, tmp_path):
    run(capsys, "build", "hgp", "--toric", "3", "--out", out)
    rc, text = run(capsys, "distance", str(tmp_path / "toric_3x3.json"), "--out", out)
    d = json.loads((tmp_path / "distance_toric_3x3.json").read_text())
    assert rc == 0 and d["combined"]["best_upper"] == 3 and d["combined"]["exact"]
    run(capsys, *BP5, "--out", out)
    bundle = str(tmp_path / "bp_q5.json")
    rc, _ = run(capsys, "distance", bundle, "--wmax", "3", "--isd-iters", "0", "--out", out)
    d = json.loads((tmp_path / "distance_bp_q5.json").read_text())
    assert rc == 0 and d["combined"]["certified_lower"] == 4 and d["combined"]["best_upper"] is None
    rc, _ = run(capsys, "distance", bundle, "--wmax", "6", "--budget", "1000000",
                "--isd-iters", "200", "--out", out, "--name", "partial")
    d = json.loads((tmp_path / "distance_partial.json").read_text())
    assert rc == 3 and d["budget_exceeded"] and d["combined"]["certified_lower"] == 5
    code = read_bundle(bundle)
    w = d["sides"]["X"]["witness"]
    assert is_nontrivial_logical(code, "X", w)


def test_config_file(capsys, out, tmp_path):
    run(capsys, "build", "hgp", "--q", "1", "--out", out)
    cfg = tmp_path / "job.cfg"
    cfg.write_text("# distance job\nwmax = 3\nisd-iters = 0\nsymmetry = false\n")
    rc, _ = run(capsys, "distance", str(tmp_path / "hgp_q1.json"), "--config", str(cfg), "--out", out)
    d = json.loads((tmp_path / "distance_hgp_q1.json").read_text())
    assert rc == 0 and d["config"]["wmax"] == 3 and d["config"]["symmetry"] is False
    assert d["combined"]["best_upper"] == 2
    cfg.write_text("bogus=1\n")
    assert run(capsys, "distance", str(tmp_path / "hgp_q1.json"), "--config", str(cfg))[0] == 4


def test_search_command(capsys, out, tmp_path):
    rc, text = run(capsys, "search", "--q", "2", "--out", out)
    assert rc == 0 and "d in [4,4]" in text
    rec = tmp_path / "search_q2_33.jsonl"
    assert len(rec.read_text().splitlines()) == 1
    rc, _ = run(capsys, "search", "--q", "2", "--out", out)
    assert len(rec.read_text().splitlines()) == 1
    rc, text = run(capsys, "search", "--q", "2", "--profile", "4,4", "--out", out)
    assert rc == 0 and text.startswith("0 candidates")
    assert run(capsys, "search", "--q", "2", "--profile", "x", "--out", out)[0] == 4
