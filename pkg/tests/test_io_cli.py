import io as stdio
import json

import pytest

from bbatlas import io
from bbatlas.cli import run, summary_line
from bbatlas.enumeration import enumerate_graphs, maximal_graph
from bbatlas.graph import canonical_key, validate
from bbatlas.poly import PoincarePoly


def call(argv):
    buf = stdio.StringIO()
    code = run(argv, buf)
    return code, buf.getvalue()


def test_graph_roundtrip():
    g = maximal_graph(2, 3)
    back = io.graph_from_dict(io.dumps(io.graph_to_dict(g)))
    assert canonical_key(back) == canonical_key(g)
    for h in enumerate_graphs(2, 2, 2):
        assert io.graph_from_dict(io.graph_to_dict(h)) == h


def test_poly_roundtrip():
    p = PoincarePoly((1, 2, 3, 3, 2, 1))
    text = io.dumps(io.poly_to_dict(p))
    assert text == '{"poly":[1,2,3,3,2,1]}'
    assert io.poly_from_dict(text) == p


def test_unknown_field_rejected_with_pointer():
    data = io.graph_to_dict(maximal_graph(0, 1))
    data["edges"][0]["colour"] = "red"
    with pytest.raises(io.SchemaViolation) as exc:
        io.graph_from_dict(data)
    assert exc.value.pointer == "/edges/0"


def test_bad_label_pointer():
    data = io.graph_to_dict(maximal_graph(0, 1))
    data["vertices"][1]["label"] = "Q"
    with pytest.raises(io.SchemaViolation) as exc:
        io.graph_from_dict(data)
    assert exc.value.pointer == "/vertices/1/label"


def test_wrong_schema_version():
    data = io.graph_to_dict(maximal_graph(0, 1))
    data["schema_version"] = 99
    with pytest.raises(io.SchemaViolation):
        io.graph_from_dict(data)


def test_p_to_p_is_schema_valid_but_invalid():
    data = {"n": 0, "d": 1, "vertices": [{"id": 0, "label": "P"}, {"id": 1, "label": "P"}],
            "edges": [{"p": 0, "h": 1, "degree": 1}], "legs": []}
    g = io.graph_from_dict(data)
    assert any("P to P" in v for v in validate(g, 2).violations)


def test_config_roundtrip():
    import random

    from bbatlas.flow import random_config

    cfg = random_config(random.Random(3), 2, 2, 3)
    assert io.config_from_dict(io.dumps(io.config_to_dict(cfg))) == cfg


def test_dot():
    dot = io.to_dot(maximal_graph(1, 2))
    assert "shape=circle" in dot and 'label="H,0"' in dot and "leg1" in dot


def test_cli_poincare(tmp_path, monkeypatch):
    monkeypatch.setenv("BBATLAS_CACHE", str(tmp_path))
    code, out = call(["poincare", "--r", "2", "--d", "1", "--n", "0"])
    assert code == 0 and json.loads(out) == {"poly": [1, 1, 1]}
    assert (tmp_path / "Q_r2_d1_n0.json").exists()


def test_cli_summary():
    code, out = call(["enumerate", "--n", "0", "--d", "2", "--r", "2", "--format", "summary"])
    assert code == 0 and out.strip() == "5 graphs; codim histogram 0:1 1:1 2:1 3:2"


def test_summary_derived_from_json():
    code, out = call(["enumerate", "--n", "1", "--d", "2", "--r", "2"])
    data = json.loads(out)
    assert summary_line(data).startswith("9 graphs")


def test_cli_usage_error(capsys):
    code, _ = call(["enumerate", "--n", "0", "--d", "2", "--r", "2", "--bogus"])
    assert code == 2
    assert "--bogus" in capsys.readouterr().err


def test_cli_domain_error():
    code, out = call(["poincare", "--r", "2", "--d", "3", "--n", "0", "--no-cache"])
    assert code == 1
    assert json.loads(out)["error"] == "EquivariantDataRequired"


def test_cli_gathmann():
    code, out = call(["gathmann", "--alpha", "2", "--j", "1", "--d", "2", "--r", "2"])
    data = json.loads(out)
    assert code == 0 and len(data["corrections"]) == 2
    code, out = call(["gathmann", "--alpha", "2", "--j", "1", "--d", "2", "--r", "2", "--ordered"])
    assert len(json.loads(out)["corrections"]) == 2


def test_cli_limit_and_boundary(tmp_path):
    cfg = tmp_path / "map.json"
    cfg.write_text(json.dumps({"forms": ["z*w", "z^2 + w^2"], "marked": [["0", "1"]]}))
    code, out = call(["limit", "--poly", str(cfg), "--r", "1"])
    assert code == 0
    assert json.loads(out)["graph"]["n"] == 1
    b = tmp_path / "b.json"
    b.write_text(json.dumps({"alpha": [1, 1, 0], "d0": 0, "internal": [1, 2],
                             "groups": [{"degree": 1, "node_mult": 1, "markings": [3]},
                                        {"degree": 1, "node_mult": 1, "markings": []}]}))
    code, out = call(["boundary", "--config", str(b), "--r", "2"])
    assert code == 0 and json.loads(out)["witness"]


def test_cli_oracle():
    code, out = call(["oracle", "mbar", "--m", "5"])
    assert code == 0 and json.loads(out)["poly"] == [1, 5, 1]


def test_cli_poset(tmp_path):
    dot = tmp_path / "h.dot"
    code, out = call(["poset", "--n", "0", "--d", "2", "--r", "2", "--check-filterable", "--hasse", str(dot)])
    data = json.loads(out)
    assert code == 0 and data["filterable"] and dot.read_text().startswith("digraph")


def test_determinism():
    argv = ["enumerate", "--n", "2", "--d", "3", "--r", "2", "--seed", "7"]
    assert call(argv) == call(argv)
    assert call(argv + ["--jobs", "3"])[1] == call(argv)[1]


def test_selftest_runs():
    code, out = call(["selftest", "--max-d", "2", "--max-n", "1", "--max-r", "2"])
    rows = out.strip().splitlines()
    assert len(rows) == 16
    assert code == 0, out


def test_cli_limit_from_polynomial_file(tmp_path):
    path = tmp_path / "map.json"
    path.write_text(json.dumps({"forms": ["z^2", "z*w", "w^2"], "marked": [[0, 1]]}))
    buf = stdio.StringIO()
    assert run(["limit", "--poly", str(path), "--r", "2"], buf) == 0
    out = json.loads(buf.getvalue())
    assert out["zeros"][0]["multiplicity"] == 2
    assert out["zeros"][0]["markings"] == [1]
