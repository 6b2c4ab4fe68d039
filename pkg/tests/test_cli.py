import json
from pathlib import Path

import numpy as np
import pytest

from qkrylov import cli, io
from qkrylov.errors import ConfigInvalid, InputUnreadable, ParamInvalid
from qkrylov.linalg import condition_number

DATA = Path(__file__).resolve().parents[1] / "data"


def run(tmp_path, *args, name="out"):
    out = tmp_path / name
    code = cli.main([*args, "--out", str(out)])
    return code, out


def test_cg_on_bundled_sample_passes(tmp_path):
    code, out = run(tmp_path, "cg", "--matrix", str(DATA / "spd16.mtx"))
    assert code == 0
    rep = json.loads((out / "report.json").read_text())
    assert len(rep["rows"]) == 5
    assert all(r["bound_check"] and r["bound_ok"] for r in rep["rows"])
    assert all(r["seed"] == 0 and r["config_hash"] == rep["summary"]["config_hash"] for r in rep["rows"])
    assert (out / "report.csv").exists() and (out / "wall_time.json").exists()


def test_bundled_sample_matches_its_metadata():
    A = io.read_matrix(DATA / "spd16.mtx")
    meta = json.loads((DATA / "spd16.mtx.meta.json").read_text())
    assert np.allclose(np.linalg.eigvalsh(A), meta["spectrum"], atol=1e-12)
    assert condition_number(A) == pytest.approx(10, abs=1e-8)


def test_unknown_command(capsys):
    assert cli.main(["frobnicate"]) == 2
    err = capsys.readouterr().err
    assert "unknown command" in err and "usage:" in err
    with pytest.raises(ConfigInvalid, match="usage"):
        cli.build_config("frobnicate")
    assert cli.main([]) == 2


@pytest.mark.parametrize("command", cli.EXPERIMENTS)
def test_same_seed_gives_identical_report(tmp_path, command):
    c1, o1 = run(tmp_path, command, "--seed", "7", name="a")
    c2, o2 = run(tmp_path, command, "--seed", "7", name="b")
    assert c1 == c2 == 0
    assert (o1 / "report.json").read_bytes() == (o2 / "report.json").read_bytes()
    assert (o1 / "report.csv").read_bytes() == (o2 / "report.csv").read_bytes()


def test_different_seeds_differ(tmp_path):
    _, o1 = run(tmp_path, "matmul", "--seed", "1", name="a")
    _, o2 = run(tmp_path, "matmul", "--seed", "2", name="b")
    assert (o1 / "report.json").read_bytes() != (o2 / "report.json").read_bytes()


def test_config_precedence(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"command": "cg", "eps": 0.01, "seed": 3, "m_grid": [1, 2]}))
    c = cli.build_config("cg", cli.load_config_file(cfg), {"eps": "0.002"})
    assert c["eps"] == 0.002 and c.seed == 3 and c["m_grid"] == [1, 2]
    assert c["scheme"] == "rotation-tree"
    code, out = run(tmp_path, "cg", "--config", str(cfg), "--m_grid", "1,2,3")
    assert code == 0
    rep = json.loads((out / "report.json").read_text())
    assert rep["summary"]["config"]["m_grid"] == [1, 2, 3] and rep["summary"]["config"]["seed"] == 3


@pytest.mark.parametrize("overrides", [{"eps": "0"}, {"eps": "1.5"}, {"delta": "1"}, {"m_grid": ""},
                                       {"seed": "-1"}, {"eps": "abc"}, {"rho": "0.5"}, {"scheme": "bogus"}])
def test_invalid_configs(overrides):
    with pytest.raises(ConfigInvalid):
        cli.build_config("cg", {}, overrides)


def test_selector_values_are_checked(tmp_path):
    assert cli.main(["arnoldi", "--leaves", "bogus", "--out", str(tmp_path)]) == 2
    assert cli.main(["arnoldi", "--method", "bogus", "--out", str(tmp_path)]) == 2
    assert cli.main(["generate", "--kind", "bogus", "--out", str(tmp_path)]) == 2
    code, out = run(tmp_path, "arnoldi", "--leaves", "pm-pairs", "--m_grid", "2,3")
    assert code == 0


def test_config_file_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    nested = tmp_path / "nested.json"
    nested.write_text(json.dumps({"eps": {"x": 1}}))
    with pytest.raises(ConfigInvalid):
        cli.load_config_file(bad)
    with pytest.raises(ConfigInvalid):
        cli.load_config_file(nested)
    with pytest.raises(InputUnreadable):
        cli.load_config_file(tmp_path / "missing.json")
    assert cli.main(["cg", "--config", str(tmp_path / "missing.json")]) == 2
    assert cli.main(["cg", "--matrix", str(tmp_path / "missing.mtx"), "--out", str(tmp_path / "o")]) == 2
    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"command": "arnoldi"}))
    assert cli.main(["cg", "--config", str(wrong)]) == 2


def test_bound_violation_exits_nonzero(tmp_path, monkeypatch, capsys):
    def broken(cfg, rng):
        rep = cli.ExperimentReport("cg")
        rep.check_bound(rep.add(measured_error=1.0, predicted_bound=0.1))
        return rep

    monkeypatch.setitem(cli.RUNNERS, "cg", broken)
    code, _ = run(tmp_path, "cg")
    assert code == 1
    assert '"measured_error": 1.0' in capsys.readouterr().err


def test_generate_writes_matrix_and_metadata(tmp_path):
    path = tmp_path / "m" / "spd.mtx"
    code, _ = run(tmp_path, "generate", "--kind", "spd-spectrum", "--n", "16", "--kappa", "10",
                  "--path", str(path))
    assert code == 0
    A = io.read_matrix(path)
    meta = json.loads(path.with_name("spd.mtx.meta.json").read_text())
    assert condition_number(A) == pytest.approx(10, abs=1e-8)
    lam = np.linalg.eigvalsh(A)
    assert lam.min() >= 0.1 - 1e-12 and lam.max() <= 1 + 1e-12
    assert np.allclose(lam, meta["spectrum"], atol=1e-12)


def test_generated_kinds():
    A, meta = cli.test_matrix("contraction", {"n": 12, "rho": 0.95}, 1)
    assert np.abs(np.linalg.eigvalsh(A)).max() <= 0.95 + 1e-12
    L, meta = cli.test_matrix("laplacian", {"n": 8, "graph_kind": "cycle"}, 0)
    expected = np.sort(2 - 2 * np.cos(2 * np.pi * np.arange(8) / 8))
    assert np.allclose(np.linalg.eigvalsh(L), expected, atol=1e-12)
    assert np.allclose(meta["spectrum"], expected)
    H, _ = cli.test_matrix("hermitian-spectrum", {"n": 6}, 2)
    assert np.allclose(np.sort(np.linalg.eigvalsh(H))[[0, -1]], [-1, 1])
    G, _ = cli.test_matrix("adjacency-random", {"n": 6, "p": 0.5}, 3)
    assert np.array_equal(G, G.T) and set(np.unique(G.real)) <= {0.0, 1.0}
    for kind, params in [("nope", {}), ("contraction", {"rho": 0.99}), ("spd-spectrum", {"kappa": 0.5}),
                         ("laplacian", {"graph_kind": "wheel"}), ("spd-spectrum", {"n": 0})]:
        with pytest.raises(ParamInvalid):
            cli.test_matrix(kind, params, 0)


def test_graph_inputs(tmp_path):
    edges = tmp_path / "k4.txt"
    edges.write_text("0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n")
    code, out = run(tmp_path, "triangle", "--graph", str(edges))
    assert code == 0
    row = json.loads((out / "report.json").read_text())["rows"][0]
    assert row["found"] and row["agree"]
    code, out = run(tmp_path, "polygon", "--graph", str(edges), "--l_grid", "3,4", name="poly")
    assert code == 0
    rows = json.loads((out / "report.json").read_text())["rows"]
    assert [r["found"] for r in rows] == [True, True]


def test_curves_are_written(tmp_path):
    code, out = run(tmp_path, "arnoldi")
    assert code == 0
    dat = list(out.glob("*.dat"))
    assert dat
    for line in dat[0].read_text().splitlines():
        assert len(line.split()) == 2
