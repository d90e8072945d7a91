import json

import pytest

from coopnc.cli import main
from coopnc.model import Scenario, save_scenario

from conftest import SHARED_HEAD, SWAP


@pytest.fixture
def scen(tmp_path):
    def make(wants, name="s.json", **kw):
        path = tmp_path / name
        save_scenario(Scenario.from_wants(wants, **kw), path)
        return str(path)
    return make


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_run(scen, capsys):
    code, out = run(capsys, "run", "--scenario", scen(SHARED_HEAD), "--scheme", "ncmi-batch")
    assert code == 0 and json.loads(out.out)["T"] == 2


def test_run_lossy_flag(scen, capsys):
    code, out = run(capsys, "run", "--scenario", scen(SWAP), "--scheme", "nonc-multi",
                    "--lossy", "--tie-mode", "lowest")
    assert code == 0 and json.loads(out.out)["lossy"]


def test_bounds(scen, capsys):
    code, out = run(capsys, "bounds", "--scenario", scen(SHARED_HEAD))
    d = json.loads(out.out)
    assert code == 0 and d["ub_batch_lossless"] == 2 and d["lb_lossless"] == 2


def test_oracle(scen, capsys):
    code, out = run(capsys, "oracle", "--scenario", scen(SWAP))
    assert code == 0 and json.loads(out.out)["optimal_T"] == 1


def test_oracle_too_big(scen, capsys):
    code, out = run(capsys, "oracle", "--scenario", scen([{1, 2, 3, 4, 5}, {1}]))
    assert code == 2 and "error" in out.err


def test_overhead(capsys):
    code, out = run(capsys, "overhead", "--variant", "instant-lossy", "--P", "8000", "--M", "30",
                    "--Nt", "5", "--N", "5")
    d = json.loads(out.out)
    assert code == 0 and d["fraction_exact"] == "11/1600"
    code, _ = run(capsys, "overhead", "--variant", "stage1", "--P", "8000", "--F", "100")
    assert code == 2


def test_sweep(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"schemes": ["ncmi-batch", "nonc-multi"], "sweep_var": "packets",
                               "grid": [6], "iterations": 2}))
    out_csv = tmp_path / "o.csv"
    code, out = run(capsys, "sweep", "--config", str(cfg), "--out", str(out_csv), "--quiet")
    assert code == 0 and len(out_csv.read_text().splitlines()) == 3


def test_bad_config(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"schemes": ["warp"], "sweep_var": "packets", "grid": [6]}))
    code, _ = run(capsys, "sweep", "--config", str(cfg), "--out", str(tmp_path / "x.csv"))
    assert code == 2


def test_missing_file(capsys):
    code, _ = run(capsys, "bounds", "--scenario", "/nonexistent/s.json")
    assert code == 2


def test_invariant_exit_code(monkeypatch, scen, capsys):
    from coopnc import cli
    from coopnc.errors import InvariantViolation

    def boom(*a, **k):
        raise InvariantViolation("sandwich broken")
    monkeypatch.setattr(cli, "run_scheme", boom)
    code, out = run(capsys, "run", "--scenario", scen(SHARED_HEAD), "--scheme", "ncmi-batch")
    assert code == 3 and "sandwich" in out.err
