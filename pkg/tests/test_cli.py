import json
import subprocess
import sys

import pytest

import upperplex.cli as cli
from upperplex.cli import main
from upperplex.complex import Hypergraph, closure, write_simplices
from upperplex.errors import LawViolation

from conftest import RP2_TRIANGLES


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_predict(capsys):
    code, out, _ = run(capsys, "predict", "--n", "100", "--r", "2", "--alpha", "inf,inf,1.5")
    assert code == 0
    data = json.loads(out)
    assert data["profile"]["d"] == "1/3"
    assert data["predictions"]["f"]["1"] == pytest.approx(500)
    assert data["exponent_law_failures"] == []


def test_predict_boundary_declines(capsys):
    code, out, _ = run(capsys, "predict", "--n", "10", "--r", "1", "--alpha", "0,0")
    assert code == 0 and json.loads(out)["predictions"] is None


def test_sample_is_seeded(capsys, tmp_path):
    args = ["sample", "--n", "12", "--r", "2", "--alpha", "0.5,1,1.5", "--seed", "3"]
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, "--seed", "3", *args[:-2])
    assert a == b and a.startswith("# n=12 r=2")
    out, raw = tmp_path / "y.txt", tmp_path / "x.txt"
    code, _, _ = run(capsys, *args, "--model", "lower", "--out", str(out), "--raw-out", str(raw))
    assert code == 0 and out.exists() and raw.exists()


def test_homology(capsys, tmp_path):
    path = tmp_path / "rp2.txt"
    write_simplices(closure(Hypergraph(RP2_TRIANGLES)), path)
    code, out, _ = run(capsys, "homology", "--in", str(path), "--exact")
    assert code == 0
    assert json.loads(out) == {"betti": [0, 0, 0], "torsion": [[], [2], []], "empty": False}


def test_collapse(capsys, tmp_path):
    path = tmp_path / "x.txt"
    write_simplices(Hypergraph([(0, 1, 2, 3)]), path)
    code, out, _ = run(capsys, "collapse", "--in", str(path), "--ell", "1", "--verify",
                       "--out", str(tmp_path / "yp.txt"))
    assert code == 0 and json.loads(out)["f_prime"] == [4, 3, 0, 0]
    write_simplices(Hypergraph([(0, 1, 2), (0, 1)]), path)
    code, out, _ = run(capsys, "collapse", "--in", str(path), "--ell", "1", "--deleted-dim", "2")
    assert json.loads(out)["f_tilde_prime"][2] == 0


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--n", "1", "--r", "1", "--p", "1/2,1/3")
    assert code == 0
    rows = json.loads(out)
    assert sum(r["mass_num"] / r["mass_den"] for r in rows) == pytest.approx(1)


def test_lm(capsys):
    code, out, _ = run(capsys, "lm", "--n", "12", "--r", "2", "--alpha", "inf,inf,1.2")
    assert code == 0
    data = json.loads(out)
    assert data["ell"] == 1 and data["i"] == 2 and data["preimage_min"] >= 1


def test_lm_outside_regime_is_usage_error(capsys):
    code, _, err = run(capsys, "lm", "--n", "12", "--r", "0", "--alpha", "2")
    assert code == 1 and "regime" in err


def test_experiment_csv_and_config(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 12, "r": 2, "alpha": "inf,0.8,1.4", "trials": 4,
                               "master_seed": 9}))
    out = tmp_path / "r.csv"
    code, _, _ = run(capsys, "--config", str(cfg), "experiment", "--out", str(out),
                     "--summary", str(tmp_path / "s.json"))
    assert code == 0
    assert len(out.read_text().splitlines()) == 5
    summary = json.loads((tmp_path / "s.json").read_text())
    assert summary["trials"] == 4 and "checks" in summary
    # flags override the file
    code, _, _ = run(capsys, "experiment", "--config", str(cfg), "--trials", "2", "--threads",
                     "2", "--format", "jsonl", "--out", str(tmp_path / "r.jsonl"),
                     "--summary", str(tmp_path / "s2.json"))
    assert code == 0
    assert len((tmp_path / "r.jsonl").read_text().splitlines()) == 2


def test_experiment_missing_settings(capsys):
    code, _, err = run(capsys, "experiment", "--n", "10")
    assert code == 1 and "missing required setting" in err


def test_resource_cap_exit_code(capsys, tmp_path, monkeypatch):
    path = tmp_path / "big.txt"
    write_simplices(closure(Hypergraph([(0, 1, 2, 3, 4, 5)])), path)
    original = cli.homology_profile
    monkeypatch.setattr(cli, "homology_profile", lambda Y, mode: original(Y, mode=mode, cap=3))
    code, _, err = run(capsys, "homology", "--in", str(path))
    assert code == 2 and "cap" in err


def test_law_failure_exit_code(capsys, monkeypatch):
    def boom(config):
        raise LawViolation("f_1 > ghat_1")
    monkeypatch.setattr(cli, "run_experiment", boom)
    code, _, err = run(capsys, "experiment", "--n", "10", "--r", "1", "--alpha", "0,1")
    assert code == 3 and "deterministic law" in err


def test_usage_errors_exit_with_one():
    with pytest.raises(SystemExit) as exc:
        main(["predict", "--n", "3"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 1


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "upperplex.cli", "predict", "--n", "50",
                           "--r", "0", "--alpha", "2"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["profile"]["regime"] == "U_minus"
