import json

import pytest

from perioda.cli import run_command
from perioda.enumeration import total_histories, write_sequence
from perioda.urn import UrnSpec, read_dist_csv


@pytest.fixture
def files(tmp_path):
    (tmp_path / "yp21.json").write_text(json.dumps({"p": 2, "ells": [0, 1], "b0": 1, "w0": 1}))
    (tmp_path / "bad.json").write_text("{not json")
    (tmp_path / "degenerate.json").write_text(json.dumps({"p": 2, "ells": [0, 1], "b0": 0, "w0": 1}))
    (tmp_path / "tri.json").write_text(json.dumps({"triangular": {"ell": 1, "p": 2, "n": 6}}))
    (tmp_path / "hook.json").write_text(json.dumps({"columns": [3, 2, 1]}))
    (tmp_path / "law.json").write_text(json.dumps({"ells": [0, 1], "b0": 1, "w0": 1}))
    spec = UrnSpec.young_polya(2, 1)
    (tmp_path / "yp.txt").write_text(write_sequence(total_histories(spec, n) for n in range(30)))
    return tmp_path


def test_exact_dist_csv(files):
    out = files / "dist.csv"
    assert run_command(["urn", "exact-dist", "--spec", str(files / "yp21.json"), "--n", "3", "--out", str(out)]) == 0
    assert read_dist_csv(out.read_text()) == {4: 6, 3: 8, 2: 8, 1: 8}


def test_simulation_is_byte_identical(files, capsys):
    args = ["urn", "simulate", "--spec", str(files / "yp21.json"), "--steps", "200", "--seed", "9", "--runs", "50"]
    assert run_command(args) == 0
    first = capsys.readouterr().out
    assert run_command(args) == 0
    assert capsys.readouterr().out == first
    assert first.splitlines()[0] == "run,black,white"


def test_corner_experiment_output(files, tmp_path, capsys):
    mom = tmp_path / "moments.csv"
    args = ["tableau", "corner", "--shape", str(files / "tri.json"), "--runs", "200", "--seed", "7",
            "--moments-out", str(mom)]
    assert run_command(args) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "run,corner_entry,rescaled" and len(out.splitlines()) == 201
    assert mom.read_text().splitlines()[0] == "r,analytic,empirical,stderr"


def test_usage_errors(files, capsys):
    assert run_command(["nonsense"]) == 1
    assert run_command(["urn", "exact-dist", "--spec", str(files / "yp21.json")]) == 1
    assert run_command(["urn", "exact-dist", "--spec", str(files / "bad.json"), "--n", "3"]) == 1
    assert run_command(["urn", "validate", "--spec", str(files / "degenerate.json")]) == 1
    assert run_command(["urn", "exact-dist", "--spec", str(files / "yp21.json"), "--n", "5", "--limit", "4"]) == 1


def test_verification_failure_exit_code(files):
    assert run_command(["limits", "factorization", "--ells", "0", "1", "--tol", "0"]) == 2
    assert run_command(["limits", "factorization", "--ells", "0", "1", "2"]) == 0


def test_guess_command(files, capsys):
    assert run_command(["enum", "guess", "--seq", str(files / "yp.txt")]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["order"] == 2 and rec["coeffs"][1] == ["-3/2"]


def test_density_commands(files, capsys):
    assert run_command(["density", "check", "--shape", str(files / "hook.json")]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["ext_identity"] and report["proportional"] and report["filament_identity"]
    assert run_command(["density", "law", "--shape", str(files / "hook.json")]) == 0
    assert capsys.readouterr().out.startswith("k,prob_num,prob_den\n")


def test_json_format(files, capsys):
    assert run_command(["limits", "moments", "--spec", str(files / "law.json"), "--r-max", "3", "--format", "json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert rows[0] == {"r": 0, "analytic": "1"}
    assert float(rows[3]["analytic"]) == pytest.approx(1 / 3, rel=1e-14)


def test_precision_env(files, capsys, monkeypatch):
    monkeypatch.setenv("PERIODA_PRECISION", "80")
    assert run_command(["enum", "moments", "--spec", str(files / "yp21.json"), "--n", "10", "--r-max", "1"]) == 0
    assert "0.955274826476961" in capsys.readouterr().out


def test_verify_single_criterion(capsys):
    assert run_command(["verify", "criterion", "1"]) == 0
    assert capsys.readouterr().out.startswith("[PASS]  1.")
