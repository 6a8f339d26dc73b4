import json
import os

import pytest

from matdisc import cli, model


FIXTURE = os.path.join(os.path.dirname(__file__), "fixtures", "mb3.json")


def test_solve_fixture(tmp_path, capsys):
    out = tmp_path / "solve.json"
    code = cli.main(["solve", "--instance", FIXTURE, "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["bruteforce"]["value"] == pytest.approx(1.5, abs=1e-9)
    assert doc["bruteforce"]["bound_checks"]["tight_frame"]["satisfied"]
    names = {c["name"] for c in doc["checks"]}
    assert "disc_le_three_sigma" in names
    for row in doc["checks"]:
        assert set(row) == {"name", "lhs", "rhs", "slack", "pass"}


def test_verify_prop16_single(tmp_path):
    out = tmp_path / "p16.json"
    code = cli.main(["verify", "prop16", "--n", "3", "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["pass"] and doc["suite"] == "prop16"


def test_verify_rows_schema(tmp_path):
    out = tmp_path / "t15.json"
    assert cli.main(["verify", "thm15", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["total"] == len(doc["checks"]) and doc["failed"] == 0
    for row in doc["checks"]:
        assert row["slack"] == row["rhs"] - row["lhs"]


def test_report_determinism_across_threads_and_reruns(tmp_path):
    paths = [tmp_path / f"r{i}.json" for i in range(3)]
    assert cli.main(["verify", "thm13", "--count", "6", "--seed", "11", "--threads", "1", "--out", str(paths[0])]) == 0
    assert cli.main(["verify", "thm13", "--count", "6", "--seed", "11", "--threads", "4", "--out", str(paths[1])]) == 0
    assert cli.main(["verify", "thm13", "--count", "6", "--seed", "11", "--threads", "1", "--out", str(paths[2])]) == 0
    blobs = [p.read_bytes() for p in paths]
    assert blobs[0] == blobs[1] == blobs[2]


def test_replay_command(tmp_path):
    out = tmp_path / "replay.json"
    assert cli.main(["replay", "--instance", FIXTURE, "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["trace"]["passed"]
    assert doc["trace"]["p_empty_lambda_max"] <= 3.0 + 1e-9


def test_frames_gen_writes_loadable_instance(tmp_path, capsys):
    out = tmp_path / "frame.json"
    assert cli.main(["frames", "gen", "--n", "5", "--d", "3", "--out", str(out)]) == 0
    capsys.readouterr()
    inst = model.load_instance(out)
    assert inst.n == 5 and inst.dim == 3


def test_bench_csv(tmp_path):
    out = tmp_path / "bench.csv"
    assert cli.main(["bench", "--seed", "1", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "task,n,d,seconds"
    assert len(lines) > 1


def test_csv_format_for_verify(tmp_path):
    out = tmp_path / "rows.csv"
    assert cli.main(["verify", "prop16", "--n", "2", "--format", "csv", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "name,lhs,rhs,slack,pass"


def test_exit_codes_for_bad_input(tmp_path, capsys):
    assert cli.main(["solve", "--instance", "/nonexistent/file.json"]) == 2
    capsys.readouterr()
    assert cli.main(["verify", "not-a-suite"]) == 2
    capsys.readouterr()
    bad = tmp_path / "bad.json"
    bad.write_text("{broken")
    assert cli.main(["solve", "--instance", str(bad)]) == 2


def test_exit_one_on_failing_check(monkeypatch, capsys):
    def failing(cfg):
        return cli._finish({"command": "verify", "suite": "thm15", "checks": [cli._row("forced", 2.0, 1.0)]})

    monkeypatch.setitem(cli._SUITE_FNS, "thm15", failing)
    assert cli.main(["verify", "thm15"]) == 1
    out = capsys.readouterr().out
    assert '"pass": false' in out


def test_env_var_threads(monkeypatch):
    from matdisc._util import resolve_threads

    monkeypatch.setenv("SPECDISC_THREADS", "3")
    assert resolve_threads(None) == 3
    assert resolve_threads(2) == 2
    monkeypatch.delenv("SPECDISC_THREADS")
    assert resolve_threads(None) == 1


def test_runconfig_rejects_bad_tolerances():
    with pytest.raises(ValueError):
        cli.RunConfig(command="verify", suite="thm15", root_tol=-1.0)
    with pytest.raises(ValueError):
        cli.RunConfig(command="verify", suite="thm15", seed=2**64)
