import pytest

from pitman_a11.cli import run_cli
from pitman_a11.stochastic.io import csv_to_rows


def test_list(capsys):
    assert run_cli(["list"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) >= 12
    assert lines[0].startswith("denominator_identity,A1")


def test_experiment_denominator_identity(capsys):
    assert run_cli(["experiment", "denominator_identity", "--m", "2", "--seed", "1"]) == 0
    out = capsys.readouterr().out
    assert "rel_diff_m2" in out


def test_experiment_failure_exit_code(capsys):
    # a truncation far too short for the kernel mass check
    assert run_cli(["experiment", "kernel_oracle", "N=6"]) == 1


@pytest.mark.parametrize("argv", [
    ["--bogus"],
    ["list", "--bogus"],
    ["experiment", "denominator_identity", "--nope", "3"],
    ["experiment", "not_an_experiment"],
    ["experiment", "denominator_identity", "--horizon", "5"],
    ["experiment", "denominator_identity", "bogus=1"],
    ["char", "--m", "2", "--a", "1"],
    ["char", "--lambda-n", "1", "--lambda-m", "3", "--m", "2"],
    [],
])
def test_usage_errors(argv, capsys):
    assert run_cli(argv) == 2
    assert capsys.readouterr().err


def test_bad_flag_prints_usage(capsys):
    assert run_cli(["--bogus"]) == 2
    assert "usage:" in capsys.readouterr().err


def test_char_csv(capsys):
    assert run_cli(["char", "--m", "2", "--lambda-n", "0,1", "--lambda-m", "0"]) == 0
    head, rows = csv_to_rows(capsys.readouterr().out)
    assert head == ["lambda_n", "lambda_m", "a", "b", "value", "certified_error"]
    assert float(rows[0][4]) == pytest.approx(1.0)
    assert float(rows[1][2]) == 0.25 and float(rows[1][3]) == 1.0


def test_sample_walk_to_file(tmp_path):
    out = tmp_path / "w.csv"
    assert run_cli(["sample", "--m", "2", "--horizon", "6", "--n-replicas", "2", "--seed", "4", "--output", str(out)]) == 0
    head, rows = csv_to_rows(out.read_text())
    assert head[:4] == ["replica", "t", "coord_t", "coord_x"]
    assert len(rows) == 14


def test_sample_seed_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("PITMAN_A11_SEED", "17")
    run_cli(["sample", "--kind", "strings", "--p", "3"])
    a = capsys.readouterr().out
    run_cli(["sample", "--kind", "strings", "--p", "3", "--seed", "17"])
    assert capsys.readouterr().out == a


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "c.txt"
    cfg.write_text("# comment\nm = 1,2\n")
    assert run_cli(["experiment", "denominator_identity", "--config", str(cfg)]) == 0
    out = capsys.readouterr().out
    assert "rel_diff_m1" in out and "rel_diff_m2" in out


def test_help_exits_zero(capsys):
    assert run_cli(["--help"]) == 0
    assert "experiment" in capsys.readouterr().out
