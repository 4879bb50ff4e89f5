"""Command line interface: exit codes, determinism, manifests, replay."""

import json

import pytest

from dtlab.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_oracle_reports_exact_value(capsys):
    code, out, _ = run_cli(capsys, "oracle", "*1*1")
    assert code == 0
    rep = json.loads(out)
    assert rep["value"] == "2/3"
    assert rep["engine"] == "2/3"
    assert rep["match"] is True


def test_oracle_no_compare(capsys):
    code, out, _ = run_cli(capsys, "oracle", "**11", "--no-compare")
    assert code == 0
    rep = json.loads(out)
    assert rep["value"] == "1/6"
    assert "engine" not in rep


def test_moment_known_value(capsys):
    code, out, _ = run_cli(capsys, "moment", "*1")
    assert code == 0
    rep = json.loads(out)
    assert rep["trace"] == "1/2"
    assert rep["moment"] == ["0/1", "1/1"]


def test_moment_empty_and_unbalanced(capsys):
    code, out, _ = run_cli(capsys, "moment", "")
    assert code == 0
    assert json.loads(out)["trace"] == "1"
    code, out, _ = run_cli(capsys, "moment", "11")
    assert code == 0
    rep = json.loads(out)
    assert rep["moment"] == [] and rep["trace"] == "0"


def test_moment_with_coefficients(capsys):
    code, out, _ = run_cli(capsys, "moment", "*1", "--coeffs", '[["3"], ["1/2"]]')
    assert code == 0
    rep = json.loads(out)
    assert rep["trace"] == "3/4"  # 3/2 * trace of x


def test_missing_word_is_config_error(capsys):
    code, _, err = run_cli(capsys, "moment")
    assert code == 2
    assert "error[cli.config]" in err


def test_bad_word_is_config_error(capsys):
    code, _, err = run_cli(capsys, "oracle", "1x")
    assert code == 2
    assert "error[" in err


def test_unknown_flag_exits_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--bogus"])
    assert exc.value.code == 2


def test_simulate_deterministic_stdout(capsys):
    args = ("simulate", "--n", "16", "--trials", "3", "--seed", "5")
    code1, out1, _ = run_cli(capsys, *args)
    code2, out2, _ = run_cli(capsys, *args)
    assert out1 == out2
    assert code1 == code2
    rep = json.loads(out1)
    assert rep["N"] == 16 and rep["trials"] == 3


def test_simulate_csv_stdout(capsys):
    code, out, _ = run_cli(
        capsys, "simulate", "--n", "16", "--trials", "2", "--format", "csv"
    )
    lines = out.strip().splitlines()
    assert lines[0] == "word,estimate,reference,rel_error"
    assert len(lines) == 9  # 8 balanced words up to length 4


def test_simulate_kinds(capsys):
    for kind in ("semicircle", "mix"):
        code, out, _ = run_cli(
            capsys, "simulate", "--kind", kind, "--n", "64", "--trials", "8"
        )
        assert code == 0, kind
        assert json.loads(out)["kind"] == kind


def test_manifest_on_stderr(capsys):
    _, _, err = run_cli(capsys, "simulate", "--n", "16", "--trials", "2")
    manifest = json.loads(err.strip().splitlines()[-1])
    assert manifest["command"] == "simulate"
    assert manifest["seed_scheme"]["scheme"] == "numpy-seedsequence-spawn"
    assert manifest["config"]["n"] == 16


def test_config_file_overlay(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 16, "trials": 2, "seed": 9}))
    code, out, _ = run_cli(capsys, "simulate", "--config", str(cfg), "--trials", "4")
    rep = json.loads(out)
    assert rep["N"] == 16
    assert rep["trials"] == 4  # flag beats file


def test_config_file_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"bogus": 1}))
    code, _, err = run_cli(capsys, "simulate", "--config", str(cfg))
    assert code == 2
    assert "unknown config keys" in err


def test_out_dir_writes_report_rows_manifest(tmp_path, capsys):
    out = tmp_path / "run"
    code, stdout, _ = run_cli(
        capsys, "simulate", "--n", "16", "--trials", "2", "--out", str(out)
    )
    assert (out / "report.json").exists()
    assert (out / "trials.csv").exists()
    assert (out / "manifest.json").exists()
    assert "report:" in stdout
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["outputs"]["report"] == "report.json"
    rows = (out / "trials.csv").read_text().splitlines()
    assert rows[0].startswith("word,")


def test_figures_require_out(capsys):
    code, _, err = run_cli(capsys, "simulate", "--n", "16", "--trials", "2", "--figures")
    assert code == 2
    assert "--figures requires --out" in err


def test_figures_written(tmp_path, capsys):
    out = tmp_path / "run"
    code, _, _ = run_cli(
        capsys, "simulate", "--n", "16", "--trials", "2", "--out", str(out), "--figures"
    )
    assert (out / "figures" / "simulate.png").stat().st_size > 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["outputs"]["figures"] == ["figures/simulate.png"]


def test_replay_reproduces_report(tmp_path, capsys):
    out = tmp_path / "run"
    run_cli(capsys, "simulate", "--n", "16", "--trials", "2", "--out", str(out))
    code, stdout, _ = run_cli(capsys, "replay", str(out / "manifest.json"))
    assert code == 0
    assert json.loads(stdout)["replay_match"] is True


def test_replay_detects_divergence(tmp_path, capsys):
    out = tmp_path / "run"
    run_cli(capsys, "simulate", "--n", "16", "--trials", "2", "--out", str(out))
    report = json.loads((out / "report.json").read_text())
    report["estimates"][0] += 1e-9
    (out / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    code, stdout, _ = run_cli(capsys, "replay", str(out / "manifest.json"))
    assert code == 1
    assert json.loads(stdout)["replay_match"] is False


def test_hs_command(capsys):
    code, out, _ = run_cli(capsys, "hs", "--n", "32", "--seed", "1")
    assert code == 0
    rep = json.loads(out)
    assert rep["passed"] is True
    assert rep["lattice"]["passed"] is True
    assert rep["worst_invariance_rel"] <= 1e-8


def test_angle_two_cluster_small(tmp_path, capsys):
    cfg = tmp_path / "angle.json"
    cfg.write_text(json.dumps({"n": 64, "trials": 2}))
    code, out, _ = run_cli(capsys, "angle", "--config", str(cfg))
    assert code == 0
    rep = json.loads(out)
    assert rep["experiment"] == "two-cluster"
    assert rep["bound_main"] == pytest.approx(7**-0.5)
    assert rep["passed"] is True


def test_angle_numerical_abort_exit_code(tmp_path, capsys):
    cfg = tmp_path / "angle.json"
    cfg.write_text(json.dumps({"n": 64, "trials": 1, "k": 1}))
    code, _, err = run_cli(capsys, "angle", "--config", str(cfg))
    assert code == 3
    assert "error[experiments.truncation]" in err


def test_angle_other_experiments(capsys):
    for exp, flags in (
        ("diag-floor", ("--n", "32", "--trials", "3")),
        ("word-norm", ("--n", "32", "--trials", "3")),
        ("compression", ("--n", "48", "--trials", "2")),
    ):
        code, out, _ = run_cli(capsys, "angle", "--experiment", exp, *flags)
        assert code == 0, exp
        assert json.loads(out)["experiment"] == exp


def test_concentration_analytic(capsys):
    code, out, _ = run_cli(capsys, "concentration", "--n-max", "8")
    assert code == 0
    rep = json.loads(out)
    assert rep["nondecreasing"] is True
    assert rep["density_check"]["diverging"] is True
    assert [r["n_param"] for r in rep["rungs"]] == [1, 2, 4, 8]


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
