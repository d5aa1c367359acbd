"""Command-line interface: outputs, determinism, overrides, exit codes."""

import json
from pathlib import Path

import pytest

from hfc.cli import main
from hfc.tables import read_table


def run(args):
    return main([str(a) for a in args])


def read_manifest(out_dir):
    return json.loads((Path(out_dir) / "manifest.json").read_text())


FAST = ["--n", "3", "--m", "4", "--k", "1", "--rounds", "300", "--replicates", "2"]


def test_simulate_outputs(tmp_path):
    out = tmp_path / "run"
    assert run(["simulate", *FAST, "--strategy", "quantum", "--p", "0.25",
                "--lambda", "0", "--out-dir", out]) == 0
    for name in ("metrics.csv", "histogram.csv", "pair_joint.csv", "manifest.json"):
        assert (out / name).exists()
    kind, columns, rows = read_table(out / "metrics.csv")
    assert kind == "sweep" and len(rows) == 1
    assert rows[0]["strategy"] == "quantum"
    manifest = read_manifest(out)
    assert manifest["schema"] == "hfc/manifest/v1"
    assert {o["path"] for o in manifest["outputs"]} == {
        "metrics.csv", "histogram.csv", "pair_joint.csv"}


def test_simulate_exact_mode(tmp_path):
    out = tmp_path / "run"
    assert run(["simulate", *FAST, "--strategy", "shared_latent", "--q", "0.7",
                "--p", "0", "--mode", "exact", "--out-dir", out]) == 0
    assert (out / "exact_joint.csv").exists()
    assert not (out / "histogram.csv").exists()
    _, _, rows = read_table(out / "metrics.csv")
    assert float(rows[0]["tc_std"]) == 0.0
    assert float(rows[0]["coin_mean"]) == pytest.approx(0.49 + 0.51 / 4, abs=1e-12)


def test_rerun_byte_identical(tmp_path):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    args = ["simulate", *FAST, "--strategy", "shared_latent", "--seed", "41"]
    assert run([*args, "--out-dir", out_a]) == 0
    assert run([*args, "--out-dir", out_b]) == 0
    for name in ("metrics.csv", "histogram.csv", "pair_joint.csv"):
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()
    assert read_manifest(out_a)["content_digest"] == read_manifest(out_b)["content_digest"]


def test_content_digest_tracks_outputs(tmp_path):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert run(["simulate", *FAST, "--seed", "1", "--out-dir", out_a]) == 0
    assert run(["simulate", *FAST, "--seed", "2", "--out-dir", out_b]) == 0
    assert read_manifest(out_a)["content_digest"] != read_manifest(out_b)["content_digest"]


def test_sweep_worker_invariance(tmp_path):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    args = ["sweep", *FAST, "--mode", "exact", "--p-grid", "0,0.25",
            "--lambda-grid", "0,0.2", "--q-grid-step", "0.25"]
    assert run([*args, "--workers", "1", "--out-dir", out_a]) == 0
    assert run([*args, "--workers", "2", "--out-dir", out_b]) == 0
    assert (out_a / "differential.csv").read_bytes() == (out_b / "differential.csv").read_bytes()
    kind, _, rows = read_table(out_a / "differential.csv")
    assert kind == "differential" and len(rows) == 4


def test_config_file_and_flag_precedence(tmp_path):
    config = tmp_path / "run.cfg"
    config.write_text("n = 3\nm = 4\nk = 1\nrounds = 200\nreplicates = 2\np = 0.1\n")
    out = tmp_path / "out"
    assert run(["simulate", "--config", config, "--p", "0.3", "--out-dir", out]) == 0
    manifest = read_manifest(out)
    assert manifest["config"]["p"] == 0.3  # flag beats file
    assert manifest["config"]["rounds"] == 200  # file beats default


def test_invalid_config_exit_code(tmp_path, capsys):
    out = tmp_path / "out"
    assert run(["simulate", "--p", "1.5", "--out-dir", out]) == 1
    assert "p out of [0,1]" in capsys.readouterr().err


def test_env_var_out_dir(tmp_path, monkeypatch):
    target = tmp_path / "via-env"
    monkeypatch.setenv("HFC_OUT_DIR", str(target))
    assert run(["simulate", *FAST]) == 0
    assert (target / "metrics.csv").exists()


def test_qscan_tables(tmp_path):
    out = tmp_path / "out"
    assert run(["qscan", *FAST, "--mode", "exact", "--q-grid-step", "0.25",
                "--out-dir", out]) == 0
    kind, _, rows = read_table(out / "qscan.csv")
    assert kind == "qscan" and len(rows) == 5
    kind, _, summary = read_table(out / "qscan_summary.csv")
    assert kind == "qscan_summary"
    assert summary[0]["crossover_q"] != ""


def test_scaling_and_geometry_tables(tmp_path):
    out = tmp_path / "out"
    assert run(["scaling", *FAST, "--mode", "exact", "--n-list", "2,3",
                "--q-grid-step", "0.5", "--out-dir", out]) == 0
    kind, _, rows = read_table(out / "scaling.csv")
    assert kind == "scaling" and [r["n"] for r in rows] == ["2", "3"]

    out2 = tmp_path / "geo"
    assert run(["geometry", *FAST, "--mode", "exact", "--p-grid", "0,0.25",
                "--out-dir", out2]) == 0
    kind, _, rows = read_table(out2 / "geometry.csv")
    assert kind == "geometry" and len(rows) == 6


def test_convergence_table(tmp_path):
    out = tmp_path / "out"
    assert run(["convergence", *FAST, "--strategy", "quantum",
                "--checkpoints", "100,300", "--q-grid-step", "0.5",
                "--out-dir", out]) == 0
    kind, _, rows = read_table(out / "convergence.csv")
    assert kind == "convergence"
    assert [r["rounds"] for r in rows] == ["100", "300"]


def test_oracle_check_passes(tmp_path):
    out = tmp_path / "out"
    assert run(["oracle-check", "--out-dir", out]) == 0
    kind, _, rows = read_table(out / "oracle_check.csv")
    assert kind == "oracle_check"
    assert all(r["passed"] == "true" for r in rows)


def test_bad_pair_rejected(tmp_path):
    assert run(["simulate", *FAST, "--pair", "1,9", "--out-dir", tmp_path / "x"]) == 1
