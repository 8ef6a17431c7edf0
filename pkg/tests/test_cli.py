import json

import numpy as np
import pytest

import pvfdi
from pvfdi.cli import main


def run(argv):
    return main([str(a) for a in argv])


def non_comment_lines(path):
    return [l for l in path.read_text().splitlines() if not l.startswith("#")]


def tree_bytes(root):
    return {
        str(p.relative_to(root)): p.read_bytes()
        for p in sorted(root.rglob("*")) if p.is_file()
    }


# --- synth ----------------------------------------------------------------------

def test_synth_writes_deterministic_csv(tmp_path, capsys):
    a = tmp_path / "a" / "d.csv"
    b = tmp_path / "b" / "d.csv"
    assert run(["synth", "--n", 50, "--seed", 4, "--out", a]) == 0
    assert run(["synth", "--n", 50, "--seed", 4, "--out", b]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert "wrote 50 rows" in capsys.readouterr().out

    loaded = pvfdi.load_csv(a)
    assert len(loaded) == 50
    prov = json.loads((tmp_path / "a" / "d.csv.provenance.json").read_text())
    assert prov["command"] == "synth"
    assert prov["checksum_sha256"] == loaded.checksum()


def test_synth_rejects_tiny_count(tmp_path, capsys):
    assert run(["synth", "--n", 5, "--out", tmp_path / "d.csv"]) == 2
    assert "data error" in capsys.readouterr().err


# --- inject ---------------------------------------------------------------------

@pytest.fixture()
def dataset_csv(tmp_path):
    path = tmp_path / "data.csv"
    run(["synth", "--n", 200, "--seed", 9, "--out", path])
    return path


def test_inject_zero_fraction_preserves_rows(dataset_csv, tmp_path):
    out = tmp_path / "noisy.csv"
    assert run(["inject", "--data", dataset_csv, "--out", out, "--fraction", 0]) == 0
    assert non_comment_lines(out) == non_comment_lines(dataset_csv)
    assert out.read_text().splitlines()[0].startswith("#")
    assert (tmp_path / "noisy.csv.affected.txt").read_text() == ""


def test_inject_half_marks_hundred_rows(dataset_csv, tmp_path):
    out = tmp_path / "noisy.csv"
    assert run(["inject", "--data", dataset_csv, "--out", out,
                "--fraction", 0.5, "--seed", 3]) == 0
    indices = (tmp_path / "noisy.csv.affected.txt").read_text().split()
    assert len(indices) == 100
    assert indices == sorted(indices, key=int)
    prov = json.loads((tmp_path / "noisy.csv.provenance.json").read_text())
    assert prov["noise"]["fraction"] == 0.5
    assert prov["affected_rows"] == 100


def test_inject_power_target_spares_features(dataset_csv, tmp_path):
    out = tmp_path / "noisy.csv"
    assert run(["inject", "--data", dataset_csv, "--out", out,
                "--fraction", 1.0, "--noise-target", "power"]) == 0
    before = pvfdi.load_csv(dataset_csv)
    after = pvfdi.load_csv(out)
    np.testing.assert_array_equal(after.features, before.features)
    assert not np.array_equal(after.power, before.power)


# --- bench / sweep ----------------------------------------------------------------

def test_bench_single_model(tmp_path, capsys):
    out = tmp_path / "out"
    assert run(["bench", "--n", 120, "--seed", 2, "--models", "LR", "--out", out]) == 0
    printed = capsys.readouterr().out
    assert "Clean test metrics" in printed
    lines = (out / "clean_metrics.csv").read_text().splitlines()
    assert lines[0] == "model,rmse,mse,mae"
    assert len(lines) == 2 and lines[1].startswith("LR,")
    assert not (out / "noise_rmse.csv").exists()
    assert (out / "provenance.json").exists()


def test_sweep_custom_fractions_and_rerun_identical(tmp_path):
    args = ["sweep", "--n", 120, "--seed", 2, "--models", "LR,DT",
            "--fractions", "0,1.0"]
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(args + ["--out", a]) == 0
    assert run(args + ["--out", b]) == 0
    header = (a / "noise_rmse.csv").read_text().splitlines()[0]
    assert header == "model,0%,100%"
    assert tree_bytes(a) == tree_bytes(b)


def test_sweep_jobs_flag_does_not_change_bytes(tmp_path):
    base = ["sweep", "--n", 120, "--seed", 2, "--models", "LR,DT,KNN"]
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(base + ["--out", a, "--jobs", 1]) == 0
    assert run(base + ["--out", b, "--jobs", 3]) == 0
    assert tree_bytes(a) == tree_bytes(b)


def test_failed_model_exits_three_but_emits(tmp_path, capsys):
    cfg = tmp_path / "pv.ini"
    cfg.write_text("[model.KNN]\nk = 100000\n")
    out = tmp_path / "out"
    code = run(["sweep", "--n", 120, "--seed", 2, "--models", "KNN,LR",
                "--config", cfg, "--out", out])
    assert code == 3
    assert "model KNN failed" in capsys.readouterr().err
    grid = (out / "noise_rmse.csv").read_text().splitlines()
    assert any(line.startswith("KNN,ERROR") for line in grid)
    assert any(line.startswith("LR,") and "ERROR" not in line for line in grid)


# --- config files -------------------------------------------------------------------

def test_config_file_drives_run_and_flags_override(tmp_path):
    cfg = tmp_path / "pv.ini"
    cfg.write_text(
        "[experiment]\n"
        "synth_n = 120\n"
        "seed = 6\n"
        "models = KNN\n"
        "fractions = 0, 0.5\n"
        "[model.KNN]\n"
        "k = 3\n"
    )
    out = tmp_path / "out"
    assert run(["sweep", "--config", cfg, "--out", out]) == 0
    prov = json.loads((out / "provenance.json").read_text())
    assert prov["dataset"]["rows"] == 120
    assert prov["seed"] == 6
    assert prov["models"] == [{
        "name": "KNN", "kind": "KNN", "seed": 6,
        "hyperparameters": {"k": 3},
    }]
    assert prov["noise"]["fractions"] == [0.0, 0.5]

    # flag overrides file: seed changes, hyperparameter section still applies
    out2 = tmp_path / "out2"
    assert run(["sweep", "--config", cfg, "--seed", 7, "--out", out2]) == 0
    prov2 = json.loads((out2 / "provenance.json").read_text())
    assert prov2["seed"] == 7
    assert prov2["models"][0]["hyperparameters"] == {"k": 3}


def test_unknown_config_field_exits_one(tmp_path, capsys):
    cfg = tmp_path / "pv.ini"
    cfg.write_text("[experiment]\nsample_count = 100\n")
    assert run(["bench", "--config", cfg, "--out", tmp_path / "out"]) == 1
    assert "sample_count" in capsys.readouterr().err


def test_unknown_model_kind_exits_one(tmp_path, capsys):
    assert run(["bench", "--models", "RIDGE", "--out", tmp_path / "out"]) == 1
    assert "RIDGE" in capsys.readouterr().err


def test_bad_config_value_exits_one(tmp_path, capsys):
    cfg = tmp_path / "pv.ini"
    cfg.write_text("[experiment]\nfractions = zero, one\n")
    assert run(["sweep", "--config", cfg, "--out", tmp_path / "out"]) == 1
    assert "fractions" in capsys.readouterr().err


def test_missing_config_file_exits_one(tmp_path):
    assert run(["bench", "--config", tmp_path / "absent.ini",
                "--out", tmp_path / "out"]) == 1


# --- report ------------------------------------------------------------------------

def test_report_regenerates_sensitivity(tmp_path, capsys):
    out = tmp_path / "run"
    assert run(["sweep", "--n", 120, "--seed", 2, "--models", "LR,DT", "--out", out]) == 0
    redone = tmp_path / "redone"
    assert run(["report", "--data", out, "--out", redone]) == 0
    assert "0% vs. 100%" in capsys.readouterr().out
    original = (out / "sensitivity.csv").read_text()
    regenerated = (redone / "sensitivity.csv").read_text()
    assert regenerated == original


def test_report_missing_grid_exits_two(tmp_path, capsys):
    assert run(["report", "--data", tmp_path / "nothing.csv",
                "--out", tmp_path / "out"]) == 2
    assert "data error" in capsys.readouterr().err


# --- argparse behaviour ---------------------------------------------------------------

def test_unknown_flag_exits_one(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["bench", "--nope"])
    assert exc.value.code == 1
    capsys.readouterr()


def test_missing_required_flag_exits_one(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["inject", "--data", "x.csv", "--out", "y.csv"])
    assert exc.value.code == 1
    capsys.readouterr()


def test_missing_data_file_exits_two(tmp_path, capsys):
    assert run(["inject", "--data", tmp_path / "absent.csv",
                "--out", tmp_path / "o.csv", "--fraction", 0.5]) == 2
    capsys.readouterr()
