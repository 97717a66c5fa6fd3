import json

import pytest

from fracwave.cli import ConfigError, RunConfig, main, parse_config
from fracwave.io import read_table


def _run(tmp_path, *argv):
    out = tmp_path / "out"
    return main(list(argv) + ["--output", str(out)]), out


def test_defaults_filled():
    config, prov = parse_config(["simulate", "--alpha", "2", "--a", "0.1", "--times", "1,5,10"])
    assert config.times == [1.0, 5.0, 10.0]
    assert config.n == 2**14 and config.half_width == 200.0
    assert prov["sources"] == {"command": "flag", "alpha": "flag", "a": "flag", "times": "flag"}


def test_alpha_outside_interval(tmp_path, capsys):
    code, _ = _run(tmp_path, "simulate", "--alpha", "3")
    assert code == 2
    assert "(1, 3)" in capsys.readouterr().err


def test_negative_time(tmp_path, capsys):
    code, _ = _run(tmp_path, "simulate", "--times", "-1")
    assert code == 2
    assert "times" in capsys.readouterr().err


@pytest.mark.parametrize("argv, key", [
    (["simulate", "--n", "1000"], "grid"),
    (["simulate", "--method", "fem"], "method"),
    (["simulate", "--a", "0"], "a="),
    (["simulate", "--n", "abc"], "n="),
    ([], "command"),
])
def test_errors_name_key(argv, key):
    with pytest.raises(ConfigError, match=key):
        parse_config(argv)


def test_file_flag_conflict(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"command": "dispersion", "alpha": 1.5, "a": 0.2}))
    config, prov = parse_config(["--config", str(cfg), "--alpha", "2.5"])
    assert config.alpha == 2.5 and config.a == 0.2 and config.command == "dispersion"
    assert prov["conflicts"] == {"alpha": {"file": 1.5, "flag": 2.5}}
    assert prov["sources"]["a"] == "file"


def test_unknown_config_key(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"command": "simulate", "alhpa": 2}))
    with pytest.raises(ConfigError, match="alhpa"):
        parse_config(["--config", str(cfg)])


def test_negative_list_values():
    config, _ = parse_config(["simulate", "--x-range", "-15,15", "--x0-list", "-3,0,3"])
    assert config.x_range == [-15.0, 15.0] and config.x0_list == [-3.0, 0.0, 3.0]


def test_simulate_artifacts(tmp_path):
    code, out = _run(tmp_path, "simulate", "--times", "0,1", "--x-count", "5")
    assert code == 0
    names = {p.name for p in out.iterdir()}
    assert names == {"field.csv", "field.json", "manifest.json", "resolved.json"}
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["status"] == "ok" and not manifest["partial"]
    assert read_table(out / "field.csv")["u"].size == 10


def test_simulate_both_methods(tmp_path):
    code, out = _run(tmp_path, "simulate", "--method", "both", "--times", "1", "--x-count", "3")
    assert code == 0
    assert "error_bound" in read_table(out / "field_quadrature.csv") and (out / "field_spectral.csv").exists()


def test_quadrature_rejects_unsupported_data(tmp_path, capsys):
    code, _ = _run(tmp_path, "simulate", "--method", "quadrature", "--u0", "point_mass")
    assert code == 2
    assert "quadrature" in capsys.readouterr().err


def test_module_errors_flagged_in_manifest(tmp_path, capsys):
    code, out = _run(tmp_path, "simulate", "--u0", "point_mass", "--times", "0")
    assert code == 1
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["status"] == "error" and manifest["partial"]
    assert "point-mass" in capsys.readouterr().err


def test_validate_passes(tmp_path, capsys):
    code, out = _run(tmp_path, "validate", "--alpha", "2", "--a", "0.1", "--times", "1,5,10",
                     "--x-range", "-15,15", "--x-count", "61")
    assert code == 0
    line = capsys.readouterr().out
    assert line.startswith("PASS validate")
    table = read_table(out / "validate.csv")
    assert table["abs_diff"].max() <= 1e-6


def test_validate_fails_with_tight_tolerance(tmp_path, capsys):
    code, _ = _run(tmp_path, "validate", "--times", "5", "--x-count", "5", "--tolerance", "1e-30")
    assert code == 1
    assert capsys.readouterr().out.startswith("FAIL")


def test_dispersion(tmp_path):
    code, out = _run(tmp_path, "dispersion", "--alpha", "2.5", "--xi-count", "11")
    assert code == 0
    assert read_table(out / "dispersion.csv")["xi"].size == 11


def test_regularity(tmp_path, capsys):
    code, out = _run(tmp_path, "regularity", "--alpha", "2.5", "--s", "-0.6",
                     "--times", "1,1.01,1.02")
    assert code == 0
    summary = json.loads((out / "regularity.json").read_text())
    assert summary["sobolev"]["passed"] and summary["energy"]["passed"] and summary["P"]["passed"]
    assert "PASS sobolev" in capsys.readouterr().out


def test_regularity_skips_residuals_on_irregular_times(tmp_path):
    code, out = _run(tmp_path, "regularity", "--times", "0,1,3")
    manifest = json.loads((out / "manifest.json").read_text())
    assert code == 0 and any("skipped" in n for n in manifest["notes"])


def test_wavefront(tmp_path, capsys):
    code, out = _run(tmp_path, "wavefront", "--alpha", "2", "--a-list", "0.1,0.05")
    assert code == 0
    printed = capsys.readouterr().out
    assert "PASS separation" in printed
    assert read_table(out / "decay_profiles.csv")["x0"].size == 8
    assert (out / "verdicts.txt").read_text().count("\n") == 3


def test_rerun_from_resolved(tmp_path):
    code, out = _run(tmp_path, "validate", "--times", "1", "--x-count", "7")
    assert code in (0, 1)
    resolved = json.loads((out / "resolved.json").read_text())
    assert "_provenance" in resolved
    again = tmp_path / "again"
    assert main(["--config", str(out / "resolved.json"), "--output", str(again)]) == code
    for name in ("validate.csv",):
        assert (out / name).read_bytes() == (again / name).read_bytes()


def test_log_level_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("FRACWAVE_LOG", "debug")
    code, _ = _run(tmp_path, "dispersion", "--xi-count", "3")
    assert code == 0


def test_runconfig_round_trip():
    config = RunConfig(command="figures").validate()
    assert config.initial_data().u0.width == config.a
