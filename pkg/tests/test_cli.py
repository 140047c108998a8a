import io
import json
import math

import numpy as np
import pandas as pd
import pytest

from qcmm import cli
from qcmm.cli import EXIT_INVALID, EXIT_OK, EXIT_USAGE, main
from qcmm.config import Config
from qcmm.schemas import SpeedsSchema, TrajectorySchema, validate_speeds_csv, validate_trajectory_csv

BEW_TABLE = str(Config.DATA_DIR / "tables" / "bew_linear.csv")


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def read_csv(text):
    return pd.read_csv(io.StringIO(text))


def write_json(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


def test_validate_bew(capsys):
    code, out = run(capsys, "validate", "--model", "bew", "--x", "0.5")
    assert code == EXIT_OK
    assert "passed: True" in out


def test_validate_reports_trace_deviation(tmp_path, capsys):
    diag = [0.4, 0.3, 0.2, 0.2]
    matrix = [[[diag[i] if i == j else 0.0, 0.0] for j in range(4)] for i in range(4)]
    path = write_json(tmp_path, "trace.json", {"matrix": matrix})
    code, out = run(capsys, "validate", "--input", path, "--format", "json")
    assert code == EXIT_INVALID
    report = json.loads(out)
    assert report["trace_ok"] is False
    assert report["trace_deviation"] == pytest.approx(0.1)


def test_validate_malformed_json(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"d7": ', encoding="utf-8")
    code = main(["validate", "--input", str(path)])
    assert code == EXIT_USAGE
    assert "line 1" in capsys.readouterr().err


def test_analyze_entangled_bew(capsys):
    code, out = run(capsys, "analyze", "--model", "bew", "--x", "0.9", "--format", "json")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["phc"]["label"] == "EntangledLike"
    assert report["phc"]["min_pt_eigenvalue"] == pytest.approx(-0.425, abs=1e-12)
    assert report["cmm"]["region"] == "EntangledLike"


def test_analyze_maximally_mixed_bew(capsys):
    code, out = run(capsys, "analyze", "--model", "bew", "--x", "0", "--format", "json")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["phc"]["label"] == "SeparableLike"
    assert list(report["cmm"]["quad_distances"].values()) == pytest.approx([0.25] * 4, abs=1e-12)


def test_analyze_generic_state_skips_cmm(tmp_path, capsys):
    path = write_json(tmp_path, "generic.json", {"fano": {"p1": [0.3, 0, 0], "p2": [0, 0, 0], "m": [[0] * 3] * 3}})
    code, out = run(capsys, "analyze", "--input", path, "--format", "json")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["phc"]["label"] == "SeparableLike"
    assert report["cmm"] == "n/a"
    assert "p1x" in report["not_d7_reason"]


def test_analyze_text_report(capsys):
    code, out = run(capsys, "analyze", "--model", "bew", "--x", "0.9")
    assert code == EXIT_OK
    assert out.startswith("PHC verdict:        EntangledLike")


def test_analyze_rejects_invalid_state(tmp_path, capsys):
    matrix = [[[v if i == j else 0.0, 0.0] for j, v in enumerate([0.6, 0.5, 0.1, -0.2])] for i in range(4)]
    path = write_json(tmp_path, "negative.json", {"matrix": matrix})
    code, _ = run(capsys, "analyze", "--input", path)
    assert code == EXIT_INVALID


def test_trajectory_full_columns(capsys):
    code, out = run(capsys, "trajectory", "--model", "bew", "--n", "11")
    assert code == EXIT_OK
    frame = read_csv(out)
    assert list(frame.columns) == TrajectorySchema.required_columns
    assert len(frame) == 11
    assert TrajectorySchema().validate(frame)[0]


def test_fig7_preset_crosses_at_ln3(capsys):
    code, out = run(
        capsys, "trajectory", "--model", "bew", "--mode", "decay", "--gamma", "1",
        "--lo", "0", "--hi", "5", "--n", "501", "--emit", "fig7",
    )
    assert code == EXIT_OK
    frame = read_csv(out)
    assert list(frame.columns) == ["theta", "x", "s1t_sq", "s2t_sq", "region"]
    negative = frame["s2t_sq"] < 0
    last_negative = frame.loc[negative, "theta"].max()
    first_positive = frame.loc[~negative, "theta"].min()
    assert last_negative < math.log(3) < first_positive
    assert first_positive - last_negative == pytest.approx(0.01)


def test_fig4_preset_roots(capsys):
    code, out = run(capsys, "trajectory", "--emit", "fig4")
    assert code == EXIT_OK
    frame = read_csv(out)
    x = frame["x"].to_numpy()
    assert len(frame) == 101
    assert np.allclose(frame["s1"], np.sqrt((1 - x) * (1 + 3 * x)) / 2, atol=1e-12)
    assert np.allclose(frame["s2"], (1 - x) / 2, atol=1e-12)


def test_cone_preset(capsys):
    code, out = run(capsys, "trajectory", "--emit", "cone", "--n", "5")
    assert code == EXIT_OK
    frame = read_csv(out)
    assert frame["cone_t"].tolist() == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert frame["cone_v"].tolist() == frame["cone_t"].tolist()
    assert (frame["cone_u"] == 0).all() and (frame["cone_w"] == 0).all()


def test_fig7_output_is_byte_identical(tmp_path, capsys):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["trajectory", "--emit", "fig7", "--out", str(first)]) == EXIT_OK
    assert main(["trajectory", "--emit", "fig7", "--out", str(second), "--workers", "1"]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()


def test_trajectory_json_has_meta(capsys):
    code, out = run(capsys, "trajectory", "--emit", "fig6", "--format", "json")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["meta"]["version"] == Config.VERSION
    assert doc["meta"]["preset"] == "fig6"
    assert doc["meta"]["grid"] == {"lo": 0.0, "hi": 1.0, "n": 101}
    assert len(doc["rows"]) == 101
    assert set(doc["rows"][0]) == {"theta", "x", "s1t_sq", "s2t_sq", "region"}


def test_speeds_constants(capsys):
    code, out = run(capsys, "speeds", "--model", "bew", "--mode", "decay", "--gamma", "1", "--n", "21")
    assert code == EXIT_OK
    frame = read_csv(out)
    assert list(frame.columns) == SpeedsSchema.required_columns
    assert (frame["speed2t"] == 2.0).all() and (frame["qspeed2t_sq"] == -3.0).all()
    assert (frame["speed1t"] == 0.0).all() and (frame["qspeed1t_sq"] == 1.0).all()


def test_speeds_of_constant_table_are_inf(tmp_path, capsys):
    path = tmp_path / "flat.csv"
    path.write_text(
        "theta,p1z,p2z,mxx,myy,mxy,myx,mzz\n0,0,0,-0.1,-0.1,0,0,-0.1\n1,0,0,-0.1,-0.1,0,0,-0.1\n",
        encoding="utf-8",
    )
    code, out = run(capsys, "speeds", "--input", str(path), "--n", "3")
    assert code == EXIT_OK
    assert "inf" in out
    frame = read_csv(out)
    assert np.isinf(frame["speed2t"]).all()


def test_trajectory_from_table_uses_table_domain(capsys):
    code, out = run(capsys, "trajectory", "--input", BEW_TABLE, "--n", "3")
    assert code == EXIT_OK
    frame = read_csv(out)
    assert frame["theta"].tolist() == [0.0, 0.5, 1.0]
    assert frame["region"].tolist() == ["S", "E", "E"]


def test_crossings_sudden_death(capsys):
    code, out = run(capsys, "crossings", "--model", "bew", "--mode", "decay", "--gamma", "1", "--lo", "0", "--hi", "10")
    assert code == EXIT_OK
    events = json.loads(out)["events"]
    assert len(events) == 1
    assert events[0]["kind"] == "SuddenDeath"
    assert events[0]["theta_star"] == pytest.approx(1.098612, abs=1e-6)


def test_crossings_revival_along_weight(capsys):
    code, out = run(capsys, "crossings", "--model", "bew")
    assert code == EXIT_OK
    events = json.loads(out)["events"]
    assert [e["kind"] for e in events] == ["Revival"]
    assert events[0]["theta_star"] == pytest.approx(1 / 3, abs=1e-6)


def test_crossings_none_after_death(capsys):
    code, out = run(capsys, "crossings", "--model", "bew", "--mode", "decay", "--lo", "2", "--hi", "5")
    assert code == EXIT_OK
    assert json.loads(out)["events"] == []


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["trajectory", "--n", "1"],
        ["trajectory", "--mode", "decay", "--gamma", "-1"],
        ["trajectory", "--lo", "1", "--hi", "0"],
        ["trajectory", "--hi", "2"],
        ["trajectory", "--format", "xml"],
        ["analyze", "--model", "bew"],
        ["analyze", "--model", "bew", "--x", "1.5"],
        ["validate"],
        ["crossings", "--bisect-tol", "0"],
        ["speeds", "--input", "does-not-exist.csv"],
    ],
)
def test_usage_errors_exit_1(argv, capsys):
    assert main(argv) == EXIT_USAGE


def test_job_log_file(tmp_path, capsys):
    log_path = tmp_path / "logs" / "run_{timestamp}.log"
    assert main(["--log-file", str(log_path), "--log-level", "info", "crossings", "--model", "bew"]) == EXIT_OK
    logs = list((tmp_path / "logs").glob("run_*.log"))
    assert len(logs) == 1
    assert "Revival" in logs[0].read_text(encoding="utf-8")


def test_written_tables_pass_schema_checks(tmp_path, capsys):
    traj, speeds = tmp_path / "out" / "traj.csv", tmp_path / "out" / "speeds.csv"
    assert main(["trajectory", "--model", "bew", "--mode", "growth", "--n", "41", "--out", str(traj)]) == EXIT_OK
    assert main(["speeds", "--model", "bew", "--n", "41", "--out", str(speeds)]) == EXIT_OK
    assert validate_trajectory_csv(str(traj)) == (True, [])
    assert validate_speeds_csv(str(speeds)) == (True, [])


def test_grid_flags_coexist_with_log_flags(capsys):
    code, out = run(
        capsys, "--log-level", "warning", "crossings", "--model", "bew", "--mode", "decay", "--lo", "0", "--hi", "10",
    )
    assert code == EXIT_OK
    assert [e["kind"] for e in json.loads(out)["events"]] == ["SuddenDeath"]
    assert main(["--log", "warning", "crossings", "--model", "bew"]) == EXIT_USAGE


def test_fig2_preset_coordinates(capsys):
    code, out = run(capsys, "trajectory", "--emit", "fig2")
    assert code == EXIT_OK
    frame = read_csv(out)
    assert list(frame.columns) == ["theta", "x", "t_minus", "v_plus", "t_plus", "v_minus", "cone_t", "cone_v"]
    x = frame["x"].to_numpy()
    assert len(frame) == 101
    assert np.allclose(frame["t_minus"], (1 + x) / 2, atol=1e-15)
    assert np.allclose(frame["v_plus"], -x, atol=1e-15)
    assert np.allclose(frame["t_plus"], (1 - x) / 2, atol=1e-15)
    assert (frame["v_minus"] == 0).all()
    assert np.allclose(frame["cone_t"], x) and np.allclose(frame["cone_v"], x)


def test_fig3_preset_regions(capsys):
    code, out = run(capsys, "trajectory", "--emit", "fig3")
    assert code == EXIT_OK
    frame = read_csv(out)
    assert list(frame.columns) == ["theta", "x", "t_minus", "v_minus", "t_plus", "v_plus", "cone_t", "cone_v", "region"]
    below = frame["x"] < 1 / 3
    assert (frame.loc[below, "region"] == "S").all()
    assert (frame.loc[~below, "region"] == "E").all()


def test_fig5_preset_decay(capsys):
    code, out = run(capsys, "trajectory", "--emit", "fig5")
    assert code == EXIT_OK
    frame = read_csv(out)
    assert list(frame.columns) == ["theta", "x", "s1_sq", "s2_sq", "s1", "s2"]
    assert len(frame) == 501
    assert frame["theta"].iloc[-1] == 5.0
    x = np.exp(-frame["theta"].to_numpy())
    assert np.allclose(frame["x"], x, atol=1e-15)
    assert np.allclose(frame["s1"], np.sqrt((1 - x) * (1 + 3 * x)) / 2, atol=1e-12)
    assert np.allclose(frame["s2"], (1 - x) / 2, atol=1e-12)


def test_tables_carry_no_negative_zero(capsys):
    code, out = run(capsys, "trajectory", "--model", "bew", "--n", "3")
    assert code == EXIT_OK
    header, first = out.splitlines()[:2]
    row = dict(zip(header.split(","), first.split(",")))
    assert row["v_plus"] == "0.0"
    assert "-0.0" not in [f for line in out.splitlines() for f in line.split(",")]


def test_table_loading_logs_under_models_logger(tmp_path, capsys):
    log_path = tmp_path / "models.log"
    argv = ["--log-file", str(log_path), "--log-level", "info", "trajectory", "--input", BEW_TABLE, "--n", "3"]
    assert main(argv) == EXIT_OK
    assert "QCMMModels: Loaded tabulated model" in log_path.read_text(encoding="utf-8")


def test_missing_preset_is_a_config_error(monkeypatch, capsys):
    monkeypatch.setattr(Config, "load_presets", classmethod(lambda cls: {}))
    assert main(["trajectory", "--emit", "fig2"]) == EXIT_USAGE
    assert "preset 'fig2'" in capsys.readouterr().err


def test_key_errors_from_handlers_are_not_usage_errors(monkeypatch):
    def broken(cfg):
        raise KeyError("speed9")

    monkeypatch.setitem(cli.HANDLERS, "speeds", broken)
    with pytest.raises(KeyError):
        main(["speeds", "--model", "bew"])
