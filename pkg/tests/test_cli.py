import csv
import json

import pytest

from tempnet.cli import main


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def synth_dir(tmp_path):
    out = tmp_path / "synth"
    code = run(
        "synth", "--out-dir", out, "--seed", "5", "--n-users", "60",
        "--n-aps", "5", "--n-weeks", "2",
    )
    assert code == 0
    return out


@pytest.fixture
def events_csv(synth_dir, tmp_path):
    ingest_dir = tmp_path / "ingest"
    assert run("ingest", "--input", synth_dir / "sessions.csv", "--out-dir", ingest_dir) == 0
    events_dir = tmp_path / "events"
    assert run(
        "events", "--input", ingest_dir / "cleaned_sessions.csv", "--out-dir", events_dir
    ) == 0
    return events_dir / "events.csv"


def test_full_chain_produces_artifacts(events_csv, tmp_path):
    tg_dir = tmp_path / "tg"
    assert run("tg", "--input", events_csv, "--out-dir", tg_dir) == 0
    for name in ("tg_edges.csv", "tg_aggregate.csv", "tg_degrees.csv", "provenance_tg.json"):
        assert (tg_dir / name).exists()

    stats_dir = tmp_path / "stats"
    assert run("stats", "--input", events_csv, "--out-dir", stats_dir) == 0
    summary = json.loads((stats_dir / "stats_summary.json").read_text())
    assert summary["n_events"] > 0
    assert "histograms" in summary

    tcn_dir = tmp_path / "tcn"
    assert run("tcn", "--input", events_csv, "--out-dir", tcn_dir, "--joint-days", "1") == 0
    assert (tcn_dir / "joint_degree_1d.csv").exists()


def test_rerun_is_byte_identical(synth_dir, tmp_path):
    first = (synth_dir / "sessions.csv").read_bytes()
    again_dir = tmp_path / "again"
    assert run(
        "synth", "--out-dir", again_dir, "--seed", "5", "--n-users", "60",
        "--n-aps", "5", "--n-weeks", "2",
    ) == 0
    assert (again_dir / "sessions.csv").read_bytes() == first
    prov_a = (synth_dir / "provenance_synth.json").read_text()
    prov_b = (again_dir / "provenance_synth.json").read_text()
    assert json.loads(prov_a)["summary"] == json.loads(prov_b)["summary"]


def test_events_command_matches_sweep_example(tmp_path):
    raw = tmp_path / "three.csv"
    raw.write_text(
        "user,ap,t_connect,t_disconnect\n"
        "u1,a,0,100\n"
        "u2,a,0,100\n"
        "u3,a,40,60\n"
    )
    out = tmp_path / "out"
    assert run("events", "--input", raw, "--out-dir", out) == 0
    rows = list(csv.DictReader((out / "events.csv").open()))
    got = [(r["t_begin"], r["t_end"], r["members"]) for r in rows]
    assert got == [
        ("0", "40", "u1;u2"),
        ("40", "60", "u1;u2;u3"),
        ("60", "100", "u1;u2"),
    ]


def test_reach_preset_row_count(events_csv, tmp_path):
    out = tmp_path / "reach"
    assert run("reach", "--input", events_csv, "--out-dir", out) == 0
    rows = list(csv.DictReader((out / "reach_curve.csv").open()))
    assert len(rows) == 6
    assert [r["delta_t_seconds"] for r in rows] == [
        str(d * 86400) for d in (1, 2, 3, 5, 7, 8)
    ]
    for row in rows:
        assert float(row["tcn_avg"]) <= float(row["acn_avg"]) + 1e-12


def test_predict_optimize_writes_curve(events_csv, tmp_path):
    out = tmp_path / "predict"
    assert run(
        "predict", "--input", events_csv, "--optimize", "--grid-step", "0.01",
        "--top", "5", "--out-dir", out,
    ) == 0
    report = json.loads((out / "ranking_report.json").read_text())
    assert len(report["f_curve"]) == 101
    assert "alpha_star" in report
    assert any(point["alpha"] == report["alpha_star"] for point in report["f_curve"])
    provenance = json.loads((out / "provenance_predict.json").read_text())
    assert len(provenance["summary"]["top_users"]) == 5


def test_predict_fixed_alpha(events_csv, tmp_path):
    out = tmp_path / "predict_fixed"
    assert run("predict", "--input", events_csv, "--alpha", "0.2", "--out-dir", out) == 0
    report = json.loads((out / "ranking_report.json").read_text())
    assert report["alpha_star"] == 0.2
    assert len(report["f_curve"]) == 1


def test_deseason_natural(events_csv, tmp_path):
    out = tmp_path / "natural"
    assert run(
        "deseason", "--input", events_csv, "--method", "natural", "--out-dir", out
    ) == 0
    assert (out / "natural_delta_hist.csv").exists()
    prov = json.loads((out / "provenance_deseason.json").read_text())
    assert prov["summary"]["n_kept_edges"] <= prov["summary"]["n_total_edges"]


def test_deseason_artificial(events_csv, tmp_path):
    out = tmp_path / "artificial"
    assert run(
        "deseason", "--input", events_csv, "--method", "artificial",
        "--seed", "9", "--rounds", "500", "--out-dir", out,
    ) == 0
    assert (out / "shuffled_events.csv").exists()
    prov = json.loads((out / "provenance_deseason.json").read_text())
    summary = prov["summary"]
    assert summary["attempted"] == 500
    assert summary["applied"] + summary["rejected"] == 500


def test_missing_input_exits_2(tmp_path, capsys):
    assert run("events", "--input", tmp_path / "nope.csv", "--out-dir", tmp_path) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"]["kind"] == "missing_input"


def test_invalid_parameter_exits_3(events_csv, tmp_path, capsys):
    code = run(
        "predict", "--input", events_csv, "--alpha", "1.5", "--out-dir", tmp_path
    )
    assert code == 3
    err = json.loads(capsys.readouterr().err)
    assert err["error"]["kind"] == "invalid_parameter"


def test_usage_error_exits_3(tmp_path, capsys):
    assert run("deseason", "--input", "x.csv", "--method", "bogus") == 3


def test_corrupt_events_exit_4(tmp_path, capsys):
    bad = tmp_path / "bad_events.csv"
    bad.write_text(
        "event_id,ap,t_begin,t_end,size,members\n"
        "0,a,0,10,1,lonely\n"
    )
    assert run("tg", "--input", bad, "--out-dir", tmp_path) == 4
    err = json.loads(capsys.readouterr().err)
    assert err["error"]["kind"] == "invariant_violation"


def test_tz_offset_env_fallback(events_csv, tmp_path, monkeypatch):
    monkeypatch.setenv("TEMPNET_TZ_OFFSET", "0")
    out = tmp_path / "tz_env"
    assert run(
        "deseason", "--input", events_csv, "--method", "natural", "--out-dir", out
    ) == 0
    prov = json.loads((out / "provenance_deseason.json").read_text())
    assert prov["parameters"]["tz_offset_minutes"] is None

    monkeypatch.setenv("TEMPNET_TZ_OFFSET", "not-a-number")
    assert run(
        "deseason", "--input", events_csv, "--method", "natural", "--out-dir", out
    ) == 3


def test_provenance_has_no_timestamps(events_csv, tmp_path):
    out = tmp_path / "prov"
    assert run("tg", "--input", events_csv, "--out-dir", out) == 0
    record = json.loads((out / "provenance_tg.json").read_text())
    assert set(record) == {
        "artifacts", "command", "inputs", "parameters", "summary", "tool", "version"
    }
    assert record["tool"] == "tempnet"
    assert record["inputs"]
