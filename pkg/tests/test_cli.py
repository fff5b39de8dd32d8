import json

import numpy as np
import pytest

from modsym import cli


def run_cli(args):
    return cli.main(args)


def test_verify_default_passes(capsys):
    assert run_cli(["verify"]) == 0
    out = capsys.readouterr().out
    assert "checks passed" in out


def test_verify_tolerance_injection_fails(capsys):
    assert run_cli(["verify", "--tol", "1e-30"]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_verify_filter(capsys):
    assert run_cli(["verify", "--filter", "symspace"]) == 0
    out = capsys.readouterr().out
    assert "symspace." in out and "flats." not in out


def test_verify_unknown_filter(capsys):
    assert run_cli(["verify", "--filter", "nonsense"]) == 2


def test_trace_table_single_point(tmp_path, capsys):
    out = tmp_path / "t.csv"
    code = run_cli(["trace-table", "--coords", f"0,{np.log(3) / 2},0",
                    "--out", str(out)])
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "s,t,theta,tr_baba_numeric,tr_baba_closed,residual"
    fields = lines[1].split(",")
    assert float(fields[3]) == pytest.approx(-1.0, abs=1e-12)
    assert float(fields[5]) < 1e-12
    assert lines[-1].startswith("# config=")


def test_trace_table_grid_count_and_determinism(tmp_path):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    grid = "0:2:5,0:2:5,0:2:5"
    run_cli(["trace-table", "--grid", grid, "--out", str(out1)])
    run_cli(["trace-table", "--grid", grid, "--out", str(out2)])
    text1, text2 = out1.read_bytes(), out2.read_bytes()
    assert text1 == text2
    rows = text1.decode().strip().split("\n")
    assert len(rows) == 1 + 125 + 1  # header, grid rows, config comment


def test_trace_table_parallel_jobs_match(tmp_path):
    out1 = tmp_path / "serial.csv"
    out2 = tmp_path / "par.csv"
    grid = "0:1:3,0:1:3,0:1:3"
    run_cli(["trace-table", "--grid", grid, "--out", str(out1)])
    run_cli(["trace-table", "--grid", grid, "--jobs", "2", "--out", str(out2)])
    assert out1.read_bytes() == out2.read_bytes()


def test_surface_rows(tmp_path):
    out = tmp_path / "s.csv"
    run_cli(["surface", "--s-grid", "0:2:5",
             "--theta-grid", f"0.5:{np.pi - 0.5!r}:2", "--out", str(out)])
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "s,theta,t,residual,status"
    data = [ln.split(",") for ln in lines[1:-1]]
    s0 = [row for row in data if float(row[0]) == 0.0]
    for row in s0:
        assert float(row[2]) == pytest.approx(np.log(3) / 2, abs=1e-12)
    for row in data:
        assert row[4] == "ok"
        assert float(row[3]) < 1e-12
    # theta and pi - theta give the same t (the trace depends on sin^2)
    by_s = {}
    for row in data:
        by_s.setdefault(row[0], []).append(float(row[2]))
    for vals in by_s.values():
        assert vals[0] == pytest.approx(vals[1], abs=1e-12)


def test_anosov_scan_and_summary(tmp_path):
    out = tmp_path / "scan.csv"
    code = run_cli(["anosov-scan", "--grid", "1:1:1,6:6:1,0.5:0.5:1",
                    "--max-len", "8", "--samples", "5000", "--out", str(out)])
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "s,t,theta,verdict,c,minangle,minspacing"
    assert "evidence-anosov" in lines[1]
    summary = json.loads((tmp_path / "scan.csv.summary.json").read_text())
    assert summary["rows"] == 1
    assert summary["verdicts"]["evidence-anosov"] == 1
    assert summary["seed"] == 0
    assert "config_hash" in summary


def test_rep_info_fixed_point(tmp_path):
    out = tmp_path / "info.json"
    assert run_cli(["rep-info", "--coords", "0,0,0", "--out", str(out)]) == 0
    info = json.loads(out.read_text())
    assert info["fuchsian_class"] == "both"
    assert info["trace_baba"]["numeric"] == pytest.approx(0.0, abs=1e-12)
    assert info["reducible"] is True
    assert info["peripheral_growth"]["model"] == "log"


def test_rep_info_on_surface_reports_b2aba(tmp_path, capsys):
    from modsym.charvar import schwartz_t

    t = float(schwartz_t(1.0, 0.5))
    assert run_cli(["rep-info", "--coords", f"1.0,{t!r},0.5"]) == 0
    info = json.loads(capsys.readouterr().out)
    assert abs(info["trace_b2aba"]["numeric"]) >= 4.0 - 1e-6


def test_rep_info_word_trace(capsys):
    assert run_cli(["rep-info", "--coords", "0,0.5,0", "--word", "baBa"]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["trace_word"]["word"] == "baBa"
    assert np.isfinite(info["trace_word"]["trace"])
    # odd words report the parity error instead of a trace
    run_cli(["rep-info", "--coords", "0,0.5,0", "--word", "bab"])
    info = json.loads(capsys.readouterr().out)
    assert "error" in info["trace_word"]


def test_anosov_scan_gap_table(tmp_path):
    out = tmp_path / "scan.csv"
    gaps = tmp_path / "gaps.csv"
    run_cli(["anosov-scan", "--grid", "0.8:0.8:1,2:2:1,0.5:0.5:1",
             "--max-len", "3", "--samples", "500",
             "--gap-table", str(gaps), "--out", str(out)])
    lines = gaps.read_text().strip().split("\n")
    assert lines[0] == "word,length,gap12,gap23"
    assert len(lines) == 1 + 2 * (3**3 - 1) + 1
    # mirror duality is visible in the table: gap12(x) = gap23(X)
    row_x = lines[1].split(",")
    row_xinv = lines[2].split(",")
    assert row_x[0] == "x" and row_xinv[0] == "X"
    assert float(row_x[2]) == pytest.approx(float(row_xinv[3]), abs=1e-10)
    with pytest.raises(SystemExit):
        run_cli(["anosov-scan", "--grid", "0.8:1:2,2:2:1,0.5:0.5:1",
                 "--gap-table", str(gaps)])


def test_bad_grid_spec():
    with pytest.raises(SystemExit):
        run_cli(["trace-table", "--grid", "bogus"])


def test_json_format_outputs(tmp_path, capsys):
    run_cli(["trace-table", "--coords", "1,1,0.5", "--format", "json"])
    payload = json.loads(capsys.readouterr().out)
    assert payload["rows"][0]["residual"] < 1e-9
    run_cli(["anosov-scan", "--grid", "1:1:1,6:6:1,0.5:0.5:1",
             "--max-len", "8", "--samples", "4000", "--format", "json",
             "--out", str(tmp_path / "scan.json")])
    payload = json.loads((tmp_path / "scan.json").read_text())
    assert payload["rows"][0]["verdict"] == "evidence-anosov"


def test_anosov_scan_jobs_determinism(tmp_path):
    out1 = tmp_path / "s1.csv"
    out2 = tmp_path / "s2.csv"
    grid = "0.8:1:2,2:3:2,0.5:0.5:1"
    args = ["anosov-scan", "--grid", grid, "--max-len", "4", "--samples",
            "500", "--window", "6"]
    run_cli(args + ["--out", str(out1)])
    run_cli(args + ["--jobs", "2", "--out", str(out2)])
    assert out1.read_bytes() == out2.read_bytes()
