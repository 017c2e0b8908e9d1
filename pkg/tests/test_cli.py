import json
import os

import pytest

from crownkit.cli import main
from crownkit.report_io import render_json


def test_list_suites(capsys):
    assert main(["--list-suites"]) == 0
    out = capsys.readouterr().out
    assert "closedness" in out and "sl2r_uniqueness" in out


def test_usage_errors():
    assert main(["--space", "nosuch"]) == 2
    assert main(["--space", "sl2r", "--suite", "bogus"]) == 2
    assert main(["--space", "sl2r", "--h", "1.0"]) == 2
    assert main(["--space", "sl2r", "--grid", "0"]) == 2
    assert main(["--space", "sl2r", "--tol", "closedness"]) == 2
    assert main(["--space", "su21", "--suite", "sl2r_uniqueness"]) == 2
    assert main([]) == 2


def test_argparse_rejects_unknown_flags():
    with pytest.raises(SystemExit) as exc:
        main(["--definitely-not-a-flag"])
    assert exc.value.code == 2


def test_single_suite_run_passes(tmp_path):
    out = tmp_path / "report.json"
    code = main(["--space", "sl2r", "--suite", "structure", "--seed", "7",
                 "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["space"] == "sl2r"
    assert doc["verdict"] == "pass"
    names = {c["name"] for r in doc["reports"] for c in r["checks"]}
    assert "fiber_trig_identity" in names
    for r in doc["reports"]:
        for c in r["checks"]:
            assert set(c) == {"name", "paper_ref", "max_residual",
                              "mean_residual", "tolerance", "pass"}
        assert r["runtime_ms"] is None


def test_reports_byte_identical(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        code = main(["--space", "sl2r", "--suite", "closedness", "--suite",
                     "moment_maps", "--seed", "11", "--out", str(p)])
        assert code == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_tight_tolerance_fails(tmp_path, capsys):
    code = main(["--space", "sl2r", "--suite", "closedness",
                 "--tol", "closedness=1e-12"])
    assert code == 1
    assert "FAIL" in capsys.readouterr().out


def test_csv_and_figures(tmp_path):
    csv_dir = tmp_path / "tables"
    code = main(["--space", "sl2r", "--suite", "structure", "--grid", "10",
                 "--csv-dir", str(csv_dir)])
    assert code == 0
    csv_path = csv_dir / "sl2r_ray.csv"
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0] == "s,t_1,rho_J,rho_I,rho_can,metric_min_eig,a3"
    assert len(lines) == 11  # header + grid rows
    first = [float(v) for v in lines[1].split(",")]
    assert first[0] == 0.0 and abs(first[2] + 2.0) < 1e-12
    for stem in ("potentials", "metric_min_eig", "a3"):
        assert (csv_dir / f"sl2r_{stem}.png").stat().st_size > 0


def test_render_json_formatting():
    text = render_json({"x": 1.0 / 3.0, "flag": True, "none": None, "arr": [1, 2]})
    assert '"x": 0.33333333333333331' in text
    assert '"flag": true' in text
    assert '"none": null' in text
