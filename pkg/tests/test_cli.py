"""Tests for the command line: eval, sweep, verify and limits."""
import csv
import io
import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.cli import main, parse_overrides
from src.errors import DomainError
from src.sweep import CSV_COLUMNS, LIMIT_COLUMNS, format_number, parse_range


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_eval_case2_row(capsys):
    """eval prints one CSV row with region Case2 and k = 2/3."""
    assert main(["eval", "--h", "3", "--gamma", "1", "--alpha", "2"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == ",".join(CSV_COLUMNS)
    rows = read_csv(out)
    assert len(rows) == 1
    assert rows[0]["region"] == "Case2"
    assert float(rows[0]["k"]) == pytest.approx(2.0 / 3.0, abs=1e-15)
    assert rows[0]["method"] == "ClosedForm"
    assert rows[0]["reason"] == ""


def test_eval_no_header(capsys):
    """--no-header drops the header line."""
    assert main(["eval", "--h", "3", "--gamma", "1", "--alpha", "2", "--no-header"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 1
    assert lines[0].startswith("3,1,2,Case2,")


def test_eval_near_factorizing_line(capsys):
    """h = 1.7320508, gamma = 0.5 gives S = ln 2 for any order."""
    assert main(["eval", "--h", "1.7320508", "--gamma", "0.5", "--alpha", "5"]) == 0
    row = read_csv(capsys.readouterr().out)[0]
    assert float(row["S_renyi"]) == pytest.approx(math.log(2.0), abs=1e-6)


def test_eval_series_flag(capsys):
    """--series answers from the eigenvalue sum."""
    assert main(["eval", "--h", "1.2", "--gamma", "0.6", "--alpha", "3", "--series"]) == 0
    series_row = read_csv(capsys.readouterr().out)[0]
    assert series_row["method"] == "Series"
    assert main(["eval", "--h", "1.2", "--gamma", "0.6", "--alpha", "3"]) == 0
    closed_row = read_csv(capsys.readouterr().out)[0]
    assert float(series_row["S_renyi"]) == pytest.approx(float(closed_row["S_renyi"]), abs=1e-10)


def test_eval_critical_field_exits_2(capsys):
    """h = 2 is a critical line."""
    assert main(["eval", "--h", "2", "--gamma", "1", "--alpha", "2"]) == 2
    assert "CriticalPointError" in capsys.readouterr().err


def test_eval_bad_alpha_exits_2(capsys):
    """Nonpositive order is a domain error."""
    assert main(["eval", "--h", "3", "--gamma", "1", "--alpha", "0"]) == 2


def test_sweep_grid(tmp_path, capsys):
    """A 3 x 3 x 2 grid gives 18 rows plus header, critical rows carry a reason."""
    out = tmp_path / "sweep.csv"
    argv = [
        "sweep", "--h-range", "1:3:3", "--gamma-range", "0.5:1:3",
        "--alpha-list", "0.5,2", "--out", str(out), "--max-workers", "4",
    ]
    assert main(argv) == 0
    text = out.read_text(encoding="utf-8")
    assert len(text.splitlines()) == 19
    rows = read_csv(text)
    assert [(float(r["h"]), float(r["gamma"]), float(r["alpha"])) for r in rows] == [
        (h, g, a) for h in (1.0, 2.0, 3.0) for g in (0.5, 0.75, 1.0) for a in (0.5, 2.0)
    ]
    critical = [r for r in rows if float(r["h"]) == 2.0]
    assert len(critical) == 6
    assert all(r["reason"] == "CriticalField" and r["S_renyi"] == "" for r in critical)
    assert all(r["S_renyi"] != "" for r in rows if float(r["h"]) != 2.0)


def test_sweep_is_deterministic(tmp_path):
    """Identical configs give byte-identical files."""
    outputs = []
    for name in ("a.csv", "b.csv"):
        path = tmp_path / name
        argv = [
            "sweep", "--h-range", "0.5:3.5:4", "--gamma-range", "0.2:1:3",
            "--alpha-list", "0.5,1,3", "--out", str(path),
        ]
        assert main(argv) == 0
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1]


def test_sweep_log_slope_near_critical_field(tmp_path):
    """Along h -> 2 from above S grows like -((1 + alpha)/(12 alpha)) ln|2 - h|."""
    path = tmp_path / "near.csv"
    alpha = 2.0
    argv = [
        "sweep", "--h-range", "2.000001:2.0001:5", "--gamma-range", "1:1:1",
        "--alpha-list", "2", "--out", str(path),
    ]
    assert main(argv) == 0
    rows = read_csv(path.read_text(encoding="utf-8"))
    xs = [math.log(float(r["h"]) - 2.0) for r in rows]
    ys = [float(r["S_renyi"]) for r in rows]
    slope = (ys[-1] - ys[0]) / (xs[-1] - xs[0])
    assert slope == pytest.approx(-(1.0 + alpha) / (12.0 * alpha), rel=0.05)


def test_sweep_bad_range_exits_2(tmp_path, capsys):
    """Malformed or inverted ranges are rejected."""
    out = str(tmp_path / "x.csv")
    assert main(["sweep", "--h-range", "1:3", "--gamma-range", "0.5:1:3", "--alpha-list", "2", "--out", out]) == 2
    assert main(["sweep", "--h-range", "3:1:3", "--gamma-range", "0.5:1:3", "--alpha-list", "2", "--out", out]) == 2
    assert main(["sweep", "--h-range", "1:3:3", "--gamma-range", "0.5:1:3", "--alpha-list", "-1", "--out", out]) == 2


def test_sweep_unwritable_path_exits_2(tmp_path):
    """An output path under a regular file cannot be created."""
    blocker = tmp_path / "file"
    blocker.write_text("x")
    argv = [
        "sweep", "--h-range", "1:1:1", "--gamma-range", "0.5:0.5:1",
        "--alpha-list", "2", "--out", str(blocker / "sweep.csv"),
    ]
    assert main(argv) == 2


def test_verify_theta_passes(capsys):
    """The theta suite passes and reports PASS lines."""
    assert main(["verify", "--suite", "theta"]) == 0
    out = capsys.readouterr().out
    assert "PASS  jacobi_identities" in out
    assert out.rstrip().endswith("result: PASS")


def test_verify_override_can_fail(capsys):
    """An impossible Schwarzian tolerance makes the modular suite fail."""
    assert main(["verify", "--suite", "modular", "--override", "schwarzian=1e-15"]) == 1
    out = capsys.readouterr().out
    assert "FAIL  schwarzian" in out
    assert "result: FAIL" in out


def test_verify_unknown_suite_is_usage_error():
    """argparse rejects suites it does not know."""
    with pytest.raises(SystemExit):
        main(["verify", "--suite", "nonsense"])


def test_limits(capsys):
    """Next to the critical field the critical estimate is listed beside the closed form."""
    assert main(["limits", "--h", "2.01", "--gamma", "1", "--alpha", "2"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == ",".join(LIMIT_COLUMNS)
    rows = {r["estimate"]: r for r in read_csv(out)}
    assert {"closed_form", "large_alpha", "single_copy", "critical_field"} <= set(rows)
    assert rows["single_copy"]["alpha"] == "inf"
    assert "xx_limit" not in rows


def test_limits_small_anisotropy(capsys):
    """Small gamma adds the XX estimate, small alpha tau0 the small-alpha ones."""
    assert main(["limits", "--h", "0.5", "--gamma", "0.001", "--alpha", "0.5"]) == 0
    rows = {r["estimate"]: r for r in read_csv(capsys.readouterr().out)}
    assert {"xx_limit", "small_alpha", "small_alpha_refined"} <= set(rows)


def test_parse_helpers():
    """Range and override parsing."""
    assert parse_range("0.1:4:40") == (0.1, 4.0, 40)
    with pytest.raises(DomainError):
        parse_range("a:b:c")
    assert parse_overrides(["schwarzian=1e-5", "monotonicity=0.1"]) == {"schwarzian": 1e-5, "monotonicity": 0.1}
    with pytest.raises(DomainError):
        parse_overrides(["schwarzian"])
    assert format_number(None) == ""
    assert format_number(0.1) == "0.10000000000000001"
