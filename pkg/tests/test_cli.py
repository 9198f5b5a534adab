import csv
import json
import subprocess
import sys

import pytest

from cavity_echo.cli import build_parser, main
from cavity_echo.model import dump_config, fig1_config


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_depth(capsys):
    code, out, _ = run(capsys, "depth", "--gamma1-hz", "1e8", "--length-m", "1e-3")
    assert code == 0
    assert float(out) == pytest.approx(3.34e-4, abs=5e-7)


def test_efficiency_default_is_fig1(capsys):
    code, out, _ = run(capsys, "efficiency")
    doc = json.loads(out)
    assert code == 0 and doc["type"] == "efficiency"
    assert doc["total_memory"] >= 0.9


def test_efficiency_from_file_with_override(capsys, tmp_path):
    path = tmp_path / "c.toml"
    path.write_text(dump_config(fig1_config(mode_count=2)))
    code, out, _ = run(capsys, "efficiency", "--config", str(path), "--set", "cavity.gamma2=0",
                       "--format", "csv")
    assert code == 0
    rows = list(csv.reader(out.splitlines()))
    assert rows[0] == ["mode", "q_st", "q_me_k", "decoherence_factor", "mean_photons"]
    assert len(rows) == 4


def test_config_errors_exit_2_and_list_everything(capsys):
    code, _, err = run(capsys, "efficiency", "--set", "cavity.gamma1=-1", "--set", "ensemble.delta_in=0",
                       "--set", "cavity.nope=1")
    assert code == 2
    assert "cavity.gamma1" in err and "ensemble.delta_in" in err and "cavity.nope" in err


def test_missing_config_file(capsys, tmp_path):
    code, _, err = run(capsys, "efficiency", "--config", str(tmp_path / "none.toml"))
    assert code == 2 and "not found" in err


def test_numeric_failure_exit_3(capsys):
    code, _, err = run(capsys, "oracle", "--set", "oracle.dt=0.1")
    assert code == 3 and "StepSizeError" in err


def test_scan_and_out_file(capsys, tmp_path):
    out = tmp_path / "scan.csv"
    code, stdout, _ = run(capsys, "scan", "--ratios", "0.5,1", "--modes", "1-3", "--out", str(out))
    assert code == 0 and stdout == ""
    lines = out.read_text().splitlines()
    assert lines[0] == "M,ratio,q_me,q_min_mode" and len(lines) == 7


def test_fig1(capsys):
    code, out, _ = run(capsys, "fig1")
    assert code == 0
    rows = list(csv.DictReader(out.splitlines()))
    assert len(rows) == 100 * 61
    row = next(r for r in rows if r["M"] == "1" and float(r["ratio"]) == pytest.approx(1.0))
    assert float(row["q_me"]) >= 0.9


def test_optimize(capsys):
    code, out, _ = run(capsys, "optimize", "--objective", "narrowband", "--set", "ensemble.gamma21=0",
                       "--set", "cavity.gamma2=0")
    doc = json.loads(out)
    assert code == 0 and doc["type"] == "match"
    assert doc["q"] == pytest.approx(1.0, abs=1e-12)


def test_oracle(capsys, tmp_path):
    traj = tmp_path / "traj.dat"
    code, out, _ = run(capsys, "oracle", "--trajectory", str(traj), "--stride", "100",
                       "--set", "ensemble.coupling_strength_sq=50", "--set", "cavity.gamma1=10",
                       "--set", "cavity.gamma2=0", "--set", "ensemble.gamma21=0")
    assert code == 0
    rows = list(csv.DictReader(line for line in out.splitlines() if not line.startswith("#")))
    assert [r["quantity"] for r in rows] == ["q_st", "q_me_0", "q_me"]
    assert all(float(r["rel_error"]) <= 1e-2 for r in rows)
    assert traj.read_text().startswith("# t a_re")


@pytest.mark.parametrize("command", ["efficiency", "scan", "fig1", "oracle", "optimize", "depth"])
def test_help_documents_flags(command, capsys):
    with pytest.raises(SystemExit) as exc:
        main([command, "--help"])
    assert exc.value.code == 0
    text = capsys.readouterr().out
    flags = [a.option_strings for a in build_parser()._subparsers._group_actions[0].choices[command]._actions]
    for opts in flags:
        for opt in opts:
            assert opt in text


def test_unknown_flag_is_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["efficiency", "--bogus"])
    assert exc.value.code == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "cavity_echo", "depth", "--gamma1-hz", "1e8",
                          "--length-m", "1e-3"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "0.000333564095198"
