import json
import math
import subprocess
import sys

import pytest

from cvbell.cli import EXIT_DOMAIN, EXIT_USAGE, parse_number, parse_r, run


def test_parse_number():
    assert parse_number("0.25") == 0.25
    assert parse_number("-pi/4") == -math.pi / 4
    assert parse_number("3*pi/2") == 3 * math.pi / 2
    for bad in ("pie", "1/0", "__import__('os')", "2**3"):
        with pytest.raises(Exception):
            parse_number(bad)


def test_parse_r():
    assert parse_r("0.5") == (0.5, 0.5, 1.0)
    assert parse_r("0:2:0.01") == (0.0, 2.0, 0.01)
    with pytest.raises(Exception):
        parse_r("0:2")


def test_single_point_csv(capsys):
    assert run(["ps", "--r", "0"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 2
    assert float(lines[1].split(",")[-2]) == pytest.approx(math.sqrt(2), rel=1e-11)


def test_grid_json(capsys):
    assert run(["hd", "--state", "ips", "--r", "0.2:0.4:0.1", "--tau", "0.99", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["test"] == "hd"
    assert [row["r"] for row in doc["rows"]] == [0.2, 0.3, 0.4]


def test_angles_accept_pi(capsys):
    assert run(["ps", "--r", "0.5", "--angles", "0,pi/2,pi/4,-pi/4", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["parameters"]["angles"] == [0.0, math.pi / 2, math.pi / 4, -math.pi / 4]
    assert run(["hd", "--r", "0.5", "--angles=-pi/4,0,0,pi"]) == 0
    with pytest.raises(SystemExit):
        run(["hd", "--r", "0.5", "--angles", "0,1"])


def test_output_file_is_byte_identical_on_rerun(tmp_path):
    argv = ["dp", "--state", "ips", "--r", "0.5:1.0:0.1", "--gamma-t", "0.01", "--n-th", "0.1"]
    a, b = tmp_path / "a" / "out.csv", tmp_path / "b.csv"
    assert run(argv + ["--out", str(a)]) == 0
    assert run(argv + ["--out", str(b), "--workers", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_maximize(capsys):
    assert run(["maximize", "dp", "--r", "1:2:0.05", "--J", "1.6e-3", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    (row,) = doc["rows"]
    assert row["value"] == pytest.approx(2.32, abs=0.01)
    assert row["violated"]


def test_preset_list(capsys):
    assert run(["preset", "--list"]) == 0
    out = capsys.readouterr().out
    for name in ("fig-dp", "fig-hd-eta09", "fig-ps-thermal"):
        assert name in out


@pytest.mark.parametrize(
    "argv",
    [
        ["dp", "--r", "1:0:0.1"],
        ["dp", "--r", "0.5", "--gamma-t", "-1"],
        ["ps", "--r", "0.5", "--tau", "2"],
    ],
)
def test_config_errors_exit_with_usage_status(argv, capsys):
    assert run(argv) == EXIT_USAGE
    assert "usage error" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [["xx"], ["dp"], ["dp", "--r", "abc"], ["preset", "fig-99"]])
def test_malformed_command_lines_exit_with_usage_status(argv):
    with pytest.raises(SystemExit) as info:
        run(argv)
    assert info.value.code == EXIT_USAGE


def test_domain_errors_exit_with_domain_status(capsys):
    assert run(["dp", "--state", "ips", "--r", "0.5", "--tau", "1"]) == EXIT_DOMAIN
    assert "domain error" in capsys.readouterr().err
    assert run(["ps", "--state", "ips", "--r", "0"]) == EXIT_DOMAIN


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cvbell.cli", "ps", "--r", "0:0:1", "--format", "json"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["rows"][0]["violated"] is False
    proc = subprocess.run([sys.executable, "-m", "cvbell.cli", "dp", "--r", "-1"], capture_output=True, check=False)
    assert proc.returncode == EXIT_USAGE
