import json
import subprocess
import sys
import wave
from pathlib import Path

import numpy as np
import pytest

from cissa.cli import main

DATA = Path(__file__).parent / "data"


@pytest.fixture
def series_csv(tmp_path):
    x = np.exp(2 + 0.1 * np.random.default_rng(4).standard_normal(200).cumsum() / 10)
    p = tmp_path / "series.csv"
    np.savetxt(p, x, fmt="%.17g", header="value", comments="")
    return p


def run_cli(argv, capsys):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().err


def test_decompose_writes_files(tmp_path, series_csv, capsys):
    out = tmp_path / "dec"
    code, err = run_cli(["decompose", "--input", series_csv, "-L", 24, "--out", out], capsys)
    assert code == 0, err
    meta = json.loads((out / "meta.json").read_text())
    assert meta["F"] == 13 and meta["extension"] == "ar"
    Z = np.loadtxt(out / "components.csv", delimiter=",", skiprows=1)
    x = np.loadtxt(series_csv, skiprows=1)
    assert np.max(np.abs(Z.sum(axis=1) - x)) < 1e-8 * np.max(np.abs(x))


def test_window_too_large(tmp_path, series_csv, capsys):
    code, err = run_cli(["decompose", "--input", series_csv, "-L", 100, "--out", tmp_path], capsys)
    assert code == 2
    assert err.startswith("error[ARG]") and "1<L<T/2" in err
    assert len(err.strip().splitlines()) == 1


def test_unknown_flag_prints_usage(capsys):
    code, err = run_cli(["decompose", "--bogus"], capsys)
    assert code == 2
    assert "usage:" in err and "error[ARG]" in err


def test_missing_subcommand(capsys):
    code, err = run_cli([], capsys)
    assert code == 2 and "error[ARG]" in err


def test_parse_error_exit_code(tmp_path, capsys):
    p = tmp_path / "bad.csv"
    p.write_text("1\n2\nx\n")
    code, err = run_cli(["decompose", "--input", p, "-L", 3, "--out", tmp_path / "o"], capsys)
    assert code == 3 and err.startswith("error[PARSE]") and "bad.csv:3" in err


def test_log_of_nonpositive_is_parse_error(tmp_path, capsys):
    p = tmp_path / "neg.csv"
    np.savetxt(p, np.linspace(-1, 1, 50))
    code, err = run_cli(["decompose", "--input", p, "--log", "-L", 5, "--out", tmp_path / "o"], capsys)
    assert code == 3 and "error[PARSE]" in err


def test_numeric_failure_exit_code(tmp_path, capsys):
    dec = tmp_path / "dec"
    p = tmp_path / "zeros.csv"
    np.savetxt(p, np.zeros(40))
    assert run_cli(["decompose", "--input", p, "-L", 8, "--extension", "none", "--out", dec], capsys)[0] == 0
    code, err = run_cli(["group", "--decomposition", dec, "--spec", "share:0.5", "--out", tmp_path / "g"], capsys)
    assert code == 4 and err.startswith("error[NUM]")


def test_bad_spec_is_argument_error(tmp_path, series_csv, capsys):
    code, err = run_cli(["run", "--input", series_csv, "-L", 24, "--spec", "share:2", "--out", tmp_path], capsys)
    assert code == 2 and "error[ARG]" in err


def test_group_percentile(tmp_path, series_csv, capsys):
    dec, grp = tmp_path / "dec", tmp_path / "grp"
    run_cli(["decompose", "--input", series_csv, "-L", 40, "--extension", "mirror", "--out", dec], capsys)
    code, err = run_cli(["group", "--decomposition", dec, "--spec", "percentile:0.95", "--out", grp], capsys)
    assert code == 0, err
    header = (grp / "groups.csv").read_text().splitlines()[0]
    assert header == "selected"
    kg = json.loads((grp / "kg.json").read_text())
    # F = 21 distinct values: 21 - ceil(0.95 * 21) = 1
    assert len(kg) == 1 and len(kg[0]["k"]) == 1
    psd = np.loadtxt(dec / "psd.csv", delimiter=",", skiprows=1)[:21, 2]
    assert kg[0]["k"] == [int(np.argmax(psd)) + 1]


def test_run_equals_decompose_then_group(tmp_path, series_csv, capsys):
    a, b, c = tmp_path / "a", tmp_path / "b", tmp_path / "c"
    common = ["--input", series_csv, "--log", "-L", 48, "--extension", "ar", "--ar-order", 20]
    assert run_cli(["decompose", *common, "--out", a], capsys)[0] == 0
    assert run_cli(["group", "--decomposition", a, "--spec", "economic:12", "--out", b], capsys)[0] == 0
    assert run_cli(["run", *common, "--spec", "economic:12", "--out", c], capsys)[0] == 0
    for name in ("components.csv", "psd.csv", "meta.json"):
        assert (a / name).read_bytes() == (c / name).read_bytes()
    for name in ("groups.csv", "shares.csv", "kg.json"):
        assert (b / name).read_bytes() == (c / name).read_bytes()
    assert (c / "groups.csv").read_text().splitlines()[0] == "trend,cycle,seasonal"


def test_manual_spec_from_file(tmp_path, series_csv, capsys):
    g = tmp_path / "groups.json"
    g.write_text("[[1], [2, 3]]")
    code, err = run_cli(["run", "--input", series_csv, "-L", 20, "--spec", f"manual:@{g}", "--out", tmp_path / "o"],
                        capsys)
    assert code == 0, err
    assert (tmp_path / "o" / "groups.csv").read_text().splitlines()[0] == "group1,group2"


def test_wav_input(tmp_path, capsys):
    t = np.arange(2000)
    samples = (8000 * np.sin(2 * np.pi * t / 40) + 2000 * np.sin(2 * np.pi * t / 8)).astype("<i2")
    p = tmp_path / "tone.wav"
    with wave.open(str(p), "wb") as wf:
        wf.setnchannels(1)
        wf.setsampwidth(2)
        wf.setframerate(48000)
        wf.writeframes(samples.tobytes())
    code, err = run_cli(["run", "--input", p, "-L", 200, "--extension", "mirror", "--spec", "share:0.97",
                         "--out", tmp_path / "o"], capsys)
    assert code == 0, err
    kg = json.loads((tmp_path / "o" / "kg.json").read_text())
    # periods 40 and 8 land on k = 200/40 + 1 = 6 and 200/8 + 1 = 26
    assert kg[0]["k"][0] == 6
    assert 26 in kg[0]["k"][:2]


def test_module_entry_point(tmp_path, series_csv):
    proc = subprocess.run(
        [sys.executable, "-m", "cissa", "decompose", "--input", str(series_csv), "-L", "300", "--out", str(tmp_path)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 2
    assert proc.stderr.strip().splitlines()[-1].startswith("error[ARG]")
