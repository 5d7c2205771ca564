import math
import subprocess
import sys

import numpy as np
import pytest

from ubseq.cache import read_cache
from ubseq.cli import main


def run(argv, capsys=None):
    code = main(argv)
    out = capsys.readouterr() if capsys else None
    return code, out


def read_csv(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# ubseq ")
    return lines[0], lines[1].split(","), [l.split(",") for l in lines[2:]]


def test_density_sf(tmp_path):
    out = tmp_path / "sf.csv"
    assert main(["density", "--seq", "sf", "--max", "1e5", "--out", str(out)]) == 0
    header, cols, rows = read_csv(out)
    assert cols == ["N", "value"]
    assert "command=density" in header and "seq=sf" in header and "threads" not in header
    assert rows[-1][0] == "100000"
    assert float(rows[-1][1]) == pytest.approx(6 / math.pi**2, abs=2e-3)


def test_weyl_half_omega(tmp_path):
    out = tmp_path / "w.csv"
    assert main(["weyl", "--seq", "omega", "--theta", "rat:1/2", "--max", "1e5", "--out", str(out)]) == 0
    _, cols, rows = read_csv(out)
    assert cols == ["N", "re", "im", "abs"]
    assert float(rows[-1][3]) < 0.005


def test_residue_columns(tmp_path):
    out = tmp_path / "r.csv"
    assert main(["density", "--seq", "omega", "--modulus", "4", "--max", "1e4", "--out", str(out)]) == 0
    _, cols, rows = read_csv(out)
    assert cols == ["N", "r0", "r1", "r2", "r3"]
    assert sum(float(v) for v in rows[-1][1:]) == pytest.approx(1.0, abs=1e-12)


def test_converge_masked_columns(tmp_path):
    out = tmp_path / "c.csv"
    argv = ["converge", "--seq", "smallomega", "--mask", "sf", "--max", "1e5", "--out", str(out)]
    assert main(argv) == 0
    _, cols, _ = read_csv(out)
    assert cols == ["N", "value", "conditional_value"]


def test_seq_listing(capsys):
    assert main(["seq", "--seq", "efsf", "--max", "5"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[1] == "n,value"
    assert [l.split(",")[1] for l in lines[2:]] == ["1", "6", "10", "14", "15"]


def test_checkpoint_syntax(tmp_path):
    out = tmp_path / "p.csv"
    assert main(["panel", "--max", "1e4", "--checkpoints", "geo:10:10:4", "--out", str(out)]) == 0
    _, _, rows = read_csv(out)
    assert [r[0] for r in rows] == ["10", "100", "1000", "10000"]
    assert float(rows[0][2]) == pytest.approx(-0.1)


def test_sieve_roundtrip(tmp_path, capsys):
    cache = tmp_path / "cache.bin"
    assert main(["sieve", "--max", "1e5", "--out", str(cache)]) == 0
    assert "verified" in capsys.readouterr().out
    t = read_cache(cache)
    assert t.max_n == 10**5 and t.big_omega[12] == 3


def test_corrupt_cache_rebuilds(tmp_path, caplog):
    cache = tmp_path / "cache.bin"
    main(["sieve", "--max", "1e4", "--out", str(cache)])
    cache.write_bytes(cache.read_bytes()[:-20])
    code = main(["panel", "--max", "1e4", "--cache", str(cache)])
    assert code == 0 and "rebuilding" in caplog.text
    assert read_cache(cache).max_n == 10**4


@pytest.mark.parametrize(
    "argv",
    [
        ["weyl", "--theta", "rat:0/1"],
        ["weyl", "--theta", "banana"],
        ["converge", "--flow", "cyclic:2", "--obs", "harm:1:re"],
        ["converge", "--flow", "odometer:0"],
        ["density", "--seq", "omega"],
        ["density", "--seq", "sf", "--max", "1e3", "--checkpoints", "10,2000"],
        ["weyl", "--checkpoints", "100,50"],
        ["seq", "--seq", "nope", "--max", "3"],
        ["panel", "--max", "abc"],
        ["sieve", "--max", "100"],
        ["panel", "--max", "100", "--out", "/nonexistent/dir/x.csv"],
        ["seq", "--seq", "n", "--max", "3", "--assert"],
        ["frobnicate"],
    ],
)
def test_validation_errors_exit_2(argv, capsys):
    assert main(argv) == 2


def test_assert_exit_codes(capsys):
    assert main(["panel", "--max", "1e4", "--assert", "--tol", "0.05"]) == 0
    assert main(["panel", "--max", "1e4", "--assert", "--tol", "1e-9"]) == 3
    argv = ["density", "--seq", "sf", "--max", "1e5", "--assert", "--tol", "1e-3"]
    assert main(argv) == 0
    assert main(argv[:-2] + ["--target", "0.5"]) == 3


def test_all_specs_parse_before_work(tmp_path):
    # a bad observable must be rejected even though the sieve would be large
    out = tmp_path / "x.csv"
    assert main(["converge", "--max", "1e9", "--obs", "cyl:2", "--out", str(out)]) == 2
    assert not out.exists()


COMMANDS = [
    ["weyl", "--seq", "omega", "--theta", "golden,rat:1/3", "--max", "2e5"],
    ["weyl", "--seq", "n", "--mask", "sf", "--theta", "rat:1/4", "--max", "2e5"],
    ["density", "--seq", "sf", "--modulus", "3", "--max", "2e5"],
    ["converge", "--flow", "denjoy:golden:0.5:64", "--obs", "denharm:1:re", "--seq", "tm", "--max", "2e5"],
    ["converge", "--seq", "smallomega", "--mask", "sf", "--max", "2e5"],
    ["disjoint", "--weights", "tm", "--max", "2e5"],
    ["dynsys-probe", "--seq", "tm", "--epsilon", "0.05", "--pairs", "6", "--max", "2e4"],
    ["panel", "--max", "2e5"],
]


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: a[0])
def test_byte_identical_across_threads(tmp_path, argv):
    outs = []
    for t in (1, 2, 8):
        p = tmp_path / f"o{t}.csv"
        assert main(argv + ["--threads", str(t), "--seed", "7", "--out", str(p)]) == 0
        outs.append(p.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_report_bundle(tmp_path):
    out = tmp_path / "rep"
    assert main(["report", "--max", "1e5", "--out", str(out), "--assert"]) == 0
    summary = (out / "summary.csv").read_text().splitlines()
    assert summary[1] == "check,value,target,tolerance,pass"
    assert all(line.endswith(",1") for line in summary[2:])
    assert (out / "sup_tm.csv").exists()


def test_corrupt_cache_warning_on_stderr(tmp_path):
    cache = tmp_path / "cache.bin"
    cache.write_bytes(b"UBSEQ\0v1garbage-garbage")
    res = subprocess.run([sys.executable, "-m", "ubseq", "panel", "--max", "1e3", "--cache", str(cache)],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "WARNING" in res.stderr and "rebuilding" in res.stderr


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "ubseq", "density", "--seq", "ef", "--max", "1e4"],
                         capture_output=True, text=True, check=True)
    assert res.stdout.splitlines()[1] == "N,value"
