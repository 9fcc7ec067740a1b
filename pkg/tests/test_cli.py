import json

import numpy as np
import pytest

from qscramble import cli
from qscramble.experiments import ScramblingReport, save_unitary_file
from qscramble.models import haar_random_unitary


def test_scan_writes_csv(tmp_path, capsys):
    out = tmp_path / "scan.csv"
    rc = cli.main(["scan", "--model", "ising", "--n", "3", "--points", "4",
                   "--tmax", "3.0", "--out", str(out)])
    assert rc == 0
    report = ScramblingReport.from_csv(str(out))
    assert len(report.rows) == 4
    assert "wrote 4 rows" in capsys.readouterr().out


def test_scan_stdout_when_no_out(capsys):
    rc = cli.main(["scan", "--model", "ising", "--n", "3", "--points", "2",
                   "--tmax", "1.0", "--quiet"])
    assert rc == 0
    text = capsys.readouterr().out
    assert text.startswith("t,minusI3,minusT3")
    assert len(text.strip().splitlines()) == 3


def test_scan_accepts_config_file(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"model": "ising", "n": 3, "points": 2,
                               "t_max": 1.0}))
    out = tmp_path / "scan.csv"
    rc = cli.main(["scan", "--config", str(cfg), "--points", "3",
                   "--out", str(out), "--quiet"])
    assert rc == 0
    assert len(ScramblingReport.from_csv(str(out)).rows) == 3  # flag wins


def test_scan_unitary_file(tmp_path, rng):
    upath = tmp_path / "u.txt"
    save_unitary_file(str(upath), haar_random_unitary(4, rng))
    out = tmp_path / "one.csv"
    rc = cli.main(["scan", "--model", "unitary-file", "--unitary-file",
                   str(upath), "--out", str(out), "--quiet"])
    assert rc == 0
    report = ScramblingReport.from_csv(str(out))
    assert len(report.rows) == 1


def test_clifford_and_backflow_pipeline(tmp_path, capsys):
    out = tmp_path / "cliff.csv"
    rc = cli.main(["clifford", "--points", "9", "--out", str(out), "--quiet"])
    assert rc == 0
    rc = cli.main(["backflow", "--in", str(out), "--quantity", "I3",
                   "--units", "bits"])
    assert rc == 0
    text = capsys.readouterr().out
    assert "backflow[I3]" in text and "bits" in text
    rc = cli.main(["backflow", "--in", str(out), "--json"])
    assert rc == 0
    data = json.loads(capsys.readouterr().out)
    assert [d["quantity"] for d in data] == ["I3", "T3"]
    assert data[1]["units"] == "unitless"


def test_clifford_svg(tmp_path):
    out = tmp_path / "cliff.csv"
    svg = tmp_path / "cliff.svg"
    rc = cli.main(["clifford", "--points", "5", "--out", str(out),
                   "--svg", str(svg), "--quiet"])
    assert rc == 0
    assert svg.read_text().startswith("<svg")


def test_sweep_json_and_csv_dir(tmp_path, capsys):
    # the output directory does not exist yet; the command must create it
    out_dir = tmp_path / "results"
    rc = cli.main(["sweep", "--family", "integrable", "--sizes", "3",
                   "--points", "4", "--nc", "1", "--json",
                   "--out-dir", str(out_dir)])
    assert rc == 0
    rows = json.loads(capsys.readouterr().out)
    assert rows[0]["n"] == 3 and rows[0]["n_c"] == 1
    assert (out_dir / "integrable_n3.csv").exists()


def test_haar_baseline_output(capsys):
    rc = cli.main(["haar-baseline", "--n", "3", "--nc", "1",
                   "--samples", "6", "--seed", "1"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "-I3 Haar baseline (n=3, n_c=1, 6 samples):" in out


def test_verify_subcommand_quick_subset(capsys):
    rc = cli.main(["verify", "--quick", "--only", "kron", "strategies"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "kron" in out and "PASS" in out


def test_bad_arguments_exit_nonzero():
    with pytest.raises(SystemExit):
        cli.main(["scan", "--model", "warp-drive"])
    with pytest.raises(SystemExit):
        cli.main([])
