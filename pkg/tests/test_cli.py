#!/usr/bin/env python3
#
# Copyright (c) 2026 The perstd developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-2-Clause
# See LICENSE.md for the full license text.

import csv
import json
import math

import pytest

from perstd.__main__ import main
from perstd.internals import ExperimentConfig

from conftest import three_datasets_text

SMALL = '''Common.Dims:
	4 4 4

Common.Rank:
	2

Dataset[1].Dims:
	6 6 6

Dataset[1].Rank:
	1

Dataset[2].Dims:
	6 6 6

Dataset[2].Rank:
	1

Solver.Restarts:
	2

Solver.Max_iters:
	200

Solver.Cpd_restarts:
	3

Solver.Witness:
	1 1 1 2

'''

def write(tmp_path, text, name="exp.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)

def small(mode, extra=""):
    return "Experiment.Mode:\n\t%s\n\nExperiment.Runs:\n\t2\n\n" % mode + SMALL + extra + "*END*\n"

def read_csv(path):
    with open(path, encoding="utf8") as file:
        return list(csv.reader(file))

def test_check_uniqueness(tmp_path, capsys):
    cfg = write(tmp_path, three_datasets_text())
    assert main(["check-uniqueness", "--config", cfg, "--out", str(tmp_path / "out")]) == 0
    out = capsys.readouterr().out
    assert "Witness: η=2 ξ=(1, 2, 3)" in out
    assert "Recovery guaranteed: yes" in out
    report = (tmp_path / "out" / "uniqueness.txt").read_text()
    assert "Fully unique (η candidates): {Y2}" in report
    assert (tmp_path / "out" / "manifest.json").exists()

def test_check_uniqueness_not_guaranteed(tmp_path, capsys):
    cfg = write(tmp_path, three_datasets_text(rank=7))
    assert main(["check-uniqueness", "--config", cfg]) == 2
    assert "Recovery guaranteed: no" in capsys.readouterr().out

def test_check_uniqueness_bad_witness(tmp_path, capsys):
    cfg = write(tmp_path, three_datasets_text(extra="Solver.Witness:\n\t1 1 2 3\n\n"))
    assert main(["check-uniqueness", "--config", cfg]) == 2
    assert "Y1 is not generically fully unique" in capsys.readouterr().out

def test_malformed_config(tmp_path, capsys):
    cfg = write(tmp_path, "Experiment.Mode:\n\tcheck-uniqueness\n*END*\n")
    assert main(["check-uniqueness", "--config", cfg]) == 1
    err = capsys.readouterr().err
    assert "Config Syntax Error" in err
    assert "⎣*END*⎤" in err

def test_semantic_errors_listed(tmp_path, capsys):
    cfg = write(tmp_path, three_datasets_text(rank=0, extra="Solver.Witness:\n\t9 1 2 3\n\n"))
    assert main(["check-uniqueness", "--config", cfg]) == 1
    err = capsys.readouterr().err
    assert "Must be at least 1" in err
    assert "Witness names a Dataset" in err

def test_mode_mismatch(tmp_path, capsys):
    cfg = write(tmp_path, three_datasets_text())
    assert main(["synth-snr", "--config", cfg]) == 1
    assert "not synth-snr" in capsys.readouterr().err

def test_missing_config(capsys):
    assert main(["decompose"]) == 1
    assert main(["decompose", "--config", "/nonexistent/exp.cfg"]) == 1

def test_samples(capsys, tmp_path):
    assert main(["sample"]) == 0
    names = capsys.readouterr().out.split()
    assert "three-datasets" in names
    for name in names:
        assert main(["sample", name]) == 0
        text = capsys.readouterr().out
        cfg = ExperimentConfig(text, basedir=str(tmp_path))
        assert cfg.mode == name or name == "three-datasets"
        assert not [x for x in cfg.litany() if "No such file" not in x.text]
    assert main(["sample", "nope"]) == 1

def test_three_datasets_sample_is_guaranteed(tmp_path, capsys):
    main(["sample", "three-datasets"])
    cfg = write(tmp_path, capsys.readouterr().out)
    assert main(["check-uniqueness", "--config", cfg]) == 0

def test_generate_then_decompose(tmp_path, capsys):
    cfg = write(tmp_path, small("generate", "Solver.Init:\n\tsemialg\n\n"))
    assert main(["generate", "--config", cfg, "--seed", "3", "--out", str(tmp_path / "gen")]) == 0
    gen = tmp_path / "gen"
    for name in ("C.t3", "Y1.t3", "Y2.t3", "P1_1.m", "P2_3.m", "decompose.cfg"):
        assert (gen / name).exists()
    manifest = json.loads((gen / "manifest.json").read_text())
    assert manifest["seed"] == 3
    assert manifest["command"] == "generate"

    status = main(["decompose", "--config", str(gen / "decompose.cfg")])
    assert status in (0, 3)
    out = gen / "decomposed"
    for name in ("C.t3", "C1.m", "C2.m", "C3.m", "D1.t3", "D2.t3", "trace.csv"):
        assert (out / name).exists()
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["nrmse"] < 1e-4
    assert "NRMSE" in capsys.readouterr().out

def test_generate_is_deterministic(tmp_path):
    cfg = write(tmp_path, small("generate"))
    main(["generate", "--config", cfg, "--out", str(tmp_path / "a")])
    main(["generate", "--config", cfg, "--out", str(tmp_path / "b")])
    a = json.loads((tmp_path / "a" / "manifest.json").read_text())
    b = json.loads((tmp_path / "b" / "manifest.json").read_text())
    assert a["files"] == b["files"]
    assert a["options"]["out"] != b["options"]["out"]

def test_decompose_missing_p(tmp_path, capsys):
    cfg = write(tmp_path, small("generate"))
    main(["generate", "--config", cfg, "--out", str(tmp_path / "gen")])
    (tmp_path / "gen" / "P2_2.m").unlink()
    assert main(["decompose", "--config", str(tmp_path / "gen" / "decompose.cfg")]) == 1
    assert str(tmp_path / "gen" / "P2_2.m") in capsys.readouterr().err

def test_synth_snr(tmp_path):
    cfg = write(tmp_path, small("synth-snr", "Synth.Snr_db:\n\tinf 30\n\n"))
    assert main(["synth-snr", "--config", cfg, "--out", str(tmp_path / "o")]) == 0
    rows = read_csv(tmp_path / "o" / "nrmse.csv")
    assert rows[0] == ["snr_db", "method", "mean_nrmse", "std_nrmse", "runs_ok"]
    assert len(rows) == 1 + 2 * 3
    assert {x[1] for x in rows[1:]} == {"semialg", "als-init1", "als-init2"}
    trials = read_csv(tmp_path / "o" / "trials.csv")
    assert len(trials) == 1 + 2 * 2 * 3
    assert (tmp_path / "o" / "summary.txt").exists()

def test_ablate_alpha(tmp_path):
    cfg = write(tmp_path, small("ablate-alpha", "Sweep.Alpha:\n\t0 0.5\n\nSynth.Snr_db:\n\t40\n\n"))
    assert main(["ablate-alpha", "--config", cfg, "--out", str(tmp_path / "o"), "--runs", "1"]) == 0
    rows = read_csv(tmp_path / "o" / "nrmse.csv")
    assert rows[0] == ["alpha", "mean_nrmse", "std_nrmse", "runs_ok"]
    assert [x[0] for x in rows[1:]] == ["0.0", "0.5"]

def test_ablate_rank(tmp_path):
    extra = "Sweep.Common_ranks:\n\t1 2\n\nSweep.Distinct_ranks:\n\t1\n\nSynth.Snr_db:\n\t40\n\n"
    cfg = write(tmp_path, small("ablate-rank", extra))
    assert main(["ablate-rank", "--config", cfg, "--out", str(tmp_path / "o"), "--runs", "1"]) == 0
    rows = read_csv(tmp_path / "o" / "nrmse.csv")
    assert rows[0] == ["common_rank", "distinct_rank", "mean_nrmse", "std_nrmse", "runs_ok"]
    assert [x[:2] for x in rows[1:]] == [["1", "1"], ["2", "1"]]

FUSE = '''Experiment.Mode:
	fuse

Experiment.Runs:
	1

Cloud.Image_dims:
	8 8 8

Cloud.Common_rank:
	2

Cloud.Distinct_rank:
	1

Cloud.Coverage:
	0 0.1

Cloud.Decimation:
	2

Cloud.Max_iters:
	5

Solver.Restarts:
	1

Solver.Cpd_restarts:
	2

Solver.Max_iters:
	100

*END*
'''

def test_fuse(tmp_path):
    cfg = write(tmp_path, FUSE)
    assert main(["fuse", "--config", cfg, "--out", str(tmp_path / "o")]) == 0
    rows = read_csv(tmp_path / "o" / "nrmse.csv")
    assert rows[0] == ["coverage", "cc", "cp", "method", "mean_nrmse", "std_nrmse", "runs_ok"]
    assert len(rows) == 1 + 2 * 2
    assert float(rows[1][1]) == 0.0
    assert abs(float(rows[3][1]) - 0.1) < 1e-3

def sample_file(tmp_path, capsys, name):
    main(["sample", name])
    return write(tmp_path, capsys.readouterr().out, name + ".cfg")

def run_sample(tmp_path, capsys, name):
    cfg = sample_file(tmp_path, capsys, name)
    assert main([name, "--config", cfg, "--out", str(tmp_path / "o")]) == 0
    return read_csv(tmp_path / "o" / "nrmse.csv")[1:]

def nonincreasing(values):
    return all(b <= a for a, b in zip(values, values[1:]))

@pytest.mark.slow
def test_synth_snr_sample(tmp_path, capsys):
    rows = run_sample(tmp_path, capsys, "synth-snr")
    table = {(float(x[0]), x[1]): float(x[2]) for x in rows}
    assert table[(30.0, "semialg")] > 0.5
    assert 0.05 <= table[(30.0, "als-init2")] <= 0.11
    for method in ("als-init1", "als-init2"):
        assert nonincreasing([table[(snr, method)] for snr in (20.0, 30.0, 40.0, 50.0, 60.0)])

@pytest.mark.slow
def test_ablate_alpha_sample(tmp_path, capsys):
    rows = run_sample(tmp_path, capsys, "ablate-alpha")
    assert [float(x[0]) for x in rows] == [0.0, 0.2, 0.4, 0.6, 0.8, 1.0]
    means = [float(x[1]) for x in rows]
    assert means == sorted(means)

@pytest.mark.slow
def test_ablate_rank_sample(tmp_path, capsys):
    rows = run_sample(tmp_path, capsys, "ablate-rank")
    table = {(int(x[0]), int(x[1])): float(x[2]) for x in rows}
    assert len(table) == 25
    best = min((cell for cell in table if not math.isnan(table[cell])), key=table.get)
    assert best == (5, 5)
    assert table[(3, 3)] <= 1.6 * table[best]

@pytest.mark.slow
def test_fuse_sample(tmp_path, capsys):
    run_sample(tmp_path, capsys, "fuse")
    trials = {}
    for row in read_csv(tmp_path / "o" / "trials.csv")[1:]:
        trials[(float(row[0]), int(row[1]), row[2])] = float(row[3])
    for coverage in (0.02, 0.05, 0.1):
        wins = sum(
            trials[(coverage, run, "personalized")] < trials[(coverage, run, "baseline")]
            for run in range(10)
        )
        assert wins >= 8, coverage
    # no claim at coverage 0, only that both methods ran
    assert (0.0, 9, "baseline") in trials
