"""Exit codes, output schema, and reproducibility of the command line."""

import json
from pathlib import Path

import pytest

from anyoncircle.cli import CSV_HEADER, WorkStealingPool, _job_count, main
from anyoncircle.acceptance import CLAIM_IDS

REDUCED_CFG = """\
[campaign]
output_dir = unused
seed = 20260816

[exchange]
cutoffs = 4
threshold_scale = {scale}

[schwinger]
samples = 2
grid = 4096

[implementer]
cutoff = 4

[recurrence]
cutoff = 4

[rotation]
cutoff = 4
dense_cutoff = 3

[cones]
scan_pairs = 10

[winding]
pairs = 200
"""


def _write_cfg(tmp_path: Path, scale: float) -> Path:
    cfg = tmp_path / "suite.cfg"
    cfg.write_text(REDUCED_CFG.format(scale=scale))
    return cfg


# ------------------------------------------------------------ worker pool


def test_pool_preserves_submission_order():
    tasks = [(lambda k=k: k * k) for k in range(23)]
    assert WorkStealingPool(4).run(tasks) == [k * k for k in range(23)]
    assert WorkStealingPool(1).run(tasks) == [k * k for k in range(23)]


def test_pool_runs_remaining_tasks_after_failure():
    seen = []

    def ok(k):
        seen.append(k)
        return k

    def boom():
        raise RuntimeError("task failed")

    tasks = [lambda: ok(0), boom, lambda: ok(2), lambda: ok(3)]
    with pytest.raises(RuntimeError):
        WorkStealingPool(2).run(tasks)
    assert sorted(seen) == [0, 2, 3]


def test_pool_rejects_zero_jobs():
    with pytest.raises(ValueError):
        WorkStealingPool(0)


def test_job_count_precedence(monkeypatch):
    monkeypatch.setenv("ANYON_JOBS", "3")
    assert _job_count(None) == 3
    assert _job_count(2) == 2
    monkeypatch.setenv("ANYON_JOBS", "not-a-number")
    assert _job_count(None) == 1
    monkeypatch.delenv("ANYON_JOBS")
    assert _job_count(None) == 1


# -------------------------------------------------------- simple probes


def test_schwinger_example_passes(capsys):
    code = main(
        ["schwinger", "--omega", "3.14159", "--eps1", "0.3", "--eps2", "0.3",
         "--grid", "4096"]
    )
    out = capsys.readouterr().out
    assert code == 0
    assert "abs diff" in out


def test_schwinger_rejects_unseparated_geometry(capsys):
    code = main(["schwinger", "--omega", "0.1", "--eps1", "0.3", "--eps2", "0.3"])
    assert code == 2
    assert "invalid input" in capsys.readouterr().err


def test_implementer_check_passes_and_fails_on_tight_tolerance(capsys):
    assert main(["implementer-check"]) == 0
    # the covariance residual is float-level but nonzero, so an impossible
    # tolerance must flip the verdict
    assert main(["implementer-check", "--cov-tol", "1e-18"]) == 1
    assert "FAIL lemma-implementer" in capsys.readouterr().out


def test_commutation_reports_decreasing_errors(capsys):
    code = main(
        ["commutation", "--spin", "0.25", "--omega1", "0.0", "--omega2", "3.1",
         "--eps", "0.3", "--cutoffs", "4,6"]
    )
    out = capsys.readouterr().out
    assert code == 0
    assert "error decrease over windows: ok" in out
    data_lines = [l for l in out.splitlines() if l and not l.startswith(("#", "error"))]
    assert len(data_lines) == 4


def test_aux_commutation_exit_zero():
    code = main(
        ["aux-commutation", "--spin", "0.25", "--omega1", "0.0", "--omega2", "3.1",
         "--eps", "0.3", "--cutoffs", "4,6"]
    )
    assert code == 0


def test_spin_statistics_exit_zero(capsys):
    assert main(["spin-statistics", "--spin", "0.25", "--cutoff", "4"]) == 0
    assert "PASS thm1-recurrence" in capsys.readouterr().out


def test_special_cases_exit_zero(capsys):
    assert main(["special-cases"]) == 0
    out = capsys.readouterr().out
    assert out.count("ok") == 4


def test_hs_norm_emits_data_table(capsys):
    assert main(["hs-norm"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("# M,blip_hs,sawtooth_hs,sawtooth_oracle")


def test_blip_probe(capsys):
    assert main(["blip", "--epsilon", "0.3", "--cutoff", "16"]) == 0
    assert "coefficient tail" in capsys.readouterr().out


# ---------------------------------------------------------------- cones


CONES_CFG = """\
[cone:east]
polygon = 0,0 1,0 0.5,0.9
center = 0.9
half_width = 0.65

[cone:southwest]
polygon = -5.5,-4.4 -4.7,-4.4 -5.1,-3.6
center = 3.9
half_width = 0.7

[pair:separated]
first = east
second = southwest
spin = 0.25
expect = disjoint
"""


def test_cones_config_pass(tmp_path, capsys):
    cfg = tmp_path / "cones.cfg"
    cfg.write_text(CONES_CFG)
    assert main(["cones", "--config", str(cfg)]) == 0
    out = capsys.readouterr().out
    assert "winding -1" in out


def test_cones_wrong_expectation_fails(tmp_path):
    cfg = tmp_path / "cones.cfg"
    cfg.write_text(CONES_CFG.replace("expect = disjoint", "expect = overlap"))
    assert main(["cones", "--config", str(cfg)]) == 1


def test_cones_unknown_reference_exits_two(tmp_path, capsys):
    cfg = tmp_path / "cones.cfg"
    cfg.write_text(CONES_CFG.replace("second = southwest", "second = nowhere"))
    assert main(["cones", "--config", str(cfg)]) == 2
    assert "config error" in capsys.readouterr().err


# --------------------------------------------------------------- report


def test_report_reduced_campaign_reproducible(tmp_path, capsys):
    cfg = _write_cfg(tmp_path, scale=4.0)
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(["report", "--config", str(cfg), "--output-dir", str(out_a),
                 "--stable-timings"]) == 0
    assert main(["report", "--config", str(cfg), "--output-dir", str(out_b),
                 "--stable-timings", "--jobs", "3"]) == 0
    capsys.readouterr()

    names = sorted(p.name for p in out_a.iterdir())
    assert names == sorted([f"{cid}.csv" for cid in CLAIM_IDS] + ["summary.json"])
    for name in names:
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()

    summary = json.loads((out_a / "summary.json").read_text())
    assert summary["all_passed"] is True
    assert [c["claim_id"] for c in summary["claims"]] == list(CLAIM_IDS)
    assert all(c["status"] == "pass" for c in summary["claims"])

    csv_lines = (out_a / "lemma-commutation.csv").read_text().splitlines()
    assert csv_lines[0] == CSV_HEADER
    assert all(line.split(",")[0] == "1" for line in csv_lines[1:])
    assert csv_lines[1:] == sorted(csv_lines[1:])


def test_report_failure_sets_exit_one(tmp_path, capsys):
    # halving the calibrated thresholds makes the single-window schedule
    # land above them, which must be reported, not hidden
    cfg = _write_cfg(tmp_path, scale=0.5)
    out = tmp_path / "fail"
    assert main(["report", "--config", str(cfg), "--output-dir", str(out),
                 "--stable-timings"]) == 1
    capsys.readouterr()
    summary = json.loads((out / "summary.json").read_text())
    assert summary["all_passed"] is False
    by_id = {c["claim_id"]: c for c in summary["claims"]}
    assert by_id["lemma-commutation"]["status"] == "fail"
    assert by_id["winding-algebra"]["status"] == "pass"


def test_report_rejects_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "suite.cfg"
    cfg.write_text("[campaign]\nseeed = 1\n")
    assert main(["report", "--config", str(cfg)]) == 2
    assert "unknown key" in capsys.readouterr().err


def test_report_rejects_missing_file(tmp_path, capsys):
    assert main(["report", "--config", str(tmp_path / "absent.cfg")]) == 2
    assert "config error" in capsys.readouterr().err
