import json
from math import inf

import pytest

from upperplex.asymptotics import asymptotic_profile
from upperplex.errors import LawViolation
from upperplex.harness import (
    ExperimentConfig,
    aggregate_and_compare,
    csv_columns,
    emit,
    law_violations,
    read_csv,
    record_row,
    run_experiment,
    run_trial,
)


def small_config(**kw):
    base = dict(n=14, r=2, alpha=(inf, 0.8, 1.4), trials=6, master_seed=5)
    base.update(kw)
    return ExperimentConfig(**base)


def test_csv_columns_match_layout():
    assert csv_columns(2, 1) == [
        "trial", "seed", "n", "r", "alpha", "g_0", "g_1", "g_2", "f_0", "f_1", "f_2",
        "ghat_1", "ghat_2", "gprime", "fprime_0", "fprime_1", "fprime_2", "B_1", "B_2",
        "b_0", "b_1", "b_2", "full_skeleton_up_to", "phase_ms_sample",
        "phase_ms_collapse", "phase_ms_homology"]


def test_csv_round_trip(tmp_path):
    records, _ = run_experiment(small_config(trials=3))
    path = tmp_path / "out.csv"
    emit(records, "csv", path)
    lines = path.read_text().splitlines()
    assert len(lines) == 4
    back = read_csv(path)
    assert back == [{k: v for k, v in record_row(rec).items()} for rec in records]


def test_jsonl_matches_csv(tmp_path):
    records, _ = run_experiment(small_config(trials=3))
    emit(records, "csv", tmp_path / "a.csv")
    emit(records, "jsonl", tmp_path / "a.jsonl")
    rows = [json.loads(line) for line in (tmp_path / "a.jsonl").read_text().splitlines()]
    for c, j in zip(read_csv(tmp_path / "a.csv"), rows):
        assert {k: j[k] for k in c} == c


def test_empty_record_list_writes_header_only(tmp_path):
    path = tmp_path / "e.csv"
    emit([], "csv", path, r=2, ell=1)
    assert path.read_text() == ",".join(csv_columns(2, 1)) + "\n"
    emit([], "jsonl", tmp_path / "e.jsonl")
    assert (tmp_path / "e.jsonl").read_text() == ""


def test_emit_reports_path_on_io_error(tmp_path):
    records, _ = run_experiment(small_config(trials=1))
    with pytest.raises(OSError, match="missing"):
        emit(records, "csv", tmp_path / "missing" / "x.csv")


def test_trial_is_deterministic():
    cfg = small_config(trials=1)
    assert run_trial(cfg, 0) == run_trial(cfg, 0)


def test_thread_count_does_not_change_output(tmp_path):
    outs = []
    for threads in (1, 2, 3):
        records, summary = run_experiment(small_config(threads=threads, trials=8))
        path = tmp_path / f"t{threads}.csv"
        emit(records, "csv", path)
        outs.append((path.read_bytes(), json.dumps(summary, sort_keys=True, default=str)))
    assert outs[0] == outs[1] == outs[2]


def test_records_satisfy_laws_and_verify_collapse():
    records, summary = run_experiment(small_config(verify=True, trials=20))
    for rec in records:
        assert law_violations(rec) == []
        assert rec.collapse_homology_equal is True
    assert summary["trials"] == 20 and summary["capped"] == 0
    assert 0 <= summary["frac_full_skeleton"] <= 1


def test_law_violation_is_detected():
    rec = run_trial(small_config(trials=1), 0)
    rec.f = tuple(x + 10_000 for x in rec.f)
    assert law_violations(rec)
    profile = asymptotic_profile(small_config().params)
    with pytest.raises(LawViolation):
        aggregate_and_compare([rec], profile, 14)


def test_resource_cap_is_recorded_not_fatal():
    records, summary = run_experiment(small_config(trials=2, max_simplices=5))
    assert all(rec.capped and rec.error for rec in records)
    assert summary["capped"] == 2
    records, _ = run_experiment(small_config(trials=2, nnz_cap=1))
    assert all(rec.capped for rec in records)


def test_summary_statistics():
    records, summary = run_experiment(small_config(trials=10))
    g2 = [rec.g[2] for rec in records]
    assert summary["quantities"]["g_2"]["sum"] == sum(g2)
    assert summary["quantities"]["g_2"]["mean"] == pytest.approx(sum(g2) / 10)
    assert set(summary["ratio_to_prediction"]) >= {"g_1", "g_2", "f_1", "b_1", "gprime"}


def test_empty_regime_check():
    cfg = ExperimentConfig(n=100, r=0, alpha=(2.0,), trials=50, master_seed=1)
    records, summary = run_experiment(cfg)
    checks = aggregate_and_compare(records, asymptotic_profile(cfg.params), 100)
    assert [c.name for c in checks] == ["X empty"]
    assert checks[0].passed and summary["frac_x_empty"] >= 0.9


def test_lm_measurement():
    cfg = small_config(n=16, alpha=(inf, inf, 1.2), measurements=("homology", "collapse", "lm"),
                       trials=5)
    records, summary = run_experiment(cfg)
    for rec in records:
        assert rec.lm_hat_vanishes is not None
        # the union never has more (ell-1)-homology than the modified complex
        assert rec.lm_union_vanishes or not rec.lm_hat_vanishes
    assert "frac_lm_hat_vanishes" in summary


def test_timings_only_when_requested():
    quiet = run_trial(small_config(), 0)
    assert (quiet.phase_ms_sample, quiet.phase_ms_collapse, quiet.phase_ms_homology) == (0, 0, 0)
    loud = run_trial(small_config(timings=True, n=40), 0)
    assert loud.phase_ms_sample >= 0


def test_config_from_dict():
    cfg = ExperimentConfig.from_dict({"n": 10, "r": 1, "alpha": "inf,0.5", "trials": 2})
    assert cfg.alpha == (inf, 0.5)
    cfg = ExperimentConfig.from_dict({"n": 10, "r": 1, "alpha": ["inf", 0.5]})
    assert cfg.alpha == (inf, 0.5)
    with pytest.raises(ValueError):
        ExperimentConfig.from_dict({"n": 10, "r": 1, "alpha": [1, 1], "bogus": 1})
    with pytest.raises(ValueError):
        ExperimentConfig(n=10, r=1, alpha=(1, 1), trials=0)
    with pytest.raises(ValueError):
        ExperimentConfig(n=10, r=1, alpha=(1, 1), measurements=("plots",))
