"""Experiment orchestration tests on deliberately tiny instances.

These runs are far below the sizes where the asymptotic predictions hold, so
assertions target structure, determinism, and bookkeeping rather than the
pass flags of individual report rows.
"""

import math

import numpy as np
import pytest

from vacantwalk import theory
from vacantwalk.experiments import (
    ExperimentConfig,
    _all_matchings,
    aggregate,
    cover_time_trials,
    critical_window_scan,
    early_connectivity_check,
    resampling_crossvalidation,
    pairing_uniformity_test,
    resolve_workers,
    run_experiment,
)


def _regular_config(**kw):
    base = dict(model="regular", n=400, r=3, times=(100, 400, 1200), trials=3, seed=42)
    base.update(kw)
    return ExperimentConfig(**base)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(model="lattice", n=100, times=(1,))
    with pytest.raises(ValueError):
        _regular_config(times=())
    with pytest.raises(ValueError):
        _regular_config(times=(5, 5))
    with pytest.raises(ValueError):
        _regular_config(trials=0)
    with pytest.raises(ValueError):
        _regular_config(kmax_tree=9, k_cap=5)
    with pytest.raises(ValueError):
        ExperimentConfig(model="gnp", n=100, c=4.0, thetas=())
    with pytest.raises(ValueError):
        ExperimentConfig(model="gnp", n=100, c=0.5, thetas=(-0.3,))
    cfg = ExperimentConfig(model="gnp", n=1000, c=4.0, thetas=(-0.3, 0.3))
    assert cfg.p == pytest.approx(4.0 * math.log(1000) / 1000)


def test_resolve_workers_env_override(monkeypatch):
    monkeypatch.delenv("VWL_THREADS", raising=False)
    assert resolve_workers(3) == 3
    monkeypatch.setenv("VWL_THREADS", "7")
    assert resolve_workers(3) == 7
    monkeypatch.setenv("VWL_THREADS", "0")
    with pytest.raises(ValueError):
        resolve_workers(3)
    monkeypatch.setenv("VWL_THREADS", "two")
    with pytest.raises(ValueError):
        resolve_workers(3)


def test_regular_trials_structure_and_determinism():
    cfg = _regular_config()
    _, trials = run_experiment(cfg)
    assert len(trials) == cfg.trials
    assert [t.index for t in trials] == [0, 1, 2]
    assert len({t.seed for t in trials}) == len(trials)
    for rec in trials:
        assert [s["t"] for s in rec.snapshots] == list(cfg.times)
        vac = [s["vacant_count"] for s in rec.snapshots]
        assert all(a >= b for a, b in zip(vac, vac[1:]))
        for s in rec.snapshots:
            assert set(s) >= {
                "t",
                "vacant_count",
                "untraversed_edges",
                "num_components",
                "largest",
                "second_largest",
                "tree_counts",
                "degree_hist",
            }
            assert len(s["tree_counts"]) == cfg.kmax_tree
            assert len(s["degree_hist"]) == cfg.r + 1

    _, again = run_experiment(cfg)
    assert [t.snapshots for t in again] == [t.snapshots for t in trials]
    _, threaded = run_experiment(ExperimentConfig(**{**cfg.__dict__, "workers": 3}))
    assert [t.snapshots for t in threaded] == [t.snapshots for t in trials]


def test_regular_report_rows():
    cfg = _regular_config()
    report, records = run_experiment(cfg)
    assert aggregate(cfg, records).rows == report.rows
    assert report.model == "regular" and report.n == cfg.n and report.trials == 3
    for t in cfg.times:
        row = report.row(t, "vacant_count")
        assert row.theory == pytest.approx(theory.expected_vacant_count(cfg.n, cfg.r, t))
        if row.empirical_stderr > 0:
            assert row.z == pytest.approx(
                (row.empirical_mean - row.theory) / row.empirical_stderr
            )
        for s in range(cfg.r + 1):
            frac = report.row(t, f"degree_frac_{s}")
            assert 0.0 <= frac.empirical_mean <= 1.0
        for k in (1, 2, 3):
            assert report.row(t, f"tree_count_{k}") is not None
        assert report.row(t, "largest_component") is not None
    stats = {r.stat for r in report.rows}
    assert "second_largest_le_log_sq" in stats or "largest_le_log_sq" in stats


def test_gnp_report_rows():
    cfg = ExperimentConfig(
        model="gnp", n=3000, c=4.0, thetas=(-0.3, 0.3), trials=2, seed=7
    )
    report, records = run_experiment(cfg)
    assert aggregate(cfg, records).rows == report.rows
    sched = theory.gnp_schedule(cfg.n, cfg.p, -0.3)
    row = report.row(int(round(sched.t)), "vacant_count")
    assert row.theory == pytest.approx(sched.vacant_pred)
    assert report.row(int(round(sched.t)), "giant_fraction").theory == pytest.approx(
        theory.er_giant_fraction(sched.lam)
    )
    sup = theory.gnp_schedule(cfg.n, cfg.p, 0.3)
    rate_row = report.row(int(round(sup.t)), "largest_le_log_sq")
    assert rate_row.theory == 0.95 and math.isnan(rate_row.z)


def test_dnp_report_rows():
    cfg = ExperimentConfig(
        model="dnp", n=3000, c=4.0, thetas=(-0.3, 0.3), trials=2, seed=11
    )
    report, _ = run_experiment(cfg)
    sched = theory.gnp_schedule(cfg.n, cfg.p, -0.3)
    assert report.row(int(round(sched.t)), "vacant_count") is not None
    scc = report.row(int(round(sched.t)), "scc_fraction")
    beta = theory.er_giant_fraction(sched.lam)
    assert scc.theory == pytest.approx(beta * beta)
    assert scc.passed == (scc.empirical_mean >= 0.8 * beta * beta)
    assert report.row(int(round(sched.t)), "underlying_giant_fraction") is not None
    sup = theory.gnp_schedule(cfg.n, cfg.p, 0.3)
    assert report.row(int(round(sup.t)), "scc_le_log_sq") is not None


def test_scan_validation_and_tiny_run():
    with pytest.raises(ValueError):
        critical_window_scan(3, [256, 512, 1024], trials=2, seed=0)
    with pytest.raises(ValueError):
        critical_window_scan(3, [256, 512, 1024, 2048], trials=2, seed=0)
    ns = [128, 256, 512, 1024, 2048]
    scan = critical_window_scan(3, ns, trials=2, seed=3)
    assert set(scan.slopes) == {"super", "critical", "sub"}
    assert scan.n_values == tuple(ns)
    for label, (slope, stderr) in scan.slopes.items():
        assert math.isfinite(slope) and math.isfinite(stderr)
        assert len(scan.mean_max[label]) == len(ns)
        assert (scan.mean_max[label] > 0).all()
    # the supercritical largest component dwarfs the subcritical one
    assert scan.mean_max["super"][-1] > scan.mean_max["sub"][-1]


def test_early_connectivity_tiny():
    rate, flags = early_connectivity_check(3, 512, trials=6, seed=9)
    assert 0.0 <= rate <= 1.0
    assert len(flags) == 6
    assert rate == sum(flags) / 6


def test_crossvalidation_zscores_finite():
    res = resampling_crossvalidation(3, 600, t=400, trials=8, seed=13)
    assert res.trials == 8
    assert set(res.z) == {"giant_fraction", "tree_count_1", "tree_count_2", "tree_count_3"}
    for stat, z in res.z.items():
        assert math.isfinite(z), stat
    assert res.passed == all(abs(z) <= 3.0 for z in res.z.values())


def test_all_matchings_of_six_points():
    ms = _all_matchings(tuple(range(6)))
    assert len(ms) == 15
    assert len(set(ms)) == 15
    for m in ms:
        flat = [x for pair in m for x in pair]
        assert sorted(flat) == list(range(6))


def test_pairing_uniformity_counts():
    res = pairing_uniformity_test(runs=600, seed=17)
    assert res.counts.sum() == 600
    assert len(res.counts) == 15
    assert 0.0 <= res.pvalue <= 1.0
    assert res.passed == (res.pvalue > res.significance)


def test_cover_time_trials_tiny():
    rep = cover_time_trials(n=200, r=3, trials=4, seed=19)
    assert len(rep.cover_times) == 4
    assert (np.asarray(rep.cover_times) >= 200).all()
    # rough sanity band: tiny n sits within a factor 2 of the asymptote
    assert 0.5 <= rep.mean_ratio <= 2.0
