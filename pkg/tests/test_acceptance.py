"""Acceptance gate: every quantitative claim at its stated tolerance.

Each criterion is one test that prints a single `criterion NN <name>:
PASS|FAIL (<detail>)` line (surfaced by the -rP addopt) before asserting it.
Criteria 1-4 and 6 share one 20-trial experiment at n = 10^5; the remaining
criteria drive their own fixtures.  Everything is seeded, so reruns are
bit-for-bit repeatable.
"""

import math
import time

import numpy as np
import pytest
import scipy.stats as sps

from vacantwalk import cli, io, theory
from vacantwalk._kernels import derive_seed
from vacantwalk.experiments import (
    ExperimentConfig,
    cover_time_trials,
    critical_window_scan,
    early_connectivity_check,
    resampling_crossvalidation,
    pairing_uniformity_test,
    run_experiment,
)
from vacantwalk.graphs import RegularParams, generate_regular
from vacantwalk.walk import (
    burn_in_steps,
    choose_nice_vertices,
    estimate_returns,
    unvisit_probability,
)

SEED = 20260814
R = 3
N_LARGE = 100_000
N_MEDIUM = 20_000
TSTAR = theory.critical_time(R)
LOG_SQ = math.log(N_LARGE) ** 2
THETA_STAR = 1.0 - (math.sqrt(2.0) - 1.0) ** 3  # giant fraction at 0.5 t*


def _verdict(num: int, name: str, ok: bool, detail: str) -> None:
    line = f"criterion {num:02d} {name}: {'PASS' if ok else 'FAIL'} ({detail})"
    print(line)
    assert ok, line


# ---------------------------------------------------------------------------
# shared runs


@pytest.fixture(scope="module")
def regular_run():
    """20 trials at n=1e5 with snapshots at {0.25,0.5,0.75,1.0,1.3} t* n."""
    times = tuple(round(m * TSTAR * N_LARGE) for m in (0.25, 0.5, 0.75, 1.0, 1.3))
    cfg = ExperimentConfig(
        model="regular", n=N_LARGE, r=R, times=times, trials=20, seed=SEED
    )
    t0 = time.perf_counter()
    _, records = run_experiment(cfg)
    elapsed = time.perf_counter() - t0
    return cfg, records, elapsed


def _snap_mean(records, snap_i, key):
    return float(np.mean([rec.snapshots[snap_i][key] for rec in records]))


def test_criterion_01_vacant_size(regular_run):
    cfg, records, elapsed = regular_run
    worst = 0.0
    for i in range(3):  # the 0.25, 0.5, 0.75 multiples
        mean = _snap_mean(records, i, "vacant_count")
        pred = theory.expected_vacant_count(N_LARGE, R, cfg.times[i])
        worst = max(worst, abs(mean / pred - 1.0))
    ok = worst <= 0.01 and elapsed <= 120.0
    _verdict(1, "vacant-set size", ok, f"worst rel err {worst:.4f}, runtime {elapsed:.0f}s")


def test_criterion_02_degree_profile(regular_run):
    cfg, records, _ = regular_run
    snap_i = 3  # t = t* n, where the survival probability is exactly 1/2
    worst = 0.0
    for s in range(R + 1):
        mean = float(
            np.mean(
                [
                    rec.snapshots[snap_i]["degree_hist"][s]
                    / rec.snapshots[snap_i]["vacant_count"]
                    for rec in records
                ]
            )
        )
        target = math.comb(R, s) / 2.0**R
        worst = max(worst, abs(mean - target))
    ok = worst <= 0.02
    _verdict(2, "critical degree profile", ok, f"worst abs err {worst:.4f}")


def test_criterion_03_giant_component(regular_run):
    cfg, records, _ = regular_run
    snap_i = 1  # t = 0.5 t* n
    ratio = _snap_mean(records, snap_i, "largest") / theory.expected_vacant_count(
        N_LARGE, R, cfg.times[snap_i]
    )
    rel = ratio / THETA_STAR - 1.0
    small_second = sum(
        rec.snapshots[snap_i]["second_largest"] <= LOG_SQ for rec in records
    )
    ok = abs(rel) <= 0.02 and small_second >= 19
    _verdict(
        3,
        "supercritical giant",
        ok,
        f"rel err {rel:+.4f}, second<=log^2 in {small_second}/20",
    )


def test_criterion_04_subcritical_shattering(regular_run):
    cfg, records, _ = regular_run
    snap_i = 4  # t = 1.3 t* n
    small = sum(rec.snapshots[snap_i]["largest"] <= LOG_SQ for rec in records)
    biggest = max(rec.snapshots[snap_i]["largest"] for rec in records)
    ok = small >= 19
    _verdict(
        4,
        "subcritical shattering",
        ok,
        f"largest<=log^2 in {small}/20 (max {biggest}, bound {LOG_SQ:.0f})",
    )


@pytest.fixture(scope="module")
def scan_run():
    t0 = time.perf_counter()
    scan = critical_window_scan(
        R, [2**13, 2**14, 2**15, 2**16, 2**17], trials=30, seed=SEED + 1
    )
    return scan, time.perf_counter() - t0


def test_criterion_05_critical_window(scan_run):
    scan, elapsed = scan_run
    crit = scan.slopes["critical"][0]
    sup = scan.slopes["super"][0]
    sub = scan.slopes["sub"][0]
    ok = (
        0.55 <= crit <= 0.75
        and 0.95 <= sup <= 1.05
        and sub <= 0.2
        and elapsed <= 900.0
    )
    _verdict(
        5,
        "critical-window scaling",
        ok,
        f"slopes critical {crit:.3f}, super {sup:.3f}, sub {sub:.3f}, runtime {elapsed:.0f}s",
    )


def test_criterion_06_tree_counts(regular_run):
    cfg, records, _ = regular_run
    snap_i = 1  # t = 0.5 t* n
    t = cfg.times[snap_i]
    worst = 0.0
    for k in (1, 2, 3):
        mean = float(np.mean([rec.snapshots[snap_i]["tree_counts"][k - 1] for rec in records]))
        pred = theory.expected_tree_count(N_LARGE, R, k, t)
        worst = max(worst, abs(mean / pred - 1.0))
    enumerated = theory.count_subtrees_by_enumeration(3, 4)
    oracle_ok = enumerated[:3] == [1, 3, 9]
    k4_ok = enumerated[3] == 28 and theory.root_subtree_count(3, 4) == 28
    ok = worst <= 0.05 and oracle_ok and k4_ok
    _verdict(
        6,
        "small tree counts",
        ok,
        f"worst rel err {worst:.4f}, enumeration {enumerated}",
    )


@pytest.fixture(scope="module")
def first_visit_run():
    graph = generate_regular(RegularParams(N_MEDIUM, R), seed=derive_seed(SEED, 100))
    verts = choose_nice_vertices(graph, 10, eps1=0.45, seed=derive_seed(SEED, 101))
    horizon = burn_in_steps(N_MEDIUM, "regular")
    returns = [
        estimate_returns(graph, int(v), horizon, trials=120_000, seed=derive_seed(SEED, 110 + i))
        for i, v in enumerate(verts)
    ]
    probes = [N_MEDIUM // 2, N_MEDIUM, 2 * N_MEDIUM, 3 * N_MEDIUM]
    unv = unvisit_probability(
        graph, verts, horizon, probes, trials=100_000, seed=derive_seed(SEED, 130)
    )
    return horizon, returns, unv


def test_criterion_07_first_visit_law(first_visit_run):
    horizon, returns, unv = first_visit_run
    rhat = np.array([est.mean for est in returns])
    band_ok = bool(((rhat >= 1.95) & (rhat <= 2.05)).all())

    # stationary mass of a degree-3 vertex is 1/n; the effective geometric
    # rate divides it by the measured return count
    p_v = (1.0 / N_MEDIUM) / rhat
    probes = unv.probe_times.astype(np.float64)
    pred = (1.0 + p_v[:, None]) ** (-(probes[None, :] - horizon))
    pooled_emp = unv.probs.mean(axis=0)
    pooled_pred = pred.mean(axis=0)
    rels = pooled_emp[1:] / pooled_pred[1:] - 1.0  # probes n, 2n, 3n
    prob_ok = bool(np.max(np.abs(rels)) <= 0.03)

    fit = sps.linregress(probes, np.log(pooled_emp))
    slope_target = -math.log1p(float(p_v.mean()))
    slope_rel = fit.slope / slope_target - 1.0
    slope_ok = abs(slope_rel) <= 0.05

    ok = band_ok and prob_ok and slope_ok
    _verdict(
        7,
        "first-visit law",
        ok,
        f"R in [{rhat.min():.3f},{rhat.max():.3f}], prob rel "
        f"{', '.join(f'{x:+.3f}' for x in rels)}, slope rel {slope_rel:+.4f}",
    )


def test_criterion_08_pairing_uniformity():
    res = pairing_uniformity_test(runs=150_000, seed=SEED + 2)
    ok = res.passed
    _verdict(
        8,
        "coupled-pairing uniformity",
        ok,
        f"chi2 {res.chisq:.1f} over {len(res.counts)} pairings, p {res.pvalue:.4f}",
    )


def test_criterion_09_conditional_uniformity():
    res = resampling_crossvalidation(
        R, N_MEDIUM, t=round(0.5 * TSTAR * N_MEDIUM), trials=50, seed=SEED + 3
    )
    z = res.z["giant_fraction"]
    ok = abs(z) <= 3.0
    extras = ", ".join(f"{k} {v:+.2f}" for k, v in sorted(res.z.items()))
    _verdict(9, "resampling cross-validation", ok, f"z scores: {extras}")


@pytest.fixture(scope="module")
def gnp_run():
    cfg = ExperimentConfig(
        model="gnp", n=N_LARGE, c=4.0, thetas=(-0.3, 0.3), trials=20, seed=SEED + 4
    )
    _, records = run_experiment(cfg)
    return cfg, records


def test_criterion_10_gnp_phases(gnp_run):
    cfg, records = gnp_run
    sub = theory.gnp_schedule(N_LARGE, cfg.p, -0.3)  # giant regime
    sup = theory.gnp_schedule(N_LARGE, cfg.p, 0.3)  # shattered regime

    vac_rel = _snap_mean(records, 0, "vacant_count") / sub.vacant_pred - 1.0
    beta = theory.er_giant_fraction(sub.lam)
    frac = float(
        np.mean(
            [rec.snapshots[0]["largest"] / rec.snapshots[0]["vacant_count"] for rec in records]
        )
    )
    frac_rel = frac / beta - 1.0
    small = sum(rec.snapshots[1]["largest"] <= LOG_SQ for rec in records)
    ok = abs(vac_rel) <= 0.05 and abs(frac_rel) <= 0.05 and small >= 19
    _verdict(
        10,
        "undirected dense phases",
        ok,
        f"vacant rel {vac_rel:+.4f}, giant rel {frac_rel:+.4f}, "
        f"small in {small}/20 (t={int(round(sub.t))},{int(round(sup.t))})",
    )


@pytest.fixture(scope="module")
def dnp_run():
    cfg = ExperimentConfig(
        model="dnp", n=N_LARGE, c=4.0, thetas=(-0.3, 0.3), trials=20, seed=SEED + 5
    )
    _, records = run_experiment(cfg)
    return cfg, records


def test_criterion_11_directed_phases(dnp_run):
    cfg, records = dnp_run
    sub = theory.gnp_schedule(N_LARGE, cfg.p, -0.3)
    beta = theory.er_giant_fraction(sub.lam)
    scc_frac = float(
        np.mean(
            [
                rec.snapshots[0]["largest_scc"] / rec.snapshots[0]["vacant_count"]
                for rec in records
            ]
        )
    )
    floor = 0.8 * beta * beta
    scc_ok = scc_frac >= floor

    small = sum(rec.snapshots[1]["largest_scc"] <= LOG_SQ for rec in records)
    shatter_ok = small >= 19

    # the projected vacant set lives on an underlying graph of density
    # q = 1-(1-p)^2, so its giant matches the undirected fixed point there
    q = 1.0 - (1.0 - cfg.p) ** 2
    beta_u = theory.er_giant_fraction(sub.vacant_pred * q)
    u_frac = float(
        np.mean(
            [
                rec.snapshots[0]["underlying_largest"] / rec.snapshots[0]["vacant_count"]
                for rec in records
            ]
        )
    )
    u_rel = u_frac / beta_u - 1.0
    under_ok = abs(u_rel) <= 0.05

    ok = scc_ok and shatter_ok and under_ok
    _verdict(
        11,
        "directed phases",
        ok,
        f"scc frac {scc_frac:.3f} (floor {floor:.3f}), small in {small}/20, "
        f"underlying rel {u_rel:+.4f}",
    )


def test_criterion_12_cover_time():
    rep = cover_time_trials(n=10_000, r=R, trials=10, seed=SEED + 6)
    ok = 0.9 <= rep.mean_ratio <= 1.1
    _verdict(12, "cover-time ratio", ok, f"mean ratio {rep.mean_ratio:.4f}")


def test_criterion_13_early_connectivity():
    rate, flags = early_connectivity_check(R, 10_000, trials=20, seed=SEED + 7)
    ok = rate >= 0.9
    _verdict(13, "early vacant connectivity", ok, f"connected in {sum(flags)}/20")


DETERMINISM_CONFIG = """\
model.type = regular
model.n = 20000
model.r = 3
walk.times = 0.25*tstar, 0.5*tstar, 1.3*tstar
run.trials = 4
run.seed = 424242
"""


def test_criterion_14_determinism(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("VWL_THREADS", raising=False)
    cfgp = tmp_path / "run.ini"
    cfgp.write_text(DETERMINISM_CONFIG)
    outs = {}
    for workers in (1, 4):
        out = tmp_path / f"w{workers}"
        code = cli.main(
            ["simulate", "--config", str(cfgp), "--out", str(out), "--workers", str(workers)]
        )
        assert code == 0
        outs[workers] = (
            (out / "report.csv").read_bytes(),
            (out / "trials.jsonl").read_bytes(),
        )
    capsys.readouterr()
    ok = outs[1] == outs[4]
    _verdict(14, "worker-count determinism", ok, "report.csv and trials.jsonl byte-identical")
