"""Seeded multi-trial experiment drivers.

Each driver generates fresh graphs, runs walks to a snapshot schedule,
reduces every snapshot to plain statistics, and folds the trials into an
aggregate table that pairs each empirical mean with its closed-form
prediction, a relative error, a z-score, and a machine-checkable pass flag.

Determinism contract: every trial derives its own seeds from
(base seed, trial index) alone, and aggregation is a fold in trial-index
order, so reports are byte-identical for any worker count.  Workers run in
threads; the walk kernels release the GIL.  The VWL_THREADS environment
variable overrides the configured worker count.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sps

from . import theory
from ._kernels import derive_seed
from .components import KIND_TREE, decompose_vacant, decompose_vacant_strong, snapshot_statistics
from .graphs import (
    DnpParams,
    GnpParams,
    RegularParams,
    generate_dnp,
    generate_gnp,
    generate_regular,
    sample_configuration,
    underlying_graph,
)
from .pairing import PairingState, finalize_pairing
from .walk import cover_time, run_with_snapshots

__all__ = [
    "ExperimentConfig",
    "TrialRecord",
    "ReportRow",
    "AggregateReport",
    "resolve_workers",
    "run_regular_experiment",
    "run_gnp_experiment",
    "run_dnp_experiment",
    "ScanReport",
    "critical_window_scan",
    "early_connectivity_check",
    "CrossValidation",
    "resampling_crossvalidation",
    "PairingUniformity",
    "pairing_uniformity_test",
    "CoverTimeReport",
    "cover_time_trials",
    "VACANT_TOL_REGULAR",
    "PROFILE_ABS_TOL",
    "GIANT_TOL",
    "TREE_TOL",
    "VACANT_TOL_GNP",
    "GIANT_TOL_GNP",
    "WHP_FLOOR",
    "SCC_FLOOR_FACTOR",
]

VACANT_TOL_REGULAR = 0.01
PROFILE_ABS_TOL = 0.02
GIANT_TOL = 0.02
TREE_TOL = 0.05
VACANT_TOL_GNP = 0.05
GIANT_TOL_GNP = 0.05
WHP_FLOOR = 0.95
SCC_FLOOR_FACTOR = 0.8


def resolve_workers(requested: int) -> int:
    """Worker count after the VWL_THREADS environment override."""
    env = os.environ.get("VWL_THREADS", "").strip()
    if env:
        value = int(env)
        if value < 1:
            raise ValueError("VWL_THREADS must be >= 1")
        return value
    if requested < 1:
        raise ValueError("worker count must be >= 1")
    return requested


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: a graph model, a snapshot schedule, and trial plumbing.

    `times` are absolute step counts for the regular model.  For gnp/dnp the
    schedule is given as `thetas`; each theta resolves to its scheduled time
    (larger theta means a later snapshot).  `k_walkers` round-robins that
    many walkers and `times` then count total steps across all of them.
    """

    model: str
    n: int
    r: int = 3
    c: float = 0.0
    times: tuple[int, ...] = ()
    thetas: tuple[float, ...] = ()
    trials: int = 1
    seed: int = 0
    workers: int = 1
    k_cap: int = 50
    kmax_tree: int = 3
    profile: bool = True
    k_walkers: int = 1
    start: int | None = None

    def __post_init__(self):
        if self.model not in ("regular", "gnp", "dnp"):
            raise ValueError(f"unknown model {self.model!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.k_walkers < 1:
            raise ValueError("k_walkers must be >= 1")
        if not 1 <= self.kmax_tree <= self.k_cap:
            raise ValueError("need 1 <= kmax_tree <= k_cap")
        if self.model == "regular":
            if not self.times:
                raise ValueError("regular model needs explicit times")
            if any(t < 0 for t in self.times) or list(self.times) != sorted(set(self.times)):
                raise ValueError("times must be strictly increasing and >= 0")
        else:
            if not self.thetas:
                raise ValueError(f"{self.model} model needs thetas")
            if list(self.thetas) != sorted(set(self.thetas)):
                raise ValueError("thetas must be strictly increasing")
            if self.c <= 1.0:
                raise ValueError("need c > 1 (edge density c*log(n)/n above connectivity)")

    @property
    def p(self) -> float:
        return self.c * math.log(self.n) / self.n


@dataclass
class TrialRecord:
    """Per-trial result: derived seed, one statistics dict per snapshot."""

    index: int
    seed: int
    snapshots: list[dict]
    wall_time: float = 0.0


@dataclass(frozen=True)
class ReportRow:
    t: int
    stat: str
    empirical_mean: float
    empirical_stderr: float
    theory: float
    rel_err: float
    z: float
    passed: bool


@dataclass
class AggregateReport:
    """Aggregate over all trials: one row per (snapshot time, statistic)."""

    model: str
    n: int
    trials: int
    rows: list[ReportRow] = field(default_factory=list)

    def row(self, t: int, stat: str) -> ReportRow:
        for row in self.rows:
            if row.t == t and row.stat == stat:
                return row
        raise KeyError(f"no row for t={t} stat={stat!r}")

    @property
    def all_passed(self) -> bool:
        return all(row.passed for row in self.rows)


def _trial_seeds(base: int, index: int) -> tuple[int, int, int]:
    # graph, walk, and start-draw streams; disjoint for every trial index
    return (
        derive_seed(base, 3 * index),
        derive_seed(base, 3 * index + 1),
        derive_seed(base, 3 * index + 2),
    )


def _draw_start(n: int, fixed: int | None, seed: int) -> int:
    if fixed is not None:
        return fixed
    return int(np.random.default_rng(seed).integers(n))


def _run_pool(thunks, workers: int) -> list:
    """Run thunks, return results in submission order regardless of scheduling."""
    if workers == 1:
        return [f() for f in thunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(f) for f in thunks]
        return [f.result() for f in futures]


def _mean_stderr(values: np.ndarray) -> tuple[float, float]:
    mean = float(np.mean(values))
    if len(values) < 2:
        return mean, 0.0
    return mean, float(np.std(values, ddof=1) / math.sqrt(len(values)))


def _rel_row(t, stat, values, theory_value, tol) -> ReportRow:
    mean, se = _mean_stderr(np.asarray(values, dtype=np.float64))
    rel = (mean - theory_value) / theory_value if theory_value != 0 else math.nan
    z = (mean - theory_value) / se if se > 0 else math.nan
    return ReportRow(int(t), stat, mean, se, theory_value, rel, z, abs(rel) <= tol)


def _abs_row(t, stat, values, theory_value, tol) -> ReportRow:
    mean, se = _mean_stderr(np.asarray(values, dtype=np.float64))
    rel = (mean - theory_value) / theory_value if theory_value != 0 else math.nan
    z = (mean - theory_value) / se if se > 0 else math.nan
    return ReportRow(int(t), stat, mean, se, theory_value, rel, z, abs(mean - theory_value) <= tol)


def _rate_row(t, stat, indicators, floor) -> ReportRow:
    # empirical_mean is the trial pass rate; the row passes when it clears
    # the whp floor, and z is left out (the rate is the statistic itself)
    arr = np.asarray(indicators, dtype=np.float64)
    rate, se = _mean_stderr(arr)
    return ReportRow(int(t), stat, rate, se, floor, rate - floor, math.nan, rate >= floor)


def _floor_row(t, stat, values, theory_value, floor) -> ReportRow:
    mean, se = _mean_stderr(np.asarray(values, dtype=np.float64))
    rel = (mean - theory_value) / theory_value if theory_value != 0 else math.nan
    z = (mean - theory_value) / se if se > 0 else math.nan
    return ReportRow(int(t), stat, mean, se, theory_value, rel, z, mean >= floor)


def _log_sq_bound(n: int) -> float:
    return math.log(n) ** 2


# --------------------------------------------------------------------------
# regular model


def _regular_trial(cfg: ExperimentConfig, index: int) -> TrialRecord:
    gseed, wseed, sseed = _trial_seeds(cfg.seed, index)
    t0 = time.perf_counter()
    graph = generate_regular(RegularParams(cfg.n, cfg.r), seed=gseed)
    start = _draw_start(cfg.n, cfg.start, sseed)
    run = run_with_snapshots(graph, start, list(cfg.times), wseed, k_walkers=cfg.k_walkers)
    snaps = []
    for i, t in enumerate(cfg.times):
        snap = snapshot_statistics(
            graph,
            ~run.vacant_mask(i),
            t,
            k_cap=cfg.k_cap,
            untraversed_edges=int(run.untraversed_edges[i]),
        )
        entry = {
            "t": int(t),
            "vacant_count": snap.vacant_count,
            "untraversed_edges": snap.untraversed_edges,
            "num_components": snap.num_components,
            "largest": snap.largest,
            "second_largest": snap.second_largest,
            "tree_counts": [snap.tree_count(k) for k in range(1, cfg.kmax_tree + 1)],
        }
        if cfg.profile:
            hist = snap.degree_hist
            entry["degree_hist"] = [int(hist[s]) if s < len(hist) else 0 for s in range(cfg.r + 1)]
        snaps.append(entry)
    return TrialRecord(index, wseed, snaps, time.perf_counter() - t0)


def aggregate_regular(cfg: ExperimentConfig, records: list[TrialRecord]) -> AggregateReport:
    if len(records) != cfg.trials:
        raise ValueError("record count does not match configured trials")
    pred = theory.RegularPrediction(cfg.n, cfg.r)
    bound = _log_sq_bound(cfg.n)
    report = AggregateReport("regular", cfg.n, cfg.trials)
    for i, t in enumerate(cfg.times):
        snaps = [rec.snapshots[i] for rec in records]
        n_t = pred.vacant_count(t)
        p_t = pred.neighbor_prob(t)
        vac = np.array([s["vacant_count"] for s in snaps], dtype=np.float64)
        report.rows.append(_rel_row(t, "vacant_count", vac, n_t, VACANT_TOL_REGULAR))
        if cfg.profile:
            pmf = pred.degree_profile(t)
            for s in range(cfg.r + 1):
                fracs = [
                    rec["degree_hist"][s] / rec["vacant_count"] if rec["vacant_count"] else 0.0
                    for rec in snaps
                ]
                report.rows.append(
                    _abs_row(t, f"degree_frac_{s}", fracs, float(pmf[s]), PROFILE_ABS_TOL)
                )
        theta = theory.giant_fraction(p_t, cfg.r)
        largest = np.array([s["largest"] for s in snaps], dtype=np.float64)
        if theta > 0.0:
            report.rows.append(_rel_row(t, "largest_component", largest, theta * n_t, GIANT_TOL))
            second_ok = [s["second_largest"] <= bound for s in snaps]
            report.rows.append(_rate_row(t, "second_largest_le_log_sq", second_ok, WHP_FLOOR))
        else:
            largest_ok = [s["largest"] <= bound for s in snaps]
            report.rows.append(_rate_row(t, "largest_le_log_sq", largest_ok, WHP_FLOOR))
        for k in range(1, cfg.kmax_tree + 1):
            counts = [s["tree_counts"][k - 1] for s in snaps]
            report.rows.append(
                _rel_row(t, f"tree_count_{k}", counts, pred.tree_count(k, t), TREE_TOL)
            )
    return report


def run_regular_experiment(cfg: ExperimentConfig) -> tuple[AggregateReport, list[TrialRecord]]:
    if cfg.model != "regular":
        raise ValueError("config model must be 'regular'")
    workers = resolve_workers(cfg.workers)
    thunks = [lambda i=i: _regular_trial(cfg, i) for i in range(cfg.trials)]
    records = _run_pool(thunks, workers)
    return aggregate_regular(cfg, records), records


# --------------------------------------------------------------------------
# G(n,p) and D(n,p)


def _schedules(cfg: ExperimentConfig) -> list[theory.GnpSchedule]:
    return [theory.gnp_schedule(cfg.n, cfg.p, th) for th in cfg.thetas]


def _gnp_trial(cfg: ExperimentConfig, index: int, times: list[int]) -> TrialRecord:
    gseed, wseed, sseed = _trial_seeds(cfg.seed, index)
    t0 = time.perf_counter()
    graph = generate_gnp(GnpParams(cfg.n, cfg.p), seed=gseed)
    start = _draw_start(cfg.n, cfg.start, sseed)
    run = run_with_snapshots(graph, start, times, wseed, k_walkers=cfg.k_walkers)
    snaps = []
    for i, t in enumerate(times):
        dec = decompose_vacant(graph, ~run.vacant_mask(i))
        snaps.append(
            {
                "t": int(t),
                "vacant_count": int(run.vacant_counts[i]),
                "num_components": dec.num_components,
                "largest": dec.largest,
                "second_largest": dec.second_largest,
            }
        )
    return TrialRecord(index, wseed, snaps, time.perf_counter() - t0)


def aggregate_gnp(cfg: ExperimentConfig, records: list[TrialRecord]) -> AggregateReport:
    if len(records) != cfg.trials:
        raise ValueError("record count does not match configured trials")
    report = AggregateReport("gnp", cfg.n, cfg.trials)
    bound = _log_sq_bound(cfg.n)
    for i, sched in enumerate(_schedules(cfg)):
        t = int(round(sched.t))
        snaps = [rec.snapshots[i] for rec in records]
        vac = np.array([s["vacant_count"] for s in snaps], dtype=np.float64)
        report.rows.append(_rel_row(t, "vacant_count", vac, sched.vacant_pred, VACANT_TOL_GNP))
        if sched.theta < 0.0:
            beta = theory.er_giant_fraction(sched.lam)
            fracs = [
                s["largest"] / s["vacant_count"] if s["vacant_count"] else 0.0 for s in snaps
            ]
            report.rows.append(_rel_row(t, "giant_fraction", fracs, beta, GIANT_TOL_GNP))
        else:
            ok = [s["largest"] <= bound for s in snaps]
            report.rows.append(_rate_row(t, "largest_le_log_sq", ok, WHP_FLOOR))
    return report


def run_gnp_experiment(cfg: ExperimentConfig) -> tuple[AggregateReport, list[TrialRecord]]:
    if cfg.model != "gnp":
        raise ValueError("config model must be 'gnp'")
    times = [int(round(s.t)) for s in _schedules(cfg)]
    workers = resolve_workers(cfg.workers)
    thunks = [lambda i=i: _gnp_trial(cfg, i, times) for i in range(cfg.trials)]
    records = _run_pool(thunks, workers)
    return aggregate_gnp(cfg, records), records


def _dnp_trial(cfg: ExperimentConfig, index: int, times: list[int]) -> TrialRecord:
    gseed, wseed, sseed = _trial_seeds(cfg.seed, index)
    t0 = time.perf_counter()
    d = generate_dnp(DnpParams(cfg.n, cfg.p), seed=gseed)
    under = underlying_graph(d)
    start = _draw_start(cfg.n, cfg.start, sseed)
    run = run_with_snapshots(d, start, times, wseed, k_walkers=cfg.k_walkers)
    snaps = []
    for i, t in enumerate(times):
        visited = ~run.vacant_mask(i)
        scc = decompose_vacant_strong(d, visited)
        udec = decompose_vacant(under, visited)
        snaps.append(
            {
                "t": int(t),
                "vacant_count": int(run.vacant_counts[i]),
                "largest_scc": scc.largest,
                "num_scc": scc.num_components,
                "underlying_largest": udec.largest,
                "underlying_second": udec.second_largest,
            }
        )
    return TrialRecord(index, wseed, snaps, time.perf_counter() - t0)


def aggregate_dnp(cfg: ExperimentConfig, records: list[TrialRecord]) -> AggregateReport:
    """Directed phases plus the undirected check on the underlying graph.

    At a supercritical snapshot the giant strongly connected fraction is
    held one-sided above SCC_FLOOR_FACTOR times beta^2 (a strongly connected
    giant needs both a forward and a backward survival, hence the square),
    and the vacant set projected onto the underlying undirected graph must
    match the fixed point at the projected density vacant_pred * q, where
    q = 1-(1-p)^2 is the underlying edge probability.  Subcritical
    snapshots assert that every strongly connected component is small.
    """
    if len(records) != cfg.trials:
        raise ValueError("record count does not match configured trials")
    report = AggregateReport("dnp", cfg.n, cfg.trials)
    bound = _log_sq_bound(cfg.n)
    q = 1.0 - (1.0 - cfg.p) ** 2
    for i, sched in enumerate(_schedules(cfg)):
        t = int(round(sched.t))
        snaps = [rec.snapshots[i] for rec in records]
        vac = np.array([s["vacant_count"] for s in snaps], dtype=np.float64)
        report.rows.append(_rel_row(t, "vacant_count", vac, sched.vacant_pred, VACANT_TOL_GNP))
        if sched.theta < 0.0:
            beta = theory.er_giant_fraction(sched.lam)
            fracs = [
                s["largest_scc"] / s["vacant_count"] if s["vacant_count"] else 0.0 for s in snaps
            ]
            report.rows.append(
                _floor_row(t, "scc_fraction", fracs, beta * beta, SCC_FLOOR_FACTOR * beta * beta)
            )
            beta_u = theory.er_giant_fraction(sched.vacant_pred * q)
            ufracs = [
                s["underlying_largest"] / s["vacant_count"] if s["vacant_count"] else 0.0
                for s in snaps
            ]
            report.rows.append(
                _rel_row(t, "underlying_giant_fraction", ufracs, beta_u, GIANT_TOL_GNP)
            )
        else:
            ok = [s["largest_scc"] <= bound for s in snaps]
            report.rows.append(_rate_row(t, "scc_le_log_sq", ok, WHP_FLOOR))
    return report


def run_dnp_experiment(cfg: ExperimentConfig) -> tuple[AggregateReport, list[TrialRecord]]:
    if cfg.model != "dnp":
        raise ValueError("config model must be 'dnp'")
    times = [int(round(s.t)) for s in _schedules(cfg)]
    workers = resolve_workers(cfg.workers)
    thunks = [lambda i=i: _dnp_trial(cfg, i, times) for i in range(cfg.trials)]
    records = _run_pool(thunks, workers)
    return aggregate_dnp(cfg, records), records


def run_experiment(cfg: ExperimentConfig) -> tuple[AggregateReport, list[TrialRecord]]:
    """Dispatch on cfg.model."""
    if cfg.model == "regular":
        return run_regular_experiment(cfg)
    if cfg.model == "gnp":
        return run_gnp_experiment(cfg)
    return run_dnp_experiment(cfg)


def aggregate(cfg: ExperimentConfig, records: list[TrialRecord]) -> AggregateReport:
    """Re-fold stored trial records into an aggregate (dispatch on model)."""
    if cfg.model == "regular":
        return aggregate_regular(cfg, records)
    if cfg.model == "gnp":
        return aggregate_gnp(cfg, records)
    return aggregate_dnp(cfg, records)


# --------------------------------------------------------------------------
# critical-window scan


@dataclass
class ScanReport:
    """Largest-component scaling across n at sub/critical/super snapshot times.

    `mean_max[label]` maps each regime label to the per-n mean of the largest
    vacant component; `slopes[label]` is the least-squares slope of
    log(mean) against log(n) with its standard error.
    """

    r: int
    n_values: tuple[int, ...]
    trials: int
    multipliers: dict
    mean_max: dict
    slopes: dict


def critical_window_scan(
    r: int,
    n_list,
    trials: int,
    seed: int,
    workers: int = 1,
    multipliers: dict | None = None,
) -> ScanReport:
    """Scaling of the largest vacant component through the phase transition.

    At the critical time the largest component grows like n^(2/3) up to
    n^(o(1)) corrections; the supercritical control grows linearly and the
    subcritical control only logarithmically.  The default subcritical
    control sits at 2.2 times the critical time: shallower controls are
    still contaminated by the critical window at desk-scale n, deeper ones
    shrink the vacant population so much that log(vacant) stops tracking
    log(n) over the scanned range.  Both effects steepen the fitted slope,
    and 2.2 is the empirical bottom of that U shape for the default sizes.
    """
    n_values = tuple(int(n) for n in n_list)
    if len(n_values) < 4:
        raise ValueError("need at least 4 graph sizes")
    if max(n_values) < 16 * min(n_values):
        raise ValueError("graph sizes must span at least a factor of 16")
    if multipliers is None:
        multipliers = {"super": 0.8, "critical": 1.0, "sub": 2.2}
    labels = list(multipliers)
    tstar = theory.critical_time(r)

    def one(n: int, k: int):
        gseed, wseed, sseed = _trial_seeds(seed, k)
        graph = generate_regular(RegularParams(n, r), seed=gseed)
        start = _draw_start(n, None, sseed)
        times = sorted({int(round(multipliers[lab] * tstar * n)) for lab in labels})
        run = run_with_snapshots(graph, start, times, wseed)
        out = {}
        for lab in labels:
            idx = times.index(int(round(multipliers[lab] * tstar * n)))
            dec = decompose_vacant(graph, ~run.vacant_mask(idx))
            out[lab] = dec.largest
        return out

    thunks = []
    for ni, n in enumerate(n_values):
        for i in range(trials):
            thunks.append(lambda n=n, k=ni * trials + i: one(n, k))
    results = _run_pool(thunks, resolve_workers(workers))

    mean_max = {}
    slopes = {}
    log_n = np.log(np.asarray(n_values, dtype=np.float64))
    for lab in labels:
        means = np.array(
            [
                np.mean([results[ni * trials + i][lab] for i in range(trials)])
                for ni in range(len(n_values))
            ]
        )
        mean_max[lab] = means
        fit = sps.linregress(log_n, np.log(means))
        slopes[lab] = (float(fit.slope), float(fit.stderr))
    return ScanReport(r, n_values, trials, dict(multipliers), mean_max, slopes)


# --------------------------------------------------------------------------
# small drivers for the remaining checks


def early_connectivity_check(
    r: int, n: int, trials: int, seed: int, workers: int = 1
) -> tuple[float, list[bool]]:
    """Fraction of trials where the early vacant set minus isolated vertices
    is connected, probed at t = floor(log^3 n)."""
    t = int(math.log(n) ** 3)

    def one(i: int) -> bool:
        gseed, wseed, sseed = _trial_seeds(seed, i)
        graph = generate_regular(RegularParams(n, r), seed=gseed)
        start = _draw_start(n, None, sseed)
        run = run_with_snapshots(graph, start, [t], wseed)
        dec = decompose_vacant(graph, ~run.vacant_mask(0))
        return int((dec.sizes >= 2).sum()) <= 1

    flags = _run_pool([lambda i=i: one(i) for i in range(trials)], resolve_workers(workers))
    return sum(flags) / trials, flags


@dataclass
class CrossValidation:
    """Direct vacant subgraph vs a fresh pairing resampled from its degrees.

    If the unexplored part of the pairing stays uniform, both routes draw
    from the same distribution, so the giant-fraction and tree-count means
    must agree to sampling noise; `z` holds the two-sample z-scores.
    """

    trials: int
    direct_mean: dict
    resampled_mean: dict
    z: dict

    @property
    def passed(self) -> bool:
        return all(abs(v) <= 3.0 for v in self.z.values())


def resampling_crossvalidation(
    r: int, n: int, t: int, trials: int, seed: int, workers: int = 1, kmax_tree: int = 3
) -> CrossValidation:
    stats = ["giant_fraction"] + [f"tree_count_{k}" for k in range(1, kmax_tree + 1)]

    def one(i: int) -> dict:
        gseed, wseed, sseed = _trial_seeds(seed, 2 * i)
        rseed = derive_seed(seed, 2 * i + 1)
        graph = generate_regular(RegularParams(n, r), seed=gseed)
        start = _draw_start(n, None, sseed)
        run = run_with_snapshots(graph, start, [t], wseed)
        visited = ~run.vacant_mask(0)
        snap = snapshot_statistics(graph, visited, t, k_cap=kmax_tree)
        vacant = run.vacant_mask(0)
        nv = int(vacant.sum())

        # vacant-induced degree sequence, then an independent pairing with
        # exactly those degrees
        keep = vacant[graph.edge_u] & vacant[graph.edge_v]
        deg = (
            np.bincount(graph.edge_u[keep], minlength=n)
            + np.bincount(graph.edge_v[keep], minlength=n)
        )[vacant]
        resampled = sample_configuration(deg, seed=rseed)
        assert np.array_equal(np.sort(resampled.degrees), np.sort(deg))
        rsnap = snapshot_statistics(resampled, np.zeros(resampled.n, dtype=bool), t, k_cap=kmax_tree)

        out = {"direct": {}, "resampled": {}}
        out["direct"]["giant_fraction"] = snap.largest / nv if nv else 0.0
        out["resampled"]["giant_fraction"] = rsnap.largest / nv if nv else 0.0
        for k in range(1, kmax_tree + 1):
            out["direct"][f"tree_count_{k}"] = snap.tree_count(k)
            out["resampled"][f"tree_count_{k}"] = rsnap.tree_count(k)
        return out

    results = _run_pool([lambda i=i: one(i) for i in range(trials)], resolve_workers(workers))
    direct_mean, resampled_mean, zs = {}, {}, {}
    for stat in stats:
        a = np.array([res["direct"][stat] for res in results], dtype=np.float64)
        b = np.array([res["resampled"][stat] for res in results], dtype=np.float64)
        ma, sa = _mean_stderr(a)
        mb, sb = _mean_stderr(b)
        denom = math.hypot(sa, sb)
        direct_mean[stat] = ma
        resampled_mean[stat] = mb
        zs[stat] = (ma - mb) / denom if denom > 0 else 0.0
    return CrossValidation(trials, direct_mean, resampled_mean, zs)


def _all_matchings(points: tuple[int, ...]) -> list[tuple[tuple[int, int], ...]]:
    if not points:
        return [()]
    a = points[0]
    rest = points[1:]
    out = []
    for j, b in enumerate(rest):
        tail = rest[:j] + rest[j + 1 :]
        for m in _all_matchings(tail):
            out.append(((a, b),) + m)
    return out


@dataclass
class PairingUniformity:
    runs: int
    counts: np.ndarray
    chisq: float
    pvalue: float
    significance: float = 1e-3

    @property
    def passed(self) -> bool:
        return self.pvalue > self.significance


def pairing_uniformity_test(
    runs: int, seed: int, n: int = 2, r: int = 3, steps: int = 3
) -> PairingUniformity:
    """Chi-square test that walk-coupled pairings finalize uniformly.

    Each run advances the deferred pairing a few steps, completes the
    leftover points uniformly, and tallies which perfect matching resulted;
    uniformity over all (rn-1)!! matchings is the coupling's invariant.
    """
    matchings = _all_matchings(tuple(range(n * r)))
    index = {m: i for i, m in enumerate(matchings)}
    counts = np.zeros(len(matchings), dtype=np.int64)
    for run_i in range(runs):
        state = PairingState(n, r, start=0, seed=derive_seed(seed, 2 * run_i))
        state.run(steps)
        finalize_pairing(state, seed=derive_seed(seed, 2 * run_i + 1))
        mate = state.mate
        key = tuple(
            (x, int(mate[x])) for x in range(n * r) if x < mate[x]
        )
        counts[index[key]] += 1
    chisq, pvalue = sps.chisquare(counts)
    return PairingUniformity(runs, counts, float(chisq), float(pvalue))


@dataclass
class CoverTimeReport:
    n: int
    r: int
    trials: int
    cover_times: np.ndarray
    estimate: float

    @property
    def mean_ratio(self) -> float:
        return float(np.mean(self.cover_times)) / self.estimate


def cover_time_trials(
    n: int, r: int, trials: int, seed: int, workers: int = 1
) -> CoverTimeReport:
    def one(i: int) -> int:
        gseed, wseed, sseed = _trial_seeds(seed, i)
        graph = generate_regular(RegularParams(n, r), seed=gseed)
        start = _draw_start(n, None, sseed)
        steps = cover_time(graph, start, wseed)
        if steps < 0:
            raise RuntimeError("walk hit the step limit before covering the graph")
        return steps

    times = _run_pool([lambda i=i: one(i) for i in range(trials)], resolve_workers(workers))
    return CoverTimeReport(
        n, r, trials, np.asarray(times, dtype=np.int64), theory.cover_time_estimate(n, r)
    )
