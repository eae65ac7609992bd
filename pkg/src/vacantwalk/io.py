"""Config parsing, run manifests, and result persistence.

Formats are chosen for determinism: reports and trial records contain no
timestamps or wall-clock fields, floats are written in shortest round-trip
form, and JSON objects use sorted keys, so re-running an experiment with
the same config and seed yields byte-identical files at any worker count.
The manifest (which does carry a timestamp) is the only exception and is
never byte-compared.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from . import __version__, theory
from .experiments import AggregateReport, ExperimentConfig, ReportRow, TrialRecord
from .graphs import Digraph, Graph

__all__ = [
    "parse_config",
    "serialize_config",
    "resolve_time",
    "config_to_experiment",
    "experiment_to_config",
    "RunManifest",
    "write_manifest",
    "read_manifest",
    "REPORT_HEADER",
    "write_report",
    "read_report",
    "write_trials",
    "read_trials",
    "write_edges",
    "read_edges",
    "theory_curve",
    "write_csv",
]

REPORT_HEADER = ["t", "stat", "empirical_mean", "empirical_stderr", "theory", "rel_err", "z", "pass"]


# --------------------------------------------------------------------------
# flat dotted-key config


def parse_config(text: str) -> dict:
    """Parse flat `section.key = value` lines; '#' and ';' start comments."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith(";"):
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.split("#", 1)[0].split(";", 1)[0].strip()
        if not key:
            raise ValueError(f"config line {lineno}: empty key")
        if key in out:
            raise ValueError(f"config line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def serialize_config(mapping: dict) -> str:
    return "".join(f"{k} = {v}\n" for k, v in mapping.items())


def resolve_time(expr: str, n: int, r: int) -> int:
    """Resolve a schedule entry: absolute steps, or 'x*tstar' / 'x*t0'.

    tstar is the phase-transition time and t0 the cover-time scale, both
    already multiplied by n.
    """
    expr = expr.strip().lower()
    if "*" in expr:
        factor_s, _, unit = expr.partition("*")
        factor = float(factor_s)
        unit = unit.strip()
        if unit == "tstar":
            return int(round(factor * theory.critical_time(r) * n))
        if unit == "t0":
            return int(round(factor * theory.cover_time_estimate(n, r)))
        raise ValueError(f"unknown time unit {unit!r} (expected tstar or t0)")
    return int(round(float(expr)))


def _get(mapping: dict, key: str, default=None):
    if key in mapping:
        return mapping[key]
    if default is None:
        raise ValueError(f"config is missing required key {key!r}")
    return default


_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _get_bool(mapping: dict, key: str, default: bool) -> bool:
    raw = mapping.get(key)
    if raw is None:
        return default
    low = raw.strip().lower()
    if low in _TRUE:
        return True
    if low in _FALSE:
        return False
    raise ValueError(f"config key {key!r}: expected boolean, got {raw!r}")


def config_to_experiment(mapping: dict) -> ExperimentConfig:
    """Build an ExperimentConfig from a parsed flat config mapping."""
    model = _get(mapping, "model.type")
    n = int(_get(mapping, "model.n"))
    r = int(mapping.get("model.r", "3"))
    c = float(mapping.get("model.c", "0"))
    times: tuple[int, ...] = ()
    thetas: tuple[float, ...] = ()
    if model == "regular":
        raw = _get(mapping, "walk.times")
        times = tuple(resolve_time(item, n, r) for item in raw.split(",") if item.strip())
    else:
        raw = _get(mapping, "walk.thetas")
        thetas = tuple(float(item) for item in raw.split(",") if item.strip())
    start = mapping.get("walk.start")
    return ExperimentConfig(
        model=model,
        n=n,
        r=r,
        c=c,
        times=times,
        thetas=thetas,
        trials=int(mapping.get("run.trials", "1")),
        seed=int(mapping.get("run.seed", "0")),
        workers=int(mapping.get("run.workers", "1")),
        k_cap=int(mapping.get("run.k_cap", "50")),
        kmax_tree=int(mapping.get("run.kmax_tree", "3")),
        profile=_get_bool(mapping, "run.profile", True),
        k_walkers=int(mapping.get("walk.k_walkers", "1")),
        start=None if start is None else int(start),
    )


def experiment_to_config(cfg: ExperimentConfig) -> dict:
    """Flat mapping with the schedule fully resolved (absolute times)."""
    out = {"model.type": cfg.model, "model.n": str(cfg.n)}
    if cfg.model == "regular":
        out["model.r"] = str(cfg.r)
        out["walk.times"] = ", ".join(str(t) for t in cfg.times)
    else:
        out["model.c"] = repr(cfg.c)
        out["walk.thetas"] = ", ".join(repr(th) for th in cfg.thetas)
    if cfg.start is not None:
        out["walk.start"] = str(cfg.start)
    out["walk.k_walkers"] = str(cfg.k_walkers)
    out["run.trials"] = str(cfg.trials)
    out["run.seed"] = str(cfg.seed)
    out["run.workers"] = str(cfg.workers)
    out["run.k_cap"] = str(cfg.k_cap)
    out["run.kmax_tree"] = str(cfg.kmax_tree)
    out["run.profile"] = "true" if cfg.profile else "false"
    return out


# --------------------------------------------------------------------------
# manifest


@dataclass
class RunManifest:
    """Resolved description of a run, written before any trial starts."""

    version: str
    config: dict
    seed: int
    created: str
    outputs: list

    @classmethod
    def for_config(cls, cfg: ExperimentConfig, outputs: list) -> "RunManifest":
        return cls(
            version=__version__,
            config=experiment_to_config(cfg),
            seed=cfg.seed,
            created=datetime.now(timezone.utc).isoformat(),
            outputs=list(outputs),
        )


def write_manifest(manifest: RunManifest, path) -> None:
    payload = {
        "version": manifest.version,
        "config": manifest.config,
        "seed": manifest.seed,
        "created": manifest.created,
        "outputs": manifest.outputs,
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_manifest(path) -> RunManifest:
    with open(path) as fh:
        payload = json.load(fh)
    return RunManifest(
        version=payload["version"],
        config=payload["config"],
        seed=payload["seed"],
        created=payload["created"],
        outputs=payload["outputs"],
    )


# --------------------------------------------------------------------------
# reports and trial records


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def write_report(report: AggregateReport, path) -> None:
    """CSV with the fixed header; floats in shortest round-trip form."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(REPORT_HEADER)
        for row in report.rows:
            writer.writerow(
                [
                    row.t,
                    row.stat,
                    _fmt(row.empirical_mean),
                    _fmt(row.empirical_stderr),
                    _fmt(row.theory),
                    _fmt(row.rel_err),
                    _fmt(row.z),
                    _fmt(row.passed),
                ]
            )


def read_report(path) -> list:
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != REPORT_HEADER:
            raise ValueError(f"unexpected report header {header!r}")
        for rec in reader:
            rows.append(
                ReportRow(
                    t=int(rec[0]),
                    stat=rec[1],
                    empirical_mean=float(rec[2]),
                    empirical_stderr=float(rec[3]),
                    theory=float(rec[4]),
                    rel_err=float(rec[5]),
                    z=float(rec[6]),
                    passed=rec[7] == "1",
                )
            )
    return rows


def write_trials(records: list, path) -> None:
    """JSON-lines, one trial per line, sorted keys, no wall-clock fields."""
    with open(path, "w") as fh:
        for rec in records:
            payload = {"index": rec.index, "seed": rec.seed, "snapshots": rec.snapshots}
            fh.write(json.dumps(payload, sort_keys=True, separators=(",", ":")))
            fh.write("\n")


def read_trials(path) -> list:
    records = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            payload = json.loads(line)
            records.append(
                TrialRecord(
                    index=payload["index"], seed=payload["seed"], snapshots=payload["snapshots"]
                )
            )
    return records


# --------------------------------------------------------------------------
# edge lists


def write_edges(graph, path) -> None:
    """Edge list with a '# n=<n> m=<m> directed=<0|1>' header line."""
    directed = isinstance(graph, Digraph)
    if directed:
        us, vs = graph.arc_u, graph.arc_v
    else:
        us, vs = graph.edge_u, graph.edge_v
    with open(path, "w") as fh:
        fh.write(f"# n={graph.n} m={len(us)} directed={1 if directed else 0}\n")
        for u, v in zip(us, vs):
            fh.write(f"{u} {v}\n")


def read_edges(path):
    with open(path) as fh:
        header = fh.readline().strip()
        if not header.startswith("# "):
            raise ValueError("edge file must start with '# n=<n> m=<m> directed=<0|1>'")
        fields = dict(item.split("=", 1) for item in header[2:].split())
        n = int(fields["n"])
        m = int(fields["m"])
        directed = fields["directed"] == "1"
        us = np.empty(m, dtype=np.int64)
        vs = np.empty(m, dtype=np.int64)
        for i in range(m):
            parts = fh.readline().split()
            us[i], vs[i] = int(parts[0]), int(parts[1])
    if directed:
        return Digraph(n, us, vs)
    return Graph(n, us, vs)


# --------------------------------------------------------------------------
# theory curves


def theory_curve(n: int, r: int, grid: int, kmax: int = 3, t_max: int | None = None):
    """Plot-ready prediction table for the regular model.

    Returns (header, rows); columns are t, vacant count, neighbour survival
    probability, the weighted degree criterion, the giant fraction of the
    vacant set, the predicted giant size, and tree counts up to kmax.
    Row 0 is t=0, where the vacant count equals n.
    """
    if grid < 2:
        raise ValueError("grid must be >= 2")
    if t_max is None:
        t_max = int(round(1.5 * theory.critical_time(r) * n))
    pred = theory.RegularPrediction(n, r)
    header = ["t", "N_t", "p_t", "L", "theta", "giant_pred"] + [
        f"eta_{k}" for k in range(1, kmax + 1)
    ]
    rows = []
    for t in np.linspace(0.0, float(t_max), grid):
        p_t = pred.neighbor_prob(t)
        n_t = pred.vacant_count(t)
        theta = theory.giant_fraction(p_t, r)
        row = [
            float(t),
            n_t,
            p_t,
            theory.molloy_reed_criterion(p_t, r),
            theta,
            theta * n_t,
        ]
        row.extend(pred.tree_count(k, t) for k in range(1, kmax + 1))
        rows.append(row)
    return header, rows


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) if not isinstance(v, str) else v for v in row])
