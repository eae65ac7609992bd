"""
Directed vacant set: strongly connected giant and its collapse
==============================================================

On a dense random digraph the walk schedule t = n(loglog n + (1+theta)
log c) tunes the vacant set through its own phase transition: theta < 0
leaves a giant strongly connected component, theta > 0 shatters every SCC
to polylog size.  The undirected graph underlying the digraph reproduces
the undirected dense-model behaviour at density q = 1-(1-p)^2.
"""

import math

from vacantwalk import theory
from vacantwalk.experiments import ExperimentConfig, run_experiment

n, c, trials = 30_000, 4.0, 3
cfg = ExperimentConfig(model="dnp", n=n, c=c, thetas=(-0.3, 0.3), trials=trials, seed=13)
report, records = run_experiment(cfg)

bound = math.log(n) ** 2
for theta in (-0.3, 0.3):
    sched = theory.gnp_schedule(n, cfg.p, theta)
    t = int(round(sched.t))
    snaps = [rec.snapshots[0 if theta < 0 else 1] for rec in records]
    scc = [s["largest_scc"] for s in snaps]
    vac = [s["vacant_count"] for s in snaps]
    print(f"theta={theta:+.1f}: t={t}, vacant ~{sum(vac) / trials:.0f}, "
          f"largest SCC per trial {scc} (polylog bound {bound:.0f})")

print("\nreport rows:")
for row in report.rows:
    print(f"  t={row.t} {row.stat}: measured {row.empirical_mean:.3f} "
          f"vs {row.theory:.3f} -> {'pass' if row.passed else 'fail'}")

print("\nvacant_count rows run above the leading-order prediction at this n;")
print("the excess decays only logarithmically with n (see README)")

