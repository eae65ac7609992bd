"""
Finite-size scaling at the critical time
========================================

Right at t* the largest vacant component grows like n^(2/3); before it the
growth is linear, after it only (poly)logarithmic.  This script runs a
small scan over five graph sizes and prints the fitted log-log slopes.
The sizes here are kept modest so it finishes in well under a minute; the
full-size scan lives in the acceptance suite.
"""

from vacantwalk.experiments import critical_window_scan

sizes = [2**11, 2**12, 2**13, 2**14, 2**15]
scan = critical_window_scan(3, sizes, trials=20, seed=3)

print("mean largest vacant component by graph size:")
print(f"{'n':>7}", *(f"{lab:>10}" for lab in scan.slopes))
for i, n in enumerate(scan.n_values):
    print(f"{n:>7}", *(f"{scan.mean_max[lab][i]:>10.1f}" for lab in scan.slopes))

print("\nfitted slopes (expected: super ~1, critical ~2/3, sub ~log):")
for lab, (slope, err) in scan.slopes.items():
    print(f"  {lab:>8}: {slope:.3f} +- {err:.3f}")

print("\nat these small sizes the subcritical slope still sits above the")
print("asymptotic log growth; it flattens as the sizes increase")

