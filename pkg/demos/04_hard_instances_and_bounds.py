"""Uniform bounds next to the spectra that nearly attain them.

The upper bound .068 ln^2(n (m-1)^8)/(m-1)^2 holds for every symmetric
matrix.  The Legendre hard instance puts one eigenvalue at the top zero of
P_2m and piles the rest on the other zeros; its error at step m stays of
order 1/m^2 no matter how large n is.
"""
import numpy as np

from lanczoslab import bounds, spectra
from lanczoslab.experiments import ExperimentConfig, trial_errors

n = 10**4
print(f"n = {n}")
print(" m   median err (hard instance)   1.08/m^2     upper bound")
for m in (8, 12, 16, 24):
    err = trial_errors(ExperimentConfig("legendre_hard", n, m, 100, seed=0, hard_m=m))[:, m - 1]
    print(f"{m:3d}   {np.median(err):.4e}                  {1.08 / m**2:.4e}   {bounds.main_upper_bound(n, m):.4e}")

print("\nevery bound as a report with its hypotheses flagged")
for name, kw in [("main-upper", dict(n=50, m=10)),
                 ("kw-expected", dict(n=10**6, m=30)),
                 ("clustered", dict(m=11, alpha=2.0, n=10**6)),
                 ("arb-eig", dict(n=10**4, m=20, i=2, delta=0.05)),
                 ("chernoff", dict(k=10, x=20.0))]:
    r = bounds.evaluate(name, **kw)
    flags = ", ".join(f"{h.name}:{'ok' if h.met else 'NO'}" for h in r.hypotheses)
    print(f"  {name:12s} {r.value:.5f}   [{flags}]")

lap = spectra.lap_spectrum(10**6)
print("\nLaplacian spectrum clusters at the top (alpha = 2, m = 11):",
      bounds.cluster_hypothesis(lap, 11, 1, 2))
