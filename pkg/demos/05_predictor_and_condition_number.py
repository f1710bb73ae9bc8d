"""Predicting the error before running Lanczos, and estimating kappa.

For spectra drawn from a density sigma on [a, b] the relative error of the
top Ritz value converges to (b - xi(m))/(b - a), where xi(m) is the largest
zero of the degree-m orthogonal polynomial of sigma.  Computing xi(m) costs an
m x m eigenvalue problem, not a pass over the matrix.
"""
import numpy as np

from lanczoslab import bounds
from lanczoslab.experiments import ExperimentConfig, compare_predictor, limiting_recurrence
from lanczoslab.lanczos import measure_ritz
from lanczoslab.spectra import Spectrum

rec, a, b = limiting_recurrence("uniform", 30)
cfg = ExperimentConfig("unif", 50_000, 30, 50, seed=4, path="measure")
print(" m   empirical     predicted     ratio")
for row in compare_predictor(cfg, rec, a, b):
    if row["m"] % 5 == 0:
        print(f"{row['m']:3d}   {row['empirical']:.4e}    {row['predictor']:.4e}    {row['ratio']:.3f}")

# Condition number estimates from the extreme Ritz values.  The error splits
# into a top-edge part and a bottom-edge part weighted by kappa_m.
rng = np.random.default_rng(2)
spec = Spectrum.from_eigenvalues(rng.uniform(1, 100, 400))
y = rng.standard_normal(spec.n) ** 2
kappa = spec.lam1 / spec.lamn
print(f"\nkappa = {kappa:.3f}")
for m in (5, 10, 20, 40):
    r = measure_ritz(spec, y, m).ritz
    gap = bounds.condition_error_identity(spec.lam1, spec.lamn, r[0], r[-1])
    print(f"  m = {m:2d}: kappa_m = {r[0] / r[-1]:.3f}, kappa - kappa_m = {gap:.4f}")
