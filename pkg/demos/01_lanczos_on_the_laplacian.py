"""Lanczos on the 1-D Laplacian, matrix-free.

The Dirichlet Laplacian tridiag(-1, 2, -1) has eigenvalues 2 + 2cos(i pi/(n+1)),
so we know exactly where the Ritz values should go.  We run a few Lanczos
steps from a random start and watch the top Ritz value climb toward lambda_1.
Then we do the same for the inverse, where the top of the spectrum is well
separated and convergence is fast.

    python demos/01_lanczos_on_the_laplacian.py
"""
import numpy as np

from lanczoslab import spectra
from lanczoslab.lanczos import lanczos, ritz_values

n = 2000
rng = np.random.default_rng(0)
b = rng.standard_normal(n)

A = spectra.laplacian_operator(n)
spec = spectra.lap_spectrum(n)
print(f"Laplacian, n = {n}: lambda_1 = {spec.lam1:.10f}, lambda_n = {spec.lamn:.3e}")
print(" m   top Ritz value    relative error   m^2 * error")
for m in (5, 10, 20, 40, 80):
    top = ritz_values(lanczos(A, b, m)).ritz[0]
    err = (spec.lam1 - top) / spec.width
    print(f"{m:3d}   {top:.10f}    {err:.3e}        {m * m * err:.3f}")

# The m^2-scaled error settles near a constant: this spectrum is the hard,
# gap-free case where Lanczos converges like m^-2 rather than geometrically.

Ainv = spectra.laplacian_inverse_operator(n)
inv_top = 1 / spec.lamn
print(f"\ninverse Laplacian: lambda_1 = {inv_top:.6e}")
for m in (3, 6, 12):
    top = ritz_values(lanczos(Ainv, b, m)).ritz[0]
    print(f"{m:3d}   relative error {(inv_top - top) / (inv_top - 1 / spec.lam1):.3e}")

# With a big relative gap at the top the error falls off a cliff instead.
