"""Orthogonal polynomials behind the error curves.

Gauss rules come from Jacobi matrices (Golub-Welsch), the largest zero of
the degree-m orthogonal polynomial is the top eigenvalue of the m x m Jacobi
matrix, and for the three benchmark densities m^2 times the gap to the edge
tends to j^2/4, with j the first Bessel zero.
"""
import math

from lanczoslab import bounds, orthopoly
from lanczoslab.experiments import limiting_recurrence

rule = orthopoly.gauss_legendre(4)
print("4-point Gauss-Legendre")
for x, w in zip(rule.nodes, rule.weights):
    print(f"  node {x:+.16f}   weight {w:.16f}")
print(f"  integral of x^6 on [-1, 1]: {rule.integrate(lambda x: x**6):.16f} (exact {2 / 7:.16f})")

p = orthopoly.JacobiParams(1.0, 0.0)
rec = orthopoly.jacobi_recurrence(40, p)
print("\nlargest zero of P_m^(1,0) against sqrt(1 - ((a + 3/2)/(m + a + 1/2))^2)")
for m in (2, 5, 10, 20, 40):
    z = orthopoly.largest_zero(rec, m)
    bound = math.sqrt(1 - (2.5 / (m + 1.5)) ** 2)
    print(f"  m = {m:2d}: {z:.10f} <= {bound:.10f}")

print("\nm^2 (b - xi(m)) / (b - a) for the limiting densities")
for name, alpha in (("arcsine", -0.5), ("uniform", 0.0), ("semicircle", 0.5)):
    rec, a, b = limiting_recurrence(name, 200)
    vals = [m * m * bounds.asymptotic_predictor(rec, m, a, b) for m in (10, 50, 200)]
    print(f"  {name:10s} m=10: {vals[0]:.4f}  m=50: {vals[1]:.4f}  m=200: {vals[2]:.4f}"
          f"  limit j^2/4 = {bounds.bessel_limit(alpha):.6f}")
