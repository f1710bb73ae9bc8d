"""Built-in invariant checks behind ``lanczoslab verify``.

Each check returns ``(ok, detail)``.  Module functions are looked up at call
time, so a patched implementation is what gets checked.
"""
from __future__ import annotations

import math
import time
from typing import Callable

import numpy as np

from . import bounds, experiments, lanczos, orthopoly, spectra

Check = Callable[[], tuple[bool, str]]


def check_gauss_legendre() -> tuple[bool, str]:
    worst = 0.0
    for k in range(1, 21):
        rule = orthopoly.gauss_legendre(k)
        if not np.all(np.diff(rule.nodes) < 0) or not np.all(rule.weights > 0):
            return False, f"k={k}: nodes not descending or weights not positive"
        for j in range(2 * k):
            exact = 0.0 if j % 2 else 2.0 / (j + 1)
            err = abs(rule.weights @ rule.nodes**j - exact) / max(1.0, exact)
            worst = max(worst, err)
    return worst <= 1e-12, f"max monomial error {worst:.2e}"


def check_jacobi_identities() -> tuple[bool, str]:
    grid = (-0.4, 0.0, 0.5, 1.0, 3.0)
    worst_norm = worst_der = 0.0
    for a in grid:
        for b in grid:
            p = orthopoly.JacobiParams(a, b)
            rec = orthopoly.recurrence_from_density(lambda x: 1.0, -1.0, 1.0, 17, endpoint_powers=(a, b))
            for k in range(0, 16):
                rule = orthopoly.gauss_rule(rec, k + 2)
                num = rule.weights @ orthopoly.jacobi_eval(k, p, rule.nodes) ** 2
                worst_norm = max(worst_norm, abs(num / orthopoly.jacobi_norm_sq(k, p) - 1))
            x = np.linspace(-0.95, 0.95, 11)
            for k in range(1, 8):
                h = 1e-5
                fd = (orthopoly.jacobi_eval(k, p, x + h) - orthopoly.jacobi_eval(k, p, x - h)) / (2 * h)
                exact = orthopoly.jacobi_deriv(k, p, x)
                worst_der = max(worst_der, float(np.max(np.abs(fd - exact)) / max(1.0, np.max(np.abs(exact)))))
    ok = worst_norm <= 1e-10 and worst_der <= 1e-6
    return ok, f"norm rel err {worst_norm:.1e}, derivative err {worst_der:.1e}"


def check_largest_zero_bound() -> tuple[bool, str]:
    bad = []
    # the bound needs alpha >= beta (= 0 here)
    for alpha in (0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0):
        rec = orthopoly.jacobi_recurrence(50, orthopoly.JacobiParams(alpha, 0.0))
        ms = np.arange(2, 51)
        z = orthopoly.tridiag_kth_largest(rec.diag[:50], rec.offdiag[:49], 1, sizes=ms)
        bound = np.sqrt(1 - ((alpha + 1.5) / (ms + alpha + 0.5)) ** 2)
        bad += [(alpha, int(m)) for m in ms[z > bound]]
    return not bad, f"{len(bad)} violations" + (f", first {bad[0]}" if bad else "")


def check_oracle_equivalence(trials: int = 100, seed: int = 11) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(2, 51))
        spec = spectra.Spectrum.from_eigenvalues(rng.uniform(-1, 1, n))
        y = rng.standard_normal(n) ** 2
        m = int(rng.integers(1, min(10, len(spec.values)) + 1))
        a = lanczos.ritz_values(lanczos.lanczos(spectra.diagonal_operator(spec.expanded()), np.sqrt(y), m))
        b = lanczos.measure_ritz(spec, y, m)
        worst = max(worst, float(np.max(np.abs(a.ritz - b.ritz))))
    return worst <= 1e-8, f"max Ritz discrepancy {worst:.1e}"


def check_tridiagonal() -> tuple[bool, str]:
    rng = np.random.default_rng(5)
    worst = 0.0
    for n in (1, 2, 8, 30):
        d, e = rng.normal(size=n), rng.normal(size=n - 1)
        ref = np.linalg.eigvalsh(np.diag(d) + np.diag(e, 1) + np.diag(e, -1))[::-1]
        worst = max(worst, float(np.max(np.abs(orthopoly.tridiag_eigenvalues(d, e) - ref))))
    return worst <= 1e-12, f"max error vs dense solver {worst:.1e}"


def check_bessel_limits() -> tuple[bool, str]:
    v = [bounds.bessel_limit(a) for a in (-0.5, 0.0, 0.5)]
    ok = abs(v[0] - math.pi**2 / 16) <= 1e-10 and abs(v[2] - math.pi**2 / 4) <= 1e-10 and abs(v[1] - 1.4458) <= 1e-4
    return ok, "j^2/4 = " + ", ".join(f"{x:.12f}" for x in v)


def check_condition_identity() -> tuple[bool, str]:
    rng = np.random.default_rng(8)
    for _ in range(20):
        spec = spectra.Spectrum.from_eigenvalues(rng.uniform(0.1, 10, 50))
        for m in (5, 10, 25):
            r = lanczos.measure_ritz(spec, rng.standard_normal(50) ** 2, m).ritz
            try:
                bounds.condition_error_identity(spec.lam1, spec.lamn, r[0], r[-1])
            except ArithmeticError as exc:
                return False, str(exc)
    return True, "identity holds on 60 cases"


def check_spectra() -> tuple[bool, str]:
    for s in (spectra.lap_spectrum(101), spectra.unif_spectrum(57), spectra.semi_spectrum(64),
              spectra.log_spectrum(1000), spectra.legendre_hard_instance(101, 3),
              spectra.jacobi_hard_instance(10**4, 2)):
        if np.any(np.diff(s.values) >= 0):
            return False, "values not strictly descending"
    if spectra.legendre_hard_instance(101, 2).mults.tolist() != [1, 33, 33, 34]:
        return False, "legendre instance multiplicities"
    return True, "generators consistent"


def _reproduce(kind: str, n: int, target: float, tol: float) -> Check:
    def run():
        st = experiments.run_experiment(experiments.ExperimentConfig(kind, n, 100, 20, seed=2024, path="measure"))
        window = st.mean[79:100]
        ok = bool(np.all(np.abs(window / target - 1) <= tol))
        return ok, f"m^2 err on m=80..100 in [{window.min():.4f}, {window.max():.4f}], target {target:.4f}±{tol:.0%}"
    return run


QUICK: dict[str, Check] = {
    "gauss-legendre-exactness": check_gauss_legendre,
    "jacobi-identities": check_jacobi_identities,
    "jacobi-largest-zero-bound": check_largest_zero_bound,
    "tridiagonal-eigenvalues": check_tridiagonal,
    "oracle-equivalence": check_oracle_equivalence,
    "bessel-limits": check_bessel_limits,
    "condition-identity": check_condition_identity,
    "spectra-generators": check_spectra,
}

FULL: dict[str, Check] = {
    **QUICK,
    "reproduce-lap-1e5": _reproduce("lap", 10**5, math.pi**2 / 16, 0.10),
    "reproduce-unif-1e5": _reproduce("unif", 10**5, 1.4458, 0.10),
    "reproduce-semi-1e6": _reproduce("semi", 10**6, math.pi**2 / 4, 0.15),
}


def run_checks(level: str = "quick", out=print) -> bool:
    checks = {"quick": QUICK, "full": FULL}.get(level)
    if checks is None:
        raise ValueError(f"unknown level {level!r}")
    all_ok = True
    for name, fn in checks.items():
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashing check is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        all_ok &= ok
        out(f"{'PASS' if ok else 'FAIL'}  {name:28s} {detail}  ({time.perf_counter() - t0:.1f}s)")
    return all_ok
