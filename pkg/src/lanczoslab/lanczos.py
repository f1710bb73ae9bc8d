"""Lanczos iteration, Ritz values and relative errors.

Two routes to the same Ritz values are provided: :func:`lanczos` works on
any symmetric linear operator and a start vector, while :func:`measure_ritz`
works on a spectrum and per-eigenvalue weights y_i = (q_i^T b)^2.  For a
diagonal operator with b_i = sqrt(y_i) they agree in exact arithmetic.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.linalg import aslinearoperator

from .orthopoly import recurrence_from_discrete_measure, tridiag_eigenvalues, tridiag_kth_largest
from .spectra import Spectrum

log = logging.getLogger(__name__)

__all__ = [
    "TridiagonalMatrix",
    "RitzReport",
    "LanczosError",
    "lanczos",
    "ritz_values",
    "measure_ritz",
    "relative_error",
    "ritz_for_sparse",
    "aggregate_weights",
    "measure_tridiagonal_batch",
    "ritz_trajectory",
    "BREAKDOWN_TOL",
]

BREAKDOWN_TOL = 1e-12
NEGATIVE_SLACK = 1e-10


class LanczosError(ValueError):
    pass


@dataclass(frozen=True)
class TridiagonalMatrix:
    """T_m from m Lanczos steps: diagonal ``alpha`` and off-diagonal ``beta``.

    ``converged_early`` is set when a residual norm fell below the breakdown
    threshold; ``m`` is then the number of steps actually completed (the
    Krylov space is invariant and T holds every Ritz value it can produce).
    """

    alpha: np.ndarray
    beta: np.ndarray
    converged_early: bool = False

    @property
    def m(self) -> int:
        return len(self.alpha)

    def dense(self) -> np.ndarray:
        return np.diag(self.alpha) + np.diag(self.beta, 1) + np.diag(self.beta, -1)


@dataclass(frozen=True)
class RitzReport:
    ritz: np.ndarray
    converged_early: bool = False
    truncated_at: int | None = None

    @property
    def m(self) -> int:
        return len(self.ritz)


def _steps(apply, q, m, reorthogonalize, threshold):
    n = q.size
    Q = np.empty((m, n)) if reorthogonalize else None
    alpha, beta = [], []
    q_prev = np.zeros(n)
    early = False
    for i in range(m):
        if Q is not None:
            Q[i] = q
        v = apply(q)
        a = float(q @ v)
        alpha.append(a)
        if i == m - 1:
            break
        v = v - a * q
        if i:
            v -= beta[-1] * q_prev
        if Q is not None:
            # classical Gram-Schmidt, twice
            for _ in range(2):
                v -= Q[: i + 1].T @ (Q[: i + 1] @ v)
        b = float(np.linalg.norm(v))
        if b <= threshold:
            early = True
            break
        beta.append(b)
        q_prev, q = q, v / b
    return np.array(alpha), np.array(beta), early


def _norm_probe(apply, q, n) -> float:
    a, b, _ = _steps(apply, q, min(5, n), False, 0.0)
    return float(np.max(np.abs(tridiag_eigenvalues(a, b))))


def lanczos(op, b, m: int, reorthogonalize: bool = True, norm_estimate: float | None = None) -> TridiagonalMatrix:
    """Run m steps of the Lanczos method from start vector b.

    The recurrence is the textbook one (alpha_i = q_i^T A q_i, three-term
    update, beta_i = ||v||).  With ``reorthogonalize`` each new vector is also
    orthogonalised against all previous ones.  Iteration stops early once
    beta_i <= 1e-12 * ||op||, where ||op|| is ``norm_estimate`` or, if not
    given, the largest |Ritz value| of a 5-step probe.
    """
    A = aslinearoperator(op)
    n = A.shape[0]
    if A.shape != (n, n):
        raise LanczosError("operator must be square")
    b = np.asarray(b, dtype=float).ravel()
    if b.size != n:
        raise LanczosError(f"start vector has length {b.size}, operator has dimension {n}")
    nb = np.linalg.norm(b)
    if nb == 0:
        raise LanczosError("start vector is zero")
    if m < 1 or m > n:
        raise LanczosError(f"need 1 <= m <= n = {n}, got m={m}")
    apply = lambda x: np.asarray(A.matvec(x), dtype=float).ravel()
    q = b / nb
    if norm_estimate is None:
        norm_estimate = _norm_probe(apply, q, n)
    alpha, beta, early = _steps(apply, q, m, reorthogonalize, BREAKDOWN_TOL * norm_estimate)
    return TridiagonalMatrix(alpha, beta, early)


def ritz_values(T: TridiagonalMatrix) -> RitzReport:
    r = tridiag_eigenvalues(T.alpha, T.beta)
    return RitzReport(r, T.converged_early, T.m if T.converged_early else None)


def ritz_for_sparse(op, b, m: int, reorthogonalize: bool = True) -> RitzReport:
    return ritz_values(lanczos(op, b, m, reorthogonalize))


def aggregate_weights(spec: Spectrum, y) -> np.ndarray:
    """Sum per-eigenvalue weights over each group of repeated eigenvalues."""
    y = np.asarray(y, dtype=float).ravel()
    if y.size == len(spec.values) and y.size != spec.n:
        return y
    if y.size != spec.n:
        raise LanczosError(f"expected {spec.n} weights, got {y.size}")
    starts = np.concatenate(([0], np.cumsum(spec.mults)[:-1]))
    return np.add.reduceat(y, starts)


def measure_ritz(spec: Spectrum, y, m: int) -> RitzReport:
    """Ritz values from the discrete measure sum_j Y_j delta(lambda_j).

    ``y`` holds one non-negative weight per eigenvalue (length n, counted
    with multiplicity); weights of repeated eigenvalues are pooled.  The
    result equals the Ritz values of Lanczos on diag(spectrum) started from
    b_i = sqrt(y_i).
    """
    Y = aggregate_weights(spec, y)
    if np.any(Y < 0):
        raise LanczosError("weights must be non-negative")
    support = int(np.count_nonzero(Y > 0))
    if support == 0:
        raise LanczosError("all weights are zero")
    if m < 1 or m > support:
        raise LanczosError(f"m={m} exceeds the {support} support points of the measure")
    rec = recurrence_from_discrete_measure(spec.values, Y, m)
    early = len(rec) < m
    return RitzReport(tridiag_eigenvalues(rec.diag, rec.offdiag), early, len(rec) if early else None)


def relative_error(spec: Spectrum, report: RitzReport, i: int = 1) -> float:
    """(lambda_i - lambda_i^(m)) / (lambda_1 - lambda_n), clamped at 0 within 1e-10."""
    if spec.width <= 0:
        raise LanczosError("relative error undefined for a constant spectrum")
    if not 1 <= i <= report.m:
        raise LanczosError(f"index {i} outside 1..{report.m}")
    raw = (spec.eigenvalue(i) - report.ritz[i - 1]) / spec.width
    if raw < 0:
        if raw < -NEGATIVE_SLACK:
            log.warning("relative error %.3e below containment slack", raw)
        else:
            log.debug("clamping relative error %.3e to 0", raw)
        return 0.0
    return float(raw)


# ---------------------------------------------------------------------------
# Batched measure path used by the experiments
# ---------------------------------------------------------------------------

def measure_tridiagonal_batch(locations, masses, m: int, reorthogonalize: bool = False):
    """Lanczos on diag(locations) for many weight vectors at once.

    ``masses`` has shape (trials, N).  Returns ``alpha`` (trials, m), ``beta``
    (trials, m-1) and ``steps`` (trials,), the number of steps each trial
    completed before breakdown; entries past ``steps`` are zero.  Work is
    O(trials * N * m) without reorthogonalisation.
    """
    x = np.asarray(locations, dtype=float).ravel()
    W = np.atleast_2d(np.asarray(masses, dtype=float))
    T, N = W.shape
    if N != x.size:
        raise LanczosError("masses do not match the number of locations")
    if np.any(W < 0):
        raise LanczosError("masses must be non-negative")
    tot = W.sum(axis=1)
    if np.any(tot <= 0):
        raise LanczosError("a trial has all masses zero")
    m = min(m, N)
    thresh = BREAKDOWN_TOL * max(float(np.max(np.abs(x))), 1e-300)
    alpha = np.zeros((T, m))
    beta = np.zeros((T, max(m - 1, 0)))
    steps = np.full(T, m)
    alive = np.ones(T, dtype=bool)
    q = np.sqrt(W / tot[:, None])
    q_prev = np.zeros_like(q)
    Q = np.empty((m, T, N)) if reorthogonalize else None
    for i in range(m):
        if Q is not None:
            Q[i] = q
        v = x * q
        a = np.einsum("tn,tn->t", q, v)
        alpha[:, i] = np.where(alive, a, 0.0)
        if i == m - 1:
            break
        v -= a[:, None] * q
        if i:
            v -= beta[:, i - 1][:, None] * q_prev
        if Q is not None:
            for _ in range(2):
                c = np.einsum("itn,tn->it", Q[: i + 1], v)
                v -= np.einsum("itn,it->tn", Q[: i + 1], c)
        bnorm = np.sqrt(np.einsum("tn,tn->t", v, v))
        stop = alive & (bnorm <= thresh)
        steps[stop] = i + 1
        alive &= ~stop
        beta[:, i] = np.where(alive, bnorm, 0.0)
        safe = np.where(alive, bnorm, 1.0)
        q_prev, q = q, np.where(alive[:, None], v / safe[:, None], 0.0)
        if not alive.any():
            break
    return alpha, beta, steps


def ritz_trajectory(alpha, beta, steps, i: int = 1) -> np.ndarray:
    """lambda_i^(m) for m = 1..M from the leading blocks of each T.

    Past a trial's breakdown step the Krylov space is invariant, so the value
    at the breakdown step is carried forward.  Entries with m < i are NaN.
    """
    alpha = np.atleast_2d(alpha)
    beta = np.atleast_2d(beta)
    T, M = alpha.shape
    out = np.full((T, M), np.nan)
    steps = np.asarray(steps)
    for s in np.unique(steps):
        rows = steps == s
        vals = tridiag_kth_largest(alpha[rows, :s], beta[rows, : s - 1], i)
        out[np.ix_(rows, np.arange(s))] = vals
        if s < M:
            out[rows, s:] = vals[:, -1:]
    return out
