"""Orthogonal polynomials, Gauss quadrature and symmetric tridiagonal eigenvalues.

Everything here works with the Jacobi matrix of a three-term recurrence:
quadrature nodes, largest zeros and Ritz values are all eigenvalues of a
symmetric tridiagonal matrix, computed by Sturm-sequence bisection.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import special

__all__ = [
    "QuadratureRule",
    "ThreeTermRecurrence",
    "JacobiParams",
    "ConvergenceError",
    "chebyshev_T",
    "legendre_eval",
    "gauss_legendre",
    "gauss_rule",
    "jacobi_eval",
    "jacobi_explicit",
    "jacobi_norm_sq",
    "jacobi_max_abs",
    "jacobi_deriv",
    "jacobi_recurrence",
    "legendre_recurrence",
    "recurrence_from_discrete_measure",
    "recurrence_from_density",
    "largest_zero",
    "tridiag_eigenvalues",
    "tridiag_kth_largest",
    "sturm_count",
]


class ConvergenceError(RuntimeError):
    """An iterative construction did not reach its stopping criterion."""


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray

    def __len__(self) -> int:
        return len(self.nodes)

    def integrate(self, f: Callable[[np.ndarray], np.ndarray]) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


@dataclass(frozen=True)
class ThreeTermRecurrence:
    """Jacobi-matrix coefficients of the orthonormal polynomials of a measure.

    ``diag[k]`` and ``offdiag[k]`` are the recurrence coefficients a_k and
    b_{k+1} in ``b_{k+1} p_{k+1}(x) = (x - a_k) p_k(x) - b_k p_{k-1}(x)``;
    ``total_mass`` is the measure of the whole support, so ``p_0 = 1/sqrt(total_mass)``.
    """

    diag: np.ndarray
    offdiag: np.ndarray
    total_mass: float = 1.0

    def __post_init__(self):
        if len(self.offdiag) != max(len(self.diag) - 1, 0):
            raise ValueError("offdiag must have exactly len(diag) - 1 entries")

    def __len__(self) -> int:
        return len(self.diag)

    def truncate(self, k: int) -> "ThreeTermRecurrence":
        return ThreeTermRecurrence(self.diag[:k], self.offdiag[: max(k - 1, 0)], self.total_mass)

    def jacobi_matrix(self, m: int | None = None) -> np.ndarray:
        m = len(self) if m is None else m
        d = self.diag[:m]
        e = self.offdiag[: m - 1]
        return np.diag(d) + np.diag(e, 1) + np.diag(e, -1)


@dataclass(frozen=True)
class JacobiParams:
    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > -1 and self.beta > -1):
            raise ValueError(f"Jacobi weight needs alpha, beta > -1, got {self.alpha}, {self.beta}")


# ---------------------------------------------------------------------------
# Symmetric tridiagonal eigenvalues (Sturm bisection)
# ---------------------------------------------------------------------------

def _gershgorin(diag: np.ndarray, offdiag: np.ndarray) -> tuple[float, float]:
    a = np.abs(offdiag)
    r = np.zeros_like(diag)
    r[:-1] += a
    r[1:] += a
    lo, hi = float(np.min(diag - r)), float(np.max(diag + r))
    pad = 2 * np.finfo(float).eps * max(abs(lo), abs(hi), 1.0)
    return lo - pad, hi + pad


def sturm_count(diag, offdiag, x) -> np.ndarray:
    """Number of eigenvalues strictly below each shift in ``x``.

    Uses the LDL^T pivots of ``T - x I``; a zero pivot is nudged to a tiny
    negative number, which is the usual convention and counts it as negative.
    """
    diag = np.asarray(diag, dtype=float)
    offdiag = np.asarray(offdiag, dtype=float)
    x = np.asarray(x, dtype=float)
    tiny = np.finfo(float).tiny
    b2 = offdiag**2
    count = np.zeros(x.shape, dtype=np.int64)
    d = diag[0] - x
    with np.errstate(over="ignore"):
        for k in range(len(diag)):
            if k:
                d = (diag[k] - x) - b2[k - 1] / d
            d = np.where(d == 0.0, -tiny, d)
            count += d < 0
    return count


def _bisect(lo, hi, ready: Callable[[np.ndarray], np.ndarray], max_iter: int = 200):
    """Vectorised bisection: shrink [lo, hi] keeping ready(hi) true, ready(lo) false."""
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        active = (mid > lo) & (mid < hi)
        if not active.any():
            break
        ok = ready(mid)
        hi = np.where(active & ok, mid, hi)
        lo = np.where(active & ~ok, mid, lo)
    return 0.5 * (lo + hi)


def tridiag_eigenvalues(diag: Sequence[float], offdiag: Sequence[float]) -> np.ndarray:
    """All eigenvalues of a symmetric tridiagonal matrix, descending.

    Every eigenvalue is bisected on its own Sturm-count bracket until the
    bracket cannot be halved any further in double precision.
    """
    diag = np.asarray(diag, dtype=float)
    offdiag = np.asarray(offdiag, dtype=float)
    n = len(diag)
    if n == 0:
        return np.empty(0)
    if len(offdiag) != n - 1:
        raise ValueError("offdiag must have len(diag) - 1 entries")
    if n == 1:
        return diag.copy()
    lo, hi = _gershgorin(diag, offdiag)
    # j-th smallest eigenvalue (1-based) is the smallest x with count(x) >= j
    j = np.arange(1, n + 1)
    vals = _bisect(np.full(n, lo), np.full(n, hi), lambda x: sturm_count(diag, offdiag, x) >= j)
    return vals[::-1].copy()


def tridiag_kth_largest(alpha: np.ndarray, beta: np.ndarray, k: int = 1, sizes=None) -> np.ndarray:
    """k-th largest eigenvalue of leading principal submatrices, batched.

    ``alpha`` has shape (..., M) and ``beta`` shape (..., M-1).  The result has
    shape (..., len(sizes)) where entry j is the k-th largest eigenvalue of the
    leading ``sizes[j]`` x ``sizes[j]`` block (NaN when ``sizes[j] < k``).  One
    pivot sweep serves every block size at once, since the Sturm sequence of a
    leading block is a prefix of the full one.
    """
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    M = alpha.shape[-1]
    sizes = np.arange(1, M + 1) if sizes is None else np.asarray(sizes)
    batch = alpha.shape[:-1]
    a2 = alpha.reshape(-1, M)
    b2 = beta.reshape(a2.shape[0], M - 1) ** 2
    r = np.zeros_like(a2)
    r[:, :-1] += np.sqrt(b2)
    r[:, 1:] += np.sqrt(b2)
    lo = np.min(a2 - r, axis=1)
    hi = np.max(a2 + r, axis=1)
    pad = 2 * np.finfo(float).eps * np.maximum(np.maximum(abs(lo), abs(hi)), 1.0)
    lo = np.repeat((lo - pad)[:, None], len(sizes), axis=1)
    hi = np.repeat((hi + pad)[:, None], len(sizes), axis=1)
    target = sizes - k + 1  # index from the bottom, 1-based
    tiny = np.finfo(float).tiny
    top = int(sizes.max())

    def ready(x):
        count = np.zeros(x.shape, dtype=np.int64)
        d = a2[:, :1] - x
        with np.errstate(over="ignore"):
            for i in range(top):
                if i:
                    d = (a2[:, i : i + 1] - x) - b2[:, i - 1 : i] / d
                d = np.where(d == 0.0, -tiny, d)
                count += (d < 0) & (i < sizes)
        return count >= target

    out = _bisect(lo, hi, ready)
    out = np.where(sizes >= k, out, np.nan)
    return out.reshape(batch + (len(sizes),))


# ---------------------------------------------------------------------------
# Classical polynomials
# ---------------------------------------------------------------------------

def chebyshev_T(k: int, x: float) -> float:
    """Chebyshev polynomial of the first kind.

    Three-term recurrence inside [-1, 1]; outside, the closed form
    ``((x - s)^k + (x + s)^k) / 2`` with ``s = sqrt(x^2 - 1)``, which avoids the
    cancellation the recurrence suffers for large |x|.
    """
    if k < 0:
        raise ValueError("degree must be non-negative")
    x = float(x)
    if abs(x) <= 1.0:
        t0, t1 = 1.0, x
        if k == 0:
            return t0
        for _ in range(k - 1):
            t0, t1 = t1, 2 * x * t1 - t0
        return t1
    s = math.sqrt(x * x - 1.0)
    return 0.5 * ((x - s) ** k + (x + s) ** k)


def legendre_eval(k: int, x):
    """Legendre P_k and its derivative at x (arrays allowed), P_k(1) = 1."""
    x = np.asarray(x, dtype=float)
    p0, p1 = np.ones_like(x), x.copy()
    if k == 0:
        return p0, np.zeros_like(x)
    for j in range(2, k + 1):
        p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
    # derivative from (1 - x^2) P_k' = k (P_{k-1} - x P_k)
    with np.errstate(divide="ignore", invalid="ignore"):
        dp = k * (p0 - x * p1) / (1 - x * x)
    edge = np.abs(x) == 1.0
    if np.any(edge):
        dp = np.where(edge, np.sign(x) ** (k + 1) * k * (k + 1) / 2, dp)
    return p1, dp


def jacobi_recurrence(K: int, p: JacobiParams) -> ThreeTermRecurrence:
    """Orthonormal recurrence of the Jacobi weight (1-x)^alpha (1+x)^beta."""
    a, b = p.alpha, p.beta
    k = np.arange(K, dtype=float)
    s = 2 * k + a + b
    with np.errstate(divide="ignore", invalid="ignore"):
        diag = (b * b - a * a) / (s * (s + 2))
    diag = np.where(np.isfinite(diag), diag, (b - a) / (a + b + 2))
    j = np.arange(1, K, dtype=float)
    sj = 2 * j + a + b
    with np.errstate(divide="ignore", invalid="ignore"):
        bsq = 4 * j * (j + a) * (j + b) * (j + a + b) / (sj**2 * (sj + 1) * (sj - 1))
    if K > 1:
        # k = 1 with the (1 + a + b) factor cancelled; exact even when a + b = -1
        bsq[0] = 4 * (1 + a) * (1 + b) / ((2 + a + b) ** 2 * (3 + a + b))
    mass = math.exp((a + b + 1) * math.log(2) + math.lgamma(a + 1) + math.lgamma(b + 1) - math.lgamma(a + b + 2))
    return ThreeTermRecurrence(diag, np.sqrt(bsq), mass)


def legendre_recurrence(K: int) -> ThreeTermRecurrence:
    return jacobi_recurrence(K, JacobiParams(0.0, 0.0))


def gauss_rule(rec: ThreeTermRecurrence, k: int | None = None) -> QuadratureRule:
    """Gauss rule of the measure behind ``rec`` (Golub-Welsch).

    Nodes are the Jacobi-matrix eigenvalues; the weights use the Christoffel
    form ``w_j = 1 / sum_i p_i(x_j)^2`` with orthonormal p_i, which needs no
    eigenvectors.
    """
    k = len(rec) if k is None else k
    if k < 1 or k > len(rec):
        raise ValueError(f"rule size {k} outside 1..{len(rec)}")
    x = tridiag_eigenvalues(rec.diag[:k], rec.offdiag[: k - 1])
    p_prev = np.zeros_like(x)
    p = np.full_like(x, 1.0 / math.sqrt(rec.total_mass))
    acc = p * p
    for i in range(k - 1):
        p_next = ((x - rec.diag[i]) * p - (rec.offdiag[i - 1] if i else 0.0) * p_prev) / rec.offdiag[i]
        p_prev, p = p, p_next
        acc += p * p
    return QuadratureRule(x, 1.0 / acc)


def gauss_legendre(k: int) -> QuadratureRule:
    """k-point Gauss-Legendre rule on [-1, 1], nodes descending.

    Golub-Welsch nodes, then one Newton step on the explicit Legendre
    polynomial per node; weights ``2 / ((1 - x^2) P_k'(x)^2)``.
    """
    if k < 1:
        raise ValueError("need at least one node")
    rec = legendre_recurrence(k)
    x = tridiag_eigenvalues(rec.diag, rec.offdiag)
    p, dp = legendre_eval(k, x)
    x = x - p / dp
    _, dp = legendre_eval(k, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    return QuadratureRule(x, w)


# ---------------------------------------------------------------------------
# Jacobi polynomials
# ---------------------------------------------------------------------------

def jacobi_eval(k: int, p: JacobiParams, x):
    """P_k^{(alpha, beta)}(x), classical normalisation, by the three-term recurrence."""
    a, b = p.alpha, p.beta
    x = np.asarray(x, dtype=float)
    p0 = np.ones_like(x)
    if k == 0:
        return p0 if p0.ndim else float(p0)
    p1 = (a + 1) + (a + b + 2) * (x - 1) / 2
    for n in range(2, k + 1):
        s = 2 * n + a + b
        c1 = 2 * n * (n + a + b) * (s - 2)
        c2 = (s - 1) * (s * (s - 2) * x + a * a - b * b)
        c3 = 2 * (n + a - 1) * (n + b - 1) * s
        p0, p1 = p1, (c2 * p1 - c3 * p0) / c1
    return p1 if p1.ndim else float(p1)


def jacobi_explicit(k: int, p: JacobiParams, x: float) -> float:
    """Gamma-sum form of P_k^{(alpha, beta)}; slow, for cross-checks at small k."""
    a, b = p.alpha, p.beta
    if k == 0:
        return 1.0
    pre = math.lgamma(k + a + 1) - math.lgamma(k + 1) - math.lgamma(k + a + b + 1)
    t = (x - 1) / 2
    total = 0.0
    for i in range(k + 1):
        lg = pre + math.lgamma(k + i + a + b + 1) - math.lgamma(i + a + 1)
        total += math.comb(k, i) * math.exp(lg) * t**i
    return total


def jacobi_norm_sq(k: int, p: JacobiParams) -> float:
    """Squared norm of P_k^{(alpha, beta)} under (1-x)^alpha (1+x)^beta."""
    a, b = p.alpha, p.beta
    if k == 0:
        lg = (a + b + 1) * math.log(2) + math.lgamma(a + 1) + math.lgamma(b + 1) - math.lgamma(a + b + 2)
        return math.exp(lg)
    lg = ((a + b + 1) * math.log(2) + math.lgamma(k + a + 1) + math.lgamma(k + b + 1)
          - math.lgamma(k + 1) - math.lgamma(k + a + b + 1))
    return math.exp(lg) / (2 * k + a + b + 1)


def jacobi_max_abs(k: int, p: JacobiParams) -> float:
    """max |P_k^{(alpha, beta)}| on [-1, 1]; only valid for max(alpha, beta) >= -1/2."""
    a, b = p.alpha, p.beta
    if max(a, b) < -0.5:
        raise ValueError("maximum formula requires max(alpha, beta) >= -1/2")
    end = lambda c: math.exp(math.lgamma(k + c + 1) - math.lgamma(k + 1) - math.lgamma(c + 1))
    return max(end(a), end(b))


def jacobi_deriv(k: int, p: JacobiParams, x):
    if k == 0:
        return np.zeros_like(np.asarray(x, dtype=float)) if np.ndim(x) else 0.0
    shifted = JacobiParams(p.alpha + 1, p.beta + 1)
    return (k + p.alpha + p.beta + 1) / 2 * jacobi_eval(k - 1, shifted, x)


# ---------------------------------------------------------------------------
# Recurrences from measures
# ---------------------------------------------------------------------------

def recurrence_from_discrete_measure(locations, masses, K: int | None = None,
                                     reorthogonalize: bool = True) -> ThreeTermRecurrence:
    """Stieltjes procedure for the measure ``sum_j masses[j] * delta(locations[j])``.

    Repeated locations are merged first.  The returned recurrence has
    ``min(K, #distinct support points)`` terms, and is cut shorter if the
    procedure breaks down numerically.  The vector form used here (orthonormal
    polynomial values scaled by sqrt(mass)) is Lanczos on diag(locations).
    """
    x = np.asarray(locations, dtype=float).ravel()
    w = np.asarray(masses, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("empty measure")
    if x.shape != w.shape:
        raise ValueError("locations and masses differ in length")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValueError("masses must be finite and non-negative")
    keep = w > 0
    if not keep.any():
        raise ValueError("all masses are zero")
    x, w = x[keep], w[keep]
    x, inv = np.unique(x, return_inverse=True)
    w = np.bincount(inv, weights=w)
    N = len(x)
    K = N if K is None else min(K, N)
    total = float(w.sum())
    scale = max(float(np.max(np.abs(x))), 1e-300)

    q_prev = np.zeros(N)
    q = np.sqrt(w / total)
    Q = np.empty((K, N)) if reorthogonalize else None
    diag, off = [], []
    for i in range(K):
        if Q is not None:
            Q[i] = q
        v = x * q
        a = float(q @ v)
        diag.append(a)
        if i == K - 1:
            break
        v -= a * q
        if i:
            v -= off[-1] * q_prev
        if Q is not None:
            for _ in range(2):
                v -= Q[: i + 1].T @ (Q[: i + 1] @ v)
        beta = float(np.linalg.norm(v))
        if beta <= 1e-12 * scale:
            break
        off.append(beta)
        q_prev, q = q, v / beta
    return ThreeTermRecurrence(np.array(diag), np.array(off), total)


def _grid(N: int, a: float, b: float, powers: tuple[float, float]):
    """N-point Gauss grid on [a, b] for the weight (b - x)^p (x - a)^q."""
    p, q = powers
    if p == 0 and q == 0:
        t, w = special.roots_legendre(N)
    else:
        t, w = special.roots_jacobi(N, p, q)
    half = (b - a) / 2
    return a + half * (t + 1), w * half ** (1 + p + q)


def recurrence_from_density(sigma: Callable[[np.ndarray], np.ndarray], a: float, b: float, K: int,
                            N: int | None = None, endpoint_powers: tuple[float, float] = (0.0, 0.0),
                            tol: float = 1e-10, max_doublings: int = 8) -> ThreeTermRecurrence:
    """Recurrence of the density ``sigma(x) (b - x)^p (x - a)^q`` on [a, b].

    The density is sampled on a Gauss grid (Legendre when both endpoint powers
    are zero, Jacobi otherwise, so integrable endpoint singularities are
    absorbed into the grid) and the discrete measure goes through the
    Stieltjes procedure.  N is doubled until the leading K coefficients move
    by less than ``tol``.
    """
    if not a < b:
        raise ValueError("need a < b")
    N = max(2 * K, 64) if N is None else N
    if K > N:
        raise ValueError("K must not exceed N")
    prev = None
    for _ in range(max_doublings + 1):
        x, w = _grid(N, a, b, endpoint_powers)
        s = np.asarray(sigma(x), dtype=float) * np.ones_like(x)
        if np.any(s < 0):
            raise ValueError("density is negative on the grid")
        rec = recurrence_from_discrete_measure(x, w * s, K)
        if prev is not None and len(prev) == len(rec):
            change = max(np.max(np.abs(rec.diag - prev.diag)),
                         np.max(np.abs(rec.offdiag - prev.offdiag), initial=0.0))
            if change < tol * max(1.0, abs(a), abs(b)):
                return rec
        prev = rec
        N *= 2
    raise ConvergenceError(f"recurrence did not settle to {tol:g} within {max_doublings} doublings")


def largest_zero(rec: ThreeTermRecurrence, m: int) -> float:
    """Largest zero of the degree-m orthogonal polynomial of ``rec``."""
    if m < 1 or m > len(rec):
        raise ValueError(f"m={m} outside 1..{len(rec)}")
    out = tridiag_kth_largest(rec.diag[:m], rec.offdiag[: m - 1], 1, sizes=[m])
    return float(out[0])
