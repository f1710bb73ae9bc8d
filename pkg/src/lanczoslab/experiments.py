"""Random-initialisation Lanczos experiments and their summary statistics.

One experiment draws ``trials`` start vectors, runs ``m_max`` Lanczos steps
for each, and records the relative error of the i-th Ritz value for every
m <= m_max (Ritz values of every leading block of T_{m_max}).  Errors are
reported scaled by m^2.

Two execution paths give the same numbers in exact arithmetic:

* ``matrix``: Lanczos with full reorthogonalisation on diag(spectrum) from
  b ~ U(S^{n-1}); O(n m^2) per trial.
* ``measure``: the Stieltjes/Lanczos recurrence of sum_i Y_i delta(lambda_i)
  with Y_i ~ chi^2_1, repeated eigenvalues pooled; O(n m) per trial.

Trial t draws its normals from a Philox (counter-based) stream keyed by
(seed, t), so results do not depend on chunking or thread count.  With the
same deviates z the two paths use b = z/|z| and Y = z^2 respectively.
"""
from __future__ import annotations

import json
import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import __version__
from .bounds import main_upper_bound
from .lanczos import (LanczosError, NEGATIVE_SLACK, lanczos, measure_tridiagonal_batch,
                      ritz_trajectory)
from .orthopoly import ThreeTermRecurrence, largest_zero, recurrence_from_density
from .spectra import SPECTRUM_KINDS, Spectrum, diagonal_operator, make_spectrum

log = logging.getLogger(__name__)

__all__ = [
    "ExperimentConfig",
    "AggregateStats",
    "AuditReport",
    "trial_normals",
    "trial_errors",
    "aggregate",
    "run_experiment",
    "compare_predictor",
    "bound_audit",
    "limiting_recurrence",
    "LIMITING_DENSITIES",
    "CSV_HEADER",
]

CSV_HEADER = "m,mean,median,q1,q3,whisker_low,whisker_high,outliers"
MEASURE_PATH_ABOVE = 100_000


@dataclass(frozen=True)
class ExperimentConfig:
    spectrum_kind: str
    n: int | None = None
    m_max: int = 100
    trials: int = 100
    seed: int = 0
    eigen_index: int = 1
    path: str | None = None  # "matrix", "measure", or None for the size-based default
    hard_m: int | None = None  # m parameter of the hard-instance spectra
    spectrum_path: str | None = None
    threads: int | None = None

    def __post_init__(self):
        kind = self.spectrum_kind.replace("-", "_")
        object.__setattr__(self, "spectrum_kind", kind)
        if kind not in SPECTRUM_KINDS:
            raise ValueError(f"unknown spectrum kind {self.spectrum_kind!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.m_max < 1:
            raise ValueError("m_max must be >= 1")
        if self.eigen_index < 1 or self.eigen_index > self.m_max:
            raise ValueError("eigen_index must lie in 1..m_max")
        if self.path not in (None, "matrix", "measure"):
            raise ValueError(f"unknown path {self.path!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def spectrum(self) -> Spectrum:
        return make_spectrum(self.spectrum_kind, self.n, self.hard_m, self.spectrum_path)

    def resolved_path(self, n: int) -> str:
        if self.path is not None:
            return self.path
        return "measure" if n > MEASURE_PATH_ABOVE else "matrix"

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class AggregateStats:
    """Per-m box statistics of m^2 * relative error (index m - 1 holds iteration m)."""

    m: np.ndarray
    mean: np.ndarray
    median: np.ndarray
    q1: np.ndarray
    q3: np.ndarray
    whisker_low: np.ndarray
    whisker_high: np.ndarray
    outliers: np.ndarray
    raw: np.ndarray | None = field(default=None, repr=False)  # unscaled relative errors, trials x m_max

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        for j in range(len(self.m)):
            row = [self.mean[j], self.median[j], self.q1[j], self.q3[j], self.whisker_low[j], self.whisker_high[j]]
            lines.append(f"{int(self.m[j])}," + ",".join(f"{v:.17g}" for v in row) + f",{int(self.outliers[j])}")
        return "\n".join(lines) + "\n"

    def row(self, m: int) -> dict:
        j = int(np.searchsorted(self.m, m))
        return {k: getattr(self, k)[j] for k in ("mean", "median", "q1", "q3", "whisker_low", "whisker_high", "outliers")}


def trial_normals(seed: int, t: int, n: int) -> np.ndarray:
    gen = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, t])))
    return gen.standard_normal(n)


def _chunk_size(n: int) -> int:
    return int(max(1, min(16, 40_000_000 // max(n, 1))))


def _pool(spec: Spectrum, y: np.ndarray) -> np.ndarray:
    if len(spec.values) == spec.n:
        return y
    starts = np.concatenate(([0], np.cumsum(spec.mults)[:-1]))
    return np.add.reduceat(y, starts, axis=-1)


def _measure_chunk(spec, cfg, ts):
    Z = np.stack([trial_normals(cfg.seed, t, spec.n) for t in ts])
    Y = _pool(spec, Z * Z)
    m = min(cfg.m_max, len(spec.values))
    a, b, steps = measure_tridiagonal_batch(spec.values, Y, m)
    return ritz_trajectory(a, b, steps, cfg.eigen_index)


def _matrix_chunk(spec, cfg, ts):
    eigs = spec.expanded()
    op = diagonal_operator(eigs)
    norm = float(np.max(np.abs(eigs)))
    rows = []
    for t in ts:
        T = lanczos(op, trial_normals(cfg.seed, t, spec.n), cfg.m_max, True, norm)
        rows.append(ritz_trajectory(T.alpha[None], T.beta[None], [T.m], cfg.eigen_index)[0])
    return np.array(rows)


def trial_errors(cfg: ExperimentConfig, spec: Spectrum | None = None) -> np.ndarray:
    """Relative errors, shape (trials, m_max); NaN where m < eigen_index."""
    spec = cfg.spectrum() if spec is None else spec
    if spec.width <= 0:
        raise LanczosError("relative error undefined for a constant spectrum")
    if cfg.m_max > spec.n:
        raise ValueError(f"m_max={cfg.m_max} exceeds n={spec.n}")
    path = cfg.resolved_path(spec.n)
    work = _measure_chunk if path == "measure" else _matrix_chunk
    C = _chunk_size(spec.n)
    chunks = [range(s, min(s + C, cfg.trials)) for s in range(0, cfg.trials, C)]
    threads = cfg.threads or os.cpu_count() or 1
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(lambda ts: work(spec, cfg, ts), chunks))
    else:
        parts = [work(spec, cfg, ts) for ts in chunks]
    ritz = np.vstack(parts)
    if ritz.shape[1] < cfg.m_max:
        # fewer distinct eigenvalues than m_max: the last Ritz set is exact from then on
        pad = np.repeat(ritz[:, -1:], cfg.m_max - ritz.shape[1], axis=1)
        ritz = np.hstack([ritz, pad])
    err = (spec.eigenvalue(cfg.eigen_index) - ritz) / spec.width
    low = err < 0
    if np.any(low):
        worst = float(np.nanmin(err))
        (log.warning if worst < -NEGATIVE_SLACK else log.debug)("clamping %d negative errors (min %.3e)", int(low.sum()), worst)
        err = np.where(low, 0.0, err)
    return err


def _box(values: np.ndarray):
    v = values[np.isfinite(values)]
    if v.size == 0:
        return (math.nan,) * 6 + (0,)
    q1, med, q3 = np.quantile(v, [0.25, 0.5, 0.75])
    iqr = q3 - q1
    lo_fence, hi_fence = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    inside = v[(v >= lo_fence) & (v <= hi_fence)]
    return (float(v.mean()), float(med), float(q1), float(q3),
            float(inside.min()), float(inside.max()), int(v.size - inside.size))


def aggregate(errors: np.ndarray, keep_raw: bool = True) -> AggregateStats:
    """Box statistics of m^2 * error per column (type-7 quantiles, 1.5 IQR whiskers)."""
    errors = np.atleast_2d(errors)
    M = errors.shape[1]
    m = np.arange(1, M + 1)
    scaled = errors * (m**2)[None, :]
    cols = list(zip(*[_box(scaled[:, j]) for j in range(M)]))
    return AggregateStats(m, *(np.array(c, dtype=float) for c in cols[:6]), np.array(cols[6], dtype=np.int64),
                          raw=errors if keep_raw else None)


def run_experiment(cfg: ExperimentConfig, keep_raw: bool = True) -> AggregateStats:
    return aggregate(trial_errors(cfg), keep_raw)


# ---------------------------------------------------------------------------
# Comparison against the largest-zero predictor
# ---------------------------------------------------------------------------

# kind -> (a, b, endpoint powers) of the limiting density, as (b - x)^p (x - a)^q on [a, b]
LIMITING_DENSITIES = {
    "lap": (0.0, 4.0, (-0.5, -0.5)),
    "arcsine": (0.0, 4.0, (-0.5, -0.5)),
    "unif": (0.0, 1.0, (0.0, 0.0)),
    "uniform": (0.0, 1.0, (0.0, 0.0)),
    "semi": (-1.0, 1.0, (0.5, 0.5)),
    "semicircle": (-1.0, 1.0, (0.5, 0.5)),
}


def limiting_recurrence(kind: str, K: int, a: float | None = None, b: float | None = None):
    """Recurrence of a named limiting density, returned with its support (rec, a, b)."""
    try:
        a0, b0, powers = LIMITING_DENSITIES[kind]
    except KeyError:
        raise ValueError(f"no limiting density for {kind!r}; known: {', '.join(LIMITING_DENSITIES)}") from None
    a = a0 if a is None else a
    b = b0 if b is None else b
    return recurrence_from_density(lambda x: 1.0, a, b, K, endpoint_powers=powers), a, b


def compare_predictor(cfg: ExperimentConfig, rec: ThreeTermRecurrence, a: float, b: float,
                      stats: AggregateStats | None = None) -> list[dict]:
    """Empirical mean relative error next to (b - xi(m))/(b - a) for each m."""
    if stats is None or stats.raw is None:
        stats = run_experiment(cfg)
    emp = np.nanmean(stats.raw, axis=0)
    rows = []
    for m in range(1, min(len(emp), len(rec)) + 1):
        pred = (b - largest_zero(rec, m)) / (b - a)
        rows.append({"m": m, "empirical": float(emp[m - 1]), "predictor": pred,
                     "ratio": float(emp[m - 1]) / pred if pred > 0 else math.nan})
    return rows


# ---------------------------------------------------------------------------
# Upper-bound audit
# ---------------------------------------------------------------------------

@dataclass
class AuditReport:
    config: dict
    m_range: tuple[int, int]
    violations: list[dict]

    @property
    def ok(self) -> bool:
        return not self.violations


def bound_audit(cfg: ExperimentConfig, stats: AggregateStats | None = None, m_min: int = 10) -> AuditReport:
    """Check the mean error at each m in [10, m_max] against main_upper_bound(n, m, 1)."""
    n = cfg.spectrum().n if cfg.n is None else cfg.n
    if n < 100 or cfg.m_max < m_min:
        raise ValueError("audit needs n >= 100 and m_max >= 10")
    if stats is None or stats.raw is None:
        stats = run_experiment(cfg)
    violations = []
    for m in range(m_min, cfg.m_max + 1):
        col = stats.raw[:, m - 1]
        mean = float(np.nanmean(col))
        bound = main_upper_bound(n, m, 1)
        if mean > bound:
            violations.append({"m": m, "mean": mean, "bound": bound, "trials": col.tolist()})
    return AuditReport(cfg.to_dict(), (m_min, cfg.m_max), violations)


def manifest(cfg: ExperimentConfig, outputs: dict, wall_clock: float, argv=None) -> dict:
    return {
        "argv": list(argv) if argv is not None else None,
        "config": cfg.to_dict(),
        "version": __version__,
        "outputs": outputs,
        "wall_clock_seconds": wall_clock,
        "created": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }
