"""Benchmark and hard-instance spectra, plus the 1-D Dirichlet Laplacian operators.

A symmetric matrix enters every computation here only through its
eigenvalues (the Lanczos error is invariant under orthogonal similarity), so
a :class:`Spectrum` is just sorted distinct values with multiplicities.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.sparse.linalg import LinearOperator

from .orthopoly import gauss_legendre

__all__ = [
    "Spectrum",
    "lap_spectrum",
    "unif_spectrum",
    "semi_spectrum",
    "log_spectrum",
    "legendre_hard_instance",
    "jacobi_hard_instance",
    "jacobi_instance_params",
    "laplacian_operator",
    "laplacian_inverse_operator",
    "diagonal_operator",
    "make_spectrum",
    "SPECTRUM_KINDS",
]


@dataclass(frozen=True)
class Spectrum:
    """Distinct eigenvalues (strictly descending) with positive multiplicities."""

    values: np.ndarray
    mults: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        k = np.asarray(self.mults, dtype=np.int64)
        if v.ndim != 1 or v.shape != k.shape or v.size == 0:
            raise ValueError("values and mults must be equal-length non-empty vectors")
        if np.any(np.diff(v) >= 0):
            raise ValueError("values must be strictly descending")
        if np.any(k < 1):
            raise ValueError("multiplicities must be >= 1")
        v.flags.writeable = False
        k.flags.writeable = False
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "mults", k)

    @property
    def n(self) -> int:
        return int(self.mults.sum())

    @property
    def lam1(self) -> float:
        return float(self.values[0])

    @property
    def lamn(self) -> float:
        return float(self.values[-1])

    @property
    def width(self) -> float:
        return self.lam1 - self.lamn

    def expanded(self) -> np.ndarray:
        """All n eigenvalues, descending, repeated by multiplicity."""
        return np.repeat(self.values, self.mults)

    def eigenvalue(self, i: int) -> float:
        """lambda_i counted with multiplicity, 1-based."""
        if not 1 <= i <= self.n:
            raise IndexError(f"eigenvalue index {i} outside 1..{self.n}")
        return float(self.values[np.searchsorted(np.cumsum(self.mults), i)])

    def affine(self, scale: float, shift: float) -> "Spectrum":
        if scale == 0:
            raise ValueError("scale must be non-zero")
        v = scale * self.values + shift
        if scale > 0:
            return Spectrum(v, self.mults)
        return Spectrum(v[::-1], self.mults[::-1])

    @classmethod
    def from_eigenvalues(cls, eigs) -> "Spectrum":
        v, k = np.unique(np.asarray(eigs, dtype=float), return_counts=True)
        return cls(v[::-1], k[::-1])

    def to_text(self) -> str:
        return "".join(f"{v:.17g} {k}\n" for v, k in zip(self.values, self.mults))

    @classmethod
    def from_text(cls, text: str) -> "Spectrum":
        vals, mults = [], []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected 'value multiplicity'")
            vals.append(float(parts[0]))
            mults.append(int(parts[1]))
        return cls(np.array(vals), np.array(mults))

    def save(self, path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def load(cls, path) -> "Spectrum":
        return cls.from_text(Path(path).read_text())


def _distinct(values) -> Spectrum:
    return Spectrum(np.asarray(values, dtype=float), np.ones(len(values), dtype=np.int64))


def lap_spectrum(n: int) -> Spectrum:
    """Eigenvalues 2 + 2 cos(i pi / (n + 1)) of the 1-D Dirichlet Laplacian."""
    if n < 1:
        raise ValueError("n must be >= 1")
    i = np.arange(1, n + 1)
    return _distinct(2 + 2 * np.cos(i * np.pi / (n + 1)))


def unif_spectrum(n: int) -> Spectrum:
    if n < 2:
        raise ValueError("n must be >= 2")
    i = np.arange(1, n + 1)
    return _distinct((n - i) / (n - 1))


def _semicircle_cdf(x):
    return 0.5 + (x * np.sqrt(1 - x * x) + np.arcsin(x)) / np.pi


def semi_spectrum(n: int) -> Spectrum:
    """Quantiles (n - i)/(n - 1) of the semicircle law on [-1, 1].

    The CDF is inverted by 50 bisection steps, which pins every value to
    2^-49 and never stalls where the density vanishes at the edges.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    target = (n - np.arange(1, n + 1)) / (n - 1)
    lo = np.full(n, -1.0)
    hi = np.full(n, 1.0)
    for _ in range(50):
        mid = 0.5 * (lo + hi)
        above = _semicircle_cdf(mid) >= target
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
    x = 0.5 * (lo + hi)
    x[0], x[-1] = 1.0, -1.0
    if not np.all(np.abs(_semicircle_cdf(x) - target) < 1e-12):
        raise ArithmeticError("semicircle CDF inversion failed")
    return _distinct(x)


def log_spectrum(n: int) -> Spectrum:
    """1 - ((n + 1 - i)/n)^(ln ln n / ln n); accumulates like (1-x)^(ln n / ln ln n - 1) at the top."""
    if n < 16:
        raise ValueError("log spectrum needs n >= 16")
    c = math.log(math.log(n)) / math.log(n)
    j = np.arange(1, n + 1)  # j = n + 1 - i, so j = 1 is the largest eigenvalue
    return _distinct(1 - np.exp(c * np.log(j / n)))


def legendre_hard_instance(n: int, m: int) -> Spectrum:
    """Zeros of the degree-2m Legendre polynomial, the top one simple.

    The other 2m - 1 zeros share the remaining n - 1 slots evenly; leftover
    slots go one each to the smallest zeros.
    """
    if m < 2 or n < 2 * m:
        raise ValueError(f"need n >= 2m >= 4, got n={n}, m={m}")
    x = gauss_legendre(2 * m).nodes
    q, r = divmod(n - 1, 2 * m - 1)
    mults = np.full(2 * m, q, dtype=np.int64)
    mults[0] = 1
    if r:
        mults[-r:] += 1
    return Spectrum(x, mults)


def jacobi_instance_params(n: int, m: int) -> tuple[int, int]:
    """(l, k) of the Theta(ln n) lower-bound construction."""
    ln = math.log(n)
    ell = math.floor(0.2495 * ln / math.log(ln))
    k = math.floor(m ** (4.004 * ell)) if ell >= 1 else 0
    return ell, k


def jacobi_hard_instance(n: int, m: int) -> Spectrum:
    """Values 1 - 2 (1 - j/k)^(1/l), j = 1..k, with near-equal multiplicities."""
    if n < 16:
        raise ValueError("n too small for the construction")
    ell, k = jacobi_instance_params(n, m)
    if ell < 1 or k < 1 or k > n:
        raise ValueError(f"incompatible parameters at this scale: l={ell}, k={k}, n={n}")
    x = np.arange(k, 0, -1) / k
    vals = 1 - 2 * (1 - x) ** (1.0 / ell)
    q, r = divmod(n, k)
    mults = np.full(k, q, dtype=np.int64)
    if r:
        mults[-r:] += 1
    return Spectrum(vals, mults)


def _thomas_factor(n: int):
    # LU of tridiag(-1, 2, -1): only the modified super-diagonal is needed
    c = np.empty(n)
    d = np.empty(n)
    d[0] = 2.0
    c[0] = -1.0 / 2.0
    for i in range(1, n):
        d[i] = 2.0 + c[i - 1]
        c[i] = -1.0 / d[i]
    return c, d


def laplacian_operator(n: int) -> LinearOperator:
    """Matrix-free tridiag(-1, 2, -1)."""
    if n < 1:
        raise ValueError("n must be >= 1")

    def matvec(v):
        v = np.asarray(v, dtype=float).ravel()
        out = 2 * v
        out[1:] -= v[:-1]
        out[:-1] -= v[1:]
        return out

    return LinearOperator((n, n), matvec=matvec, rmatvec=matvec, dtype=float)


def laplacian_inverse_operator(n: int) -> LinearOperator:
    """Inverse of tridiag(-1, 2, -1), applied by a pre-factored Thomas solve."""
    if n < 1:
        raise ValueError("n must be >= 1")
    c, d = _thomas_factor(n)

    def solve(rhs):
        y = np.asarray(rhs, dtype=float).ravel().copy()
        y[0] /= d[0]
        for i in range(1, n):
            y[i] = (y[i] + y[i - 1]) / d[i]
        for i in range(n - 2, -1, -1):
            y[i] -= c[i] * y[i + 1]
        return y

    return LinearOperator((n, n), matvec=solve, rmatvec=solve, dtype=float)


def diagonal_operator(values) -> LinearOperator:
    v = np.asarray(values, dtype=float).ravel()
    mv = lambda x: v * np.asarray(x, dtype=float).ravel()
    return LinearOperator((v.size, v.size), matvec=mv, rmatvec=mv, dtype=float)


SPECTRUM_KINDS = ("lap", "unif", "semi", "log", "legendre_hard", "jacobi_hard", "file")


def make_spectrum(kind: str, n: int | None = None, m: int | None = None, path=None) -> Spectrum:
    """Dispatch on a kind name (dashes and underscores both accepted)."""
    kind = kind.replace("-", "_")
    if kind == "file":
        if path is None:
            raise ValueError("spectrum kind 'file' needs a path")
        return Spectrum.load(path)
    if n is None:
        raise ValueError(f"spectrum kind {kind!r} needs n")
    simple = {"lap": lap_spectrum, "unif": unif_spectrum, "semi": semi_spectrum, "log": log_spectrum}
    if kind in simple:
        return simple[kind](n)
    if kind in ("legendre_hard", "jacobi_hard"):
        if m is None:
            raise ValueError(f"spectrum kind {kind!r} needs m")
        fn = legendre_hard_instance if kind == "legendre_hard" else jacobi_hard_instance
        return fn(n, m)
    raise ValueError(f"unknown spectrum kind {kind!r}; expected one of {', '.join(SPECTRUM_KINDS)}")
