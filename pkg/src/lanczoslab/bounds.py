"""Closed-form error bounds, identities and asymptotic predictors.

Each bound is a plain function returning a float.  :func:`evaluate` wraps
any of them into a :class:`BoundReport` that records which of the bound's
hypotheses hold at the given parameters; a value is produced even when they
do not, so bounds can be compared outside their proven range.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .orthopoly import ThreeTermRecurrence, chebyshev_T, largest_zero
from .spectra import Spectrum

__all__ = [
    "BoundReport",
    "Hypothesis",
    "kps_bound",
    "kw_expected_bound",
    "kw_prob_bound",
    "dcm_pnorm_bound",
    "main_upper_bound",
    "main_lower_bounds",
    "clustered_bound",
    "clustered_prob_bound",
    "cluster_hypothesis",
    "asymptotic_predictor",
    "bessel_zero",
    "bessel_limit",
    "arbitrary_eig_bound",
    "arbitrary_eig_prob_bound",
    "delta_gap",
    "condition_bounds",
    "condition_error_identity",
    "chernoff_chisq",
    "evaluate",
    "BOUND_NAMES",
]


@dataclass(frozen=True)
class Hypothesis:
    name: str
    met: bool


@dataclass(frozen=True)
class BoundReport:
    name: str
    value: float
    hypotheses: tuple[Hypothesis, ...] = ()
    params: dict = field(default_factory=dict)
    regime: str | None = None

    @property
    def hypotheses_met(self) -> bool:
        return all(h.met for h in self.hypotheses)

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "value": self.value,
            "hypotheses": [asdict(h) for h in self.hypotheses],
            "params": dict(self.params),
        }
        if self.regime is not None:
            d["regime"] = self.regime
        return d


def _ln2(x: float) -> float:
    return math.log(x) ** 2


# ---------------------------------------------------------------------------
# Classical bounds
# ---------------------------------------------------------------------------

def kps_bound(gamma: float, tan_angle_sq: float, m: int) -> float:
    """Gap-dependent estimate tan^2(b, phi_1) / T_{m-1}(1 + 2 gamma)^2."""
    if gamma <= 0:
        raise ValueError("gap ratio gamma must be positive")
    if tan_angle_sq == 0:
        return 0.0
    t = chebyshev_T(m - 1, 1 + 2 * gamma)
    return tan_angle_sq / (t * t)


def kw_expected_bound(n: int, m: int) -> float:
    return 0.103 * _ln2(n * (m - 1) ** 4) / (m - 1) ** 2


def kw_prob_bound(n: int, m: int, eps: float) -> float:
    return 1.648 * math.sqrt(n) * math.exp(-math.sqrt(eps) * (2 * m - 1))


def dcm_pnorm_bound(n: int, m: int, p: float) -> float:
    """Leading term of the p-norm bound, Gamma ratio taken in log space."""
    lr = math.lgamma(p - 0.5) + math.lgamma(n / 2) - math.lgamma(p) - math.lgamma((n - 1) / 2)
    return math.exp((lr - math.log(m)) / p)


# ---------------------------------------------------------------------------
# Uniform bounds
# ---------------------------------------------------------------------------

def main_upper_bound(n: int, m: int, p: float = 1) -> float:
    """0.068 ln^2(n (m-1)^(8p)) / (m-1)^2, for n >= 100, m >= 10, p >= 1."""
    return 0.068 * (math.log(n) + 8 * p * math.log(m - 1)) ** 2 / (m - 1) ** 2


def main_lower_bounds(n: int, m: int) -> list[BoundReport]:
    """Both asymptotic lower-bound values; their regimes are descriptive only."""
    if n < 16:
        raise ValueError("lower bounds need n >= 16")
    params = {"n": n, "m": m}
    lnn = math.log(n)
    return [
        BoundReport("lower-msquared", 1.08 / m**2, params=params,
                    regime="m = o(sqrt(n / ln n)) and m = omega(1)"),
        BoundReport("lower-log", 0.015 * lnn**2 / (m**2 * math.log(lnn) ** 2), params=params,
                    regime="m = Theta(ln n)"),
    ]


def clustered_bound(m: int, p: float, alpha: float) -> float:
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    return 0.077 * (2 * p + alpha / 4) ** 2 * _ln2(m - 1) / (m - 1) ** 2


def clustered_prob_bound(m: int, alpha: float) -> float:
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    return 0.126 * (alpha + 2) ** 2 * _ln2(m - 1) / (m - 1) ** 2


def _cluster_threshold(m: int, p: float, alpha: float, probabilistic: bool) -> float:
    L = math.log(m - 1)
    if probabilistic:
        return ((alpha + 2) * L / (4 * (m - 1))) ** 2
    return ((2 * p + alpha / 4) * L / (m - 1)) ** 2


def cluster_count(spec: Spectrum, m: int, p: float, alpha: float, probabilistic: bool = False) -> int:
    thr = _cluster_threshold(m, p, alpha, probabilistic)
    rel = (spec.lam1 - spec.values) / spec.width
    return int(spec.mults[rel <= thr].sum())


def cluster_hypothesis(spec: Spectrum, m: int, p: float, alpha: float, probabilistic: bool = False) -> bool:
    """Are at least n/(m-1)^alpha eigenvalues within the cluster window of lambda_1?"""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    return cluster_count(spec, m, p, alpha, probabilistic) >= spec.n / (m - 1) ** alpha


def arbitrary_eig_bound(n: int, m: int, p: float, i: int, delta: float) -> float:
    if delta <= 0:
        raise ValueError("delta must be positive (distinct top eigenvalues)")
    arg = -2 * (i - 1) * math.log(delta) + math.log(n) + 8 * p * math.log(m - i)
    return 0.068 * arg**2 / (m - i) ** 2


def arbitrary_eig_prob_bound(n: int, m: int, i: int, delta: float) -> float:
    if delta <= 0:
        raise ValueError("delta must be positive (distinct top eigenvalues)")
    arg = -2 * (i - 1) / 3 * math.log(delta) + math.log(n) + 2 / 3 * math.log(m - i)
    return 0.571 * arg**2 / (m - i) ** 2


def delta_gap(spec: Spectrum, i: int) -> float:
    """Half the smallest relative gap among lambda_1 >= ... >= lambda_i (with multiplicity)."""
    if i < 2:
        raise ValueError("gap needs i >= 2")
    top = np.array([spec.eigenvalue(k) for k in range(1, i + 1)])
    d = 0.5 * float(np.min(-np.diff(top))) / spec.width
    if d <= 0:
        raise ValueError("repeated eigenvalue among the top i: delta = 0, bounds undefined")
    return d


# ---------------------------------------------------------------------------
# Condition number
# ---------------------------------------------------------------------------

def condition_bounds(kappa_bar: float, n: int, m: int, p: float = 1) -> tuple[BoundReport, BoundReport]:
    """Upper bound on E[((kappa - kappa_m)/kappa)^p]^(1/p) and the m^-2 lower-regime value."""
    params = {"kappa_bar": kappa_bar, "n": n, "m": m, "p": p}
    hyp = (Hypothesis("kappa_bar>1", kappa_bar > 1), Hypothesis("n>=100", n >= 100),
           Hypothesis("m>=10", m >= 10), Hypothesis("p>=1", p >= 1))
    upper = BoundReport("condition-upper", (kappa_bar + 1) * main_upper_bound(n, m, p), hyp, params)
    lower = BoundReport("condition-lower", 1.08 * (kappa_bar - 1) / m**2, hyp[:1], params,
                        regime="m = o(sqrt(n / ln n)) and m = omega(1)")
    return upper, lower


def condition_error_identity(lam1: float, lamn: float, ritz1: float, ritzm: float, check: bool = True) -> float:
    """kappa - kappa_m written through the two extreme relative errors.

    Returns (kappa - 1) [ (l1 - r1)/(l1 - ln) + kappa_m (rm - ln)/(l1 - ln) ] and,
    with ``check``, asserts it equals l1/ln - r1/rm to 1e-10.
    """
    if lamn <= 0:
        raise ValueError("matrix must be positive definite (lambda_n > 0)")
    if ritzm <= 0:
        raise ValueError("Ritz condition number undefined (smallest Ritz value <= 0)")
    kappa = lam1 / lamn
    kappa_m = ritz1 / ritzm
    w = lam1 - lamn
    value = (kappa - 1) * ((lam1 - ritz1) / w + kappa_m * (ritzm - lamn) / w)
    if check:
        direct = kappa - kappa_m
        if abs(value - direct) > 1e-10 * max(1.0, abs(direct), kappa):
            raise ArithmeticError(f"identity mismatch: {value!r} vs {direct!r}")
    return value


# ---------------------------------------------------------------------------
# Chernoff bound for chi-square tails
# ---------------------------------------------------------------------------

def chernoff_chisq(k: int, x: float) -> float:
    """(x/k e^(1 - x/k))^(k/2): bounds P[Z <= x] for x <= k and P[Z >= x] for x >= k."""
    if x < 0 or k < 1:
        raise ValueError("need x >= 0 and k >= 1")
    if x == 0:
        return 0.0
    r = x / k
    return math.exp(k / 2 * (math.log(r) + 1 - r))


# ---------------------------------------------------------------------------
# Asymptotic predictor and its Bessel limits
# ---------------------------------------------------------------------------

def asymptotic_predictor(rec: ThreeTermRecurrence, m: int, a: float, b: float) -> float:
    """(b - xi(m)) / (b - a), xi(m) the largest zero of the degree-m orthogonal polynomial."""
    if not a < b:
        raise ValueError("need a < b")
    return (b - largest_zero(rec, m)) / (b - a)


def _bessel_j(nu: float, x: float, terms: int = 80) -> float:
    s = 0.0
    half = x / 2
    for k in range(terms):
        lg = (2 * k + nu) * math.log(half) - math.lgamma(k + 1) - math.lgamma(k + nu + 1)
        s += (-1) ** k * math.exp(lg)
    return s


def bessel_zero(nu: float, lo: float = 1.0, hi: float = 4.0, tol: float = 1e-12) -> float:
    """First positive zero of J_nu inside [lo, hi] by bisection on the power series."""
    flo = _bessel_j(nu, lo)
    if flo * _bessel_j(nu, hi) > 0:
        raise ValueError(f"J_{nu} does not change sign on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = _bessel_j(nu, mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bessel_limit(alpha: float) -> float:
    """j_{1,alpha}^2 / 4, the limit of m^2 (1 - xi(m)) / 2 for the (alpha, alpha) Jacobi weight."""
    if alpha not in (-0.5, 0.0, 0.5):
        raise ValueError("supported alpha values are -1/2, 0, 1/2")
    j = bessel_zero(alpha)
    return j * j / 4


# ---------------------------------------------------------------------------
# Named evaluation with hypothesis flags
# ---------------------------------------------------------------------------

def _need(params: dict, *names):
    missing = [k for k in names if params.get(k) is None]
    if missing:
        raise ValueError(f"missing parameter(s): {', '.join(missing)}")
    return [params[k] for k in names]


def evaluate(name: str, **params) -> BoundReport | list[BoundReport]:
    """Evaluate a bound by name, flagging each hypothesis of its theorem."""
    name = name.replace("_", "-")
    P = {k: v for k, v in params.items() if v is not None}
    H = Hypothesis
    if name == "kps":
        gamma, t2, m = _need(P, "gamma", "tan_angle_sq", "m")
        return BoundReport(name, kps_bound(gamma, t2, m), (H("m>=2", m >= 2),), P)
    if name == "kw-expected":
        n, m = _need(P, "n", "m")
        return BoundReport(name, kw_expected_bound(n, m), (H("n>=8", n >= 8), H("m>=4", m >= 4)), P)
    if name == "kw-prob":
        n, m, eps = _need(P, "n", "m", "eps")
        return BoundReport(name, kw_prob_bound(n, m, eps), (H("0<eps<1", 0 < eps < 1),), P)
    if name == "dcm-pnorm":
        n, m, p = _need(P, "n", "m", "p")
        return BoundReport(name, dcm_pnorm_bound(n, m, p), (H("p>=1", p >= 1),), P)
    if name == "main-upper":
        n, m = _need(P, "n", "m")
        p = P.get("p", 1)
        hyp = (H("n>=100", n >= 100), H("m>=10", m >= 10), H("p>=1", p >= 1))
        return BoundReport(name, main_upper_bound(n, m, p), hyp, {**P, "p": p})
    if name == "main-lower":
        n, m = _need(P, "n", "m")
        return main_lower_bounds(n, m)
    if name in ("clustered", "clustered-prob"):
        m, alpha = _need(P, "m", "alpha")
        p = P.get("p", 1)
        hyp = [H("m>=10", m >= 10), H("alpha>0", alpha > 0)]
        if name == "clustered":
            hyp.append(H("p>=1", p >= 1))
            value = clustered_bound(m, p, alpha)
        else:
            value = clustered_prob_bound(m, alpha)
        if "n" in P:
            hyp.append(H("n>=m(m-1)^alpha", P["n"] >= m * (m - 1) ** alpha))
        return BoundReport(name, value, tuple(hyp), {**P, "p": p} if name == "clustered" else P)
    if name in ("arb-eig", "arb-eig-prob"):
        n, m, i, delta = _need(P, "n", "m", "i", "delta")
        p = P.get("p", 1)
        hyp = (H("n>=100", n >= 100), H("m>=9+i", m >= 9 + i), H("delta>0", delta > 0))
        if name == "arb-eig":
            return BoundReport(name, arbitrary_eig_bound(n, m, p, i, delta), hyp + (H("p>=1", p >= 1),), {**P, "p": p})
        return BoundReport(name, arbitrary_eig_prob_bound(n, m, i, delta), hyp, P)
    if name == "condition":
        kappa, n, m = _need(P, "kappa_bar", "n", "m")
        return list(condition_bounds(kappa, n, m, P.get("p", 1)))
    if name == "chernoff":
        k, x = _need(P, "k", "x")
        tail = "lower" if x <= k else "upper"
        return BoundReport(name, chernoff_chisq(k, x), (H("x>=0", x >= 0), H("k>=1", k >= 1)), P,
                           regime=f"P[Z {'<=' if tail == 'lower' else '>='} x] ({tail} tail)")
    raise ValueError(f"unknown bound {name!r}; expected one of {', '.join(BOUND_NAMES)}")


BOUND_NAMES = ("kps", "kw-expected", "kw-prob", "dcm-pnorm", "main-upper", "main-lower", "clustered",
               "clustered-prob", "arb-eig", "arb-eig-prob", "condition", "chernoff")
