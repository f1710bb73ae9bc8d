import math

import numpy as np
import pytest
from scipy import integrate, special

from lanczoslab import orthopoly as op
from lanczoslab.orthopoly import JacobiParams


def _dense(d, e):
    return np.diag(d) + np.diag(e, 1) + np.diag(e, -1)


# --- tridiagonal eigenvalues ----------------------------------------------

def test_laplacian_3x3_eigenvalues():
    got = op.tridiag_eigenvalues([2, 2, 2], [-1, -1])
    np.testing.assert_allclose(got, [2 + math.sqrt(2), 2, 2 - math.sqrt(2)], atol=1e-14)


@pytest.mark.parametrize("n", [1, 2, 5, 40, 150])
def test_tridiag_eigenvalues_match_dense_solver(n):
    rng = np.random.default_rng(n)
    d, e = rng.normal(size=n), rng.normal(size=n - 1)
    ref = np.linalg.eigvalsh(_dense(d, e))[::-1]
    np.testing.assert_allclose(op.tridiag_eigenvalues(d, e), ref, atol=1e-13)


def test_tridiag_handles_zero_offdiagonal():
    # decoupled blocks and a repeated eigenvalue
    got = op.tridiag_eigenvalues([1.0, 1.0, 3.0], [0.0, 0.0])
    np.testing.assert_allclose(got, [3, 1, 1], atol=1e-15)


def test_sturm_count_counts_strictly_below():
    d, e = [2.0, 2, 2], [-1.0, -1]
    assert op.sturm_count(d, e, np.array([0.0, 1.0, 2.5, 4.0])).tolist() == [0, 1, 2, 3]


def test_batched_kth_largest_matches_each_leading_block():
    rng = np.random.default_rng(3)
    a, b = rng.normal(size=(4, 12)), rng.normal(size=(4, 11))
    for k in (1, 3):
        got = op.tridiag_kth_largest(a, b, k)
        assert got.shape == (4, 12)
        for t in range(4):
            for s in range(1, 13):
                if s < k:
                    assert np.isnan(got[t, s - 1])
                else:
                    ref = np.linalg.eigvalsh(_dense(a[t, :s], b[t, :s - 1]))[::-1][k - 1]
                    assert abs(got[t, s - 1] - ref) < 1e-13


def test_batched_kth_largest_sizes_subset_and_single_row():
    got = op.tridiag_kth_largest(np.array([2.0, 2, 2]), np.array([-1.0, -1]), 1, sizes=[1, 3])
    np.testing.assert_allclose(got, [2, 2 + math.sqrt(2)], atol=1e-14)
    assert op.tridiag_kth_largest(np.array([5.0]), np.array([]), 1).tolist() == [5.0]


# --- classical polynomials -------------------------------------------------

@pytest.mark.parametrize("x", [-1.0, -0.3, 0.0, 0.77, 1.0, 1.5, -2.0, 7.0])
def test_chebyshev_against_trig_forms(x):
    for k in range(0, 12):
        if abs(x) <= 1:
            ref = math.cos(k * math.acos(x))
        else:
            ref = math.copysign(1, x) ** k * math.cosh(k * math.acosh(abs(x)))
        assert op.chebyshev_T(k, x) == pytest.approx(ref, rel=1e-12, abs=1e-12)


def test_legendre_eval_matches_scipy():
    x = np.linspace(-1, 1, 41)
    for k in range(0, 15):
        P, dP = op.legendre_eval(k, x)
        np.testing.assert_allclose(P, special.eval_legendre(k, x), atol=1e-13)
        if k:
            ref = k * (special.eval_legendre(k - 1, x[1:-1]) - x[1:-1] * special.eval_legendre(k, x[1:-1])) \
                / (1 - x[1:-1] ** 2)
            np.testing.assert_allclose(dP[1:-1], ref, atol=1e-10)


def test_gauss_legendre_four_point_values():
    rule = op.gauss_legendre(4)
    np.testing.assert_allclose(rule.nodes, [0.8611363115940526, 0.3399810435848563,
                                            -0.3399810435848563, -0.8611363115940526], atol=1e-15)
    np.testing.assert_allclose(rule.weights, [0.3478548451374538, 0.6521451548625461,
                                              0.6521451548625461, 0.3478548451374538], atol=1e-15)


@pytest.mark.parametrize("k", [1, 2, 7, 20, 60])
def test_gauss_legendre_matches_scipy(k):
    x, w = special.roots_legendre(k)
    rule = op.gauss_legendre(k)
    np.testing.assert_allclose(rule.nodes, x[::-1], atol=1e-14)
    np.testing.assert_allclose(rule.weights, w[::-1], atol=1e-14)


def test_gauss_legendre_integrates_polynomials():
    rule = op.gauss_legendre(10)
    assert rule.integrate(lambda x: x**18 + 3 * x**5) == pytest.approx(2 / 19, abs=1e-14)
    assert len(rule) == 10


JAC_PARAMS = [(0.0, 0.0), (-0.5, -0.5), (0.5, -0.3), (2.0, 1.0), (-0.9, 3.0)]


@pytest.mark.parametrize("ab", JAC_PARAMS)
def test_jacobi_eval_and_explicit_sum_match_scipy(ab):
    p = JacobiParams(*ab)
    x = np.linspace(-1, 1, 17)
    for k in range(0, 12):
        ref = special.eval_jacobi(k, *ab, x)
        np.testing.assert_allclose(op.jacobi_eval(k, p, x), ref, rtol=1e-12, atol=1e-12)
        if k <= 10:  # the alternating Gamma sum loses digits as k grows
            for xi, ri in zip(x[::4], ref[::4]):
                assert op.jacobi_explicit(k, p, xi) == pytest.approx(ri, rel=1e-8, abs=1e-8)


@pytest.mark.parametrize("ab", JAC_PARAMS)
def test_jacobi_norm_against_quadrature(ab):
    p = JacobiParams(*ab)
    for k in (0, 1, 4, 9):
        # substitute x = cos(t) to remove the endpoint singularities
        def f(t):
            x = math.cos(t)
            w = (1 - x) ** p.alpha * (1 + x) ** p.beta * math.sin(t)
            return w * special.eval_jacobi(k, *ab, x) ** 2
        ref = integrate.quad(f, 0, math.pi, limit=400, epsabs=1e-13, epsrel=1e-12)[0] if min(ab) > -0.5 else None
        if ref is None:
            x, w = special.roots_jacobi(k + 2, *ab)
            ref = float(w @ special.eval_jacobi(k, *ab, x) ** 2)
        assert op.jacobi_norm_sq(k, p) == pytest.approx(ref, rel=1e-9)


def test_jacobi_max_abs():
    x = np.linspace(-1, 1, 20001)
    for ab in [(0.0, 0.0), (1.5, 0.2), (0.3, 2.5), (-0.5, -0.5)]:
        for k in (1, 3, 8):
            grid_max = np.max(np.abs(special.eval_jacobi(k, *ab, x)))
            assert op.jacobi_max_abs(k, JacobiParams(*ab)) == pytest.approx(grid_max, rel=1e-9)
    with pytest.raises(ValueError):
        op.jacobi_max_abs(3, JacobiParams(-0.7, -0.6))


def test_jacobi_derivative_identity():
    x = np.linspace(-0.99, 0.99, 23)
    for ab in JAC_PARAMS:
        for k in range(1, 9):
            ref = 0.5 * (k + sum(ab) + 1) * special.eval_jacobi(k - 1, ab[0] + 1, ab[1] + 1, x)
            np.testing.assert_allclose(op.jacobi_deriv(k, JacobiParams(*ab), x), ref, rtol=1e-11, atol=1e-11)
    assert np.all(op.jacobi_deriv(0, JacobiParams(1, 1), x) == 0)


def test_jacobi_params_validated():
    with pytest.raises(ValueError):
        JacobiParams(-1.0, 0.0)
    with pytest.raises(ValueError):
        JacobiParams(0.0, -1.5)


@pytest.mark.parametrize("ab", JAC_PARAMS + [(0.5, -0.5)])
def test_jacobi_recurrence_gauss_rule_matches_scipy(ab):
    rec = op.jacobi_recurrence(15, JacobiParams(*ab))
    x, w = special.roots_jacobi(15, *ab)
    rule = op.gauss_rule(rec)
    np.testing.assert_allclose(rule.nodes, x[::-1], atol=1e-13)
    np.testing.assert_allclose(rule.weights, w[::-1], rtol=1e-11)
    assert rec.total_mass == pytest.approx(w.sum(), rel=1e-13)


@pytest.mark.filterwarnings("ignore:invalid value:RuntimeWarning")
def test_jacobi_recurrence_alpha_plus_beta_minus_one():
    # the first coefficient has a removable singularity at alpha + beta = -1
    rec = op.jacobi_recurrence(6, JacobiParams(-0.25, -0.75))
    x, _ = special.roots_jacobi(6, -0.25, -0.75)
    np.testing.assert_allclose(op.tridiag_eigenvalues(rec.diag, rec.offdiag), x[::-1], atol=1e-13)


def test_legendre_largest_zero_m3():
    assert op.largest_zero(op.legendre_recurrence(5), 3) == pytest.approx(math.sqrt(0.6), abs=1e-15)


def test_jacobi_largest_zero_bound_holds():
    for alpha in (0.0, 1.0, 3.0):
        rec = op.jacobi_recurrence(30, JacobiParams(alpha, 0.0))
        for m in range(2, 31):
            bound = math.sqrt(1 - ((alpha + 1.5) / (m + alpha + 0.5)) ** 2)
            assert op.largest_zero(rec, m) <= bound


def test_largest_zero_range_checked():
    rec = op.legendre_recurrence(4)
    with pytest.raises(ValueError):
        op.largest_zero(rec, 5)
    with pytest.raises(ValueError):
        op.largest_zero(rec, 0)


# --- recurrences of measures -----------------------------------------------

def test_two_point_measure_recurrence():
    rec = op.recurrence_from_discrete_measure([1.0, 0.0], [1.0, 1.0])
    np.testing.assert_allclose(rec.diag, [0.5, 0.5], atol=1e-15)
    np.testing.assert_allclose(rec.offdiag, [0.5], atol=1e-15)
    assert rec.total_mass == 2.0


def test_discrete_measure_merges_duplicates_and_stops_at_support_size():
    rec = op.recurrence_from_discrete_measure([0.0, 1.0, 1.0, 2.0], [1.0, 0.5, 0.5, 1.0])
    assert len(rec) == 3
    np.testing.assert_allclose(op.tridiag_eigenvalues(rec.diag, rec.offdiag), [2, 1, 0], atol=1e-14)
    rule = op.gauss_rule(rec)
    np.testing.assert_allclose(rule.weights, [1, 1, 1], atol=1e-14)


def test_discrete_measure_rejects_bad_input():
    with pytest.raises(ValueError):
        op.recurrence_from_discrete_measure([0.0, 1.0], [1.0, -1.0])
    with pytest.raises(ValueError):
        op.recurrence_from_discrete_measure([0.0, 1.0], [0.0, 0.0])


def test_discrete_measure_gauss_rule_reproduces_moments():
    rng = np.random.default_rng(1)
    x, w = rng.uniform(-2, 3, 40), rng.uniform(0.1, 1, 40)
    rule = op.gauss_rule(op.recurrence_from_discrete_measure(x, w, 8))
    for j in range(16):
        assert rule.weights @ rule.nodes**j == pytest.approx(w @ x**j, rel=1e-9)


def test_uniform_density_gives_shifted_legendre():
    rec = op.recurrence_from_density(lambda x: np.ones_like(x), 0.0, 1.0, 12)
    k = np.arange(1, 12)
    np.testing.assert_allclose(rec.diag, 0.5, atol=1e-13)
    np.testing.assert_allclose(rec.offdiag, k / (2 * np.sqrt(4 * k**2 - 1)), atol=1e-13)
    assert rec.total_mass == pytest.approx(1.0, abs=1e-14)


def test_arcsine_density_via_endpoint_powers():
    rec = op.recurrence_from_density(lambda x: 1.0, 0.0, 4.0, 31, endpoint_powers=(-0.5, -0.5))
    np.testing.assert_allclose(rec.diag, 2.0, atol=1e-12)
    np.testing.assert_allclose(rec.offdiag, [math.sqrt(2)] + [1.0] * 29, atol=1e-12)
    assert op.largest_zero(rec, 30) == pytest.approx(2 + 2 * math.cos(math.pi / 60), abs=1e-12)


def test_semicircle_density_is_chebyshev_second_kind():
    rec = op.recurrence_from_density(lambda x: 1.0, -1.0, 1.0, 10, endpoint_powers=(0.5, 0.5))
    np.testing.assert_allclose(rec.diag, 0.0, atol=1e-13)
    np.testing.assert_allclose(rec.offdiag, 0.5, atol=1e-13)


def test_density_recurrence_reports_nonconvergence():
    # a jump inside the interval defeats the doubling test when no doublings are allowed
    with pytest.raises(op.ConvergenceError):
        op.recurrence_from_density(lambda x: (x > 0.3).astype(float) + 1, 0.0, 1.0, 10, N=20, max_doublings=0)


def test_recurrence_truncate_and_jacobi_matrix():
    rec = op.legendre_recurrence(6)
    t = rec.truncate(3)
    assert len(t) == 3 and len(t.offdiag) == 2
    J = rec.jacobi_matrix(3)
    np.testing.assert_allclose(np.linalg.eigvalsh(J)[::-1], op.gauss_legendre(3).nodes, atol=1e-14)


# --- small worked examples --------------------------------------------------

def test_worked_examples():
    assert op.chebyshev_T(3, 2.0) == pytest.approx(26.0, rel=1e-15)
    assert all(op.chebyshev_T(k, 1.0) == pytest.approx(1.0) for k in range(12))
    assert op.chebyshev_T(9, 5 / 3) >= 0.5 * math.exp(2 * math.sqrt(1 - 0.75) * 9)
    r1, r2 = op.gauss_legendre(1), op.gauss_legendre(2)
    assert r1.nodes.tolist() == pytest.approx([0.0]) and r1.weights.tolist() == pytest.approx([2.0])
    np.testing.assert_allclose(r2.nodes, [1 / math.sqrt(3), -1 / math.sqrt(3)], atol=1e-15)
    np.testing.assert_allclose(r2.weights, [1, 1], atol=1e-15)
    p = JacobiParams(1.5, 0.5)
    for k in range(6):
        assert op.jacobi_eval(k, p, 1.0) == pytest.approx(math.gamma(k + 2.5) / (math.factorial(k) * math.gamma(2.5)))
    assert op.jacobi_eval(2, JacobiParams(0, 0), 0.0) == pytest.approx(-0.5)
    assert op.jacobi_eval(3, JacobiParams(1, 0), 0.5) == pytest.approx(op.jacobi_explicit(3, JacobiParams(1, 0), 0.5))
    assert op.jacobi_norm_sq(0, JacobiParams(0, 0)) == pytest.approx(2.0)
    assert all(op.jacobi_norm_sq(k, JacobiParams(0, 0)) == pytest.approx(2 / (2 * k + 1)) for k in range(8))
    np.testing.assert_allclose(op.jacobi_deriv(1, JacobiParams(0, 0), np.linspace(-1, 1, 5)), 1.0)


def test_single_point_measure_and_lanczos_cross_check():
    rec = op.recurrence_from_discrete_measure([0.7], [3.0])
    assert rec.diag.tolist() == [0.7] and len(rec.offdiag) == 0
    from lanczoslab.lanczos import lanczos, ritz_values
    rec = op.recurrence_from_discrete_measure([1.0, 0.5, 0.0], [1.0, 1.0, 1.0], 2)
    ritz = ritz_values(lanczos(np.diag([1.0, 0.5, 0.0]), np.ones(3), 2)).ritz
    np.testing.assert_allclose(op.tridiag_eigenvalues(rec.diag, rec.offdiag), ritz, atol=1e-14)


def test_plain_semicircle_density_converges_to_chebyshev_u():
    rec = op.recurrence_from_density(lambda x: 2 / np.pi * np.sqrt(1 - x**2), -1.0, 1.0, 6, tol=1e-7)
    np.testing.assert_allclose(rec.offdiag, 0.5, atol=1e-6)
    rule = op.gauss_rule(op.recurrence_from_density(lambda x: np.ones_like(x), 0.0, 1.0, 2))
    np.testing.assert_allclose(rule.nodes, [(1 + 1 / math.sqrt(3)) / 2, (1 - 1 / math.sqrt(3)) / 2], atol=1e-13)


@pytest.mark.parametrize("k", [5, 10, 20, 40, 80])
def test_legendre_node_and_weight_asymptotics(k):
    rule = op.gauss_legendre(k)
    i = np.arange(1, k + 1)
    approx = (1 - 1 / (8 * k**2)) * np.cos((4 * i - 1) * np.pi / (4 * k + 2))
    assert np.max(np.abs(rule.nodes - approx)) <= 10 / k**3
    h = k + 0.5
    x1 = rule.nodes[0]
    half = rule.weights[: (k + 1) // 2]
    assert np.pi / h * math.sqrt(1 - x1**2) * (1 - 1 / (8 * h**2 * (1 - x1**2))) <= half[0]
    assert np.all(np.diff(half) > 0) and half[-1] <= np.pi / h


def test_largest_zero_is_max_rayleigh_quotient():
    # over polynomials of degree < m, the weighted Rayleigh quotient of x peaks at the top zero of p_m
    rng = np.random.default_rng(9)
    rec = op.jacobi_recurrence(12, JacobiParams(0.5, 1.0))
    rule = op.gauss_rule(rec, 12)  # exact for the degree <= 2m - 1 integrands below
    m = 5
    z = op.largest_zero(rec, m)
    for _ in range(200):
        c = rng.normal(size=m)
        P2 = np.polynomial.polynomial.polyval(rule.nodes, c) ** 2
        assert (rule.weights @ (rule.nodes * P2)) / (rule.weights @ P2) <= z + 1e-12
    # equality at P = p_m / (x - xi)
    roots = op.tridiag_eigenvalues(rec.diag[:m], rec.offdiag[: m - 1])[1:]
    P2 = np.prod(rule.nodes[:, None] - roots[None, :], axis=1) ** 2
    assert (rule.weights @ (rule.nodes * P2)) / (rule.weights @ P2) == pytest.approx(z, abs=1e-12)
