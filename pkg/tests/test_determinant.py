import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from ihara.catalog import named_actions
from ihara.determinant import (analytic_det, b_trace_residuals, det_gamma_bloch, det_gamma_series,
                               det_gamma_spectral, determinant_formula, fuglede_kadison, hull_branch,
                               inverse_zeta_series, log_det_coefficients, normal_factorization_residual,
                               random_a0_matrix, scaling_residual, trace_log_derivative_residuals)
from ihara.errors import (BranchObstruction, DomainError, HullContainsZero, IdentityViolation,
                          QuadratureNotConverged)
from ihara.kernels import trace_ledger
from ihara.series import Series

ACTIONS = named_actions()
D1I = np.diag([1, 1j])


# -- analytic determinant ---------------------------------------------------------

def test_diag_1_i():
    assert abs(analytic_det(D1I) - cmath.exp(1j * math.pi / 4)) < 1e-12


def test_positive_diagonal():
    assert abs(analytic_det(np.diag([1.0, 4.0])) - 2) < 1e-14
    assert abs(fuglede_kadison(np.diag([1.0, 4.0])) - 2) < 1e-14


def test_scalar_matrix():
    z = 0.3 - 2j
    assert abs(analytic_det(z * np.eye(3)) - z) < 1e-14
    assert abs(analytic_det(z * np.eye(3), tau="full") - z ** 3) < 1e-13


def test_branch_invariance():
    A = np.diag([1, 1j, 0.5 + 0.5j])
    theta, _ = hull_branch(np.diag(A))
    for t in (theta - 0.2, theta + 0.2):
        assert abs(analytic_det(A, theta=t) - analytic_det(A)) < 1e-14
    with pytest.raises(HullContainsZero):
        analytic_det(A, theta=theta + math.pi)


def test_hull_distance():
    _, dist = hull_branch([1, 1j])
    assert dist == pytest.approx(math.sqrt(0.5), rel=1e-9)
    with pytest.raises(HullContainsZero):
        hull_branch([1, -1])
    with pytest.raises(HullContainsZero):
        hull_branch([1, 1j, -1 - 1j])
    with pytest.raises(HullContainsZero):
        hull_branch([1, 1e-12])


def test_product_property_fails():
    # D1I is in A_0 but its square has eigenvalues 1 and -1
    analytic_det(D1I)
    with pytest.raises(HullContainsZero):
        analytic_det(D1I @ D1I)
    # commuting factors, product in A_0, yet det(AB) != det(A) det(B)
    B = np.diag([1, cmath.exp(3j * math.pi / 4)])
    assert abs(analytic_det(B @ B) - analytic_det(B) ** 2) > 1


def test_scaling_examples():
    assert scaling_residual(np.diag([1.0, 4.0]), 2.0) < 1e-14
    assert abs(analytic_det(2 * np.diag([1.0, 4.0]), tau="full") - 4 * 4) < 1e-12
    assert scaling_residual(D1I, cmath.exp(1j * math.pi / 4)) < 1e-12


def test_scaling_random():
    rng = np.random.default_rng(7)
    for _ in range(20):
        A = random_a0_matrix(rng, int(rng.integers(2, 6)))
        z = rng.uniform(0.5, 2) * cmath.exp(1j * rng.uniform(-math.pi, math.pi))
        for tau in ("normalized", "full", 2.5):
            assert scaling_residual(A, z, tau) < 1e-12


def test_normal_factorization_random():
    rng = np.random.default_rng(11)
    for _ in range(10):
        A = random_a0_matrix(rng, int(rng.integers(2, 6)), normal=True)
        assert normal_factorization_residual(A) < 1e-10


# -- Gamma-determinant -------------------------------------------------------------

def test_det_at_zero():
    for name in ["K4", "Z2", "honeycomb"]:
        assert det_gamma_series(ACTIONS[name], 0) == 1


@pytest.mark.parametrize("u", [0.1, 0.3, 0.5, 0.3 + 0.2j])
def test_z_lattice_det_is_one(u):
    act = ACTIONS["Z"]
    assert abs(det_gamma_series(act, u) - 1) < 1e-10
    assert abs(det_gamma_bloch(act, u) - 1) < 1e-10
    assert abs(det_gamma_bloch(act, u, n=64) - 1) < 1e-10


def test_k4_det_matches_polynomial():
    act = ACTIONS["K4"]
    u = 0.2
    D = np.eye(4) - u * (np.ones((4, 4)) - np.eye(4)) + 2 * u * u * np.eye(4)
    exact = np.linalg.det(D)
    assert abs(det_gamma_series(act, u) - exact) < 1e-12
    assert abs(det_gamma_spectral(act, u) - exact) < 1e-12


def test_z2_dual_methods():
    act = ACTIONS["Z2"]
    for u in (0.1, 0.05 - 0.12j, -0.15j):
        assert abs(det_gamma_series(act, u) - det_gamma_bloch(act, u)) < 1e-10


@pytest.mark.parametrize("name", ["honeycomb", "ladder", "comb", "decorated-Z2"])
def test_dual_methods_other_lattices(name):
    act = ACTIONS[name]
    u = 0.7 / act.alpha * cmath.exp(0.4j)
    a, b = det_gamma_series(act, u), det_gamma_bloch(act, u)
    assert abs(a - b) < 1e-9 * abs(a)


def test_finite_quotient_spectral_vs_series():
    act = ACTIONS["C6/Z3"]
    for u in (0.2, 0.4 + 0.3j):
        assert abs(det_gamma_series(act, u) - det_gamma_spectral(act, u)) < 1e-12


def test_z2_extended_domain():
    act = ACTIONS["Z2"]
    # (1 + 3u^2)/u = 5.17 lies outside [-4, 4]: u = 1.5 is in Omega
    res = det_gamma_bloch(act, 1.5, info=True)
    assert np.isfinite(res.value) and res.change < 1e-10
    # (1 + 3 * 0.81)/0.9 = 3.81 lies inside [-4, 4]: Delta(0.9, k) vanishes for some k
    with pytest.raises(BranchObstruction):
        det_gamma_bloch(act, 0.9)


def test_quadrature_cap():
    with pytest.raises(QuadratureNotConverged):
        det_gamma_bloch(ACTIONS["Z2"], 0.55 + 0.02j, max_n=32)


def test_series_domain():
    with pytest.raises(DomainError, match="1/\\(d-1\\)"):
        det_gamma_series(ACTIONS["K4"], 0.5)


# -- exact expansions ---------------------------------------------------------

@pytest.mark.parametrize("name", list(ACTIONS))
def test_log_derivative_trace_identity(name):
    assert set(trace_log_derivative_residuals(ACTIONS[name], 14)) == {0}


@pytest.mark.parametrize("name", list(ACTIONS))
def test_b_generating_function(name):
    assert set(b_trace_residuals(ACTIONS[name], 14)) == {0}


def test_log_det_first_coefficients():
    # Tr log(I - Au + Qu^2) = -Tr(A) u - (Tr(A^2)/2 - Tr Q) u^2 + ...
    s = log_det_coefficients(ACTIONS["K4"], 3)
    assert s[0] == 0 and s[1] == 0
    assert s[2] == -Fraction(12, 2) + 8


# -- determinant formula ------------------------------------------------------

def test_k4_formula_polynomial():
    M = 11
    poly = lambda cs: Series.from_polynomial(cs, M)
    target = poly([1, 0, -1]) ** 2 * poly([1, -1]) * poly([1, -2]) * poly([1, 1, 2]) ** 3
    assert determinant_formula(ACTIONS["K4"], order=M) == target


@pytest.mark.parametrize("name", list(ACTIONS))
def test_formula_exact(name):
    M = 20 if name in ("K4", "C6/Z3", "Z", "Z2") else 12
    assert determinant_formula(ACTIONS[name], order=M) == inverse_zeta_series(ACTIONS[name], M)


def test_z_formula_is_one():
    assert determinant_formula(ACTIONS["Z"], order=16) == Series.constant(1, 16)
    assert determinant_formula(ACTIONS["Z"], 0.2) == pytest.approx(1)


def test_z2_formula_value():
    act = ACTIONS["Z2"]
    u = 0.05
    N = trace_ledger(act, 20).N
    inv_z = cmath.exp(-sum(N[m] * u ** m / m for m in range(1, 21)))
    for method in ("series", "bloch"):
        assert abs(determinant_formula(act, u, method=method) - inv_z) < 1e-9


def test_formula_value_domain():
    with pytest.raises(DomainError, match="1/alpha"):
        determinant_formula(ACTIONS["K4"], 0.9)


def test_formula_violation_detected(monkeypatch):
    import ihara.determinant as det
    act = ACTIONS["K4"]
    real = det.reduced_counts

    def corrupted(action, M, window=None):
        N = real(action, M, window)
        N[3] += 1
        return N

    monkeypatch.setattr(det, "reduced_counts", corrupted)
    with pytest.raises(IdentityViolation):
        determinant_formula(act, order=6)
