from fractions import Fraction

import pytest

from ihara.catalog import named_actions
from ihara.errors import BadConstantTerm
from ihara.kernels import trace_ledger
from ihara.series import Series, binomial_series, log_derivative_check, zeta_series

ACTIONS = named_actions()


def poly(cs, M):
    return Series.from_polynomial(cs, M)


def test_exp_log_inverse_pair():
    s = Series([0, Fraction(1, 2), -3, Fraction(7, 5), 0, 2])
    assert s.exp().log() == s
    g = Series([1, 2, Fraction(-1, 3), 5, 0, 1])
    assert g.log().exp() == g


def test_bad_constant_terms():
    with pytest.raises(BadConstantTerm):
        Series([1, 1]).exp()
    with pytest.raises(BadConstantTerm):
        Series([2, 1]).log()
    with pytest.raises(BadConstantTerm):
        Series([0, 1]).inverse()


def test_derivative_of_log_series():
    M = 10
    s = Series([0] + [Fraction(1, m) for m in range(1, M + 1)])
    assert s.derivative() == Series([1] * M)


def test_zero_n_gives_one():
    assert zeta_series([0] * 13, 12) == Series.constant(1, 12)


def test_inverse_and_power():
    g = poly([1, -3, 2], 12)
    assert g * g.inverse() == Series.constant(1, 12)
    assert g.power(Fraction(1, 2)) ** 2 == g
    assert g.power(3) == g ** 3
    assert g.power(-2) == (g ** 2).inverse()


def test_binomial_matches_power():
    M = 18
    assert binomial_series(6, Fraction(-2, 3), M) == poly([1, 0, 0, 0, 0, 0, -1], M).power(Fraction(-2, 3))


def test_float_mode_agrees_with_exact():
    s = Series([0, Fraction(1, 3), Fraction(-2, 7), 5, Fraction(1, 11)])
    ex = s.exp()
    fl = s.to_float().exp()
    assert not fl.exact
    assert ex.max_abs_diff(fl) <= 1e-12 * max(abs(complex(c)) for c in ex)


def test_k4_inverse_zeta_polynomial():
    M = 11
    N = trace_ledger(ACTIONS["K4"], M).N
    target = poly([1, 0, -1], M) ** 2 * poly([1, -1], M) * poly([1, -2], M) * poly([1, 1, 2], M) ** 3
    assert zeta_series(N, M).inverse() == target


def test_c6_z3_zeta_binomial():
    M = 18
    N = trace_ledger(ACTIONS["C6/Z3"], M).N
    assert zeta_series(N, M) == binomial_series(6, Fraction(-2, 3), M)


@pytest.mark.parametrize("name, m, value", [("K4", 3, 24), ("Z2", 4, 8)])
def test_log_derivative_recovers(name, m, value):
    M = 10
    N = trace_ledger(ACTIONS[name], M).N
    rep = log_derivative_check(zeta_series(N, M), N)
    assert rep.ok and rep.recovered[m] == value


def test_log_derivative_zero():
    rep = log_derivative_check(zeta_series([0] * 9, 8), [0] * 9)
    assert rep.ok and set(rep.recovered) == {0}


def test_partial_sums_increase_on_real_axis():
    act = ACTIONS["K4"]
    N = trace_ledger(act, 16).N
    u = 0.3
    vals = [zeta_series(N, M)(u).real for M in range(1, 17)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
