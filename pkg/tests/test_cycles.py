import cmath
import math
from fractions import Fraction

import pytest

from ihara.catalog import complete_graph, cycle_graph, cycle_rotation, hypercubic_lattice, named_actions
from ihara.cycles import (classify_paths, count_reduced, euler_product, gamma_classes, iter_closed_paths,
                          prime_counts, reduced_counts, tailed_counts, zeta_radius)
from ihara.errors import DomainError, RadiusTooSmall, WindowTooSmall
from ihara.graphs import GroupAction, unroll
from ihara.kernels import trace_ledger
from ihara.series import binomial_series

ACTIONS = named_actions()


def test_triangle_counts():
    c = classify_paths(cycle_graph(3), 0, 3)
    assert (c.proper, c.tailed, c.reduced) == (2, 0, 2)


@pytest.mark.parametrize("m", [1, 2])
def test_no_tails_below_three(m):
    c = classify_paths(complete_graph(5), 0, m)
    assert c.tailed == 0 and c.proper == 0


def test_k4_triangles_at_vertex():
    c = classify_paths(complete_graph(4), 2, 3)
    assert (c.proper, c.tailed) == (6, 0)


@pytest.mark.parametrize("name", ["K4", "petersen", "C6/Z3"])
def test_enumeration_matches_transfer_count(name):
    g = ACTIONS[name].graph
    for m in range(1, 9):
        assert classify_paths(g, 0, m, "enumerate") == classify_paths(g, 0, m)


def test_enumerated_paths_are_reduced():
    g = complete_graph(4)
    for path in iter_closed_paths(g, 0, 6):
        m = len(path)
        assert all(g.has_edge(path[i], path[(i + 1) % m]) for i in range(m))
        assert all(path[i - 1] != path[(i + 1) % m] for i in range(m))


def test_n_oracle_examples():
    assert count_reduced(ACTIONS["K4"], 3) == 24
    assert count_reduced(ACTIONS["Z2"], 4) == 8
    assert all(n == 0 for n in reduced_counts(ACTIONS["Z"], 10))


def test_radius_too_small():
    act = GroupAction.translation(hypercubic_lattice(2))
    with pytest.raises(RadiusTooSmall):
        count_reduced(act, 6, unroll(act.graph, 4))
    assert count_reduced(act, 4, unroll(act.graph, 4)) == 8


@pytest.mark.parametrize("name", list(ACTIONS))
def test_oracle_matches_traces(name):
    act = ACTIONS[name]
    M = 12 if act.is_finite else 10
    led = trace_ledger(act, M)
    assert reduced_counts(act, M) == list(led.N)
    assert tailed_counts(act, M) == list(led.t)


def test_c6_z3_classes():
    cl = gamma_classes(cycle_rotation(6, 2), 6)
    assert len(cl) == 2
    assert all(c.is_prime and c.stabilizer_order == 3 and c.nu == 2 for c in cl)
    assert {c.representative for c in cl} == {(0, 1, 2, 3, 4, 5), (0, 5, 4, 3, 2, 1)}


def test_k4_triangle_classes():
    tri = [c for c in gamma_classes(ACTIONS["K4"], 3) if c.length == 3]
    assert len(tri) == 8
    assert all(c.is_prime and c.stabilizer_order == 1 and c.nu == 3 for c in tri)


def test_z2_plaquette_classes():
    cl = gamma_classes(ACTIONS["Z2"], 4)
    assert len(cl) == 2
    assert all(c.stabilizer_order == 1 and c.nu == 4 for c in cl)
    assert sum(c.nu for c in cl) == 8


def test_window_too_small():
    act = ACTIONS["Z2"]
    with pytest.raises(WindowTooSmall):
        gamma_classes(act, 6, unroll(act.graph, 5))


@pytest.mark.parametrize("name", ["K4", "petersen", "C6/Z3", "Z2", "honeycomb", "ladder"])
def test_class_invariants(name):
    act = ACTIONS[name]
    L = 8
    cl = gamma_classes(act, L)
    N = trace_ledger(act, L).N
    for m in range(1, L + 1):
        assert sum(c.nu for c in cl if c.length == m) == N[m]
    for c in cl:
        assert c.nu == c.domain_count
        assert c.length % c.stabilizer_order == 0
        if act.kind == "translation":
            assert c.stabilizer_order == 1


def test_non_prime_classes_are_powers():
    cl = gamma_classes(ACTIONS["C6/Z3"], 12)
    twelve = [c for c in cl if c.length == 12]
    assert len(twelve) == 2 and not any(c.is_prime for c in twelve)
    assert all(c.nu == 2 for c in twelve)
    assert prime_counts(cl) == {6: 2}


def test_euler_product_empty_is_one():
    assert euler_product(gamma_classes(ACTIONS["Z"], 8), 0.4, 8) == 1


def test_euler_product_k4_matches_series():
    act = ACTIONS["K4"]
    cl = gamma_classes(act, 11)
    u = 0.1
    N = trace_ledger(act, 11).N
    series = cmath.exp(sum(N[m] * u ** m / m for m in range(1, 12)))
    assert abs(euler_product(cl, u, 11) - series) < 1e-9


def test_euler_product_c6_z3_closed_form():
    cl = gamma_classes(ACTIONS["C6/Z3"], 18)
    u = 0.3
    assert abs(euler_product(cl, u, 18) - (1 - u ** 6) ** (-2 / 3)) < 1e-14
    assert abs(binomial_series(6, Fraction(-2, 3), 18)(u) - (1 - u ** 6) ** (-2 / 3)) < 1e-9


def test_euler_product_domain():
    act = ACTIONS["K4"]
    cl = gamma_classes(act, 4)
    assert zeta_radius(act) == 0.5
    with pytest.raises(DomainError):
        euler_product(cl, 0.5, 4, zeta_radius(act))
    assert math.isinf(zeta_radius(GroupAction.trivial(complete_graph(2))))
