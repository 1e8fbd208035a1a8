"""Standard graphs and actions used in examples, tests and the CLI."""

from __future__ import annotations

from itertools import combinations

from .graphs import GroupAction, PeriodicGraph, SimpleGraph


def complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph.from_edges(n, combinations(range(n), 2))


def cycle_graph(n: int) -> SimpleGraph:
    return SimpleGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> SimpleGraph:
    return SimpleGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def petersen_graph() -> SimpleGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return SimpleGraph.from_edges(10, outer + spokes + inner)


def cycle_rotation(n: int, shift: int) -> GroupAction:
    """C_n with the cyclic group generated by rotation by ``shift``."""
    g = cycle_graph(n)
    return GroupAction.generated_by(g, [tuple((i + shift) % n for i in range(n))])


def hypercubic_lattice(d: int) -> PeriodicGraph:
    """Z^d with nearest-neighbour edges, one vertex per cell."""
    triples = []
    for a in range(d):
        v = [0] * d
        v[a] = 1
        triples.append((0, 0, tuple(v)))
    return PeriodicGraph.from_triples(d, 1, triples)


def honeycomb_lattice() -> PeriodicGraph:
    """Hexagonal lattice: two vertices per cell, 3-regular."""
    return PeriodicGraph.from_triples(2, 2, [(0, 1, (0, 0)), (0, 1, (-1, 0)), (0, 1, (0, -1))])


def ladder_lattice() -> PeriodicGraph:
    """Z x K2: two rails joined by rungs, 3-regular."""
    return PeriodicGraph.from_triples(1, 2, [(0, 0, (1,)), (1, 1, (1,)), (0, 1, (0,))])


def comb_lattice() -> PeriodicGraph:
    """Z with a pendant vertex hanging off every site (degrees 3 and 1)."""
    return PeriodicGraph.from_triples(1, 2, [(0, 0, (1,)), (0, 1, (0,))])


def decorated_square_lattice() -> PeriodicGraph:
    """Z^2 with an extra vertex on every horizontal edge (degrees 4 and 2)."""
    return PeriodicGraph.from_triples(2, 2, [(0, 1, (0, 0)), (0, 1, (-1, 0)), (0, 0, (0, 1))])


def named_actions() -> dict[str, GroupAction]:
    """Small instances referred to by name throughout the test-suite and CLI."""
    return {
        "K4": GroupAction.trivial(complete_graph(4)),
        "petersen": GroupAction.trivial(petersen_graph()),
        "C6/Z3": cycle_rotation(6, 2),
        "Z": GroupAction.translation(hypercubic_lattice(1)),
        "Z2": GroupAction.translation(hypercubic_lattice(2)),
        "honeycomb": GroupAction.translation(honeycomb_lattice()),
        "ladder": GroupAction.translation(ladder_lattice()),
        "comb": GroupAction.translation(comb_lattice()),
        "decorated-Z2": GroupAction.translation(decorated_square_lattice()),
    }
