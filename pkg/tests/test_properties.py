from fractions import Fraction

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from ihara.cycles import classify_paths, reduced_counts
from ihara.graphs import GroupAction, PeriodicGraph, SimpleGraph, canonical_triple
from ihara.io import dumps, loads
from ihara.kernels import operator_sequences, q_kernel, t_closed_form, t_sequence, trace_ledger
from ihara.series import Series

SETTINGS = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def simple_graphs(draw, max_n=7):
    n = draw(st.integers(2, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, min_size=1))
    return SimpleGraph(n, tuple(sorted(chosen)))


@st.composite
def periodic_graphs(draw):
    rank = draw(st.integers(1, 2))
    size = draw(st.integers(1, 2))
    offs = st.tuples(*[st.integers(-1, 1)] * rank)
    triples = set()
    for i, j, v in draw(st.lists(st.tuples(st.integers(0, size - 1), st.integers(0, size - 1), offs),
                                 min_size=1, max_size=4)):
        if i == j and not any(v):
            continue
        triples.add(canonical_triple(i, j, v))
    if not triples:
        triples.add(canonical_triple(0, 0, (1,) + (0,) * (rank - 1)))
    return PeriodicGraph(rank, size, tuple(sorted(triples)))


fractions = st.fractions(min_value=-5, max_value=5, max_denominator=9)


@SETTINGS
@given(simple_graphs())
def test_oracle_equals_operator_traces(g):
    act = GroupAction.trivial(g)
    M = 8
    led = trace_ledger(act, M)
    assert reduced_counts(act, M) == list(led.N)
    A_seq, _ = operator_sequences(act, M)
    assert t_closed_form(A_seq, q_kernel(act), M) == t_sequence(A_seq, q_kernel(act), M)


@SETTINGS
@given(simple_graphs(max_n=6), st.integers(1, 7))
def test_enumeration_equals_transfer_count(g, m):
    for v in range(g.n):
        assert classify_paths(g, v, m, "enumerate") == classify_paths(g, v, m)


@SETTINGS
@given(periodic_graphs())
def test_periodic_counts_bounded(pg):
    act = GroupAction.translation(pg)
    M = 6
    N = trace_ledger(act, M).N
    d = pg.max_degree
    assert reduced_counts(act, M) == list(N)
    if d >= 2:
        for m in range(1, M + 1):
            assert 0 <= N[m] <= d * (d - 1) ** (m - 1) * pg.cell_size


@SETTINGS
@given(st.lists(fractions, min_size=1, max_size=8))
def test_exp_log_roundtrip(cs):
    s = Series([0] + cs)
    assert s.exp().log() == s
    assert (s.exp() * (-s).exp()) == Series.constant(1, s.order)


@SETTINGS
@given(st.lists(fractions, min_size=1, max_size=8), st.lists(fractions, min_size=1, max_size=8))
def test_log_turns_products_into_sums(a, b):
    M = max(len(a), len(b))
    f = Series([1] + a + [0] * (M - len(a)))
    g = Series([1] + b + [0] * (M - len(b)))
    assert (f * g).log() == f.log() + g.log()
    assert f.power(Fraction(1, 3)) ** 3 == f


@SETTINGS
@given(simple_graphs())
def test_finite_file_round_trip(g):
    act = GroupAction.trivial(g)
    back = loads(dumps(act, name="random")).action
    assert back.graph == g and back.kind == act.kind


@SETTINGS
@given(periodic_graphs())
def test_periodic_file_round_trip(pg):
    act = GroupAction.translation(pg)
    back = loads(dumps(act)).action
    assert back.graph == pg and back.kind == "translation"
