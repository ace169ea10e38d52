from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from c5min.extremal import turan_graph
from c5min.identity import (
    cf_m_at,
    check_identity,
    qform_injective,
    qform_total,
    random_graph,
    run_batch,
    y_vector,
)
from c5min.smallgraph import Graph, SmallGraph, enumerate_classes, rooted_flag_index
from c5min.symcert import matrix_M_at

from conftest import graphs

C5 = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])


def injective_by_enumeration(G, k):
    """Direct sum over roots and ordered pairs of disjoint 2-sets."""
    M = matrix_M_at(k)
    total = Fraction(0)
    for r in range(G.n):
        two_sets = list(combinations([v for v in range(G.n) if v != r], 2))
        for a in two_sets:
            for b in two_sets:
                if not set(a) & set(b):
                    total += M[rooted_flag_index(G, r, *a) - 1][rooted_flag_index(G, r, *b) - 1]
    return total / 30


def test_y_vector_examples():
    assert y_vector(SmallGraph.complete(5).to_graph(), 2) == (0, 0, 0, 0, 0, 6)
    assert y_vector(Graph(5), 0) == (6, 0, 0, 0, 0, 0)
    y = y_vector(C5, 0)
    assert sum(y) == 6 and y[4] == 1
    with pytest.raises(ValueError):
        y_vector(C5, 5)


@settings(max_examples=40, deadline=None)
@given(graphs(3, 10), st.data())
def test_y_vector_completeness(G, data):
    r = data.draw(st.integers(0, G.n - 1))
    y = y_vector(G, r)
    assert sum(y) == comb(G.n - 1, 2)
    for t in range(6):
        expected = sum(1 for u, v in combinations([w for w in range(G.n) if w != r], 2)
                       if rooted_flag_index(G, r, u, v) == t + 1)
        assert y[t] == expected


@settings(max_examples=25, deadline=None)
@given(graphs(5, 7), st.integers(3, 6))
def test_fast_injective_sum_matches_enumeration(G, k):
    assert qform_injective(G, k) == injective_by_enumeration(G, k)


def test_small_cases():
    assert qform_injective(SmallGraph.complete(5).to_graph(), 4) == cf_m_at(4)[-1]
    assert qform_injective(Graph(4), 3) == 0


@settings(max_examples=30, deadline=None)
@given(graphs(3, 9), st.integers(3, 20))
def test_quadratic_form_is_nonnegative(G, k):
    assert qform_total(G, k) >= 0


@pytest.mark.parametrize("n", [5, 6])
def test_identity_exhaustive(n):
    for g in enumerate_classes(n):
        assert check_identity(g.to_graph(), 3, residual=False)["equal"]


def test_identity_on_turan_graph():
    assert check_identity(turan_graph(4, 12), 4)["equal"]


@pytest.mark.parametrize("n", [7, 9])
def test_identity_random_samples(n):
    rep = run_batch(n, trials=40, seed=n, k=4)
    assert rep["checked"] == 40 and rep["failures"] == 0


def test_residual_grows_at_most_like_n4():
    ratios = [float(check_identity(turan_graph(3, n), 3)["residual_ratio"]) for n in (15, 30, 60)]
    # residual / n^4 must stay bounded; allow it to settle, not to blow up
    assert ratios[2] < 2 * ratios[1] < 4 * ratios[0]
    assert max(ratios) < 1


def test_random_graph_is_seeded():
    a = random_graph(9, np.random.Generator(np.random.PCG64(1)))
    b = random_graph(9, np.random.Generator(np.random.PCG64(1)))
    assert a == b
