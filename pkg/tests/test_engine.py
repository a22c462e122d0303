import itertools
import math
from fractions import Fraction

import pytest

from zhat.engine import (F_and_p, F_series, false_theta, legendre_symbol_series, p_polynomial,
                         zhat_negative_definite, zhat_three_star)
from zhat.lattice import box_points
from zhat.plumbing import (PlumbingError, PlumbingGraph, adjacency_matrix, inertia, sigma237, spinc_labels,
                           star_graph)
from zhat.series import QSeries, pv_vertex_factor

SIGMA237_PATTERN = {1: 1, 41: 1, 55: 1, 71: 1, 13: -1, 29: -1, 43: -1, 83: -1}

UNIMODULAR_STARS = [(-4, (-1, -1, -1)), (-3, (-2, -1, -1)), (-2, (-3, -2, -1)), (-1, (-7, -3, -2))]


def sigma237_oracle(order):
    """``q^(83/168) sum_{n>0} C(n) q^(n^2/168)`` straight from the sign pattern."""
    terms = {}
    n = 1
    while Fraction(83 + n * n, 168) < order:
        c = SIGMA237_PATTERN.get(n % 84, 0)
        if c:
            terms[Fraction(83 + n * n, 168)] = c
        n += 1
    return QSeries(terms, order)


def star_corpus():
    graphs = []
    for c, legs in UNIMODULAR_STARS:
        for p in sorted(set(itertools.permutations(legs))):
            graphs.append(star_graph(c, p))
        graphs.append(star_graph(c, legs).relabel([1, 2, 3, 0]))
        graphs.append(star_graph(c, legs).relabel([2, 0, 3, 1]))
    return graphs


def brute_zhat(g, a, order):
    """Direct sum over a box large enough for every term below ``order``."""
    M = adjacency_matrix(g)
    inert = inertia(M)
    shift = Fraction(3 * inert.signature - sum(g.weights), 4)
    qmax = order - shift
    box = max(math.isqrt(math.ceil(4 * qmax * abs(M[i][i]))) + 1 for i in range(len(M)))
    factors = [pv_vertex_factor(d, box) for d in g.degrees()]
    acc = {}
    for t in box_points(M, a, qmax, box):
        c = Fraction((-1) ** inert.positives)
        for f, nv in zip(factors, t.n):
            c *= f.coefficient(-nv)
        acc[t.qexp + shift] = acc.get(t.qexp + shift, 0) + c
    return QSeries(acc, order)


def test_sigma237_golden_terms():
    s = zhat_negative_definite(sigma237(), None, 12)
    expect = QSeries({Fraction(1, 2): 1, Fraction(3, 2): -1, Fraction(11, 2): -1, Fraction(21, 2): 1,
                      Fraction(23, 2): -1}, 12)
    assert s == expect
    assert zhat_three_star(sigma237(), 12) == expect


@pytest.mark.parametrize("order", [Fraction(101, 2), 200])
def test_sigma237_engines_match_sign_pattern(order):
    oracle = sigma237_oracle(order)
    assert zhat_negative_definite(sigma237(), None, order) == oracle
    assert zhat_three_star(sigma237(), order) == oracle


def test_unknot_minus_one():
    g = PlumbingGraph.from_weights([-1], [])
    assert zhat_negative_definite(g, None, 2) == QSeries({Fraction(-1, 2): -2, Fraction(1, 2): 2}, 2)


def test_tiny_order_gives_zero():
    s = zhat_negative_definite(sigma237(), None, Fraction(1, 1000))
    assert not s and s.order == Fraction(1, 1000)


def test_rejects_indefinite():
    g = PlumbingGraph.from_weights([1, -2], [(0, 1)])
    with pytest.raises(PlumbingError, match="negative definite"):
        zhat_negative_definite(g, None, 5)


def test_label_parity_checked():
    with pytest.raises(PlumbingError):
        zhat_negative_definite(sigma237(), (0, 0, 0, 0), 5)


def test_cross_engine_star_corpus():
    graphs = star_corpus()
    assert len(graphs) >= 20
    for g in graphs:
        assert zhat_negative_definite(g, None, 50) == zhat_three_star(g, 50), g


@pytest.mark.parametrize("weights,edges,order", [
    ([-1, -2, -3, -7], [(0, 1), (0, 2), (0, 3)], 14),
    ([-2, -2, -2, -2], [(0, 1), (0, 2), (0, 3)], 6),
    ([-5, -2, -2, -2, -2], [(0, 1), (0, 2), (0, 3), (0, 4)], 3),
    ([-2, -3, -2], [(0, 1), (1, 2)], 8),
    ([-3, -2, -2, -3], [(0, 1), (0, 2), (0, 3)], 5),
])
def test_matches_box_oracle_all_labels(weights, edges, order):
    g = PlumbingGraph.from_weights(weights, edges)
    for lab in spinc_labels(g):
        assert zhat_negative_definite(g, lab, order) == brute_zhat(g, lab.a, order), lab.a


def test_parallel_jobs_identical():
    g = PlumbingGraph.from_weights([-2, -2, -2, -2], [(0, 1), (0, 2), (0, 3)])
    for lab in spinc_labels(g):
        assert zhat_negative_definite(g, lab, 10, jobs=3) == zhat_negative_definite(g, lab, 10)


def test_leg_permutation_invariance():
    g = sigma237()
    base = zhat_three_star(g, 40)
    for legs in itertools.permutations([-2, -3, -7]):
        assert zhat_three_star(star_graph(-1, legs), 40) == base


def test_false_theta_examples():
    assert false_theta(42, 1, 1).series == QSeries({Fraction(1, 168): 1}, 1)
    assert not false_theta(5, 0, 30).series
    assert not false_theta(1, 1, 30).series
    with pytest.raises(ValueError):
        false_theta(0, 1, 5)


def test_sigma237_as_false_theta_combination():
    N = 60
    combo = (false_theta(42, 1, N).series - false_theta(42, 13, N).series
             - false_theta(42, 29, N).series + false_theta(42, 41, N).series)
    assert zhat_three_star(sigma237(), N) == combo.shift(Fraction(83, 168)).truncate(N)
    assert false_theta(42, 55, N).series == -false_theta(42, 29, N).series
    assert false_theta(42, 71, N).series == -false_theta(42, 13, N).series


def test_p_polynomial_branches():
    for m in range(1, 8):
        for j in range(0, 2 * m):
            assert p_polynomial(m, j) == QSeries()
    assert p_polynomial(1, -1) == QSeries({Fraction(1, 4): 2})
    assert p_polynomial(2, 9) == QSeries({Fraction(25, 8): -2, Fraction(1, 8): -2})


def test_false_theta_identity_small_grid():
    N = 30
    for m in range(1, 9):
        for j in range(-4 * m, 4 * m):
            F, p = F_and_p(j, m, Fraction(N, m))
            theta = false_theta(m, j, N, sign_at_zero=1).series
            assert F.dilate(m) == (theta + p).truncate(N), (m, j)


def test_identity_needs_unit_sign_at_zero():
    """With sgn(0) = 0 the relation is off by exactly the q^0 term when 2m | j."""
    N = 20
    for m in (1, 3, 6):
        for j in (-4 * m, -2 * m, 0, 2 * m):
            lhs = F_series(j, m, Fraction(N, m)).dilate(m)
            rhs = false_theta(m, j, N).series + p_polynomial(m, j)
            diff = lhs - rhs.truncate(N)
            assert diff.items() == [(0, 1)]


def test_F_extends_to_rational_ratio():
    a = F_series(Fraction(1, 2), Fraction(3, 2), 10)
    b = F_series(1, 3, 10)
    assert a == b


def test_legendre_expression_differs_from_false_theta():
    ours = zhat_three_star(sigma237(), 20)
    legendre = legendre_symbol_series(20)
    assert ours.first_difference(legendre) is not None
