import json
import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from zhat.plumbing import (PlumbingError, PlumbingGraph, adjacency_matrix, as_matrix, default_label, determinant,
                           inertia, inverse, is_negative_definite, mat_mul, parse_plumbing, sigma237,
                           smith_normal_form, spinc_equivalent, spinc_labels, star_graph, three_star_params,
                           weak_negativity)


def sign_variations(coeffs):
    signs = [c > 0 for c in coeffs if c != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def charpoly_inertia(rows):
    """Descartes' rule is exact for real-rooted polynomials."""
    x = sympy.symbols("x")
    p = sympy.Matrix(rows).charpoly(x)
    coeffs = p.all_coeffs()
    zeros = 0
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
        zeros += 1
    pos = sign_variations(coeffs)
    neg = sign_variations([c * (-1) ** i for i, c in enumerate(reversed(coeffs))])
    return pos, neg, zeros


def random_symmetric(rng, n, lo=-4, hi=4):
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = rng.randint(lo, hi)
    return rows


def test_inertia_matches_charpoly_on_random_matrices():
    rng = random.Random(11)
    for _ in range(150):
        n = rng.randint(1, 5)
        rows = random_symmetric(rng, n)
        inert = inertia(as_matrix(rows))
        assert (inert.positives, inert.negatives, inert.zeros) == charpoly_inertia(rows), rows


def test_inertia_matches_numpy_eigenvalues():
    rng = random.Random(5)
    for _ in range(100):
        n = rng.randint(1, 6)
        rows = random_symmetric(rng, n)
        ev = np.linalg.eigvalsh(np.array(rows, dtype=float))
        inert = inertia(as_matrix(rows))
        if np.all(np.abs(ev) > 1e-8):
            assert inert.positives == int(np.sum(ev > 0))
            assert inert.negatives == int(np.sum(ev < 0))


def test_inertia_zero_diagonal_needs_hyperbolic_block():
    inert = inertia(as_matrix([[0, 1], [1, 0]]))
    assert (inert.positives, inert.negatives, inert.zeros) == (1, 1, 0)
    inert = inertia(as_matrix([[0, 0], [0, 0]]))
    assert inert.zeros == 2


def test_sigma237_matrix_and_signature():
    g = sigma237()
    M = adjacency_matrix(g)
    assert determinant(M) == 1
    assert is_negative_definite(M)
    assert inertia(M).signature == -4
    assert weak_negativity(g)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=3, max_size=3))
def test_smith_form(rows):
    D, U, V = smith_normal_form(rows)
    A = as_matrix(rows)
    assert mat_mul(mat_mul(as_matrix(U), A), as_matrix(V)) == as_matrix(D)
    assert abs(determinant(as_matrix(U))) == 1 and abs(determinant(as_matrix(V))) == 1
    diag = [D[i][i] for i in range(3)]
    assert all(D[i][j] == 0 for i in range(3) for j in range(3) if i != j)
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))


@pytest.mark.parametrize("weights,edges", [
    ([-2], []),
    ([-3, -2], [(0, 1)]),
    ([-2, -2, -2], [(0, 1), (1, 2)]),
    ([-2, -3, -5], [(0, 1), (0, 2)]),
    ([-4, -2, -2, -2], [(0, 1), (0, 2), (0, 3)]),
])
def test_spinc_labels_count_and_distinct(weights, edges):
    g = PlumbingGraph.from_weights(weights, edges)
    M = adjacency_matrix(g)
    labels = spinc_labels(g)
    assert len(labels) == abs(determinant(M))
    for i, a in enumerate(labels):
        assert tuple(x % 2 for x in a.a) == g.delta()
        for b in labels[i + 1:]:
            assert not spinc_equivalent(M, a.a, b.a)


def test_spinc_canonical_form_is_class_invariant():
    g = PlumbingGraph.from_weights([-2, -3], [(0, 1)])
    M = adjacency_matrix(g)
    a = default_label(g)
    shifted = [x + 2 * y for x, y in zip(a.a, (M[0][0] * 3 + M[0][1], M[1][0] * 3 + M[1][1]))]
    assert spinc_equivalent(M, a.a, shifted)
    assert type(a)(tuple(shifted), M) == a


def test_parse_plumbing_roundtrip_and_errors(tmp_path):
    g = sigma237()
    path = tmp_path / "g.plumb.json"
    path.write_text(json.dumps(g.to_json()))
    assert parse_plumbing(path) == g
    assert parse_plumbing(json.dumps(g.to_json())) == g
    with pytest.raises(PlumbingError, match="non-integer weight at vertex 0"):
        parse_plumbing({"vertices": [{"id": 0, "weight": 1.5}], "edges": []})
    with pytest.raises(PlumbingError, match="malformed edge"):
        parse_plumbing({"vertices": [{"id": 0, "weight": -1}], "edges": [[0]]})
    with pytest.raises(PlumbingError):
        parse_plumbing({"vertices": [{"id": 0, "weight": -1}], "edges": [[0, 0]]})
    with pytest.raises(PlumbingError):
        parse_plumbing({"vertices": [{"id": 0, "weight": -1}], "edges": [[0, 7]]})
    with pytest.raises(PlumbingError):
        parse_plumbing({"edges": []})


def test_singular_matrix_rejected():
    g = PlumbingGraph.from_weights([-1, -1], [(0, 1)])
    with pytest.raises(PlumbingError, match="singular"):
        inverse(adjacency_matrix(g))


def test_three_star_parameters_sigma237():
    d = three_star_params(sigma237())
    assert d.m == 42
    assert list(zip(d.b, (4 * c for c in d.c))) == [(41, 41), (1, 1), (-13, 5), (-29, 21)]
    assert d.d == Fraction(41, 168)
    assert d.prefactor_exponent == Fraction(83, 168)
    assert all(x == d.d for x in d.d_values)


def test_three_star_rejects_other_shapes():
    with pytest.raises(PlumbingError, match="three-star four-node unimodular required"):
        three_star_params(PlumbingGraph.from_weights([-1], []))
    with pytest.raises(PlumbingError, match="three-star four-node unimodular required"):
        three_star_params(star_graph(-2, [-2, -2, -2]))


def test_three_star_independent_of_vertex_listing():
    g = sigma237()
    base = three_star_params(g)
    for order in ([3, 1, 0, 2], [2, 0, 3, 1]):
        other = three_star_params(g.relabel(order))
        assert other.m == base.m and sorted(other.b) == sorted(base.b)
        assert other.prefactor_exponent == base.prefactor_exponent
