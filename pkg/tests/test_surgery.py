import json
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from zhat.engine import zhat_negative_definite
from zhat.indefinite import zhat_reversed
from zhat.plumbing import PlumbingGraph, sigma237
from zhat.series import QSeries
from zhat.surgery import (KnotSeries, SurgeryError, SurgerySlope, alexander_boundary_check, figure_eight_FK,
                          guaranteed_order, laplace_image, laplace_transform, normalized, parse_knot,
                          symmetric_expansion_inverse, surgery_zhat, unknot_FK)

H = Fraction(1, 2)


def test_figure_eight_data():
    K = figure_eight_FK()
    assert K[Fraction(5, 2)] == QSeries({-1: H, 0: Fraction(3, 2), 1: H})
    assert K[Fraction(-3, 2)] == QSeries({0: -1})
    at1 = K.evaluate_q1()
    assert [at1[Fraction(k, 2)] for k in (1, 3, 5, 7)] == [H, 1, Fraction(5, 2), Fraction(13, 2)]
    assert K.u_max == Fraction(7, 2)
    assert all((2 * u) % 2 == 1 for u in K.coefficients)


def test_antisymmetry_enforced():
    K = KnotSeries("k", {H: QSeries({0: 1})}, H)
    assert K[-H] == QSeries({0: -1})
    with pytest.raises(SurgeryError, match="antisymmetric"):
        KnotSeries("bad", {H: QSeries({0: 1}), -H: QSeries({0: 1})}, H)


def test_slope_validation():
    with pytest.raises(SurgeryError):
        SurgerySlope(2, 4)
    with pytest.raises(SurgeryError):
        SurgerySlope(0, 1)
    assert str(SurgerySlope.parse("-1")) == "-1/1"


def test_laplace_examples():
    assert laplace_transform(2, -1, 0, SurgerySlope(-1, 1)) == 3
    assert laplace_transform(Fraction(1, 3), 5, 0, SurgerySlope(-1, 1)) is None
    assert laplace_transform(1, 0, 1, SurgerySlope(2, 1)) == Fraction(-1, 2)
    assert laplace_transform(1, 0, 0, SurgerySlope(2, 1)) is None


monomial = st.tuples(st.fractions(min_value=-5, max_value=5, max_denominator=2),
                     st.fractions(min_value=-3, max_value=3, max_denominator=2),
                     st.integers(-3, 3).filter(bool))


@settings(max_examples=100, deadline=None)
@given(st.lists(monomial, max_size=8), st.lists(monomial, max_size=8),
       st.sampled_from([(-1, 1), (-2, 1), (-3, 2), (1, 1), (5, -2)]), st.integers(-2, 2))
def test_laplace_linear(xs, ys, pr, a):
    slope = SurgerySlope(*pr)

    def as_series(mons):
        acc = {}
        for u, v, c in mons:
            acc.setdefault(u, {}).setdefault(v, 0)
            acc[u][v] += c
        return {u: QSeries(t) for u, t in acc.items()}

    sx, sy = as_series(xs), as_series(ys)
    both = dict(sx)
    for u, f in sy.items():
        both[u] = both[u] + f if u in both else f
    assert laplace_image(both, a, slope) == laplace_image(sx, a, slope) + laplace_image(sy, a, slope)


def test_figure_eight_surgery_series():
    raw, guard = surgery_zhat(figure_eight_FK(), SurgerySlope(-1, 1), 0)
    e0, sign, norm = normalized(raw)
    assert e0 == 0 and sign == -1
    assert guard == 12
    assert [norm[k] for k in range(12)] == [1, 1, 0, 1, 1, 1, 0, 2, 1, 2, 1, 2]
    assert all((e - e0).denominator == 1 for e in raw.exponents())


def test_surgery_equals_minus_reversed_zhat():
    raw, guard = surgery_zhat(figure_eight_FK(), SurgerySlope(-1, 1), 0)
    rev = zhat_reversed(sigma237(), 14)
    e_raw, _, _ = normalized(raw)
    e_rev, _, _ = normalized(rev)
    aligned = (-rev).shift(e_raw - e_rev).truncate(guard)
    assert aligned == raw.truncate(guard)


def test_unknot_surgery():
    raw, guard = surgery_zhat(unknot_FK(), SurgerySlope(-1, 1), 0)
    assert raw == QSeries({0: -2, 1: 2}) and guard is None
    plumb = zhat_negative_definite(PlumbingGraph.from_weights([-1], []), None, 2)
    assert plumb == raw.shift(Fraction(-1, 2)).truncate(2)


def test_positive_slope_rejected_for_truncated_data():
    with pytest.raises(SurgeryError, match="slope not admissible for available data"):
        surgery_zhat(figure_eight_FK(), SurgerySlope(1, 1), 0)


def test_guaranteed_order_grows_with_data():
    K = figure_eight_FK()
    assert guaranteed_order(K, SurgerySlope(-1, 1)) >= 12
    shorter = KnotSeries("4_1", {u: f for u, f in K.coefficients.items() if 0 < u < 3}, Fraction(5, 2),
                         alexander=K.alexander)
    assert guaranteed_order(shorter, SurgerySlope(-1, 1)) < guaranteed_order(K, SurgerySlope(-1, 1))
    raw, g = surgery_zhat(shorter, SurgerySlope(-1, 1), 0)
    full, _ = surgery_zhat(K, SurgerySlope(-1, 1), 0)
    assert raw == full.truncate(g)


def seifert_alexander():
    t = sympy.symbols("t")
    V = sympy.Matrix([[-1, 1], [0, 1]])
    poly = sympy.expand((V - t * V.T).det())
    # symmetrize: divide by t
    return {int(m[0]) - 1: int(c) for m, c in sympy.Poly(poly, t).as_dict().items()}


def test_alexander_from_seifert_matrix():
    assert seifert_alexander() == figure_eight_FK().alexander


def test_symmetric_expansion_fibonacci():
    se = symmetric_expansion_inverse({-1: -1, 0: 3, 1: -1}, 6)
    fib = [0, 1, 1]
    while len(fib) < 14:
        fib.append(fib[-1] + fib[-2])
    for n in range(6):
        assert se[n] == se[-n] == Fraction(-fib[2 * n], 2)


def test_alexander_check_passes():
    rep = alexander_boundary_check(figure_eight_FK())
    assert rep.passed and len(rep.entries) == 4
    assert [rep.quotient[n] for n in range(5)] == [0, -H, Fraction(-3, 2), -4, Fraction(-21, 2)]


def test_alexander_check_unknot():
    rep = alexander_boundary_check(unknot_FK())
    assert rep.passed
    assert rep.quotient[0] == 1


def test_alexander_check_negative_control():
    K = figure_eight_FK()
    bad = K.with_coefficient(Fraction(3, 2), -K[Fraction(3, 2)])
    rep = alexander_boundary_check(bad)
    assert not rep.passed and rep.mismatches() == [Fraction(3, 2)]


def test_alexander_missing():
    with pytest.raises(SurgeryError):
        alexander_boundary_check(KnotSeries("k", {H: QSeries({0: 1})}, H))


def test_knot_json_roundtrip(tmp_path):
    K = figure_eight_FK()
    path = tmp_path / "k.json"
    path.write_text(json.dumps(K.to_json()))
    back = parse_knot(path)
    assert back.coefficients == K.coefficients
    assert back.u_max == K.u_max and back.alexander == K.alexander
