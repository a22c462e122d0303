from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from zhat.series import (PVFactor, QSeries, WLaurentQSeries, constant_term_in_w, eta_series, format_series,
                         pv_vertex_factor, series_from_json, series_invert, series_to_json)

exponents = st.fractions(min_value=-3, max_value=6, max_denominator=6)
coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def qseries(draw, exact=None):
    terms = draw(st.dictionaries(exponents, coeffs, max_size=6))
    is_exact = draw(st.booleans()) if exact is None else exact
    order = None if is_exact else draw(st.fractions(min_value=0, max_value=8, max_denominator=6))
    return QSeries(terms, order)


def test_zero_coefficients_and_high_terms_dropped():
    s = QSeries({0: 1, 1: 0, 5: 2}, order=3)
    assert s.terms == {Fraction(0): Fraction(1)}
    assert s.order == 3


def test_getitem_beyond_order_raises():
    s = QSeries({0: 1}, order=2)
    assert s[1] == 0
    with pytest.raises(KeyError):
        s[2]


def test_exact_series_has_no_order():
    s = QSeries({Fraction(1, 2): 3})
    assert s.is_exact and s[100] == 0


@settings(max_examples=300, deadline=None)
@given(qseries(), qseries(), qseries())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == (a * (b * c))
    assert a * (b + c) == (a * b + a * c).truncate((a * (b + c)).order)
    assert a - a == QSeries.zero(a.order)


@settings(max_examples=200, deadline=None)
@given(qseries(exact=True), qseries(exact=True), st.fractions(min_value=1, max_value=6, max_denominator=3))
def test_truncation_commutes_with_product_for_nonnegative_support(a, b, n):
    a = QSeries({e: c for e, c in a.items() if e >= 0})
    b = QSeries({e: c for e, c in b.items() if e >= 0})
    left = (a * b).truncate(n)
    right = a.truncate(n) * b.truncate(n)
    assert left.agrees_with(right, n)


def test_product_order_accounts_for_valuation():
    a = QSeries({Fraction(-1, 2): 1}, order=3)
    b = QSeries({Fraction(1): 2}, order=5)
    p = a * b
    # unknown tail of a at q^3 meets q^1; of b at q^5 meets q^(-1/2)
    assert p.order == min(Fraction(3) + 1, Fraction(5) - Fraction(1, 2))


@settings(max_examples=150, deadline=None)
@given(qseries(exact=True), st.fractions(min_value=1, max_value=5, max_denominator=2))
def test_inverse_is_inverse(a, n):
    if not a:
        return
    inv = series_invert(a, n)
    prod = a * inv
    assert prod.agrees_with(QSeries.one(), prod.order)


def test_invert_zero_raises():
    with pytest.raises(ZeroDivisionError, match="not invertible"):
        series_invert(QSeries.zero(), 3)


def test_eta_pentagonal_terms():
    eta = eta_series(30)
    expected = {Fraction(1, 24) + k: (-1) ** i for i, k in [(0, 0), (1, 1), (1, 2), (0, 5), (0, 7),
                                                                 (1, 12), (1, 15), (0, 22), (0, 26)]}
    assert eta.terms == {Fraction(e): Fraction(c) for e, c in expected.items()}


def test_inverse_eta_gives_partition_numbers():
    N = 60
    inv = series_invert(eta_series(N), N - Fraction(1, 24))
    for n in range(N - 1):
        assert inv[n - Fraction(1, 24)] == sympy.partition(n)


def test_eta_inverse_identity_order():
    N = 40
    eta = eta_series(N)
    prod = eta * series_invert(eta)
    assert prod.order >= N - Fraction(1, 12)
    assert prod.agrees_with(QSeries.one(), prod.order)


def test_shift_and_dilate():
    s = QSeries({0: 1, Fraction(1, 2): -2}, order=3)
    assert s.shift(Fraction(1, 3)).terms == {Fraction(1, 3): 1, Fraction(5, 6): -2}
    d = s.dilate(2)
    assert d.terms == {0: 1, 1: -2} and d.order == 6


def test_format_plain():
    s = QSeries({Fraction(1, 2): 1, Fraction(3, 2): -1, 2: Fraction(3, 2)}, order=12)
    assert format_series(s) == "q^(1/2) - q^(3/2) + 3/2*q^(2) + O(q^(12))"
    assert format_series(QSeries.zero()) == "0"


@settings(max_examples=100, deadline=None)
@given(qseries())
def test_json_roundtrip(s):
    assert series_from_json(series_to_json(s)) == s
    assert QSeries.from_json(s.to_json()) == s


def _laurent_sympy(k, at_infinity, terms):
    """Coefficients of the expansion of ``(w - 1/w)^(-k)`` near ``w = oo`` or ``w = 0``."""
    w, y = sympy.symbols("w y")
    f = (w - 1 / w) ** (-k)
    var, sub, flip = (y, 1 / y, -1) if at_infinity else (w, w, 1)
    ser = sympy.series(f.subs(w, sub), var, 0, terms).removeO()
    poly = sympy.Poly(sympy.expand(ser * var ** terms), var)
    return {flip * (int(m[0]) - terms): c for m, c in poly.as_dict().items()}


@pytest.mark.parametrize("degree", [3, 4, 5])
def test_pv_factor_is_average_of_expansions(degree):
    k = degree - 2
    big = _laurent_sympy(k, True, 12)
    small = _laurent_sympy(k, False, 12)
    pv = pv_vertex_factor(degree, 9)
    for e in range(-9, 10):
        want = (sympy.Rational(big.get(e, 0)) + sympy.Rational(small.get(e, 0))) / 2
        assert pv.coefficient(e) == Fraction(int(want.p), int(want.q)), e


@pytest.mark.parametrize("degree", [0, 1, 2])
def test_pv_factor_polynomial_cases(degree):
    w = sympy.symbols("w")
    poly = sympy.expand((w - 1 / w) ** (2 - degree) * w ** 2)
    coeffs = {int(m[0]) - 2: int(c) for m, c in sympy.Poly(poly, w).as_dict().items()}
    pv = PVFactor(degree, 5)
    assert {e: pv.coefficient(e) for e in pv.support()} == coeffs
    assert sorted(pv.finite_support()) == sorted(coeffs)


def test_degree_three_sign_rule():
    pv = PVFactor(3, 9)
    for e in range(-9, 10):
        expect = Fraction(0) if e % 2 == 0 else Fraction(-1, 2) * (1 if e > 0 else -1)
        assert pv.coefficient(e) == expect


def test_laurent_product_window():
    a = WLaurentQSeries({1: QSeries({0: 1}), -1: QSeries({0: -1})})
    b = PVFactor(3, 7).as_laurent()
    prod = a * b
    assert prod.window == 6
    # (w - 1/w) * pv(w - 1/w)^-1 = 1
    assert constant_term_in_w(prod) == QSeries({0: 1})
    for k in range(-6, 7):
        if k:
            assert not prod[k]
