"""Exact sparse q-series with rational exponents, Laurent objects in an
auxiliary variable w, principal-value vertex factors and the eta series."""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Iterable, Mapping

Rational = Fraction | int


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _min_order(a: Fraction | None, b: Fraction | None) -> Fraction | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class QSeries:
    """A q-series ``sum c_e q^e + O(q^order)`` with exact rational data.

    ``order=None`` marks an exact (finite) series.  Coefficients at exponents
    ``>= order`` are unknown, never implicitly zero.
    """

    __slots__ = ("_terms", "_order")

    def __init__(self, terms: Mapping | Iterable = (), order: Rational | None = None):
        order = None if order is None else _frac(order)
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Fraction, Fraction] = {}
        for e, c in items:
            e = _frac(e)
            if order is not None and e >= order:
                continue
            acc[e] = acc.get(e, Fraction(0)) + _frac(c)
        self._terms = {e: c for e, c in acc.items() if c != 0}
        self._order = order

    # construction helpers
    @classmethod
    def monomial(cls, exponent: Rational, coeff: Rational = 1, order=None) -> "QSeries":
        return cls({exponent: coeff}, order)

    @classmethod
    def zero(cls, order=None) -> "QSeries":
        return cls({}, order)

    @classmethod
    def one(cls, order=None) -> "QSeries":
        return cls({0: 1}, order)

    @property
    def terms(self) -> dict[Fraction, Fraction]:
        return dict(self._terms)

    @property
    def order(self) -> Fraction | None:
        return self._order

    @property
    def is_exact(self) -> bool:
        return self._order is None

    def exponents(self) -> list[Fraction]:
        return sorted(self._terms)

    def items(self) -> list[tuple[Fraction, Fraction]]:
        return sorted(self._terms.items())

    def __getitem__(self, e) -> Fraction:
        e = _frac(e)
        if self._order is not None and e >= self._order:
            raise KeyError(f"coefficient of q^{e} lies beyond truncation order {self._order}")
        return self._terms.get(e, Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def min_exponent(self) -> Fraction | None:
        return min(self._terms) if self._terms else None

    def max_exponent(self) -> Fraction | None:
        return max(self._terms) if self._terms else None

    def valuation(self) -> Fraction | None:
        """Smallest exponent that may carry a nonzero coefficient."""
        if self._terms:
            return min(self._terms)
        return self._order

    def denominator(self) -> int:
        den = 1
        for e in self._terms:
            den = math.lcm(den, e.denominator)
        return den

    # arithmetic
    def truncate(self, order: Rational | None) -> "QSeries":
        if order is None:
            return self
        new = _min_order(self._order, _frac(order))
        return QSeries(self._terms, new)

    def __neg__(self) -> "QSeries":
        return QSeries({e: -c for e, c in self._terms.items()}, self._order)

    def __add__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            other = QSeries({0: other})
        order = _min_order(self._order, other._order)
        acc = dict(self._terms)
        for e, c in other._terms.items():
            acc[e] = acc.get(e, Fraction(0)) + c
        return QSeries(acc, order)

    __radd__ = __add__

    def __sub__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            other = QSeries({0: other})
        return self + (-other)

    def __rsub__(self, other) -> "QSeries":
        return (-self) + other

    def __mul__(self, other) -> "QSeries":
        if isinstance(other, QSeries):
            return series_mul(self, other)
        c = _frac(other)
        return QSeries({e: c * v for e, v in self._terms.items()}, self._order)

    __rmul__ = __mul__

    def shift(self, exponent: Rational) -> "QSeries":
        """Multiply by ``q^exponent``."""
        s = _frac(exponent)
        order = None if self._order is None else self._order + s
        return QSeries({e + s: c for e, c in self._terms.items()}, order)

    def dilate(self, factor: Rational) -> "QSeries":
        """Substitute ``q -> q^factor`` (``tau -> factor * tau``)."""
        f = _frac(factor)
        if f <= 0:
            raise ValueError("dilation factor must be positive")
        order = None if self._order is None else self._order * f
        return QSeries({e * f: c for e, c in self._terms.items()}, order)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self._order == other._order and self._terms == other._terms

    def __hash__(self):
        return hash((self._order, frozenset(self._terms.items())))

    def agrees_with(self, other: "QSeries", order: Rational | None = None) -> bool:
        """Equality of the known coefficients below ``order`` (default: the
        smaller of both truncation orders)."""
        bound = _min_order(self._order, other._order)
        if order is not None:
            bound = _min_order(bound, _frac(order))
        return self.truncate(bound)._terms == other.truncate(bound)._terms

    def first_difference(self, other: "QSeries") -> Fraction | None:
        bound = _min_order(self._order, other._order)
        a = self.truncate(bound)._terms
        b = other.truncate(bound)._terms
        diff = sorted(e for e in set(a) | set(b) if a.get(e) != b.get(e))
        return diff[0] if diff else None

    def integer_coefficients(self, start: Rational, count: int) -> list[Fraction]:
        """Coefficients at ``start, start+1, ..., start+count-1``."""
        s = _frac(start)
        return [self[s + k] for k in range(count)]

    # text
    def __repr__(self) -> str:
        return f"QSeries({format_series(self)})"

    def __str__(self) -> str:
        return format_series(self)

    def to_json(self) -> dict:
        return series_to_json(self)

    @classmethod
    def from_json(cls, obj) -> "QSeries":
        return series_from_json(obj)


def series_mul(a: QSeries, b: QSeries) -> QSeries:
    """Exact product, truncated where unknown tails of either factor could enter."""
    va, vb = a.valuation(), b.valuation()
    orders = []
    if a.order is not None and vb is not None:
        orders.append(a.order + vb)
    if b.order is not None and va is not None:
        orders.append(b.order + va)
    order = min(orders) if orders else None
    acc: dict[Fraction, Fraction] = {}
    bt = b._terms.items()
    for ea, ca in a._terms.items():
        for eb, cb in bt:
            e = ea + eb
            if order is not None and e >= order:
                continue
            acc[e] = acc.get(e, Fraction(0)) + ca * cb
    return QSeries(acc, order)


def series_invert(a: QSeries, order: Rational | None = None) -> QSeries:
    """Multiplicative inverse ``b`` with ``a*b = 1`` to the attainable order.

    An exact input needs an explicit ``order`` for the (infinite) result.
    """
    if not a._terms:
        raise ZeroDivisionError("not invertible")
    e0 = a.min_exponent()
    c0 = a._terms[e0]
    if a.order is not None:
        out_order = a.order - 2 * e0
        if order is not None:
            out_order = min(out_order, _frac(order))
    elif order is None:
        raise ValueError("an exact series needs an explicit order for its inverse")
    else:
        out_order = _frac(order)

    den = a.denominator()
    # dense recurrence on the grid -e0 + k/den
    n_max = math.ceil((out_order + e0) * den)
    rel = [(int((e - e0) * den), c) for e, c in a._terms.items() if e != e0]
    rel.sort()
    b = [Fraction(0)] * max(n_max, 0)
    inv0 = 1 / c0
    for n in range(len(b)):
        s = Fraction(1) if n == 0 else Fraction(0)
        for k, ck in rel:
            if k > n:
                break
            s -= ck * b[n - k]
        b[n] = s * inv0
    return QSeries({-e0 + Fraction(n, den): c for n, c in enumerate(b)}, out_order)


def eta_series(order: Rational) -> QSeries:
    """``eta(tau) = q^(1/24) sum_n (-1)^n q^((3n^2-n)/2)`` to ``O(q^order)``."""
    order = _frac(order)
    if order <= 0:
        raise ValueError("order must be positive")
    terms = {}
    shift = Fraction(1, 24)
    n = 0
    while True:
        hit = False
        for k in ((n, -n) if n else (0,)):
            e = shift + Fraction(3 * k * k - k, 2)
            if e < order:
                terms[e] = Fraction((-1) ** (k % 2))
                hit = True
        if not hit and n > 0:
            break
        n += 1
    return QSeries(terms, order)


def format_exponent(e: Fraction) -> str:
    return str(e.numerator) if e.denominator == 1 else f"{e.numerator}/{e.denominator}"


def format_series(s: QSeries) -> str:
    """Plain text, exponents ascending, e.g. ``q^(1/2) - q^(3/2) + O(q^12)``."""
    parts = []
    for e, c in s.items():
        mag = abs(c)
        sign = "-" if c < 0 else "+"
        coef = "" if mag == 1 else f"{format_exponent(mag)}*"
        mono = "1" if e == 0 and mag == 1 else ("" if e == 0 else f"q^({format_exponent(e)})")
        if e == 0 and mag != 1:
            body = format_exponent(mag)
        else:
            body = coef + mono
        parts.append((sign, body))
    if s.order is not None:
        parts.append(("+", f"O(q^({format_exponent(s.order)}))"))
    if not parts:
        return "0"
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def series_to_json(s: QSeries) -> dict:
    den = s.denominator()
    terms = [[int(e * den), c.numerator, c.denominator] for e, c in s.items()]
    order = None if s.order is None else [s.order.numerator, s.order.denominator]
    return {"den": den, "terms": terms, "order": order}


def series_from_json(obj) -> QSeries:
    if isinstance(obj, str):
        obj = json.loads(obj)
    den = int(obj["den"])
    terms = {Fraction(n, den): Fraction(cn, cd) for n, cn, cd in obj["terms"]}
    order = obj.get("order")
    if order is not None:
        order = Fraction(order[0], order[1])
    return QSeries(terms, order)


class WLaurentQSeries:
    """Finite Laurent object ``sum_k f_k(q) w^k`` with ``QSeries`` coefficients.

    ``window=None`` means every w-power is present; otherwise only
    ``|k| <= window`` is known.
    """

    __slots__ = ("_terms", "_window")

    def __init__(self, terms: Mapping | Iterable = (), window: Rational | None = None):
        window = None if window is None else _frac(window)
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Fraction, QSeries] = {}
        for k, f in items:
            k = _frac(k)
            if window is not None and abs(k) > window:
                continue
            if not isinstance(f, QSeries):
                f = QSeries({0: f})
            acc[k] = acc[k] + f if k in acc else f
        self._terms = {k: f for k, f in acc.items() if f}
        self._window = window

    @property
    def terms(self) -> dict[Fraction, QSeries]:
        return dict(self._terms)

    @property
    def window(self) -> Fraction | None:
        return self._window

    def max_abs_exponent(self) -> Fraction:
        return max((abs(k) for k in self._terms), default=Fraction(0))

    def __getitem__(self, k) -> QSeries:
        return self._terms.get(_frac(k), QSeries.zero())

    def __neg__(self) -> "WLaurentQSeries":
        return WLaurentQSeries({k: -f for k, f in self._terms.items()}, self._window)

    def __add__(self, other: "WLaurentQSeries") -> "WLaurentQSeries":
        acc = dict(self._terms)
        for k, f in other._terms.items():
            acc[k] = acc[k] + f if k in acc else f
        return WLaurentQSeries(acc, _min_order(self._window, other._window))

    def __mul__(self, other) -> "WLaurentQSeries":
        if not isinstance(other, WLaurentQSeries):
            return WLaurentQSeries({k: f * other for k, f in self._terms.items()}, self._window)
        windows = []
        if self._window is not None:
            windows.append(self._window - other.max_abs_exponent())
        if other._window is not None:
            windows.append(other._window - self.max_abs_exponent())
        window = min(windows) if windows else None
        if window is not None and window < 0:
            raise ValueError("product window is empty; widen the factor windows")
        acc: dict[Fraction, QSeries] = {}
        for ka, fa in self._terms.items():
            for kb, fb in other._terms.items():
                k = ka + kb
                if window is not None and abs(k) > window:
                    continue
                prod = fa * fb
                acc[k] = acc[k] + prod if k in acc else prod
        return WLaurentQSeries(acc, window)

    __rmul__ = __mul__

    def reflect(self) -> "WLaurentQSeries":
        """``w -> 1/w``."""
        return WLaurentQSeries({-k: f for k, f in self._terms.items()}, self._window)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WLaurentQSeries):
            return NotImplemented
        return self._window == other._window and self._terms == other._terms

    def __repr__(self) -> str:
        body = ", ".join(f"w^{format_exponent(k)}: {f}" for k, f in sorted(self._terms.items()))
        return f"WLaurentQSeries({{{body}}}, window={self._window})"


def constant_term_in_w(f: WLaurentQSeries) -> QSeries:
    if f.window is not None and f.window < 0:
        raise ValueError("constant term lies outside the known window")
    return f[0]


class PVFactor:
    """Principal-value expansion of ``(w - 1/w)^(2 - degree)``.

    For ``degree > 2`` the coefficient is the average of the ``|w| > 1`` and
    ``|w| < 1`` expansions; only exponents with ``|e| <= window`` are kept when
    materialized.
    """

    def __init__(self, degree: int, window: int):
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        if window < 0:
            raise ValueError("window must be nonnegative")
        self.degree = degree
        self.window = window

    @property
    def parity(self) -> int:
        return (2 - self.degree) % 2

    def coefficient(self, e) -> Fraction:
        e = _frac(e)
        if e.denominator != 1:
            return Fraction(0)
        e = int(e)
        if (e - self.degree) % 2:
            return Fraction(0)
        power = 2 - self.degree
        if power >= 0:
            # (w - 1/w)^p = sum_i C(p,i) (-1)^(p-i) w^(2i-p)
            i2 = e + power
            if i2 < 0 or i2 > 2 * power:
                return Fraction(0)
            i = i2 // 2
            return Fraction(math.comb(power, i) * (-1) ** (power - i))
        k = -power
        # |w|>1: sum_j C(k-1+j, j) w^(-k-2j); |w|<1: (-1)^k sum_j C(k-1+j, j) w^(k+2j)
        if e <= -k:
            j = (-k - e) // 2
            return Fraction(math.comb(k - 1 + j, j), 2)
        if e >= k:
            j = (e - k) // 2
            return Fraction((-1) ** k * math.comb(k - 1 + j, j), 2)
        return Fraction(0)

    __call__ = coefficient

    def support(self) -> list[int]:
        """Exponents with nonzero coefficient inside the window."""
        return [e for e in range(-self.window, self.window + 1) if self.coefficient(e)]

    def finite_support(self) -> list[int] | None:
        """Full support when it is finite (degree <= 2), else ``None``."""
        if self.degree > 2:
            return None
        p = 2 - self.degree
        return [e for e in range(-p, p + 1) if self.coefficient(e)]

    def as_laurent(self) -> WLaurentQSeries:
        terms = {e: QSeries({0: self.coefficient(e)}) for e in self.support()}
        window = None if self.degree <= 2 else self.window
        return WLaurentQSeries(terms, window)


def pv_vertex_factor(degree: int, window: int) -> PVFactor:
    return PVFactor(degree, window)


def series_sum(parts: Iterable[QSeries], order=None) -> QSeries:
    acc: dict[Fraction, Fraction] = {}
    ords = order if order is None else _frac(order)
    for p in parts:
        ords = _min_order(ords, p.order)
        for e, c in p._terms.items():
            acc[e] = acc.get(e, Fraction(0)) + c
    return QSeries(acc, ords)

