"""Z-hat of negative-definite plumbings, by lattice enumeration with
principal-value constant terms and by the three-star false-theta closed form."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .lattice import lattice_points
from .plumbing import (PlumbingError, PlumbingGraph, SpincLabel, adjacency_matrix, default_label, inertia,
                       three_star_params)
from .series import QSeries, pv_vertex_factor


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def normalization_exponent(g: PlumbingGraph) -> Fraction:
    """``(3 sigma - sum of weights) / 4``."""
    sig = inertia(adjacency_matrix(g)).signature
    return Fraction(3 * sig - sum(g.weights), 4)


def zhat_negative_definite(g: PlumbingGraph, a: SpincLabel | Sequence[int] | None = None, order=10,
                           jobs: int = 1) -> QSeries:
    """Z-hat_a as a q-series to ``O(q^order)`` for negative-definite ``M``.

    Only lattice vectors whose coordinates sit in the support of every
    degree <= 2 vertex factor are enumerated; the rest contribute zero.
    """
    order = Fraction(order)
    if order <= 0:
        raise ValueError("order must be positive")
    M = adjacency_matrix(g)
    inert = inertia(M)
    if inert.negatives != g.size:
        raise PlumbingError("adjacency matrix must be negative definite")
    if a is None:
        a = default_label(g)
    avec = tuple(a.a if isinstance(a, SpincLabel) else a)
    if tuple(x % 2 for x in avec) != g.delta():
        raise PlumbingError(f"label {avec} does not reduce to delta {g.delta()} mod 2")
    shift = Fraction(3 * inert.signature - sum(g.weights), 4)
    sign = (-1) ** inert.positives
    degrees = g.degrees()

    # first pass sizes the window from the unrestricted coordinates
    factors = [pv_vertex_factor(d, 0) for d in degrees]
    restrict = [None if f.finite_support() is None else [-e for e in f.finite_support()] for f in factors]
    outer = [i for i, r in enumerate(restrict) if r is not None]
    terms = lattice_points(M, avec, order - shift, restrict=restrict, outer=outer, jobs=jobs)
    window = max((abs(x) for t in terms for x in t.n), default=0)
    factors = [pv_vertex_factor(d, window) for d in degrees]

    acc: dict[Fraction, Fraction] = {}
    for t in terms:
        coeff = Fraction(sign)
        for f, nv in zip(factors, t.n):
            coeff *= f.coefficient(-nv)
            if not coeff:
                break
        if coeff:
            e = t.qexp + shift
            acc[e] = acc.get(e, Fraction(0)) + coeff
    return QSeries(acc, order)


@dataclass(frozen=True)
class FalseTheta:
    m: int
    r: int
    series: QSeries


def false_theta(m: int, r: int, order, sign_at_zero: int = 0) -> FalseTheta:
    """``sum_{k = r mod 2m} sgn(k) q^(k^2/4m)`` to ``O(q^order)``.

    ``sign_at_zero`` is the value used for ``sgn(0)``; it only matters when
    ``r = 0 mod 2m``.  The relation with ``F_{j,m}`` and ``p_{m,j}`` needs 1.
    """
    if not isinstance(m, int) or m <= 0:
        raise ValueError("m must be a positive integer")
    order = Fraction(order)
    if order <= 0:
        raise ValueError("order must be positive")
    kmax = math.isqrt(math.ceil(order * 4 * m)) + 1
    terms: dict[Fraction, Fraction] = {}
    r0 = r % (2 * m)
    for k in range(r0 - 2 * m * (kmax // (2 * m) + 1), kmax + 1, 2 * m):
        e = Fraction(k * k, 4 * m)
        if e < order:
            terms[e] = terms.get(e, Fraction(0)) + (_sgn(k) if k else sign_at_zero)
    return FalseTheta(m, r0, QSeries(terms, order))


def F_series(j, m, order) -> QSeries:
    """``F_{j,m}(tau) = sum_k sgn(k + 1/2) q^((k + j/2m)^2)``."""
    j, m, order = Fraction(j), Fraction(m), Fraction(order)
    if m == 0:
        raise ValueError("m must be nonzero")
    if order <= 0:
        raise ValueError("order must be positive")
    s = j / (2 * m)
    reach = math.isqrt(math.ceil(order)) + 2
    kc = -math.floor(s)
    terms: dict[Fraction, Fraction] = {}
    for k in range(kc - reach, kc + reach + 1):
        e = (k + s) ** 2
        if e < order:
            terms[e] = terms.get(e, Fraction(0)) + (1 if k >= 0 else -1)
    return QSeries(terms, order)


def p_polynomial(m, j) -> QSeries:
    """The correction polynomial with ``F_{j,m}(m tau) = false theta + p``."""
    m, j = Fraction(m), Fraction(j)
    terms: dict[Fraction, Fraction] = {}
    fl = math.floor(j / (2 * m))
    if j >= 2 * m:
        for k in range(1, fl + 1):
            e = (j - 2 * m * k) ** 2 / (4 * m)
            terms[e] = terms.get(e, Fraction(0)) - 2
    elif j < 0:
        for k in range(0, -fl):
            e = (j + 2 * m * k) ** 2 / (4 * m)
            terms[e] = terms.get(e, Fraction(0)) + 2
    return QSeries(terms)


def F_and_p(j, m, order) -> tuple[QSeries, QSeries]:
    return F_series(j, m, order), p_polynomial(m, j)


def zhat_three_star(g: PlumbingGraph, order) -> QSeries:
    """Closed form ``sign * q^c * sum_j F_{m - b_j, m}(m tau)``."""
    order = Fraction(order)
    data = three_star_params(g)
    m = data.m
    inner = order - data.prefactor_exponent
    total = QSeries.zero()
    if inner > 0:
        parts = [F_series(m - bj, m, inner / m).dilate(m) for bj in data.b]
        total = sum(parts[1:], parts[0])
    else:
        total = QSeries.zero(inner)
    return (total.shift(data.prefactor_exponent) * data.sign).truncate(order)


def legendre_symbol_series(order) -> QSeries:
    """The Legendre-symbol form often quoted for the Sigma(2,3,7) false
    theta: ``q^(83/168) sum_{k>=0, k^2 = 1 mod 42} (k/21) q^(k^2/168)``.

    Kept for comparison only; it disagrees with the false-theta combination.
    """
    order = Fraction(order)
    terms = {}
    k = 0
    while True:
        e = Fraction(83, 168) + Fraction(k * k, 168)
        if e >= order:
            break
        if (k * k - 1) % 42 == 0:
            terms[e] = terms.get(e, 0) + _jacobi(k, 21)
        k += 1
    return QSeries(terms, order)


def _jacobi(a: int, n: int) -> int:
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0
