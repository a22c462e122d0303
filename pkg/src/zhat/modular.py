"""Quantum-modular diagnostics: radial limits at rationals, exact asymptotic
coefficients of false thetas, the X matrix and false/mock comparisons."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

import mpmath

from .engine import zhat_three_star
from .indefinite import mock_F0_reference
from .plumbing import Matrix, PlumbingGraph, adjacency_matrix, determinant, inverse, mat_vec, sigma237, three_star_params
from .series import QSeries


class RadialError(ValueError):
    pass


# t-grids deep enough in the asymptotic regime of the Sigma(2,3,7) false theta
ASYMPTOTIC_GRID = tuple(Fraction(1, 250 * 2 ** k) for k in range(8))
ASYMPTOTIC_GRID_ALT = tuple(Fraction(1, 375 * 2 ** k) for k in range(8))
ASYMPTOTIC_DEGREE = 7


@dataclass(frozen=True)
class PeriodicSign:
    """A function ``C`` on the integers with period ``P``; ``values[k-1] = C(k)``."""

    period: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if self.period <= 0:
            raise ValueError("period must be positive")
        vals = tuple(Fraction(v) for v in self.values)
        if len(vals) != self.period:
            raise ValueError(f"need {self.period} values, got {len(vals)}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_residues(cls, period: int, residues: Mapping[int, int]) -> "PeriodicSign":
        vals = [Fraction(0)] * period
        for r, c in residues.items():
            vals[(r - 1) % period] += c
        return cls(period, tuple(vals))

    def __call__(self, k: int) -> Fraction:
        return self.values[(k - 1) % self.period]

    @property
    def mean_zero(self) -> bool:
        return sum(self.values) == 0


SIGMA237_SIGN = PeriodicSign.from_residues(84, {1: 1, 41: 1, 55: 1, 71: 1, 13: -1, 29: -1, 43: -1, 83: -1})


@lru_cache(maxsize=None)
def bernoulli_number(n: int) -> Fraction:
    """``B_n`` with ``B_1 = -1/2``."""
    if n == 0:
        return Fraction(1)
    return -sum(math.comb(n + 1, k) * bernoulli_number(k) for k in range(n)) / (n + 1)


def bernoulli_polynomial(n: int, x) -> Fraction:
    x = Fraction(x)
    return sum(math.comb(n, k) * bernoulli_number(k) * x ** (n - k) for k in range(n + 1))


def l_value_negative(C: PeriodicSign, r: int) -> Fraction:
    """``L(-r, C) = -(P^r/(r+1)) sum_{k=1}^{P} C(k) B_{r+1}(k/P)``."""
    P = C.period
    s = sum(C(k) * bernoulli_polynomial(r + 1, Fraction(k, P)) for k in range(1, P + 1))
    return -Fraction(P ** r, r + 1) * s


@dataclass(frozen=True)
class PiMultiple:
    """``coefficient * pi^pi_power``."""

    coefficient: Fraction
    pi_power: int

    def value(self, precision: int = 128):
        with mpmath.workprec(precision):
            return mpmath.mpf(self.coefficient.numerator) / self.coefficient.denominator * mpmath.pi ** self.pi_power

    def __str__(self):
        if self.pi_power == 0 or self.coefficient == 0:
            return str(self.coefficient)
        return f"{self.coefficient}*pi^{self.pi_power}"


def asymptotic_coeffs(C: PeriodicSign, m: int, nmax: int) -> list[PiMultiple]:
    """``alpha(n)`` for ``sum_{k>0} C(k) exp(-2 pi t k^2/4m) ~ sum_n alpha(n) t^n``, ``n <= nmax``."""
    if not C.mean_zero:
        raise ValueError("divergent constant term")
    out = []
    for n in range(nmax + 1):
        rat = l_value_negative(C, 2 * n) * Fraction(-1, 2 * m) ** n / math.factorial(n)
        out.append(PiMultiple(rat, n))
    return out


def sign_pattern_series(C: PeriodicSign, m: int, order) -> QSeries:
    """``sum_{k>0} C(k) q^(k^2/4m)`` to ``O(q^order)``."""
    order = Fraction(order)
    terms = {}
    k = 1
    while Fraction(k * k, 4 * m) < order:
        c = C(k)
        if c:
            terms[Fraction(k * k, 4 * m)] = c
        k += 1
    return QSeries(terms, order)


def _mp(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


def evaluate_radial(s: QSeries, x, t, precision: int = 128):
    """``s(x + i t)`` with ``q = exp(2 pi i tau)``, exponents kept exact."""
    x, t = Fraction(x), Fraction(t)
    with mpmath.workprec(precision):
        total = mpmath.mpc(0)
        tt = _mp(t)
        for e, c in s.items():
            # the phase exp(2 pi i e x) depends only on e*x mod 1
            ph = (e * x) % 1
            total += _mp(c) * mpmath.expjpi(2 * _mp(ph)) * mpmath.exp(-2 * mpmath.pi * _mp(e) * tt)
        return total


def tail_bound(s: QSeries, t, precision: int = 128):
    """Upper bound for the omitted tail ``sum_{e >= N} |c| e^(-2 pi t e)``.

    Coefficients past the order are assumed bounded by the largest stored
    one (theta-type growth); exponents live on the grid ``1/den``.
    """
    if s.order is None:
        return mpmath.mpf(0)
    with mpmath.workprec(precision):
        cmax = max((abs(_mp(c)) for c in s.terms.values()), default=mpmath.mpf(1))
        cmax = max(cmax, mpmath.mpf(1))
        step = mpmath.mpf(1) / s.denominator()
        a = 2 * mpmath.pi * _mp(Fraction(t))
        return cmax * mpmath.exp(-a * _mp(s.order)) / (1 - mpmath.exp(-a * step))


def minimum_order(s: QSeries, t, target) -> int:
    """Smallest integer order at which ``tail_bound`` drops below ``target``."""
    cmax = max([abs(float(c)) for c in s.terms.values()] + [1.0])
    a = 2 * math.pi * float(t)
    step = 1 / s.denominator()
    need = (math.log(cmax) - math.log(1 - math.exp(-a * step)) - math.log(float(target))) / a
    return math.ceil(need)


def neville(ts: Sequence, fs: Sequence):
    """Value at 0 of the interpolating polynomial through ``(ts, fs)``."""
    p = list(fs)
    n = len(ts)
    for k in range(1, n):
        for i in range(n - k):
            p[i] = (ts[i + k] * p[i] - ts[i] * p[i + 1]) / (ts[i + k] - ts[i])
    return p[0]


def polynomial_fit(ts: Sequence, fs: Sequence) -> list:
    """Coefficients (ascending) of the interpolating polynomial."""
    n = len(ts)
    V = mpmath.matrix([[t ** j for j in range(n)] for t in ts])
    sol = mpmath.lu_solve(V, mpmath.matrix(list(fs)))
    return [sol[i] for i in range(n)]


@dataclass
class RadialReport:
    x: Fraction
    tgrid: tuple[Fraction, ...]
    values: list
    extrapolant: object
    error_estimate: object
    coefficients: list = field(default_factory=list)
    precision: int = 128

    def slope(self):
        return self.coefficients[1] if len(self.coefficients) > 1 else mpmath.mpc(0)

    def rows(self, digits: int = 30) -> list[list[str]]:
        ext = mpmath.nstr(self.extrapolant, digits) if self.extrapolant is not None else ""
        err = mpmath.nstr(self.error_estimate, 6) if self.error_estimate is not None else ""
        out = []
        for t, v in zip(self.tgrid, self.values):
            out.append([str(t), mpmath.nstr(mpmath.re(v), digits), mpmath.nstr(mpmath.im(v), digits), ext, err])
        return out

    def to_json(self, digits: int = 30) -> dict:
        def cplx(z):
            return None if z is None else [mpmath.nstr(mpmath.re(z), digits), mpmath.nstr(mpmath.im(z), digits)]

        return {
            "x": str(self.x),
            "precision": self.precision,
            "rows": [dict(zip(("t", "Re", "Im"), r[:3])) for r in self.rows(digits)],
            "extrapolant": cplx(self.extrapolant),
            "error_estimate": None if self.error_estimate is None else mpmath.nstr(self.error_estimate, 6),
            "fit": [cplx(c) for c in self.coefficients],
        }

    def to_csv(self, digits: int = 30) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "Re", "Im", "extrapolant", "error_estimate"])
        w.writerows(self.rows(digits))
        return buf.getvalue()


def extrapolate(tgrid: Sequence[Fraction], values: Sequence, degree: int = 3, precision: int = 128):
    """Polynomial extrapolation to ``t = 0`` from the ``degree + 1`` smallest t.

    Returns ``(extrapolant, error_estimate, fit coefficients)``; the error
    estimate is the gap to the extrapolant that drops the largest t used.
    """
    if not tgrid:
        return None, None, []
    with mpmath.workprec(precision):
        pts = sorted(zip(tgrid, values), key=lambda p: p[0])[: degree + 1]
        ts = [_mp(Fraction(t)) for t, _ in pts]
        fs = [v for _, v in pts]
        best = neville(ts, fs)
        if len(ts) > 1:
            err = abs(best - neville(ts[:-1], fs[:-1]))
        else:
            err = mpmath.inf
        return best, err, polynomial_fit(ts, fs)


def radial_extrapolate(s: QSeries, x, tgrid: Sequence, precision: int = 128, degree: int = 3,
                       tail_target=None) -> RadialReport:
    """Evaluate ``s`` at ``x + i t`` on the grid and extrapolate to ``t -> 0+``."""
    if precision < 64:
        raise ValueError("precision must be at least 64 bits")
    x = Fraction(x)
    grid = tuple(Fraction(t) for t in tgrid)
    if any(t <= 0 for t in grid):
        raise ValueError("t values must be positive")
    target = mpmath.mpf(2) ** (-(precision // 2)) if tail_target is None else mpmath.mpf(tail_target)
    if grid and s.order is not None:
        tmin = min(grid)
        if tail_bound(s, tmin, precision) > target:
            need = minimum_order(s, tmin, target)
            raise RadialError(f"increase series order: need order >= {need} for t = {tmin}")
    values = [evaluate_radial(s, x, t, precision) for t in grid]
    ext, err, fit = extrapolate(grid, values, degree, precision)
    return RadialReport(x, grid, values, ext, err, fit, precision)


def required_order(tgrid: Sequence, precision: int = 128, den: int = 168, cmax: float = 1.0) -> int:
    """Order making the tail bound pass for the smallest t of the grid."""
    tmin = float(min(Fraction(t) for t in tgrid))
    a = 2 * math.pi * tmin
    target = 2.0 ** (-(precision // 2))
    return math.ceil((math.log(cmax) - math.log(1 - math.exp(-a / den)) - math.log(target)) / a) + 1


@dataclass(frozen=True)
class Cyclotomic:
    """``sum_r mult(r) exp(2 pi i r) / (2 sqrt(det))`` with exact phases ``r mod 1``."""

    phases: tuple[tuple[Fraction, int], ...]
    det_abs: int

    @property
    def conductor(self) -> int:
        return math.lcm(*(r.denominator for r, _ in self.phases)) if self.phases else 1

    def numerator(self):
        return sum(mpmath.expjpi(2 * _mp(r)) * c for r, c in self.phases)

    def value(self, precision: int = 128):
        with mpmath.workprec(precision):
            return self.numerator() / (2 * mpmath.sqrt(self.det_abs))

    def scaled_numerator(self) -> dict[Fraction, int]:
        return dict(self.phases)

    def __str__(self):
        num = " + ".join(f"{c}*e({r})" if c != 1 else f"e({r})" for r, c in self.phases) or "0"
        return f"({num})/(2*sqrt({self.det_abs}))"


def _reduce(M: Matrix, v: Sequence[int], scale: int) -> tuple[int, ...]:
    """Representative of ``v`` modulo ``scale * M Z^V``."""
    L = tuple(tuple(scale * x for x in row) for row in M)
    coords = mat_vec(inverse(L), v)
    shift = mat_vec(L, [math.floor(c) for c in coords])
    return tuple(int(a - s) for a, s in zip(v, shift))


def x_matrix(M: Matrix, a: Sequence[int], b: Sequence[int]) -> Cyclotomic:
    """Entry ``X_ab`` as an exact cyclotomic sum over the set ``{(+-a, +-b)}``."""
    det = determinant(M)
    if det == 0:
        raise ValueError("adjacency matrix singular")
    Minv = inverse(M)
    orbit = set()
    for sa in (1, -1):
        for sb in (1, -1):
            aa = _reduce(M, [sa * x for x in a], 2)
            bb = _reduce(M, [sb * x for x in b], 1)
            orbit.add((aa, bb))
    phases: dict[Fraction, int] = {}
    for aa, bb in sorted(orbit):
        r = sum(Fraction(x) * y for x, y in zip(aa, mat_vec(Minv, bb))) % 1
        phases[r] = phases.get(r, 0) + 1
    return Cyclotomic(tuple(sorted(phases.items())), abs(int(det)))


@dataclass
class WRTReport:
    k: int
    radial: RadialReport
    without_x: object
    with_x: object
    x00: Cyclotomic

    def to_json(self, digits: int = 30) -> dict:
        def cplx(z):
            return [mpmath.nstr(mpmath.re(z), digits), mpmath.nstr(mpmath.im(z), digits)]

        return {"k": self.k, "radial": self.radial.to_json(digits), "x00": str(self.x00),
                "z_cs_without_x00": cplx(self.without_x), "z_cs_with_x00": cplx(self.with_x)}


def wrt_radial(g: PlumbingGraph, k: int, precision: int = 128, tgrid: Sequence = ASYMPTOTIC_GRID,
               order=None, series: QSeries | None = None) -> WRTReport:
    """``(1/(i sqrt(2k))) lim Z-hat_0(1/k + i t)``, in both normalizations.

    Only the unimodular case is assembled: there the flat-connection sum
    collapses to ``a = b = 0``.
    """
    if k <= 0:
        raise ValueError("k must be positive")
    M = adjacency_matrix(g)
    if abs(determinant(M)) != 1:
        raise ValueError("only unimodular plumbings are assembled")
    if series is None:
        series = zhat_three_star(g, order if order is not None else required_order(tgrid, precision))
    rep = radial_extrapolate(series, Fraction(1, k), tgrid, precision)
    x00 = x_matrix(M, [0] * len(M), [0] * len(M))
    with mpmath.workprec(precision):
        pref = 1 / (mpmath.mpc(0, 1) * mpmath.sqrt(2 * k))
        plain = pref * rep.extrapolant
        withx = plain * x00.value(precision)
    return WRTReport(k, rep, plain, withx, x00)


@dataclass
class FalseMockReport:
    false_rows: list
    mock_rows: list
    coefficients: list
    fit: RadialReport | None = None

    def limit_errors(self, precision: int = 128) -> tuple:
        """``(|extrapolant - alpha(0)|, |slope - alpha(1)|)`` from the grid fit."""
        if self.fit is None or self.fit.extrapolant is None:
            return None, None
        a0 = self.coefficients[0].value(precision)
        a1 = self.coefficients[1].value(precision) if len(self.coefficients) > 1 else 0
        return abs(self.fit.extrapolant - a0), abs(self.fit.slope() - a1)

    def to_json(self, digits: int = 20) -> dict:
        def cell(v):
            if v is None:
                return None
            return str(v) if isinstance(v, Fraction) else mpmath.nstr(v, digits)

        e0, e1 = self.limit_errors()
        return {
            "alpha": [str(c) for c in self.coefficients],
            "false": [{k: cell(v) for k, v in r.items()} for r in self.false_rows],
            "mock": [{k: cell(v) for k, v in r.items()} for r in self.mock_rows],
            "limit_error": cell(e0),
            "slope_error": cell(e1),
        }


def false_mock_zero_report(order, tgrid: Sequence, precision: int = 128, nterms: int = 4,
                           mock_order: int = 2000, degree: int | None = None) -> FalseMockReport:
    """Sigma(2,3,7) at the cusp 0: the false theta ``g~(it)`` against its
    asymptotic series, plus the growth of the mock ``F0(e^(-2 pi t))``.

    ``g~`` is the false-theta combination without its ``q^(83/168)``
    prefactor.  The grid fit gives the limit and slope to compare with
    ``alpha(0)`` and ``alpha(1)``; rows show the ``nterms`` partial sum.
    F0 is tabulated only where its truncation is resolved.
    """
    grid = [Fraction(t) for t in tgrid]
    alphas = asymptotic_coeffs(SIGMA237_SIGN, 42, max(nterms - 1, 1))
    if not grid:
        return FalseMockReport([], [], alphas)
    order = Fraction(order)
    g = zhat_three_star(sigma237(), order).shift(-three_star_params(sigma237()).prefactor_exponent)
    g = g.truncate(g.order)
    fit = radial_extrapolate(g, 0, grid, precision, degree if degree is not None else len(grid) - 1)
    f0 = mock_F0_reference(min(order, mock_order))
    logc = math.log(max(float(c) for c in f0.terms.values()))
    false_rows, mock_rows = [], []
    with mpmath.workprec(precision):
        for t, val in zip(fit.tgrid, fit.values):
            pred = sum(a.value(precision) * _mp(t) ** n for n, a in enumerate(alphas[:nterms]))
            false_rows.append({"t": t, "value": mpmath.re(val), "prediction": pred,
                               "residual": abs(val - pred)})
            resolved = 2 * math.pi * float(t) * float(f0.order) - logc > 50
            mock_rows.append({"t": t, "F0": mpmath.re(evaluate_radial(f0, 0, t, precision)) if resolved else None})
    return FalseMockReport(false_rows, mock_rows, alphas, fit)


def report_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
