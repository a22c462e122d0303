"""Dehn surgery on knot complements: Laplace transform of two-variable knot
series, truncation accounting and the Alexander-polynomial boundary check."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

from .series import QSeries


class SurgeryError(ValueError):
    pass


@dataclass(frozen=True)
class SurgerySlope:
    p: int
    r: int

    def __post_init__(self):
        if self.p == 0 or self.r == 0:
            raise SurgeryError("slope p/r needs nonzero p and r")
        if math.gcd(self.p, self.r) != 1:
            raise SurgeryError(f"slope {self.p}/{self.r} is not reduced")

    @classmethod
    def parse(cls, text: str) -> "SurgerySlope":
        p, _, r = text.partition("/")
        return cls(int(p), int(r or 1))

    def __str__(self):
        return f"{self.p}/{self.r}"


@dataclass
class KnotSeries:
    """``F_K(x, q) = sum_u f_u(q) x^u`` with antisymmetry ``f_{-u} = -f_u``.

    ``u_max`` is the largest ``|u|`` with trustworthy data; ``None`` marks a
    finite, exact series.  ``two_power`` and ``qshift`` record the overall
    ``2^-c q^Delta`` normalization of the data.
    """

    name: str
    coefficients: dict[Fraction, QSeries]
    u_max: Fraction | None
    two_power: int = 0
    qshift: Fraction = Fraction(0)
    alexander: dict[int, int] | None = None
    trust: dict = field(default_factory=dict)

    def __post_init__(self):
        coeffs = {Fraction(u): f for u, f in self.coefficients.items() if f}
        for u, f in list(coeffs.items()):
            if -u in coeffs:
                if coeffs[-u] != -f:
                    raise SurgeryError(f"data not antisymmetric at x^{u}")
            else:
                coeffs[-u] = -f
        if Fraction(0) in coeffs:
            raise SurgeryError("antisymmetric data cannot have an x^0 term")
        self.coefficients = dict(sorted(coeffs.items()))
        if self.u_max is not None:
            self.u_max = Fraction(self.u_max)

    def __getitem__(self, u) -> QSeries:
        return self.coefficients.get(Fraction(u), QSeries.zero())

    def evaluate_q1(self) -> dict[Fraction, Fraction]:
        """``F_K(x, 1)`` coefficient-wise (the data are Laurent polynomials in q)."""
        return {u: sum(f.terms.values(), Fraction(0)) for u, f in self.coefficients.items()}

    def min_q_exponents(self) -> dict[Fraction, Fraction]:
        return {u: f.min_exponent() for u, f in self.coefficients.items() if u > 0}

    def with_coefficient(self, u, f: QSeries) -> "KnotSeries":
        coeffs = {k: v for k, v in self.coefficients.items() if k > 0}
        coeffs[Fraction(u)] = f
        return KnotSeries(self.name, coeffs, self.u_max, self.two_power, self.qshift, self.alexander)

    def to_json(self) -> dict:
        terms = []
        for u, f in self.coefficients.items():
            if u <= 0:
                continue
            terms.append([int(2 * u), [[e.numerator, e.denominator, c.numerator, c.denominator]
                                       for e, c in f.items()]])
        obj = {"name": self.name, "xden": 2, "terms": terms}
        if self.alexander is not None:
            obj["alexander"] = [[k, v] for k, v in sorted(self.alexander.items())]
        obj["u_max"] = None if self.u_max is None else [self.u_max.numerator, self.u_max.denominator]
        return obj


def parse_knot(document) -> KnotSeries:
    """Read the knot JSON format (path, text or dict)."""
    if isinstance(document, Path) or (isinstance(document, str) and not document.lstrip().startswith("{")):
        document = Path(document).read_text()
    obj = json.loads(document) if isinstance(document, str) else document
    xden = int(obj.get("xden", 2))
    coeffs: dict[Fraction, QSeries] = {}
    for xnum, entries in obj["terms"]:
        u = Fraction(xnum, xden)
        coeffs[u] = QSeries({Fraction(vn, vd): Fraction(cn, cd) for vn, vd, cn, cd in entries})
    alex = obj.get("alexander")
    alexander = None if alex is None else {int(k): int(v) for k, v in alex}
    if "u_max" in obj:
        um = obj["u_max"]
        u_max = None if um is None else Fraction(um[0], um[1])
    else:
        u_max = max((abs(u) for u in coeffs), default=Fraction(0))
    return KnotSeries(obj.get("name", "knot"), coeffs, u_max, int(obj.get("two_power", 0)),
                      Fraction(obj.get("qshift", 0)), alexander)


def figure_eight_FK() -> KnotSeries:
    """Leading data ``F = (Xi(x) - Xi(1/x))/2`` for the figure-eight knot."""
    xi = {
        Fraction(1, 2): QSeries({0: 1}),
        Fraction(3, 2): QSeries({0: 2}),
        Fraction(5, 2): QSeries({-1: 1, 0: 3, 1: 1}),
        Fraction(7, 2): QSeries({-2: 2, -1: 2, 0: 5, 1: 2, 2: 2}),
    }
    half = Fraction(1, 2)
    coeffs = {u: f * half for u, f in xi.items()}
    return KnotSeries("4_1", coeffs, Fraction(7, 2), two_power=1, alexander={-1: -1, 0: 3, 1: -1})


def unknot_FK() -> KnotSeries:
    return KnotSeries("unknot", {Fraction(1, 2): QSeries({0: 1})}, None, alexander={0: 1})


def laplace_transform(u, v, a: int, slope: SurgerySlope) -> Fraction | None:
    """Exponent of the image of ``x^u q^v``, or ``None`` when the term is not selected."""
    u, v = Fraction(u), Fraction(v)
    sel = slope.r * u - a
    if sel.denominator != 1 or int(sel) % slope.p:
        return None
    return -u * u * slope.r / slope.p + v


def laplace_image(series: Mapping[Fraction, QSeries], a: int, slope: SurgerySlope) -> QSeries:
    """Apply the transform to ``sum_u f_u(q) x^u`` term by term."""
    acc: dict[Fraction, Fraction] = {}
    for u, f in series.items():
        for v, c in f.items():
            e = laplace_transform(u, v, a, slope)
            if e is not None:
                acc[e] = acc.get(e, Fraction(0)) + c
    return QSeries(acc)


def _multiply_by_frame(K: KnotSeries, slope: SurgerySlope) -> dict[Fraction, QSeries]:
    """``(x^(1/2r) - x^(-1/2r)) F_K``."""
    s = Fraction(1, 2 * slope.r)
    out: dict[Fraction, QSeries] = {}
    for u, f in K.coefficients.items():
        for shift, sign in ((s, 1), (-s, -1)):
            k = u + shift
            out[k] = out[k] + f * sign if k in out else f * sign
    return {k: f for k, f in out.items() if f}


def estimated_min_exponent(K: KnotSeries, u: Fraction) -> Fraction:
    """Lower bound for the q-exponents of an unknown coefficient ``f_u``.

    The minimal exponents of consecutive known coefficients are extended step
    by step, each step falling by the last observed drop plus the largest
    observed change of drop (a conservative quadratic continuation).  The
    width is never allowed beyond ``2u``.
    """
    mins = [e for _, e in sorted(K.min_q_exponents().items())]
    if not mins:
        return -2 * u
    last_u = max(K.min_q_exponents())
    drops = [b - a for a, b in zip(mins, mins[1:])]
    curv = max((abs(b - a) for a, b in zip(drops, drops[1:])), default=Fraction(1))
    step = drops[-1] if drops else Fraction(-1)
    est = mins[-1]
    k = last_u
    while k < u:
        step -= curv
        est += step
        k += 1
    return max(est, -2 * u)


def guaranteed_order(K: KnotSeries, slope: SurgerySlope) -> Fraction | None:
    """Smallest exponent an unknown ``x``-power could reach after the transform."""
    if K.u_max is None:
        return None
    coef = -Fraction(slope.r, slope.p)
    if coef <= 0:
        raise SurgeryError("slope not admissible for available data")
    s = Fraction(1, 2 * abs(slope.r))
    best = None
    u = K.u_max + 1
    while True:
        lead = min(coef * (u - s) ** 2, coef * (u + s) ** 2)
        cand = lead + estimated_min_exponent(K, u)
        best = cand if best is None else min(best, cand)
        # every later candidate is at least lead - 2u, which only grows
        if coef * (u - s) ** 2 - 2 * u > best and u > K.u_max + 2:
            break
        u += 1
    return best


def surgery_zhat(K: KnotSeries, slope: SurgerySlope, a: int = 0, order=None) -> tuple[QSeries, Fraction | None]:
    """Raw transformed series (``epsilon q^d`` not applied) and its guaranteed order."""
    guard = guaranteed_order(K, slope)
    if K.u_max is not None and -Fraction(slope.r, slope.p) <= 0:
        raise SurgeryError("slope not admissible for available data")
    raw = laplace_image(_multiply_by_frame(K, slope), a, slope)
    bound = guard
    if order is not None:
        bound = Fraction(order) if bound is None else min(bound, Fraction(order))
    return (raw if bound is None else raw.truncate(bound)), guard


def normalized(series: QSeries) -> tuple[Fraction, int, QSeries]:
    """Factor out the minimal exponent and the sign of the leading coefficient."""
    e0 = series.min_exponent()
    if e0 is None:
        return Fraction(0), 1, series
    sign = 1 if series[e0] > 0 else -1
    return e0, sign, (series.shift(-e0) * sign)


def symmetric_expansion_inverse(poly: Mapping[int, int], reach: int) -> dict[int, Fraction]:
    """Average of the ``x -> 0`` and ``x -> oo`` Laurent expansions of ``1/poly``
    for exponents ``|k| <= reach``."""
    lo, hi = min(poly), max(poly)

    def expand(coeffs: list[Fraction], n: int) -> list[Fraction]:
        # 1 / (c0 + c1 y + ...) as a power series in y
        out = []
        for k in range(n):
            s = Fraction(1 if k == 0 else 0)
            for i in range(1, min(k, len(coeffs) - 1) + 1):
                s -= coeffs[i] * out[k - i]
            out.append(s / coeffs[0])
        return out

    n = reach + (hi - lo) + 1
    # x -> 0: poly = x^lo (c_lo + c_{lo+1} x + ...)
    up = [Fraction(poly.get(lo + i, 0)) for i in range(hi - lo + 1)]
    small = {k - lo: c for k, c in enumerate(expand(up, n))}
    # x -> oo: poly = x^hi (c_hi + c_{hi-1}/x + ...)
    down = [Fraction(poly.get(hi - i, 0)) for i in range(hi - lo + 1)]
    large = {-hi - k: c for k, c in enumerate(expand(down, n))}
    return {k: (small.get(k, Fraction(0)) + large.get(k, Fraction(0))) / 2 for k in range(-reach, reach + 1)}


@dataclass(frozen=True)
class BoundaryEntry:
    u: Fraction
    observed: Fraction
    expected: Fraction

    @property
    def ok(self) -> bool:
        return self.observed == self.expected


@dataclass(frozen=True)
class BoundaryReport:
    knot: str
    entries: tuple[BoundaryEntry, ...]
    quotient: dict

    @property
    def passed(self) -> bool:
        return all(e.ok for e in self.entries)

    def mismatches(self) -> list[Fraction]:
        return [e.u for e in self.entries if not e.ok]


def alexander_boundary_check(K: KnotSeries) -> BoundaryReport:
    """Compare ``F_K(x, 1)`` with ``(x^(1/2) - x^(-1/2)) * s.e. 1/Delta_K(x)``.

    The quotient ``F_K(x,1) / (x^(1/2) - x^(-1/2))`` is also returned,
    reconstructed outward from the symmetric-expansion value at ``x^0``.
    """
    if K.alexander is None:
        raise SurgeryError("knot data carries no Alexander polynomial")
    at1 = K.evaluate_q1()
    top = K.u_max if K.u_max is not None else max((u for u in at1), default=Fraction(1, 2))
    reach = int(top + Fraction(1, 2)) + 1
    se = symmetric_expansion_inverse(K.alexander, reach)
    entries = []
    u = Fraction(1, 2)
    while u <= top:
        expected = se[int(u - Fraction(1, 2))] - se[int(u + Fraction(1, 2))]
        entries.append(BoundaryEntry(u, at1.get(u, Fraction(0)), expected))
        u += 1
    # phi_{n+1} = phi_n - F_{n+1/2}, anchored at phi_0
    phi = {0: se[0]}
    for n in range(0, int(top - Fraction(1, 2)) + 1):
        phi[n + 1] = phi[n] - at1.get(Fraction(2 * n + 1, 2), Fraction(0))
    return BoundaryReport(K.name, tuple(entries), phi)
