"""Z-hat of orientation-reversed three-star manifolds via a cone-regularized
signature (1,1) theta function, and the order-7 mock theta reference."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .plumbing import PlumbingError, PlumbingGraph, ThreeStarData, three_star_params
from .series import QSeries, WLaurentQSeries, constant_term_in_w, eta_series, pv_vertex_factor, series_invert


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


class ConeError(ValueError):
    """Cone vectors that do not give a convergent theta series."""


@dataclass(frozen=True)
class IndefThetaSpec:
    """Form ``K = diag(-m/2, 3)``, cone vectors and the shifted lattices.

    The lattice for ``(j, eps)`` is ``v1 in 2Z + 1 - eps*b_j/m``,
    ``v2 in Z - 1/6``.
    """

    m: Fraction
    b: tuple[Fraction, ...]
    cvec: tuple[Fraction, Fraction] = (Fraction(1), Fraction(0))
    cprime: tuple[Fraction, Fraction] = (Fraction(8), Fraction(21))
    v2_shift: Fraction = Fraction(-1, 6)

    def __post_init__(self):
        object.__setattr__(self, "m", Fraction(self.m))
        object.__setattr__(self, "b", tuple(Fraction(x) for x in self.b))
        object.__setattr__(self, "cvec", tuple(Fraction(x) for x in self.cvec))
        object.__setattr__(self, "cprime", tuple(Fraction(x) for x in self.cprime))

    @classmethod
    def from_data(cls, data: ThreeStarData, cvec=(1, 0), cprime=(8, 21)) -> "IndefThetaSpec":
        return cls(data.m, data.b, tuple(cvec), tuple(cprime))

    def form(self, u, v) -> Fraction:
        return -self.m / 2 * u[0] * v[0] + 3 * u[1] * v[1]

    def norm(self, v) -> Fraction:
        return self.form(v, v)

    def v1_offset(self, j: int, eps: int) -> Fraction:
        return 1 - eps * self.b[j] / self.m

    def validate(self) -> Fraction:
        """Check both vectors are timelike and in the same cone component.

        Returns ``kappa > 0`` with ``(v, v) >= kappa * v1^2`` on the support
        of the regularizer; raises ``ConeError`` otherwise.
        """
        c, cp = self.cvec, self.cprime
        if self.norm(c) >= 0 or self.norm(cp) >= 0:
            raise ConeError("invalid timelike pair: cone vectors must satisfy (c,c) < 0")
        if self.form(c, cp) >= 0:
            raise ConeError("invalid timelike pair: vectors lie in opposite cone components")
        lo, hi = self.slope_interval()
        if lo is None and hi is None:
            raise ConeError("invalid timelike pair: support unbounded below")
        # min of -m/2 + 3 s^2 over [lo, hi]
        if (lo is None or lo <= 0) and (hi is None or hi >= 0):
            s = Fraction(0)
        elif lo is not None and lo > 0:
            s = lo
        else:
            s = hi
        kappa = -self.m / 2 + 3 * s * s
        if kappa <= 0:
            raise ConeError("invalid timelike pair: support meets the null cone")
        return kappa

    def slope_interval(self) -> tuple[Fraction | None, Fraction | None]:
        """Closed interval of ``s = v2/|v1|`` on which the two signs differ
        (``None`` marks an infinite end)."""
        def root_and_dir(c):
            # (vbar, c) = |v1| * (-m/2 c1 + 3 c2 s)
            a0, a1 = -self.m / 2 * c[0], 3 * c[1]
            if a1 == 0:
                return None, _sgn(a0)
            return -a0 / a1, _sgn(a1)

        r1, d1 = root_and_dir(self.cvec)
        r2, d2 = root_and_dir(self.cprime)
        if r1 is None and r2 is None:
            if d1 != d2:
                return None, None
            raise ConeError("degenerate cone: the regularizer vanishes identically")
        if r1 is None or r2 is None:
            r, d, const = (r2, d2, d1) if r1 is None else (r1, d1, d2)
            # the sloped functional has sign d*sgn(s - r)
            return (r, None) if d != const else (None, r)
        if d1 != d2:
            raise ConeError("invalid timelike pair: support unbounded below")
        return min(r1, r2), max(r1, r2)


def rho_regularizer(v: Sequence, spec: IndefThetaSpec) -> Fraction:
    """``(sgn(vbar, c) - sgn(vbar, c')) / 2`` with ``vbar = (|v1|, v2)``."""
    vbar = (abs(Fraction(v[0])), Fraction(v[1]))
    return Fraction(_sgn(spec.form(vbar, spec.cvec)) - _sgn(spec.form(vbar, spec.cprime)), 2)


@dataclass(frozen=True)
class ThetaTerm:
    j: int
    eps: int
    v: tuple[Fraction, Fraction]
    rho: Fraction
    wexp: Fraction      # eps*b_j/m + v1
    qexp: Fraction      # (v, v)/2
    phase: int          # power of exp(i pi / 6)


def _v2_values(lo: Fraction | None, hi: Fraction | None, shift: Fraction) -> Iterator[Fraction]:
    """``v2 in Z + shift`` inside ``[lo, hi]`` (both finite here)."""
    k = math.ceil(lo - shift)
    while k + shift <= hi:
        yield k + shift
        k += 1


def theta_terms(spec: IndefThetaSpec, qbound) -> list[ThetaTerm]:
    """Every lattice vector with nonzero regularizer and ``(v,v)/2 < qbound``."""
    qbound = Fraction(qbound)
    kappa = spec.validate()
    slo, shi = spec.slope_interval()
    out: list[ThetaTerm] = []
    for j in range(len(spec.b)):
        for eps in (1, -1):
            off = spec.v1_offset(j, eps)
            # |v1| grows in steps of 2 from the smallest representatives
            base = off - 2 * math.floor(off / 2)          # in [0, 2)
            reps = sorted({base, base - 2}, key=abs)
            for start in reps:
                step = 2 if start >= 0 else -2
                v1 = start
                while True:
                    a = abs(v1)
                    if a > 0 and kappa * a * a >= 2 * qbound:
                        break
                    # 3 v2^2 < 2 qbound + (m/2) v1^2
                    cap = 2 * qbound + spec.m / 2 * v1 * v1
                    if cap > 0:
                        r = Fraction(math.isqrt(math.ceil(cap / 3)) + 1)
                        lo, hi = -r, r
                        if a > 0:
                            if slo is not None:
                                lo = max(lo, slo * a)
                            if shi is not None:
                                hi = min(hi, shi * a)
                        for v2 in _v2_values(lo, hi, spec.v2_shift):
                            v = (v1, v2)
                            rho = rho_regularizer(v, spec)
                            if not rho:
                                continue
                            q = spec.norm(v) / 2
                            if q >= qbound:
                                continue
                            # exp(i pi/6) * exp(i pi v2) = zeta12^(1 + 6 v2)
                            ph = 1 + 6 * v2
                            if ph.denominator != 1:
                                raise PlumbingError("phase outside the 12th roots of unity")
                            out.append(ThetaTerm(j, eps, v, rho, eps * spec.b[j] / spec.m + v1, q,
                                                 int(ph) % 12))
                    v1 += step
    return out


def _phase_to_rational(k: int) -> int:
    if k % 12 == 0:
        return 1
    if k % 12 == 6:
        return -1
    raise PlumbingError(f"non-rational phase residual zeta12^{k}")


def vartheta_indefinite(data: ThreeStarData, spec: IndefThetaSpec, order) -> WLaurentQSeries:
    """``q^{-d} e^{i pi/6} sum_{j,eps} eps w^{eps b_j/m} sum_v rho(v) q^{(v,v)/2} e^{2 pi i (z, 1/2).v}``.

    Truncated at ``O(q^order)``; every w-power is complete to that order.
    """
    order = Fraction(order)
    if order <= 0:
        raise ValueError("order must be positive")
    terms = theta_terms(spec, order + data.d)
    acc: dict[Fraction, dict[Fraction, Fraction]] = {}
    for t in terms:
        if t.wexp.denominator != 1 or int(t.wexp) % 2 == 0:
            raise PlumbingError(f"w-exponent {t.wexp} is not an odd integer")
        coeff = t.eps * t.rho * _phase_to_rational(t.phase)
        row = acc.setdefault(t.wexp, {})
        e = t.qexp - data.d
        row[e] = row.get(e, Fraction(0)) + coeff
    return WLaurentQSeries({k: QSeries(row, order) for k, row in acc.items()})


def zhat_reversed(g: PlumbingGraph, order, cvec=(1, 0), cprime=(8, 21), literal: bool = False) -> QSeries:
    """Z-hat_0 of the orientation-reversed manifold to ``O(q^order)``.

    Reversal conjugates ``w`` together with ``q``; as the regularized theta is
    odd in ``z`` this contributes an overall ``-1``.  ``literal=True`` drops
    that factor and returns the bare contour integral.
    """
    order = Fraction(order)
    data = three_star_params(g)
    spec = IndefThetaSpec.from_data(data, cvec, cprime)
    pref = -data.normalization_exponent
    # 1/eta starts at q^(-1/24); the theta part is needed to order + 1/24 - pref
    inner = order - pref + Fraction(1, 24)
    if inner <= 0:
        return QSeries.zero(order)
    theta = vartheta_indefinite(data, spec, inner)
    window = int(theta.max_abs_exponent())
    kernel = pv_vertex_factor(3, window).as_laurent()
    ct = constant_term_in_w(theta * kernel)
    # 1/eta to O(q^(N - 1/12)) must cover order - pref - valuation(ct)
    eta_order = max(order - pref - ct.valuation() + Fraction(1, 12), Fraction(1, 12))
    out = (ct * series_invert(eta_series(eta_order))).shift(pref) * data.sign
    if not literal:
        out = -out
    return out.truncate(order)


def mock_F0_reference(order) -> QSeries:
    """Order-7 mock theta ``F0(q) = sum_n q^(n^2) / ((1-q^(n+1)) ... (1-q^(2n)))``."""
    order = Fraction(order)
    if order <= 0:
        raise ValueError("order must be positive")
    size = math.ceil(order)
    total = [0] * size
    n = 0
    while n * n < size:
        # coefficients of 1/((1-q^(n+1))...(1-q^(2n))) below q^(size - n^2)
        width = size - n * n
        coeffs = [1] + [0] * (width - 1)
        for k in range(n + 1, 2 * n + 1):
            for i in range(k, width):
                coeffs[i] += coeffs[i - k]
        for i, c in enumerate(coeffs):
            total[i + n * n] += c
        n += 1
    return QSeries({i: c for i, c in enumerate(total) if i < order}, order)


@dataclass(frozen=True)
class ShadowTheta:
    """``sum_r s_r theta^1_{m,r}`` with ``theta^1_{m,r} = (4m)^(-1/2) sum_{l = r mod 2m} l q^(l^2/4m)``.

    ``series`` holds the rational part; the common factor is ``1/sqrt(4m)``.
    """

    m: int
    residues: tuple[tuple[int, int], ...]
    series: QSeries

    @property
    def sqrt_argument(self) -> int:
        return 4 * self.m

    def eichler_integral(self) -> QSeries:
        """``sum n^(-1/2) a(n) q^n`` for this weight 3/2 form; rational exactly."""
        out = {}
        for e, c in self.series.items():
            ell = math.isqrt(int(4 * self.m * e))
            if ell * ell != 4 * self.m * e:
                raise ValueError("exponent not of the form l^2/4m")
            out[e] = c / ell
        return QSeries(out, self.series.order)


def unary_theta(m: int, r: int, order) -> QSeries:
    """Rational part ``sum_{l = r mod 2m} l q^(l^2/4m)``."""
    order = Fraction(order)
    lmax = math.isqrt(math.ceil(order * 4 * m)) + 2 * m
    terms: dict[Fraction, Fraction] = {}
    r0 = r % (2 * m)
    for ell in range(r0 - 2 * m * (lmax // (2 * m) + 1), lmax + 1, 2 * m):
        e = Fraction(ell * ell, 4 * m)
        if e < order:
            terms[e] = terms.get(e, Fraction(0)) + ell
    return QSeries(terms, order)


SIGMA237_SHADOW = ((1, 1), (13, -1), (29, -1), (41, 1))


def shadow_theta(order, m: int = 42, residues=SIGMA237_SHADOW) -> ShadowTheta:
    order = Fraction(order)
    if order <= 0:
        raise ValueError("order must be positive")
    total = QSeries.zero(order)
    for r, s in residues:
        total = total + unary_theta(m, r, order) * s
    return ShadowTheta(m, tuple(residues), total)
