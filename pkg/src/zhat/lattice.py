"""Exact enumeration of lattice vectors below a quadratic-form bound.

Bounds come from completing squares (Fincke-Pohst) in rational arithmetic;
floating point only proposes candidate ranges, every decision is exact.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .plumbing import Matrix, PlumbingError, SpincLabel, determinant, inertia, inverse, mat_vec


def square_completion(A: Matrix) -> list[list[Fraction]]:
    """``Q`` with ``x^T A x = sum_i Q[i][i] (x_i + sum_{j>i} Q[i][j] x_j)^2``."""
    n = len(A)
    Q = [list(map(Fraction, row)) for row in A]
    for i in range(n):
        if Q[i][i] <= 0:
            raise PlumbingError("enumeration requires negative-definite form")
        for j in range(i + 1, n):
            Q[j][i] = Q[i][j]
            Q[i][j] = Q[i][j] / Q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                Q[k][l] -= Q[k][i] * Q[i][l]
    return Q


def _candidates(centre: Fraction, radius_sq: Fraction, allowed) -> Iterator[int]:
    """Integers ``x`` in ``allowed`` with ``(x - centre)^2 < radius_sq``."""
    if radius_sq <= 0:
        return
    if isinstance(allowed, tuple) and allowed[0] == "parity":
        parity = allowed[1]
        r = math.sqrt(float(radius_sq))
        lo = math.floor(float(centre) - r) - 2
        hi = math.ceil(float(centre) + r) + 2
        if (lo - parity) % 2:
            lo += 1
        for x in range(lo, hi + 1, 2):
            if (x - centre) ** 2 < radius_sq:
                yield x
    else:
        for x in allowed:
            if (x - centre) ** 2 < radius_sq:
                yield x


def enumerate_below(A: Matrix, bound: Fraction, allowed: Sequence, outer: Sequence[int] | None = None,
                    outer_values: Sequence[int] | None = None) -> Iterator[tuple[tuple[int, ...], Fraction]]:
    """Yield ``(x, x^T A x)`` for integer ``x`` with ``x^T A x < bound``.

    ``allowed[i]`` is either ``("parity", p)`` or a finite list of integers.
    ``outer`` lists coordinates to enumerate first (outermost loops); the
    remaining coordinates follow in index order.  ``outer_values`` restricts the
    outermost coordinate, which is how work is split between processes.
    """
    n = len(A)
    bound = Fraction(bound)
    first = list(outer or [])
    loop_order = first + [i for i in range(n) if i not in first]
    perm = loop_order[::-1]  # perm[0] innermost, perm[-1] outermost
    Ap = tuple(tuple(A[i][j] for j in perm) for i in perm)
    Q = square_completion(Ap)
    allow = [allowed[i] for i in perm]
    x = [0] * n

    def rec(i: int, remaining: Fraction):
        centre = -sum((Q[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        choices = allow[i]
        if i == n - 1 and outer_values is not None:
            choices = list(outer_values)
        for xi in _candidates(centre, remaining / Q[i][i], choices):
            x[i] = xi
            used = Q[i][i] * (xi - centre) ** 2
            if i == 0:
                out = [0] * n
                for pos, coord in enumerate(perm):
                    out[coord] = x[pos]
                yield tuple(out), bound - remaining + used
            else:
                yield from rec(i - 1, remaining - used)
        x[i] = 0

    if n == 0:
        if bound > 0:
            yield (), Fraction(0)
        return
    yield from rec(n - 1, bound)


def outer_candidates(A: Matrix, bound: Fraction, allowed: Sequence, outer: Sequence[int] | None = None) -> list[int]:
    """Admissible values of the outermost coordinate (for work splitting)."""
    n = len(A)
    first = list(outer or [])
    loop_order = first + [i for i in range(n) if i not in first]
    coord = loop_order[0]
    # x^T A x >= x_c^2 / (A^{-1})_cc
    Ainv = inverse(A)
    r2 = Fraction(bound) * Ainv[coord][coord]
    return list(_candidates(Fraction(0), r2, allowed[coord]))


@dataclass(frozen=True)
class LatticeTerm:
    n: tuple[int, ...]
    qexp: Fraction

    @property
    def wexp(self) -> tuple[int, ...]:
        return self.n


def theta_form(M: Matrix) -> Matrix:
    """``-M^{-1}/4``: the q-exponent of the theta term at ``n`` is ``n^T B n``."""
    Minv = inverse(M)
    return tuple(tuple(-x / 4 for x in row) for row in Minv)


def _in_coset(Minv: Matrix, a: Sequence[int], n: Sequence[int]) -> bool:
    diff = [x - y for x, y in zip(n, a)]
    return all((t / 2).denominator == 1 for t in mat_vec(Minv, diff))


def _scan(args) -> list[LatticeTerm]:
    M, a, qmax, allowed, outer, values = args
    B = theta_form(M)
    Minv = inverse(M)
    out = []
    for n, val in enumerate_below(B, qmax, allowed, outer, values):
        if _in_coset(Minv, a, n):
            out.append(LatticeTerm(n, val))
    return out


def lattice_points(M: Matrix, a: SpincLabel | Sequence[int], qmax, *, restrict: Sequence | None = None,
                   outer: Sequence[int] | None = None, jobs: int = 1) -> list[LatticeTerm]:
    """All ``n`` in ``2M Z^V + a`` with ``-n^T M^{-1} n / 4 < qmax``.

    ``restrict[i]``, if given and not ``None``, is a finite list of values
    allowed for coordinate ``i``; the caller uses this to skip vectors whose
    contribution is known to vanish.  Output is sorted by ``(qexp, n)``.
    """
    a = tuple(a.a if isinstance(a, SpincLabel) else a)
    qmax = Fraction(qmax)
    if inertia(M).negatives != len(M):
        raise PlumbingError("enumeration requires negative-definite form")
    n = len(M)
    allowed = []
    for i in range(n):
        r = None if restrict is None else restrict[i]
        if r is None:
            allowed.append(("parity", a[i] % 2))
        else:
            allowed.append(sorted(v for v in r if (v - a[i]) % 2 == 0))
    if n == 0:
        return [LatticeTerm((), Fraction(0))] if qmax > 0 else []
    if jobs <= 1:
        terms = _scan((M, a, qmax, allowed, outer, None))
    else:
        values = outer_candidates(theta_form(M), qmax, allowed, outer)
        chunks = [values[k::jobs] for k in range(jobs)]
        tasks = [(M, a, qmax, allowed, outer, ch) for ch in chunks if ch]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            terms = [t for part in pool.map(_scan, tasks) for t in part]
    terms.sort(key=lambda t: (t.qexp, t.n))
    return terms


def box_points(M: Matrix, a: Sequence[int], qmax, box: int) -> list[LatticeTerm]:
    """Brute-force scan of ``||n||_inf <= box``; test oracle only.

    Works with the integer adjugate ``adj = det * M^{-1}``.
    """
    import itertools
    det = determinant(M)
    adj = [[int(x * det) for x in row] for row in inverse(M)]
    det = int(det)
    qmax = Fraction(qmax)
    bound = qmax * 4 * det  # -n^T adj n / (4 det) < qmax
    n_dim = len(a)
    out = []
    ranges = [range(-box + ((box + ai) % 2), box + 1, 2) for ai in a]
    for n in itertools.product(*ranges):
        diff = [x - y for x, y in zip(n, a)]
        if any(sum(adj[i][j] * diff[j] for j in range(n_dim)) % (2 * det) for i in range(n_dim)):
            continue
        val = -sum(n[i] * adj[i][j] * n[j] for i in range(n_dim) for j in range(n_dim))
        if (val < bound) if det > 0 else (val > bound):
            out.append(LatticeTerm(tuple(n), Fraction(val, 4 * det)))
    out.sort(key=lambda t: (t.qexp, t.n))
    return out
