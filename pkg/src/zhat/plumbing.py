"""Plumbing graphs: parsing, adjacency matrix, exact inertia, weak negativity,
Spin^c labels and the three-star parameters."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

Matrix = tuple[tuple[Fraction, ...], ...]


class PlumbingError(ValueError):
    """Raised for malformed graphs or violated preconditions."""


# ---------------------------------------------------------------- matrices

def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    return tuple(tuple(sum((a[i][t] * b[t][j] for t in range(k)), Fraction(0)) for j in range(m))
                 for i in range(n))


def mat_vec(a: Matrix, v: Sequence) -> tuple[Fraction, ...]:
    return tuple(sum((row[j] * v[j] for j in range(len(v))), Fraction(0)) for row in a)


def quad_form(a: Matrix, v: Sequence) -> Fraction:
    return sum((v[i] * a[i][j] * v[j] for i in range(len(v)) for j in range(len(v))), Fraction(0))


def determinant(a: Matrix) -> Fraction:
    m = [list(r) for r in a]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                for k in range(c, n):
                    m[r][k] -= f * m[c][k]
    return det


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    m = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(a)]
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            raise PlumbingError("adjacency matrix singular")
        m[c], m[p] = m[p], m[c]
        piv = m[c][c]
        m[c] = [x / piv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return tuple(tuple(row[n:]) for row in m)


def principal_submatrix(a: Matrix, idx: Sequence[int]) -> Matrix:
    return tuple(tuple(a[i][j] for j in idx) for i in idx)


@dataclass(frozen=True)
class Inertia:
    positives: int
    negatives: int
    zeros: int

    @property
    def signature(self) -> int:
        return self.positives - self.negatives

    @property
    def size(self) -> int:
        return self.positives + self.negatives + self.zeros


def inertia(a: Matrix) -> Inertia:
    """Exact inertia by symmetric Gaussian reduction over the rationals.

    Diagonal pivots are used when available; otherwise a 2x2 hyperbolic block
    ``[[0, x], [x, 0]]`` is split off (one positive, one negative).
    """
    m = [list(map(Fraction, r)) for r in a]
    n = len(m)
    if any(m[i][j] != m[j][i] for i in range(n) for j in range(n)):
        raise PlumbingError("matrix is not symmetric")
    pos = neg = 0
    live = list(range(n))
    while live:
        piv = next((i for i in live if m[i][i] != 0), None)
        if piv is not None:
            d = m[piv][piv]
            if d > 0:
                pos += 1
            else:
                neg += 1
            live.remove(piv)
            for i in live:
                f = m[i][piv] / d
                if f:
                    for j in live:
                        m[i][j] -= f * m[piv][j]
            continue
        pair = next(((i, j) for i in live for j in live if i < j and m[i][j] != 0), None)
        if pair is None:
            break
        i0, j0 = pair
        x = m[i0][j0]
        pos += 1
        neg += 1
        live.remove(i0)
        live.remove(j0)
        # Schur complement against the block [[0, x], [x, 0]], inverse [[0, 1/x], [1/x, 0]]
        for i in live:
            ai, bi = m[i][i0], m[i][j0]
            if not (ai or bi):
                continue
            for j in live:
                aj, bj = m[i0][j], m[j0][j]
                m[i][j] -= (ai * bj + bi * aj) / x
    return Inertia(pos, neg, n - pos - neg)


def smith_normal_form(a: Sequence[Sequence[int]]):
    """Integer Smith form ``U A V = D`` with unimodular ``U``, ``V``.

    Returns ``(D, U, V)`` as lists of lists of ints; diagonal entries of ``D``
    are nonnegative and successively divisible.
    """
    n = len(a)
    m = len(a[0]) if n else 0
    D = [[int(x) for x in row] for row in a]
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    V = [[int(i == j) for j in range(m)] for i in range(m)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):
        D[dst] = [x - f * y for x, y in zip(D[dst], D[src])]
        U[dst] = [x - f * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, f):
        for row in D:
            row[dst] -= f * row[src]
        for row in V:
            row[dst] -= f * row[src]

    for t in range(min(n, m)):
        while True:
            nz = [(abs(D[i][j]), i, j) for i in range(t, n) for j in range(t, m) if D[i][j]]
            if not nz:
                break
            _, i, j = min(nz)
            swap_rows(t, i)
            swap_cols(t, j)
            p = D[t][t]
            done = True
            for i in range(t + 1, n):
                q = D[i][t] // p
                if q:
                    add_row(i, t, q)
                if D[i][t]:
                    done = False
            for j in range(t + 1, m):
                q = D[t][j] // p
                if q:
                    add_col(j, t, q)
                if D[t][j]:
                    done = False
            if not done:
                continue
            bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, m) if D[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], -1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return D, U, V


# ------------------------------------------------------------------ graphs

@dataclass(frozen=True)
class PlumbingGraph:
    """Weighted simple graph; vertex order is significant."""

    vertices: tuple[tuple[int, int], ...]
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        ids = [v for v, _ in self.vertices]
        if len(set(ids)) != len(ids):
            raise PlumbingError(f"duplicate vertex id in {ids}")
        seen = set()
        known = set(ids)
        for e in self.edges:
            a, b = e
            if a == b:
                raise PlumbingError(f"self-loop at vertex {a}")
            if a not in known or b not in known:
                raise PlumbingError(f"edge {list(e)} references unknown vertex id")
            key = frozenset(e)
            if key in seen:
                raise PlumbingError(f"duplicate edge {list(e)}")
            seen.add(key)

    @property
    def ids(self) -> list[int]:
        return [v for v, _ in self.vertices]

    @property
    def weights(self) -> list[int]:
        return [w for _, w in self.vertices]

    @property
    def size(self) -> int:
        return len(self.vertices)

    def index(self, vid: int) -> int:
        return self.ids.index(vid)

    def degrees(self) -> list[int]:
        deg = {v: 0 for v in self.ids}
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return [deg[v] for v in self.ids]

    def delta(self) -> tuple[int, ...]:
        return tuple(d % 2 for d in self.degrees())

    def neighbours(self, vid: int) -> list[int]:
        out = []
        for a, b in self.edges:
            if a == vid:
                out.append(b)
            elif b == vid:
                out.append(a)
        return out

    def relabel(self, order: Sequence[int]) -> "PlumbingGraph":
        """Same graph with vertices listed in ``order`` (a permutation of ids)."""
        w = dict(self.vertices)
        return PlumbingGraph(tuple((v, w[v]) for v in order), self.edges)

    def negated(self) -> "PlumbingGraph":
        return PlumbingGraph(tuple((v, -w) for v, w in self.vertices), self.edges)

    def to_json(self) -> dict:
        return {"vertices": [{"id": v, "weight": w} for v, w in self.vertices],
                "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_weights(cls, weights: Sequence[int], edges: Sequence[tuple[int, int]]) -> "PlumbingGraph":
        return cls(tuple(enumerate(int(w) for w in weights)), tuple(tuple(e) for e in edges))


def parse_plumbing(document) -> PlumbingGraph:
    """Build a graph from a ``.plumb.json`` document (path, JSON text or dict)."""
    if isinstance(document, Path) or (isinstance(document, str) and not document.lstrip().startswith("{")):
        document = Path(document).read_text()
    obj = json.loads(document) if isinstance(document, str) else document
    try:
        raw_vertices = obj["vertices"]
        raw_edges = obj.get("edges", [])
    except (KeyError, TypeError, AttributeError) as exc:
        raise PlumbingError(f"malformed graph document: {exc}") from None
    vertices = []
    for v in raw_vertices:
        vid, w = v.get("id"), v.get("weight")
        if not isinstance(vid, int) or isinstance(vid, bool):
            raise PlumbingError(f"vertex id must be an integer: {v}")
        if not isinstance(w, int) or isinstance(w, bool):
            raise PlumbingError(f"non-integer weight at vertex {vid}: {w!r}")
        vertices.append((vid, w))
    edges = []
    for e in raw_edges:
        if len(e) != 2 or not all(isinstance(x, int) for x in e):
            raise PlumbingError(f"malformed edge {e}")
        edges.append((e[0], e[1]))
    return PlumbingGraph(tuple(vertices), tuple(edges))


def adjacency_matrix(g: PlumbingGraph) -> Matrix:
    idx = {v: i for i, v in enumerate(g.ids)}
    n = g.size
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i, w in enumerate(g.weights):
        rows[i][i] = Fraction(w)
    for a, b in g.edges:
        rows[idx[a]][idx[b]] = rows[idx[b]][idx[a]] = Fraction(1)
    return tuple(tuple(r) for r in rows)


def weak_negativity(g: PlumbingGraph) -> bool:
    M = adjacency_matrix(g)
    if determinant(M) == 0:
        raise PlumbingError("adjacency matrix singular")
    high = [i for i, d in enumerate(g.degrees()) if d > 2]
    if not high:
        return True
    sub = principal_submatrix(inverse(M), high)
    return inertia(sub).negatives == len(high)


def is_negative_definite(M: Matrix) -> bool:
    return inertia(M).negatives == len(M)


# -------------------------------------------------------------- Spin^c

@dataclass(frozen=True)
class SpincLabel:
    """Class of ``a`` in ``(2Z^V + delta) / 2M Z^V``; stored canonically."""

    a: tuple[int, ...]
    M: Matrix = field(repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "a", canonical_representative(self.M, self.a))

    def __eq__(self, other):
        return isinstance(other, SpincLabel) and self.a == other.a

    def __hash__(self):
        return hash(self.a)

    @property
    def delta(self) -> tuple[int, ...]:
        return tuple(x % 2 for x in self.a)

    def equivalent(self, other: Sequence[int]) -> bool:
        return spinc_equivalent(self.M, self.a, other)


def canonical_representative(M: Matrix, a: Sequence[int]) -> tuple[int, ...]:
    """Reduce ``a`` into the half-open parallelepiped ``2M [0,1)^V``."""
    twoM = tuple(tuple(2 * x for x in row) for row in M)
    t = mat_vec(inverse(twoM), a)
    k = [math.floor(x) for x in t]
    shift = mat_vec(twoM, k)
    out = tuple(int(x - s) for x, s in zip(a, shift))
    return out


def spinc_equivalent(M: Matrix, a: Sequence[int], b: Sequence[int]) -> bool:
    diff = [x - y for x, y in zip(a, b)]
    t = mat_vec(inverse(M), diff)
    return all((x / 2).denominator == 1 for x in t)


def spinc_labels(g: PlumbingGraph) -> list[SpincLabel]:
    """Coset representatives of ``(2Z^V + delta)/(2M Z^V)``, one per class.

    Uses the Smith form ``U M V = D``: ``Z^V / M Z^V`` is represented by
    ``U^{-1} y`` with ``0 <= y_i < d_i``.
    """
    M = adjacency_matrix(g)
    if determinant(M) == 0:
        raise PlumbingError("adjacency matrix singular")
    D, U, _ = smith_normal_form([[int(x) for x in row] for row in M])
    Uinv = inverse(as_matrix(U))
    delta = g.delta()
    diag = [D[i][i] for i in range(len(D))]
    reps: list[tuple[int, ...]] = [()]
    for d in diag:
        reps = [r + (y,) for r in reps for y in range(d)]
    labels = []
    for y in reps:
        x = mat_vec(Uinv, y)
        a = tuple(int(dv + 2 * xv) for dv, xv in zip(delta, x))
        labels.append(SpincLabel(a, M))
    return sorted(labels, key=lambda lab: lab.a)


def default_label(g: PlumbingGraph) -> SpincLabel:
    """The label of ``delta`` itself."""
    return SpincLabel(g.delta(), adjacency_matrix(g))


# -------------------------------------------------------------- three-star

@dataclass(frozen=True)
class ThreeStarData:
    m: Fraction
    b: tuple[Fraction, Fraction, Fraction, Fraction]
    c: tuple[Fraction, Fraction, Fraction, Fraction]
    d: Fraction
    prefactor_exponent: Fraction
    sign: int
    A: Matrix
    inertia: Inertia
    weight_sum: int
    order: tuple[int, int, int, int]  # vertex ids: centre, leg1, leg2, leg3

    @property
    def d_values(self) -> tuple[Fraction, ...]:
        return tuple(-bj * bj / (4 * self.m) + cj for bj, cj in zip(self.b, self.c))

    @property
    def normalization_exponent(self) -> Fraction:
        """``(3 sigma - sum of weights) / 4``."""
        return Fraction(3 * self.inertia.signature - self.weight_sum, 4)


def three_star_centre(g: PlumbingGraph) -> int:
    degs = g.degrees()
    if g.size != 4 or sorted(degs) != [1, 1, 1, 3]:
        raise PlumbingError("three-star four-node unimodular required")
    return g.ids[degs.index(3)]


def three_star_params(g: PlumbingGraph) -> ThreeStarData:
    centre = three_star_centre(g)
    legs = [v for v in g.ids if v != centre]
    if sorted(g.neighbours(centre)) != sorted(legs):
        raise PlumbingError("three-star four-node unimodular required")
    M = adjacency_matrix(g)
    det = determinant(M)
    if abs(det) != 1:
        raise PlumbingError(f"three-star four-node unimodular required (det = {det})")
    if not weak_negativity(g):
        raise PlumbingError("graph is not weakly negative")
    order = [centre] + legs
    perm = [g.index(v) for v in order]
    Minv = inverse(M)
    A = tuple(tuple(-Minv[i][j] / 2 for j in perm) for i in perm)
    m = 2 * A[0][0]
    s = sum(A[j][0] for j in (1, 2, 3))
    b = [2 * s] + [4 * A[i][0] - 2 * s for i in (1, 2, 3)]
    c0 = A[1][2] + A[2][3] + A[3][1] + sum(A[j][j] for j in (1, 2, 3)) / 2
    c = [c0] + [c0 - 2 * sum(A[i][j] for j in (1, 2, 3) if j != i) for i in (1, 2, 3)]
    ds = [-bj * bj / (4 * m) + cj for bj, cj in zip(b, c)]
    if len(set(ds)) != 1:
        raise PlumbingError(f"inconsistent d values {ds}")
    inert = inertia(M)
    wsum = sum(g.weights)
    d = ds[0]
    pref = d + Fraction(3 * inert.signature - wsum, 4)
    return ThreeStarData(m=m, b=tuple(b), c=tuple(c), d=d, prefactor_exponent=pref,
                         sign=(-1) ** inert.positives, A=A, inertia=inert,
                         weight_sum=wsum, order=tuple(order))


# ---------------------------------------------------------------- shipped graphs

def sigma237() -> PlumbingGraph:
    """Brieskorn sphere Sigma(2,3,7): centre -1 with legs -2, -3, -7."""
    return PlumbingGraph(((0, -1), (1, -2), (2, -3), (3, -7)), ((0, 1), (0, 2), (0, 3)))


def star_graph(centre: int, legs: Sequence[int]) -> PlumbingGraph:
    verts = ((0, centre),) + tuple((i + 1, w) for i, w in enumerate(legs))
    return PlumbingGraph(verts, tuple((0, i + 1) for i in range(len(legs))))
