"""Holonomy algebras of invariant metric connections at exact sample points.

For a left-invariant connection the holonomy algebra is the smallest Lie
algebra containing the curvature endomorphisms R(e_p, e_q) that is stable
under A -> [Sigma_k, A], where Sigma_k is the matrix of nabla_{e_k}.  We
close the span under those derivations and under commutators, with exact
rational rank.  Everything here is Lie-algebra level; global questions
(connectedness of the holonomy group) are out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import isqrt
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from .catalog import builtin
from .connection import Connection, Curvature, curvature, family_connection
from .exterior import DIM
from .scalars import Number, ScalarLike, as_scalar, evaluate
from .su3 import J_MATRIX, SU3Structure

__all__ = [
    "Endo",
    "HolonomyReport",
    "curvature_endos",
    "connection_matrices",
    "holonomy_dimension",
    "bismut_holonomy",
    "admissible_g7_points",
    "killing_form",
]

Endo = Tuple[Tuple[Fraction, ...], ...]


def _value(x: ScalarLike, assignment: Optional[Mapping[str, Number]]) -> Fraction:
    x = as_scalar(x)
    if assignment is None:
        return x.to_fraction()
    return evaluate(x, assignment)


def _freeze(m: List[List[Fraction]]) -> Endo:
    return tuple(tuple(row) for row in m)


def curvature_endos(q: Curvature, assignment: Optional[Mapping[str, Number]] = None) -> List[Endo]:
    """The 15 endomorphisms R(e_p, e_q), p < q, as exact matrices.

    R(e_p, e_q) e_j = sum_i Omega^i_j(e_p, e_q) e_i, so the matrix entry
    [i][j] is Omega^i_j(e_p, e_q).  (The metric dual g(R e_i, e_j) carries
    the opposite sign; spans are unaffected.)
    """
    out = []
    for p in range(1, DIM + 1):
        for r in range(p + 1, DIM + 1):
            m = [[_value(q.o(i, j).coeff(p, r), assignment) for j in range(1, DIM + 1)]
                 for i in range(1, DIM + 1)]
            out.append(_freeze(m))
    return out


def connection_matrices(conn: Connection, assignment: Optional[Mapping[str, Number]] = None) -> List[Endo]:
    """Sigma_k for k = 1..6 with Sigma_k[i][j] = sigma^i_j(e_k)."""
    return [_freeze([[_value(x, assignment) for x in row] for row in conn.at(k)])
            for k in range(1, DIM + 1)]


def _mul(a: Endo, b: Endo) -> List[List[Fraction]]:
    n = len(a)
    return [[sum((a[i][m] * b[m][j] for m in range(n) if a[i][m] and b[m][j]), Fraction(0))
             for j in range(n)] for i in range(n)]


def _bracket(a: Endo, b: Endo) -> Endo:
    ab, ba = _mul(a, b), _mul(b, a)
    return _freeze([[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(ab, ba)])


def _flat(a: Endo) -> Tuple[Fraction, ...]:
    return tuple(x for row in a for x in row)


class _Span:
    """Incremental row-echelon basis over Q."""

    def __init__(self):
        self.rows: List[Tuple[int, List[Fraction]]] = []   # (pivot, reduced vector)
        self.elements: List[Endo] = []

    def reduce(self, v: Sequence[Fraction]) -> List[Fraction]:
        v = list(v)
        for piv, row in self.rows:
            c = v[piv]
            if c:
                v = [x - c * y for x, y in zip(v, row)]
        return v

    def add(self, a: Endo) -> bool:
        v = self.reduce(_flat(a))
        piv = next((i for i, x in enumerate(v) if x), None)
        if piv is None:
            return False
        lead = v[piv]
        v = [x / lead for x in v]
        # keep earlier rows reduced at the new pivot
        self.rows = [(p, [x - r[piv] * y for x, y in zip(r, v)]) for p, r in self.rows]
        self.rows.append((piv, v))
        self.elements.append(a)
        return True

    def coordinates(self, a: Endo) -> List[Fraction]:
        """Coordinates of a in terms of self.elements (a must lie in the span)."""
        n = len(self.elements)
        cols = [_flat(x) for x in self.elements]
        target = _flat(a)
        # solve sum c_m cols[m] = target by elimination on the normal rows
        rows = [[cols[m][i] for m in range(n)] + [target[i]] for i in range(len(target))]
        rows = [r for r in rows if any(r)]
        sol = _solve(rows, n)
        if sol is None:
            raise ValueError("element not in span")
        return sol

    def __len__(self):
        return len(self.elements)


def _solve(rows: List[List[Fraction]], n: int) -> Optional[List[Fraction]]:
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        k = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if k is None:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        lead = rows[r][c]
        rows[r] = [x / lead for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if any(row[n] for row in rows[r:]):
        return None
    sol = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        sol[c] = rows[i][n]
    return sol


def killing_form(span: _Span) -> List[List[Fraction]]:
    """B(x_a, x_b) = tr(ad x_a ad x_b) in the basis span.elements."""
    els = span.elements
    n = len(els)
    ad = []
    for a in els:
        cols = [span.coordinates(_bracket(a, b)) for b in els]
        ad.append([[cols[j][i] for j in range(n)] for i in range(n)])
    return [[sum(ad[a][i][k] * ad[b][k][i] for i in range(n) for k in range(n)) for b in range(n)]
            for a in range(n)]


def _det(m: List[List[Fraction]]) -> Fraction:
    m = [list(r) for r in m]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        k = next((i for i in range(c, n) if m[i][c]), None)
        if k is None:
            return Fraction(0)
        if k != c:
            m[c], m[k] = m[k], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def _negative_definite(b: List[List[Fraction]]) -> bool:
    # Sylvester: leading minors alternate in sign starting negative
    for k in range(1, len(b) + 1):
        d = _det([row[:k] for row in b[:k]])
        if d == 0 or (d < 0) != (k % 2 == 1):
            return False
    return True


_J = _freeze([[Fraction(x) for x in row] for row in J_MATRIX])


def _in_su3(a: Endo) -> bool:
    if any(x for row in _bracket(a, _J) for x in row):
        return False
    return a[0][1] + a[2][3] + a[4][5] == 0


@dataclass
class HolonomyReport:
    dimension: int
    classification: str
    generators_count: int
    iterations: int
    closed_under_brackets: bool = True
    note: str = "Lie-algebra level (invariant connection); group connectedness not certified"
    point: Dict[str, str] = field(default_factory=dict)
    algebra: str = ""

    def as_dict(self) -> dict:
        return {
            "algebra": self.algebra,
            "point": self.point,
            "dimension": self.dimension,
            "classification": self.classification,
            "generators_count": self.generators_count,
            "iterations": self.iterations,
            "note": self.note,
        }


def _classify(span: _Span) -> str:
    n = len(span)
    if n == 0:
        return "trivial"
    if n == 1:
        return "u(1)"
    if n == 3 and _negative_definite(killing_form(span)):
        return "so(3)"
    if n == 8 and all(_in_su3(a) for a in span.elements):
        return "su(3)"
    return f"dim {n}, unclassified"


def holonomy_dimension(s: Optional[SU3Structure], conn: Connection,
                       assignment: Optional[Mapping[str, Number]] = None,
                       q: Optional[Curvature] = None, max_iterations: int = 36) -> HolonomyReport:
    """Dimension and type of the holonomy algebra of ``conn``.

    ``assignment`` evaluates symbolic coefficients; without it they must
    already be constants.  ``q`` may carry a precomputed curvature.
    """
    if q is None:
        if s is None:
            raise ValueError("need the structure or the curvature")
        q = curvature(s.algebra, conn)
    gens = [a for a in curvature_endos(q, assignment) if any(x for row in a for x in row)]
    sigmas = [m for m in connection_matrices(conn, assignment) if any(x for row in m for x in row)]
    span = _Span()
    fresh = [a for a in gens if span.add(a)]
    iterations = 0
    while fresh and iterations < max_iterations:
        iterations += 1
        new = []
        for a in fresh:
            for m in sigmas:
                b = _bracket(m, a)
                if span.add(b):
                    new.append(b)
            for b in list(span.elements):
                c = _bracket(a, b)
                if span.add(c):
                    new.append(c)
        fresh = new
    return HolonomyReport(len(span), _classify(span), len(gens), iterations, not fresh)


def admissible_g7_points(limit: int = 6, nonzero_u: bool = True) -> Iterator[Dict[str, int]]:
    """Integer (r, u1, u2) with r^4 - u1^2 - u2^2 a positive perfect square."""
    for r in range(1, limit + 1):
        r4 = r ** 4
        for u1, u2 in product(range(0, r * r), repeat=2):
            if nonzero_u and u1 == u2 == 0:
                continue
            rest = r4 - u1 * u1 - u2 * u2
            if rest > 0 and isqrt(rest) ** 2 == rest:
                yield {"r": r, "u1": u1, "u2": u2}


def bismut_holonomy(name: str, values: Optional[Mapping[str, Number]] = None,
                    delta: int = 1) -> HolonomyReport:
    """Holonomy of the Bismut connection on a catalog structure at a rational point."""
    values = dict(values or {})
    values.setdefault("t", 1)
    if name == "g7":
        values.setdefault("r", 1)
        values.setdefault("u1", 0)
        values.setdefault("u2", 0)
    b = builtin(name, delta=delta if name == "g7" else None, values=values)
    conn = family_connection(b.su3, Fraction(1, 2), 0)
    rep = holonomy_dimension(b.su3, conn)
    rep.algebra = name
    rep.point = {k: str(v) for k, v in values.items()}
    if name == "g7":
        rep.point["delta"] = str(delta)
    return rep
