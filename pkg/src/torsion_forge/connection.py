"""Connections on the tangent bundle given by their 1-form matrix.

Convention: ``nabla_{e_k} e_j = sum_i sigma^i_j(e_k) e_i``, so the dual
coframe moves by ``nabla_{e_k} e^i = -sum_j sigma^i_j(e_k) e^j``.
Curvature 2-forms are ``Omega^i_j = d sigma^i_j + sum_k sigma^i_k ^ sigma^k_j``.
All matrix accessors take 1-based indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple

from .exterior import DIM, KForm, LieAlgebra, _sort_sign, e, wedge, zero_form
from .scalars import ZERO, Scalar, ScalarLike, as_scalar
from .su3 import J_MATRIX, J_TABLE, SU3Structure

__all__ = [
    "Connection",
    "Curvature",
    "levi_civita",
    "family_connection",
    "curvature",
    "su3_compatible",
    "su3_compatibility_failures",
    "instanton_conditions",
    "instanton_check",
    "h3_instanton",
    "g7_instanton",
    "flat_connection",
    "covariant_derivative_form",
    "nabla_J",
    "torsion_tensor",
    "PAIRINGS",
]

R = range(1, DIM + 1)
_HALF = as_scalar(1) / 2


def _blank(degree: int) -> List[List[KForm]]:
    return [[zero_form(degree) for _ in R] for _ in R]


@dataclass
class Connection:
    """sigma[i-1][j-1] is the 1-form sigma^i_j."""

    sigma: List[List[KForm]]
    name: str = ""
    metric: bool = True

    def __post_init__(self):
        if len(self.sigma) != DIM or any(len(row) != DIM for row in self.sigma):
            raise ValueError("connection matrix must be 6x6")
        if self.metric and not self.is_skew():
            raise ValueError(f"connection {self.name or ''} is flagged metric but sigma is not skew")

    @classmethod
    def from_entries(cls, entries: Mapping[Tuple[int, int], KForm], name: str = "",
                     metric: bool = True) -> "Connection":
        sig = _blank(1)
        for (i, j), f in entries.items():
            sig[i - 1][j - 1] = f
        return cls(sig, name, metric)

    def s(self, i: int, j: int) -> KForm:
        return self.sigma[i - 1][j - 1]

    def at(self, k: int) -> List[List[Scalar]]:
        """Matrix Sigma with Sigma[i][j] = sigma^(i+1)_(j+1)(e_k)."""
        return [[self.sigma[i][j].coeff(k) for j in range(DIM)] for i in range(DIM)]

    def is_skew(self) -> bool:
        for i in range(DIM):
            for j in range(i, DIM):
                if not (self.sigma[i][j] + self.sigma[j][i]).is_zero():
                    return False
        return True

    def subs(self, mapping) -> "Connection":
        return Connection([[f.subs(mapping) for f in row] for row in self.sigma], self.name, self.metric)

    def is_zero(self) -> bool:
        return all(f.is_zero() for row in self.sigma for f in row)


@dataclass
class Curvature:
    """omega[i-1][j-1] is the 2-form Omega^i_j."""

    omega: List[List[KForm]]

    def o(self, i: int, j: int) -> KForm:
        return self.omega[i - 1][j - 1]

    def is_flat(self) -> bool:
        return all(f.is_zero() for row in self.omega for f in row)

    def is_skew(self) -> bool:
        for i in range(DIM):
            for j in range(i, DIM):
                if not (self.omega[i][j] + self.omega[j][i]).is_zero():
                    return False
        return True

    def subs(self, mapping) -> "Curvature":
        return Curvature([[f.subs(mapping) for f in row] for row in self.omega])


def flat_connection(name: str = "flat") -> Connection:
    return Connection(_blank(1), name)


def levi_civita(s: SU3Structure) -> Connection:
    g = s.algebra
    c = g.c
    sig = _blank(1)
    for i in R:
        for j in R:
            if i == j:
                continue
            coeffs = {}
            for k in R:
                v = (c(i, j, k) - c(k, i, j) + c(j, k, i)) * _HALF
                if not v.is_zero():
                    coeffs[(k,)] = v
            sig[i - 1][j - 1] = KForm(1, coeffs)
    return Connection(sig, "LC")



def family_connection(s: SU3Structure, eps: ScalarLike, rho: ScalarLike) -> Connection:
    """The metric connection sigma^LC + eps dF(Je_i, Je_j, Je_k) - rho dF(Je_k, e_i, e_j)."""
    eps = as_scalar(eps)
    rho = as_scalar(rho)
    lc = levi_civita(s)
    sig = _blank(1)
    for i in R:
        for j in R:
            if i == j:
                continue
            coeffs = {}
            for k in R:
                v = lc.s(i, j).coeff(k)
                if not eps.is_zero():
                    v = v + eps * s.dF_J(i, j, k, (True, True, True))
                if not rho.is_zero():
                    v = v - rho * s.dF_J(k, i, j, (True, False, False))
                if not v.is_zero():
                    coeffs[(k,)] = v
            sig[i - 1][j - 1] = KForm(1, coeffs)
    return Connection(sig, f"nabla^({eps},{rho})")


def curvature(g: LieAlgebra, conn: Connection) -> Curvature:
    sig = conn.sigma
    om = _blank(2)
    for i in range(DIM):
        for j in range(DIM):
            if conn.metric and j < i:
                continue
            acc = g.d(sig[i][j])
            for k in range(DIM):
                a, b = sig[i][k], sig[k][j]
                if a.coeffs and b.coeffs:
                    acc = acc + wedge(a, b)
            om[i][j] = acc
    if conn.metric:
        for i in range(DIM):
            for j in range(i):
                om[i][j] = -om[j][i]
    return Curvature(om)


PAIRINGS = [
    ((1, 3), (2, 4), 1),
    ((1, 4), (2, 3), -1),
    ((1, 5), (2, 6), 1),
    ((1, 6), (2, 5), -1),
    ((3, 5), (4, 6), 1),
    ((3, 6), (4, 5), -1),
]


def su3_compatibility_failures(conn: Connection) -> List[str]:
    out = []
    for i in R:
        for j in range(i, DIM + 1):
            if not (conn.s(i, j) + conn.s(j, i)).is_zero():
                out.append(f"sigma^{j}_{i} != -sigma^{i}_{j}")
    if not (conn.s(1, 2) + conn.s(3, 4) + conn.s(5, 6)).is_zero():
        out.append("sigma^1_2 + sigma^3_4 + sigma^5_6 != 0")
    for (a, b), (c, d), sg in PAIRINGS:
        lhs = conn.s(a, b)
        rhs = conn.s(c, d)
        if not (lhs - rhs if sg > 0 else lhs + rhs).is_zero():
            op = "" if sg > 0 else "-"
            out.append(f"sigma^{a}_{b} != {op}sigma^{c}_{d}")
    return out


def su3_compatible(conn: Connection) -> bool:
    return not su3_compatibility_failures(conn)


def instanton_conditions(q: Curvature) -> List[Tuple[str, Scalar]]:
    """Every scalar that must vanish for q to be an SU(3)-instanton.

    Only nonzero expressions are returned, labelled for reporting.
    """
    out = []
    for i in R:
        for j in R:
            w = q.o(i, j)
            if w.is_zero():
                continue
            tr = w.coeff(1, 2) + w.coeff(3, 4) + w.coeff(5, 6)
            if not tr.is_zero():
                out.append((f"Omega^{i}_{j}(e1,e2)+(e3,e4)+(e5,e6)", tr))
            for k in R:
                for l in range(k + 1, DIM + 1):
                    sk, jk = J_TABLE[k]
                    sl, jl = J_TABLE[l]
                    v = w.coeff(jk, jl) * (sk * sl) - w.coeff(k, l)
                    if not v.is_zero():
                        out.append((f"Omega^{i}_{j}(Je{k},Je{l}) - Omega^{i}_{j}(e{k},e{l})", v))
    return out


def instanton_check(s: Optional[SU3Structure], q: Curvature) -> bool:
    """True when q is of type (1,1) and trace-free against F (adapted basis)."""
    return not instanton_conditions(q)


def h3_instanton(lam: ScalarLike) -> Connection:
    f = (e(5) + e(6)).scale(lam)
    return Connection.from_entries({(1, 2): f, (2, 1): -f, (3, 4): -f, (4, 3): f}, "A_lambda")


def g7_instanton(lam: ScalarLike, mu: ScalarLike) -> Connection:
    f = e(5).scale(lam) + e(6).scale(mu)
    return Connection.from_entries({(1, 2): f, (2, 1): -f, (3, 4): -f, (4, 3): f}, "A_lambda_mu")


def covariant_derivative_form(g: Optional[LieAlgebra], conn: Connection, a: KForm, k: int) -> KForm:
    """nabla_{e_k} a for a form with constant coefficients."""
    Sig = conn.at(k)
    out: Dict[Tuple[int, ...], Scalar] = {}
    for idx, c in a.coeffs.items():
        for pos, i in enumerate(idx):
            for j in R:
                v = Sig[i - 1][j - 1]
                if v.is_zero():
                    continue
                new = idx[:pos] + (j,) + idx[pos + 1:]
                sgn, key = _sort_sign(new)
                if not sgn:
                    continue
                term = c * v
                term = -term if sgn > 0 else term
                prev = out.get(key)
                out[key] = term if prev is None else prev + term
    return KForm(a.degree, out)


def _matmul(A, B):
    n = len(A)
    return [[sum((A[i][m] * B[m][j] for m in range(n) if not _z(A[i][m]) and not _z(B[m][j])), ZERO)
             for j in range(n)] for i in range(n)]


def _z(x) -> bool:
    return x == 0 if not isinstance(x, Scalar) else x.is_zero()


def nabla_J(s: Optional[SU3Structure], conn: Connection) -> Dict[Tuple[int, int, int], Scalar]:
    """Nonzero g((nabla_{e_k} J) e_j, e_i), keyed by (i, j, k)."""
    Jm = [[as_scalar(x) for x in row] for row in J_MATRIX]
    out = {}
    for k in R:
        Sig = conn.at(k)
        SJ = _matmul(Sig, Jm)
        JS = _matmul(Jm, Sig)
        for i in range(DIM):
            for j in range(DIM):
                v = SJ[i][j] - JS[i][j]
                if not v.is_zero():
                    out[(i + 1, j + 1, k)] = v
    return out


def torsion_tensor(g: LieAlgebra, conn: Connection) -> Dict[Tuple[int, int, int], Scalar]:
    """Nonzero g(T(e_a, e_b), e_i) with T(X,Y) = nabla_X Y - nabla_Y X - [X,Y], keyed (a, b, i)."""
    out = {}
    for a in R:
        for b in R:
            if a == b:
                continue
            for i in R:
                v = conn.s(i, b).coeff(a) - conn.s(i, a).coeff(b) + g.c(i, a, b)
                if not v.is_zero():
                    out[(a, b, i)] = v
    return out
