"""Anomaly cancellation dT = (alpha'/4)(tr R^R - tr F_A^F_A) and the sign
analysis of alpha' over the (eps, rho)-plane.

All traces are the unscaled 4-forms ``tr Omega^Omega = sum_{i<j} Omega^i_j ^ Omega^i_j``
(for skew Omega this equals -1/2 sum_{i,j} Omega^i_j ^ Omega^j_i), so no factor
of pi ever appears.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Optional, Tuple, Union

from .catalog import builtin, symbols
from .connection import (
    Connection,
    Curvature,
    curvature,
    family_connection,
    g7_instanton,
    instanton_check,
)
from .exterior import KForm, wedge
from .scalars import (
    ZERO,
    Scalar,
    ScalarLike,
    as_scalar,
    eval_approx,
    exact_sign,
)
from .su3 import SU3Structure, balanced_check, psi_closed_check, torsion_T

__all__ = [
    "AnomalyResult",
    "RegionReport",
    "G7Solution",
    "SolveFailure",
    "DomainError",
    "pontrjagin_trace",
    "solve_alpha",
    "anomaly_residual",
    "beta",
    "region_values",
    "region_report",
    "in_delta",
    "in_delta_plus",
    "in_delta_plus_alt",
    "g7_feasibility",
    "g7_witness",
    "solve_g7",
    "solve_g7_u0",
    "motion_equations_check",
    "MotionReport",
    "special_points",
    "family_data",
    "torsion_derivative",
    "PREFERRED",
    "hermitian_point",
]

Number = Union[int, Fraction]


class DomainError(ValueError):
    pass


# ---------------------------------------------------------------------------
# traces and the linear solve


def pontrjagin_trace(q: Curvature) -> KForm:
    out = KForm(4)
    for i in range(1, 7):
        for j in range(i + 1, 7):
            w = q.o(i, j)
            if w.coeffs:
                out = out + wedge(w, w)
    return out


@dataclass
class AnomalyResult:
    status: str  # "Unique", "NoSolution" or "Underdetermined"
    alpha: Optional[Scalar] = None
    residual: Optional[KForm] = None

    def __str__(self):
        if self.status == "Unique":
            return f"Unique: alpha' = {self.alpha}"
        if self.status == "NoSolution":
            return f"NoSolution: residual {self.residual}"
        return "Underdetermined"


def anomaly_residual(dT: KForm, P_conn: KForm, P_inst: KForm, alpha: ScalarLike) -> KForm:
    return dT - (P_conn - P_inst).scale(as_scalar(alpha) / 4)


def solve_alpha(dT: KForm, P_conn: KForm, P_inst: KForm) -> AnomalyResult:
    from .exterior import DegreeMismatch

    for f in (dT, P_conn, P_inst):
        if f.degree != 4:
            raise DegreeMismatch(f"anomaly inputs must be 4-forms, got degree {f.degree}")
    D = (P_conn - P_inst).scale(Fraction(1, 4))
    if D.is_zero():
        if dT.is_zero():
            return AnomalyResult("Underdetermined")
        return AnomalyResult("NoSolution", residual=dT)
    key = min(D.coeffs)
    alpha = dT.coeff(key) / D.coeffs[key]
    residual = dT - D.scale(alpha)
    if not residual.is_zero():
        return AnomalyResult("NoSolution", residual=residual)
    if alpha.is_zero():
        # dT = 0 with D != 0 forces alpha' = 0, which is not a valid coupling
        return AnomalyResult("NoSolution", alpha=alpha, residual=D)
    return AnomalyResult("Unique", alpha=alpha)


def torsion_derivative(s: SU3Structure) -> KForm:
    return s.algebra.d(torsion_T(s))


@dataclass
class FamilyData:
    name: str
    structure: SU3Structure
    connection: Connection
    curvature: Curvature
    trace: KForm
    dT: KForm


@lru_cache(maxsize=None)
def family_data(name: str, delta: Optional[int] = None) -> FamilyData:
    """Symbolic (eps, rho) family data for a built-in structure, cached."""
    S = symbols()
    b = builtin(name, delta)
    conn = family_connection(b.su3, S["eps"], S["rho"])
    q = curvature(b.algebra, conn)
    return FamilyData(name, b.su3, conn, q, pontrjagin_trace(q), torsion_derivative(b.su3))


# ---------------------------------------------------------------------------
# named members of the family

PREFERRED: Dict[str, Tuple[Fraction, Fraction]] = {
    "LC": (Fraction(0), Fraction(0)),
    "bismut": (Fraction(1, 2), Fraction(0)),
    "minus": (Fraction(-1, 2), Fraction(0)),
    "chern": (Fraction(0), Fraction(1, 2)),
}


def hermitian_point(t: ScalarLike) -> Tuple[Scalar, Scalar]:
    """(eps, rho) of the Hermitian connection nabla^t: eps = (1 - t)/4, rho = 1/2 - eps."""
    t = as_scalar(t)
    return (1 - t) / 4, (1 + t) / 4


# ---------------------------------------------------------------------------
# region polynomials


def _pair(eps, rho):
    return as_scalar(eps), as_scalar(rho)


def beta(eps: ScalarLike, rho: ScalarLike) -> Scalar:
    e, r = _pair(eps, rho)
    return (1 + 4 * e + 4 * e**2 + 32 * e**3 - 12 * r - 24 * e * r - 32 * e**2 * r
            + 36 * r**2 + 32 * e * r**2 - 32 * r**3)


def region_values(eps: ScalarLike, rho: ScalarLike) -> Dict[str, Scalar]:
    e, r = _pair(eps, rho)
    h = Fraction(1, 2)
    c = 4 * e**2 + (1 - 2 * r) ** 2
    L = (e - Fraction(3, 2)) ** 2 + (r + 1) ** 2 - 4
    N = 4 * ((e + h) ** 2 + (r - 1) ** 2 - 1)
    M = e**2 + (r - h) ** 2 - Fraction(1, 4)
    S = 20 * e**2 + 20 * r**2 - 32 * e * r + 4 * e - 8 * r + 1
    X = (1 + 2 * e - 2 * r) * (c + 2)
    Y = -4 * (1 - 2 * e + 2 * r) * (c - 2) - 8
    Z = (1 + e - r) * (c - 4) + 3
    W = 4 * (e - r) * c
    return {"L": L, "N": N, "M": M, "S": S, "X": X, "Y": Y, "Z": Z, "W": W,
            "d": L * W - N * Z, "beta": beta(e, r)}


def special_points() -> Dict[str, Tuple[Scalar, Scalar]]:
    w = symbols()["w"]
    return {
        "P1": ((1 - w) / 8, (3 - w) / 8),
        "Q1": ((1 + w) / 8, (3 + w) / 8),
        "P2": (ZERO, ZERO),
        "Q2": (as_scalar(Fraction(1, 2)), as_scalar(Fraction(1, 2))),
        "P3": (as_scalar(Fraction(1, 6)), as_scalar(Fraction(1, 3))),
    }


def _signs(v: Dict[str, Scalar]) -> Dict[str, int]:
    return {k: exact_sign(x) for k, x in v.items()}


def in_delta(sg: Dict[str, int]) -> bool:
    # P2 and Q2 are exactly the points where Z and W both vanish
    return (sg["L"] < 0 or sg["N"] < 0) and not (sg["Z"] == 0 and sg["W"] == 0)


def in_delta_plus(sg: Dict[str, int]) -> bool:
    return (sg["L"] < 0 or sg["M"] < 0) and not (sg["M"] <= 0 and sg["Z"] <= 0)


def in_delta_plus_alt(sg: Dict[str, int]) -> bool:
    return (sg["L"] < 0 or sg["d"] > 0) and not (sg["d"] >= 0 and sg["Z"] <= 0)


@dataclass
class RegionReport:
    eps: Scalar
    rho: Scalar
    values: Dict[str, Scalar]
    signs: Dict[str, int]
    in_Delta: bool
    in_DeltaPlus: bool
    in_DeltaPlus_alt: bool
    feasibility: Dict[str, bool] = field(default_factory=dict)

    @property
    def sign_alpha_nonflat(self) -> str:
        return _sign_label(self.feasibility["nonflat_positive"], self.feasibility["nonflat_negative"])

    @property
    def sign_alpha_flat(self) -> str:
        return _sign_label(self.feasibility["flat_positive"], self.feasibility["flat_negative"])

    def as_dict(self) -> dict:
        return {
            "eps": str(self.eps),
            "rho": str(self.rho),
            **{k: str(v) for k, v in self.values.items()},
            "in_Delta": self.in_Delta,
            "in_DeltaPlus": self.in_DeltaPlus,
            "sign_alpha_flat": self.sign_alpha_flat,
            "sign_alpha_nonflat": self.sign_alpha_nonflat,
        }


def _sign_label(pos: bool, neg: bool) -> str:
    return {(True, True): "+-", (True, False): "+", (False, True): "-", (False, False): "none"}[(pos, neg)]


def region_report(eps: ScalarLike, rho: ScalarLike) -> RegionReport:
    """Exact region membership; the point may involve the radical w = sqrt(7)."""
    e, r = _pair(eps, rho)
    v = region_values(e, r)
    sg = _signs(v)
    rep = RegionReport(e, r, v, sg, in_delta(sg), in_delta_plus(sg), in_delta_plus_alt(sg))
    rep.feasibility = g7_feasibility(e, r, v)
    return rep


# ---------------------------------------------------------------------------
# feasibility of the u != 0 system
#
# With x = t^4 > 0 and y = |u|^2 > 0 the conditions are homogeneous, so only
# q = y / x in (0, oo) matters:  mu^2 ~ -(L + N q)  and  alpha' ~ 1 / (Z + W q).

INF = None  # upper end of an unbounded interval


def _interval_lt(a: Scalar, b: Scalar):
    """{q > 0 : a + b q < 0} as (lo, hi) with hi None for +oo, or None if empty."""
    sb = exact_sign(b)
    if sb == 0:
        return (ZERO, INF) if exact_sign(a) < 0 else None
    root = -a / b
    if sb > 0:
        return (ZERO, root) if exact_sign(root) > 0 else None
    return (root if exact_sign(root) > 0 else ZERO, INF)


def _intersect(i1, i2):
    if i1 is None or i2 is None:
        return None
    lo = i1[0] if exact_sign(i1[0] - i2[0]) >= 0 else i2[0]
    if i1[1] is INF:
        hi = i2[1]
    elif i2[1] is INF:
        hi = i1[1]
    else:
        hi = i1[1] if exact_sign(i1[1] - i2[1]) <= 0 else i2[1]
    if hi is not INF and exact_sign(hi - lo) <= 0:
        return None
    return (lo, hi)


def _flat_qs(L: Scalar, N: Scalar):
    """q > 0 with L + N q = 0: 'all', a single Scalar, or None."""
    sN = exact_sign(N)
    if sN == 0:
        return "all" if exact_sign(L) == 0 else None
    q = -L / N
    return q if exact_sign(q) > 0 else None


def g7_feasibility(eps: ScalarLike, rho: ScalarLike, values: Optional[Dict[str, Scalar]] = None) -> Dict:
    v = values or region_values(eps, rho)
    L, N, Z, W = v["L"], v["N"], v["Z"], v["W"]
    mu_pos = _interval_lt(L, N)  # mu^2 > 0
    a_pos = _interval_lt(-Z, -W)  # Z + W q > 0
    a_neg = _interval_lt(Z, W)  # Z + W q < 0
    out = {
        "nonflat_positive": _intersect(mu_pos, a_pos) is not None,
        "nonflat_negative": _intersect(mu_pos, a_neg) is not None,
        "nonflat_positive_interval": _intersect(mu_pos, a_pos),
        "nonflat_negative_interval": _intersect(mu_pos, a_neg),
    }
    fq = _flat_qs(L, N)
    if fq is None:
        out["flat_positive"] = out["flat_negative"] = False
    elif fq == "all":
        out["flat_positive"] = a_pos is not None
        out["flat_negative"] = a_neg is not None
    else:
        sz = exact_sign(Z + W * fq)
        out["flat_positive"] = sz > 0
        out["flat_negative"] = sz < 0
    out["nonflat_any"] = mu_pos is not None and not (exact_sign(Z) == 0 and exact_sign(W) == 0)
    return out


def _rational_square_in(lo: Scalar, hi) -> Fraction:
    """A rational square m^2 with lo < m^2 < hi (hi None means unbounded)."""
    lo_f = eval_approx(lo, {})
    for n in (1, 2, 4, 8, 16, 32, 64, 128, 256, 1024, 4096, 65536):
        m = Fraction(math.isqrt(int(lo_f * n * n)) + 1, n)
        while exact_sign(as_scalar(m * m) - lo) <= 0:
            m += Fraction(1, n)
        if hi is INF or exact_sign(hi - m * m) > 0:
            return m * m
    raise ValueError("interval too narrow for the witness search")


def g7_witness(eps: ScalarLike, rho: ScalarLike, positive: bool = True) -> Optional[Dict[str, Fraction]]:
    """Rational (t, r, u1, u2) solving the u != 0 system with a non-flat instanton.

    t = 1 and u2 = 0; u1^2 = q is a rational square inside the feasible
    interval; r is the smallest integer with r^4 > 2 q.
    """
    feas = g7_feasibility(eps, rho)
    iv = feas["nonflat_positive_interval" if positive else "nonflat_negative_interval"]
    if iv is None:
        return None
    q = _rational_square_in(iv[0], iv[1])
    u1 = Fraction(math.isqrt(q.numerator), math.isqrt(q.denominator))
    r = 1
    while r**4 <= 2 * q:
        r += 1
    return {"t": Fraction(1), "r": Fraction(r), "u1": u1, "u2": Fraction(0)}


# ---------------------------------------------------------------------------
# g7 closed forms with back-substitution


@dataclass
class G7Solution:
    mu_squared: Scalar
    alpha: Scalar
    verified: bool
    instanton_flat: bool

    @property
    def alpha_sign(self) -> int:
        return exact_sign(self.alpha)


@dataclass
class SolveFailure:
    reason: str  # MuSquaredNegative, AlphaZeroDenominator or PositivityUnsatisfiable
    detail: str = ""

    def __bool__(self):
        return False


def _g7_substitution(eps, rho, t, r, u1, u2, delta=1) -> Dict[str, Scalar]:
    return {"eps": as_scalar(eps), "rho": as_scalar(rho), "t": as_scalar(t), "r": as_scalar(r),
            "u1": as_scalar(u1), "u2": as_scalar(u2), "delta": as_scalar(delta)}


def _root(name: str, value: Scalar) -> Scalar:
    from .scalars import _make_root

    return _make_root(name, value)


def g7_back_substitute(eps, rho, t, r, u1, u2, mu_squared: Scalar, alpha: Scalar, delta: int = 1) -> bool:
    """Check dT = (alpha/4)(tr R^R - tr F_A^F_A) exactly at the given point."""
    fd = family_data("g7")
    vals = _g7_substitution(eps, rho, t, r, u1, u2, delta)
    dT = fd.dT.subs(vals)
    P = fd.trace.subs(vals)
    mu = _root("mu_val", as_scalar(mu_squared))
    inst = g7_instanton(0, mu)
    b = builtin("g7", delta, {k: vals[k] for k in ("t", "r", "u1", "u2")})
    P_A = pontrjagin_trace(curvature(b.algebra, inst))
    res = solve_alpha(dT, P, P_A)
    return res.status == "Unique" and (res.alpha - alpha).is_zero()


def solve_g7(eps: ScalarLike, rho: ScalarLike, r: ScalarLike, t: ScalarLike, u1: ScalarLike,
             u2: ScalarLike, require_positive_alpha: bool = False, verify: bool = True,
             delta: int = 1):
    """Closed-form mu^2 and alpha' for g7 with u != 0, checked by back-substitution."""
    r, t, u1, u2 = (as_scalar(x) for x in (r, t, u1, u2))
    U = u1 * u1 + u2 * u2
    if exact_sign(t) == 0 or exact_sign(r) == 0:
        raise DomainError("r and t must be nonzero")
    if exact_sign(U) == 0:
        raise DomainError("u must be nonzero; use solve_g7_u0 for u = 0")
    R = r**4 - U
    if exact_sign(R) <= 0:
        raise DomainError("need r^2 > |u|")
    v = region_values(eps, rho)
    t4 = t**4
    lin_mu = v["L"] * t4 + v["N"] * U
    lin_a = v["Z"] * t4 + v["W"] * U
    mu2 = -2 * lin_mu / (t * t * R)
    if exact_sign(mu2) < 0:
        return SolveFailure("MuSquaredNegative", f"mu^2 = {mu2}")
    if exact_sign(lin_a) == 0:
        return SolveFailure("AlphaZeroDenominator", "Z t^4 + W |u|^2 = 0")
    alpha = 2 * t * t * R / lin_a
    if require_positive_alpha and exact_sign(alpha) <= 0:
        return SolveFailure("PositivityUnsatisfiable", f"alpha' = {alpha}")
    ok = g7_back_substitute(eps, rho, t, r, u1, u2, mu2, alpha, delta) if verify else False
    return G7Solution(mu2, alpha, ok, exact_sign(mu2) == 0)


def solve_g7_u0(eps: ScalarLike, rho: ScalarLike, r: ScalarLike, t: ScalarLike, mu: ScalarLike,
                verify: bool = True, delta: int = 1) -> G7Solution:
    from .scalars import DenominatorZero

    r, t, mu = as_scalar(r), as_scalar(t), as_scalar(mu)
    if exact_sign(t) == 0 or exact_sign(r) == 0:
        raise DomainError("r and t must be nonzero")
    X = region_values(eps, rho)["X"]
    den = X * t * t - 2 * mu * mu * r**4
    if exact_sign(den) == 0:
        raise DenominatorZero("X t^2 - 2 mu^2 r^4 = 0")
    alpha = 4 * r**4 / den
    ok = g7_back_substitute(eps, rho, t, r, 0, 0, mu * mu, alpha, delta) if verify else False
    return G7Solution(mu * mu, alpha, ok, mu.is_zero())


# ---------------------------------------------------------------------------
# equations of motion


@dataclass
class MotionReport:
    balanced: bool
    psi_closed: bool
    instanton_is_instanton: bool
    anomaly: AnomalyResult
    connection_is_instanton: bool

    @property
    def ok(self) -> bool:
        return (self.balanced and self.psi_closed and self.instanton_is_instanton
                and self.anomaly.status == "Unique" and self.connection_is_instanton)

    def __bool__(self):
        return self.ok


def motion_equations_check(s: SU3Structure, eps: ScalarLike, rho: ScalarLike, instanton: Connection,
                           conn_curvature: Optional[Curvature] = None) -> MotionReport:
    """Strominger system solved with alpha' != 0 and the anomaly connection an instanton."""
    g = s.algebra
    q = conn_curvature or curvature(g, family_connection(s, eps, rho))
    qa = curvature(g, instanton)
    res = solve_alpha(torsion_derivative(s), pontrjagin_trace(q), pontrjagin_trace(qa))
    return MotionReport(
        balanced_check(s),
        psi_closed_check(s),
        instanton_check(s, qa),
        res,
        instanton_check(s, q),
    )
