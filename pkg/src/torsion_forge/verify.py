"""Symbolic verification suites: reference curvature tables and identities."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Callable, List, Optional, Tuple

from .anomaly import beta, family_data, region_values
from .catalog import NAMES, builtin, symbols
from .connection import (Curvature, curvature, family_connection, levi_civita, nabla_J,
                         su3_compatible)
from .dsl import Document, parse
from .exterior import KForm, e
from .scalars import Scalar
from .su3 import apply_J, balanced_check, psi_closed_check, torsion_T

__all__ = [
    "Check",
    "fixture_text",
    "load_fixture",
    "compare_curvature",
    "appendix_suite",
    "identities_suite",
    "run_suites",
]


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "ok": self.ok, "detail": self.detail}


def fixture_text(name: str) -> str:
    return resources.files("torsion_forge").joinpath("fixtures").joinpath(f"{name}.tf").read_text("utf-8")


def load_fixture(name: str) -> Document:
    return parse(fixture_text(name))


def compare_curvature(doc: Document, block: str = "family", delta: Optional[int] = None,
                      q: Optional[Curvature] = None) -> List[Check]:
    """Compare every row of a curvature block with the computed family curvature.

    The connection is the (eps, rho) family on the document's algebra, so the
    document must declare eps and rho.  ``delta`` fixes a sign symbol named
    delta on both sides.
    """
    if q is None:
        S = symbols()
        g = doc.algebra
        from .su3 import SU3Structure

        q = curvature(g, family_connection(SU3Structure(g), S["eps"], S["rho"]))
    fix = {"delta": delta} if delta is not None else None
    if fix:
        q = q.subs(fix)
    out = []
    for entry in doc.curvatures.get(block, []):
        lhs = KForm(2)
        for sg, i, j in entry.lhs:
            lhs = lhs + q.o(i, j).scale(sg)
        rhs = entry.rhs.subs(fix) if fix else entry.rhs
        diff = lhs - rhs
        out.append(Check(entry.label(), diff.is_zero(),
                         "" if diff.is_zero() else f"line {entry.line}: residual {diff.to_text()}"))
    return out


def appendix_suite(name: str) -> List[Check]:
    doc = load_fixture(name)
    if name == "g7":
        q = family_data("g7").curvature
        out = []
        for dl in (1, -1):
            for c in compare_curvature(doc, delta=dl, q=q):
                c.name = f"delta={dl}: {c.name}"
                out.append(c)
        return out
    return compare_curvature(doc, q=family_data(name).curvature)


def _check(name: str, fn: Callable[[], bool], detail: str = "") -> Check:
    try:
        return Check(name, bool(fn()), detail)
    except Exception as exc:  # report, do not abort the suite
        return Check(name, False, f"{type(exc).__name__}: {exc}")


def _prop_nabla_J(name: str) -> bool:
    S = symbols()
    fd = family_data(name)
    a = nabla_J(fd.structure, fd.connection)
    b = nabla_J(fd.structure, levi_civita(fd.structure))
    k = 2 * (S["eps"] + S["rho"] - Fraction(1, 2))
    keys = set(a) | set(b)
    zero = Scalar.coerce(0)
    return all((a.get(key, zero) + k * b.get(key, zero)).is_zero() for key in keys)


def _trace_fixture(name: str) -> bool:
    S = symbols()
    eps, rho, t = S["eps"], S["rho"], S["t"]
    tr = family_data(name).trace
    if name == "h3":
        expected = e(1, 2, 3, 4).scale(-8 * (1 + 2 * eps - 2 * rho) * (3 + 4 * eps**2 - 4 * rho + 4 * rho**2) * t**4)
        return tr == expected
    if name == "sl2c":
        return tr == (e(1, 2, 3, 4) + e(1, 2, 5, 6) + e(3, 4, 5, 6)).scale(-2 * beta(eps, rho) / t**4)
    r, u1, u2, s = S["r"], S["u1"], S["u2"], S["s"]
    v = region_values(eps, rho)
    U = u1 * u1 + u2 * u2
    R = r**4 - U
    first = e(1, 2, 3, 4).scale(-8 * (v["X"] * t**4 + v["Y"] * U) / R**2)
    bracket = (e(1, 2, 5, 6).scale(2 * U / s) + (e(1, 3, 5, 6) + e(2, 4, 5, 6)).scale(u2)
               - (e(1, 4, 5, 6) - e(2, 3, 5, 6)).scale(u1))
    second = bracket.scale(-32 * (v["Z"] * t**4 + v["W"] * U) / (t**4 * R * s))
    return tr == first + second


def _bismut_trace_free(name: str, delta: Optional[int] = None) -> bool:
    b = builtin(name, delta)
    q = curvature(b.algebra, family_connection(b.su3, Fraction(1, 2), 0))
    return (q.o(1, 2) + q.o(3, 4) + q.o(5, 6)).is_zero()


def identities_suite(name: str) -> List[Check]:
    b = builtin(name)
    g, s = b.algebra, b.su3
    out = [
        _check("d^2 = 0 on basis 1-forms", lambda: all(g.d(g.d(e(k))).is_zero() for k in range(1, 7))),
        _check("balanced: dF ^ F = 0", lambda: balanced_check(s)),
        _check("d Psi = 0", lambda: psi_closed_check(s)),
        _check("T = -dF(J,J,J) equals J dF", lambda: torsion_T(s) == apply_J(s.dF)),
        _check("Levi-Civita sigma is skew", lambda: levi_civita(s).is_skew()),
        _check("nabla^(eps,rho) J + 2(eps+rho-1/2) nabla^LC J = 0", lambda: _prop_nabla_J(name)),
        _check("Bismut connection is SU(3)-compatible",
               lambda: su3_compatible(family_connection(s, Fraction(1, 2), 0))),
        _check("Bismut curvature: Omega^1_2 + Omega^3_4 + Omega^5_6 = 0", lambda: _bismut_trace_free(name)),
        _check("Pontrjagin trace fixture", lambda: _trace_fixture(name)),
    ]
    if name == "g7":
        S = symbols()

        def region_identities() -> bool:
            v = region_values(S["eps"], S["rho"])
            return ((v["X"] - 2 * v["Z"] + 4 * v["L"]).is_zero()
                    and (v["Y"] - 2 * v["W"] + 4 * v["N"]).is_zero()
                    and (v["d"] + 4 * v["M"] * v["S"]).is_zero())

        out.append(_check("X - 2Z = -4L, Y - 2W = -4N, d = -4MS", region_identities))
    return out


def run_suites(algebras: Tuple[str, ...] = NAMES, suites: Tuple[str, ...] = ("appendix", "identities")
               ) -> List[Tuple[str, str, List[Check]]]:
    out = []
    for name in algebras:
        if "appendix" in suites:
            out.append((name, "appendix", appendix_suite(name)))
        if "identities" in suites:
            out.append((name, "identities", identities_suite(name)))
    return out
