from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from torsion_forge.anomaly import (
    DomainError, G7Solution, PREFERRED, SolveFailure, beta, family_data, g7_feasibility, g7_witness,
    hermitian_point, pontrjagin_trace, region_report, region_values, solve_alpha,
    solve_g7, solve_g7_u0, special_points,
)
from torsion_forge.catalog import builtin, symbols
from torsion_forge.connection import curvature, flat_connection, h3_instanton
from torsion_forge.exterior import DegreeMismatch, KForm, e
from torsion_forge.scalars import DenominatorZero, exact_sign, radical, subs

S = symbols()
t, eps, rho, lam = S["t"], S["eps"], S["rho"], S["lam"]
HALF = Fraction(1, 2)
grid = st.fractions(min_value=-2, max_value=2, max_denominator=10)


def test_region_identities():
    v = region_values(eps, rho)
    assert v["X"] - 2 * v["Z"] == -4 * v["L"]
    assert v["Y"] - 2 * v["W"] == -4 * v["N"]
    assert v["d"] == -4 * v["M"] * v["S"]


def test_beta_values():
    assert [beta(*p) for p in [(0, 0), (HALF, 0), (-HALF, 0), (0, HALF)]] == [1, 8, -4, 0]
    assert beta(eps, HALF - eps) == 32 * eps**2 * (4 * eps - 1)
    assert beta(eps, HALF - eps) - 8 == 8 * (2 * eps - 1) * (8 * eps**2 + 2 * eps + 1)
    # along the Hermitian line with t = 1 - 4 eps
    tt = 1 - 4 * eps
    assert beta(eps, HALF - eps) - 8 == -2 * (tt * (tt - 1) ** 2 + 4)


def test_special_point_values():
    sp = special_points()
    for name in ("P1", "Q1"):
        v = region_values(*sp[name])
        assert v["L"].is_zero() and v["N"].is_zero()
        assert v["Z"] == Fraction(3, 4) and v["W"] == -1
    v = region_values(*sp["P3"])
    assert v["S"].is_zero() and exact_sign(v["M"]) < 0
    # Z(P3) is negative, so P3 lies in the closure of both M^- and Z^-
    assert v["Z"] == Fraction(-4, 27)
    for name in ("P2", "Q2"):
        v = region_values(*sp[name])
        assert v["Z"].is_zero() and v["W"].is_zero()


def test_preferred_points_regions():
    ch = region_report(*PREFERRED["chern"])
    assert [ch.values[k] for k in "LNZW"] == [HALF, -2, 1, 0]
    assert ch.in_DeltaPlus
    bi = region_report(*PREFERRED["bismut"])
    assert [bi.values[k] for k in "LNZW"] == [-2, 4, 0, 4]
    assert bi.in_DeltaPlus
    assert not region_report(0, 0).in_DeltaPlus
    assert not region_report(*special_points()["P3"]).in_DeltaPlus


def test_hermitian_point():
    assert hermitian_point(1) == (0, HALF)
    assert hermitian_point(-1) == (HALF, 0)
    assert hermitian_point(0) == (Fraction(1, 4), Fraction(1, 4))


@settings(max_examples=80)
@given(grid, grid)
def test_delta_plus_definitions_agree(x, y):
    rep = region_report(x, y)
    assert rep.in_DeltaPlus == rep.in_DeltaPlus_alt
    if rep.in_DeltaPlus:
        assert rep.in_Delta and rep.feasibility["nonflat_positive"]


@settings(max_examples=40)
@given(grid, grid)
def test_witness_solves_exactly(x, y):
    w = g7_witness(x, y)
    if w is None:
        assert not g7_feasibility(x, y)["nonflat_positive"]
        return
    sol = solve_g7(x, y, w["r"], w["t"], w["u1"], w["u2"], require_positive_alpha=True)
    assert isinstance(sol, G7Solution) and sol.verified
    assert exact_sign(sol.alpha) > 0 and exact_sign(sol.mu_squared) > 0


def test_pontrjagin_traces():
    assert family_data("h3").trace == e(1, 2, 3, 4).scale(
        -8 * (1 + 2 * eps - 2 * rho) * (3 + 4 * eps**2 - 4 * rho + 4 * rho**2) * t**4)
    bi = family_data("sl2c").trace.subs({"eps": HALF, "rho": 0})
    assert bi == (e(1, 2, 3, 4) + e(1, 2, 5, 6) + e(3, 4, 5, 6)).scale(-16 / t**4)
    r = S["r"]
    g7 = family_data("g7").trace.subs({"eps": HALF, "rho": 0, "u1": 0, "u2": 0})
    assert g7 == e(1, 2, 3, 4).scale(-64 * t**4 / r**8)
    g = builtin("h3").algebra
    assert pontrjagin_trace(curvature(g, flat_connection())).is_zero()


def test_solve_alpha_statuses():
    z = KForm(4)
    assert solve_alpha(z, z, z).status == "Underdetermined"
    assert solve_alpha(e(1, 2, 3, 4), z, z).status == "NoSolution"
    assert solve_alpha(e(1, 2, 3, 4), e(1, 2, 5, 6), z).status == "NoSolution"
    res = solve_alpha(e(1, 2, 3, 4), e(1, 2, 3, 4).scale(2), z)
    assert res.status == "Unique" and res.alpha == 2
    with pytest.raises(DegreeMismatch):
        solve_alpha(e(1, 2, 3), z, z)


def test_h3_alpha_formula():
    fd = family_data("h3")
    g = fd.structure.algebra
    res = solve_alpha(fd.dT, fd.trace, pontrjagin_trace(curvature(g, h3_instanton(lam))))
    assert res.status == "Unique"
    P = 3 + 4 * eps**2 - 4 * rho + 4 * rho**2
    assert 4 / res.alpha == t**2 * (1 + 2 * eps - 2 * rho) * P - 2 * lam**2


def test_sl2c_alpha_formula():
    fd = family_data("sl2c")
    res = solve_alpha(fd.dT, fd.trace, KForm(4))
    assert res.status == "Unique"
    assert res.alpha * beta(eps, rho) == 8 * t**2


def test_bismut_closed_form():
    r, tt, u1 = 2, 1, Fraction(3, 5)
    U = u1 * u1
    R = r**4 - U
    bi = solve_g7(HALF, 0, r, tt, u1, 0)
    assert bi.verified and bi.alpha == Fraction(tt**2) * R / (2 * U)
    assert bi.mu_squared == 4 * (tt**4 - 2 * U) / (tt**2 * R)


def test_chern_closed_form():
    r, tt, u1 = 2, 1, Fraction(4, 5)
    U = u1 * u1
    R = r**4 - U
    ch = solve_g7(0, HALF, r, tt, u1, 0)
    assert ch.verified
    assert ch.mu_squared == (4 * U - tt**4) / (tt**2 * R)
    assert ch.alpha == 2 * R / tt**2


def test_chern_flat_boundary():
    # t^4 = 4 |u|^2 gives mu = 0
    sol = solve_g7(0, HALF, 2, 1, HALF, 0)
    assert sol.mu_squared == 0 and sol.instanton_flat and sol.verified


def test_solve_g7_failures():
    assert isinstance(solve_g7(0, 0, 2, 1, HALF, 0), SolveFailure)
    fail = solve_g7(0, HALF, 2, 1, Fraction(1, 10), 0)
    assert not fail and fail.reason == "MuSquaredNegative"
    with pytest.raises(DomainError):
        solve_g7(0, HALF, 1, 1, 2, 0)
    with pytest.raises(DomainError):
        solve_g7(0, HALF, 1, 1, 0, 0)


def test_solve_g7_delta_minus_one():
    assert solve_g7(HALF, 0, 2, 1, Fraction(3, 5), 0, delta=-1).verified


def test_solve_g7_u0():
    sol = solve_g7_u0(HALF, 0, 1, 1, Fraction(1, 10))
    assert sol.verified and sol.alpha == Fraction(4) / (8 - 2 * Fraction(1, 100))
    # rho >= eps + 1/2 means X <= 0, so alpha' < 0 for every mu != 0
    assert exact_sign(solve_g7_u0(0, 1, 1, 1, Fraction(1, 10)).alpha) < 0
    with pytest.raises(DenominatorZero):
        solve_g7_u0(HALF, 0, 1, 1, 2)


def test_radical_witness_for_equal_scales():
    # 12 |u|^2 = 5 t^4 with t = sqrt 6, u1 = sqrt 15
    t6, u15 = radical("sqrt_6", 6), radical("sqrt_15", 15)
    ch = solve_g7(0, HALF, 2, t6, u15, 0)
    bi = solve_g7(HALF, 0, 2, t6, u15, 0)
    assert ch.verified and bi.verified
    assert ch.mu_squared == bi.mu_squared == 4
    assert (ch.alpha, bi.alpha) == (Fraction(1, 3), Fraction(1, 5))


def test_subs_into_symbolic_alpha():
    fd = family_data("sl2c")
    res = solve_alpha(fd.dT, fd.trace, KForm(4))
    assert subs(res.alpha, {"eps": HALF, "rho": 0, "t": 2}) == 4
