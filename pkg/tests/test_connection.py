from fractions import Fraction

import pytest

from torsion_forge.anomaly import family_data
from torsion_forge.catalog import builtin, symbols
from torsion_forge.connection import (
    curvature, family_connection, flat_connection, g7_instanton, h3_instanton, instanton_check,
    levi_civita, nabla_J, su3_compatible, torsion_tensor,
)

S = symbols()
HALF = Fraction(1, 2)


@pytest.mark.parametrize("name", ["h3", "sl2c", "g7"])
def test_levi_civita_is_torsion_free_and_metric(name):
    b = builtin(name)
    lc = levi_civita(b.su3)
    assert lc.is_skew()
    assert not torsion_tensor(b.algebra, lc)


@pytest.mark.parametrize("name", ["h3", "sl2c", "g7"])
@pytest.mark.parametrize("point", [(HALF, 0), (0, HALF)], ids=["bismut", "chern"])
def test_hermitian_connections_preserve_J(name, point):
    s = builtin(name).su3
    conn = family_connection(s, *point)
    assert not nabla_J(s, conn)
    if point == (HALF, 0):
        assert su3_compatible(conn)


def test_family_reduces_to_levi_civita():
    s = builtin("sl2c").su3
    assert family_connection(s, 0, 0).sigma == levi_civita(s).sigma


def test_family_curvature_is_skew():
    assert family_data("h3").curvature.is_skew()


def test_instanton_constructors():
    lam, mu = S["lam"], S["mu"]
    g_h3 = builtin("h3").algebra
    g_g7 = builtin("g7", values={"u1": 0, "u2": 0}).algebra
    assert instanton_check(None, curvature(g_h3, h3_instanton(lam)))
    assert instanton_check(None, curvature(g_g7, g7_instanton(lam, mu)))
    assert curvature(g_h3, flat_connection()).is_flat()


@pytest.mark.parametrize("name,points", [
    ("h3", {(HALF, 0)}),
    ("sl2c", {(HALF, 0), (0, HALF)}),
])
def test_instanton_points_of_the_family(name, points):
    s = builtin(name).su3
    g = s.algebra
    for eps in (-1, -HALF, 0, HALF, 1):
        for rho in (-1, -HALF, 0, HALF, 1):
            q = curvature(g, family_connection(s, eps, rho))
            assert instanton_check(s, q) == ((eps, rho) in points)


def test_g7_bismut_instanton_only_without_u():
    b0 = builtin("g7", values={"u1": 0, "u2": 0})
    b1 = builtin("g7", values={"t": 1, "r": 1, "u1": Fraction(3, 5), "u2": 0})
    for b, expected in ((b0, True), (b1, False)):
        q = curvature(b.algebra, family_connection(b.su3, HALF, 0))
        assert instanton_check(b.su3, q) is expected
