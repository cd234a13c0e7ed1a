from itertools import islice

import pytest

from torsion_forge.catalog import builtin
from torsion_forge.connection import family_connection, levi_civita
from torsion_forge.holonomy import admissible_g7_points, bismut_holonomy, holonomy_dimension


@pytest.mark.parametrize("t", [1, 2, "1/3"])
def test_h3_bismut_is_u1(t):
    from fractions import Fraction

    rep = bismut_holonomy("h3", {"t": Fraction(t)})
    assert (rep.dimension, rep.classification) == (1, "u(1)")


@pytest.mark.parametrize("t", [1, -2, 3])
def test_sl2c_bismut_is_so3(t):
    rep = bismut_holonomy("sl2c", {"t": t})
    assert (rep.dimension, rep.classification) == (3, "so(3)")
    assert rep.closed_under_brackets


def test_g7_without_u_is_u1():
    for r in (1, 2, 3):
        rep = bismut_holonomy("g7", {"r": r})
        assert (rep.dimension, rep.classification) == (1, "u(1)")


def test_admissible_points_have_square_radicand():
    pts = list(islice(admissible_g7_points(), 5))
    assert pts
    from math import isqrt

    for p in pts:
        rest = p["r"] ** 4 - p["u1"] ** 2 - p["u2"] ** 2
        assert rest > 0 and isqrt(rest) ** 2 == rest and (p["u1"], p["u2"]) != (0, 0)


@pytest.mark.parametrize("delta", [1, -1])
def test_g7_with_u_is_su3(delta):
    p = next(admissible_g7_points())
    rep = bismut_holonomy("g7", p, delta=delta)
    assert (rep.dimension, rep.classification) == (8, "su(3)")


def test_levi_civita_holonomy_is_larger():
    b = builtin("sl2c", values={"t": 1})
    rep = holonomy_dimension(b.su3, levi_civita(b.su3))
    assert rep.dimension > 3


def test_symbolic_coefficients_need_assignment():
    b = builtin("h3")
    conn = family_connection(b.su3, 0, 0)
    rep = holonomy_dimension(b.su3, conn, assignment={"t": 1})
    assert rep.dimension >= 1
    with pytest.raises(Exception):
        holonomy_dimension(b.su3, conn)


def _nonzero_endos(name, values, delta=None):
    from fractions import Fraction

    from torsion_forge.connection import curvature
    from torsion_forge.holonomy import curvature_endos

    b = builtin(name, delta, values)
    q = curvature(b.algebra, family_connection(b.su3, Fraction(1, 2), 0))
    pairs = [(p, r) for p in range(1, 7) for r in range(p + 1, 7)]
    return {pq: m for pq, m in zip(pairs, curvature_endos(q)) if any(x for row in m for x in row)}


def _two_form_endo(entries):
    m = [[0] * 6 for _ in range(6)]
    for (i, j), v in entries.items():
        m[i - 1][j - 1], m[j - 1][i - 1] = v, -v
    return tuple(tuple(row) for row in m)


def test_g7_u0_curvature_endos():
    # t = 2, r = 1: R(e1, e2) = -R(e3, e4) = -4 t^2 / r^4 (e12 - e34)
    endos = _nonzero_endos("g7", {"t": 2, "r": 1, "u1": 0, "u2": 0}, 1)
    assert set(endos) == {(1, 2), (3, 4)}
    assert endos[(1, 2)] == _two_form_endo({(1, 2): -16, (3, 4): 16})
    assert endos[(3, 4)] == _two_form_endo({(1, 2): 16, (3, 4): -16})


def test_sl2c_curvature_endos():
    # t = 1: R(e1, e3) = R(e2, e4) = -2 (e13 + e24)
    endos = _nonzero_endos("sl2c", {"t": 1})
    assert endos[(1, 3)] == endos[(2, 4)] == _two_form_endo({(1, 3): -2, (2, 4): -2})
    for m in endos.values():
        assert all(m[i][j] == -m[j][i] for i in range(6) for j in range(6))
