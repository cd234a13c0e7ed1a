import pytest

from torsion_forge.catalog import builtin, symbols
from torsion_forge.exterior import e
from torsion_forge.su3 import (
    J_TABLE, SU3Structure, apply_J, balanced_check, psi_closed_check, torsion_T, torsion_T_via_J,
)

S = symbols()
t = S["t"]


def test_J_is_a_complex_structure():
    for i, (s, j) in J_TABLE.items():
        s2, k = J_TABLE[j]
        assert k == i and s * s2 == -1


def test_J_on_three_forms():
    assert apply_J(e(1, 2, 6)) == e(1, 2, 5)
    assert apply_J(apply_J(e(1))) == e(1).scale(-1)


@pytest.mark.parametrize("name", ["h3", "sl2c", "g7"])
def test_balanced_and_psi_closed(name):
    s = builtin(name).su3
    assert balanced_check(s)
    assert psi_closed_check(s)
    assert torsion_T(s) == torsion_T_via_J(s)


def test_reference_torsions():
    assert torsion_T(builtin("h3").su3) == (e(1, 2, 6) - e(3, 4, 6)).scale(-2 * t)
    expected = (e(1, 3, 5).scale(3) + e(1, 4, 6) + e(2, 3, 6) + e(2, 4, 5)).scale(-1 / t)
    assert torsion_T(builtin("sl2c").su3) == expected


def test_g7_u0_torsion():
    r, dl = S["r"], S["delta"]
    s = builtin("g7", values={"u1": 0, "u2": 0}).su3
    assert torsion_T(s) == (e(1, 2, 6) - e(3, 4, 6)).scale(-2 * dl * t / r**2)


def test_abelian_structure_is_torsion_free():
    from torsion_forge.exterior import LieAlgebra

    s = SU3Structure(LieAlgebra({}))
    assert torsion_T(s).is_zero()
    assert balanced_check(s) and psi_closed_check(s)


def test_perturbed_psi_is_not_closed():
    s = builtin("h3").su3
    # d e126 = e12 ^ d e6 = 2t e1234 is not zero
    bumped = s.with_psi(s.psi_re + e(1, 2, 6), s.psi_im)
    assert not psi_closed_check(bumped)
