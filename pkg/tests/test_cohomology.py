import pytest

from torsion_forge.catalog import builtin, symbols
from torsion_forge.cohomology import (
    F_squared, NotClosed, closed_forms, cup_product_L_check, is_exact,
)
from torsion_forge.exterior import e

S = symbols()
t, r = S["t"], S["r"]


@pytest.mark.parametrize("name,exact", [("h3", False), ("sl2c", True), ("g7", False)])
def test_F_squared_class(name, exact):
    b = builtin(name)
    res = is_exact(b.algebra, F_squared(b.su3))
    assert res.closed and res.exact is exact
    if exact:
        assert b.algebra.d(res.witness) == F_squared(b.su3)


def test_sl2c_primitive():
    b = builtin("sl2c")
    res = is_exact(b.algebra, F_squared(b.su3))
    assert b.algebra.d(e(1, 3, 5).scale(2 * t)) == F_squared(b.su3)
    assert res.witness is not None


@pytest.mark.parametrize("name", ["h3", "g7"])
def test_cup_kernel_witness_is_e5(name):
    b = builtin(name, delta=1 if name == "g7" else None)
    res = cup_product_L_check(b.algebra, b.su3)
    assert not res.injective
    assert res.kernel_witness == e(5)
    g = b.algebra
    assert g.d(res.primitive) == e(5) ^ F_squared(b.su3)


def test_g7_top_form_primitive():
    g = builtin("g7", delta=1).algebra
    assert g.d(e(1, 2, 5, 6).scale(-r**2 / (2 * t))) == e(1, 2, 3, 4, 5)


def test_not_closed():
    g = builtin("h3").algebra
    with pytest.raises(NotClosed):
        is_exact(g, e(6))


def test_closed_one_forms():
    g = builtin("h3").algebra
    assert len(closed_forms(g, 1)) == 5
    assert all(g.d(w).is_zero() for w in closed_forms(g, 2))


def test_abelian_cup_product_is_injective():
    from torsion_forge.exterior import LieAlgebra
    from torsion_forge.su3 import SU3Structure

    g = LieAlgebra({})
    res = cup_product_L_check(g, SU3Structure(g))
    assert res.injective and res.kernel_witness is None


def test_sl2c_closed_four_forms_are_exact():
    g = builtin("sl2c").algebra
    forms = closed_forms(g, 4)
    assert forms
    for w in forms:
        res = is_exact(g, w)
        assert res.exact and g.d(res.witness) == w
