import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from torsion_forge.catalog import builtin
from torsion_forge.exterior import (
    DegreeMismatch, DegreeOverflow, IndexOutOfRange, JacobiViolation, KForm, LieAlgebra, basis, e,
    eval_form, wedge,
)
from torsion_forge.scalars import free

a, b = free("a"), free("b")
COEFFS = [Fraction(1), Fraction(-2), Fraction(1, 3), a, b, a * b]


@st.composite
def forms(draw, degree=None):
    k = draw(st.integers(0, 3)) if degree is None else degree
    out = KForm(k)
    for idx in draw(st.lists(st.sampled_from(basis(k)), max_size=4)):
        out = out + KForm(k, {idx: draw(st.sampled_from(COEFFS))})
    return out


@given(forms(), forms())
def test_graded_commutativity(x, y):
    sign = (-1) ** (x.degree * y.degree)
    assert wedge(x, y) == wedge(y, x).scale(sign)


@given(forms(), forms(), forms(degree=1))
def test_wedge_associative(x, y, z):
    if x.degree + y.degree + z.degree <= 6:
        assert wedge(wedge(x, y), z) == wedge(x, wedge(y, z))


@given(forms(degree=1))
def test_one_forms_square_to_zero(x):
    assert wedge(x, x).is_zero()


@pytest.mark.parametrize("name", ["h3", "sl2c", "g7"])
def test_d_squared_vanishes(name):
    g = builtin(name).algebra
    for k in range(0, 5):
        for idx in basis(k):
            assert g.d(g.d(KForm(k, {idx: 1}))).is_zero()


@pytest.mark.parametrize("name", ["h3", "sl2c"])
def test_leibniz_rule(name):
    g = builtin(name).algebra
    rng = random.Random(7)
    for _ in range(30):
        p = rng.randint(1, 3)
        q = rng.randint(1, 5 - p)
        x = e(*rng.choice(basis(p))) + e(*rng.choice(basis(p))).scale(Fraction(rng.randint(-3, 3)))
        y = e(*rng.choice(basis(q)))
        lhs = g.d(wedge(x, y))
        rhs = wedge(g.d(x), y) + wedge(x, g.d(y)).scale((-1) ** p)
        assert lhs == rhs


def test_basic_forms():
    assert e(2, 1) == e(1, 2).scale(-1)
    assert e(1, 1).is_zero()
    assert e(1, 2).coeff(2, 1) == -1
    assert eval_form(e(1, 2) - e(3, 4), (3, 4)) == -1
    assert (e(1) ^ e(2)) == e(1, 2)
    assert len(basis(2)) == 15 and len(basis(3)) == 20


def test_errors():
    with pytest.raises(DegreeMismatch):
        _ = e(1) + e(1, 2)
    with pytest.raises(IndexOutOfRange):
        e(7)
    with pytest.raises(DegreeOverflow):
        wedge(e(1, 2, 3, 4), e(5, 6, 1))
    with pytest.raises(JacobiViolation) as info:
        LieAlgebra({3: e(1, 2), 1: e(3, 4)})
    assert info.value.k == 1


def test_two_dim_nonabelian_algebra_is_consistent():
    # d e1 = e1 ^ e2 is [e1, e2] proportional to e1, which satisfies Jacobi
    g = LieAlgebra({1: e(1, 2)})
    assert g.d(g.d(e(1))).is_zero()


def test_structure_constants_and_subs():
    g = builtin("h3").algebra
    assert g.c(6, 1, 2) == -2 * free("t")
    assert g.c(6, 2, 1) == 2 * free("t")
    g1 = g.subs({"t": 1})
    assert g1.c(6, 3, 4) == 2
    assert not g.is_abelian()
