import pytest

from torsion_forge.anomaly import family_data
from torsion_forge.connection import Curvature
from torsion_forge.exterior import KForm, e, wedge
from torsion_forge.verify import appendix_suite, compare_curvature, load_fixture


@pytest.mark.parametrize("name,rows", [("h3", 15), ("sl2c", 15), ("g7", 30)])
def test_fixture_rows_match(name, rows):
    checks = appendix_suite(name)
    assert len(checks) == rows
    bad = [c.detail for c in checks if not c.ok]
    assert not bad


def bianchi_defect(fd, q):
    """Nonzero entries of dOmega + sigma^Omega - Omega^sigma."""
    g = fd.structure.algebra
    sig = fd.connection
    out = []
    for i in range(1, 7):
        for j in range(1, 7):
            v = g.d(q.o(i, j))
            for k in range(1, 7):
                v = v + wedge(sig.s(i, k), q.o(k, j)) - wedge(q.o(i, k), sig.s(k, j))
            if not v.is_zero():
                out.append((i, j))
    return out


def test_computed_g7_curvature_satisfies_bianchi():
    fd = family_data("g7")
    assert bianchi_defect(fd, fd.curvature) == []


def test_flipped_omega36_sign_violates_bianchi():
    fd = family_data("g7")
    q = fd.curvature
    c46 = q.o(3, 6).coeff(4, 6)
    assert not c46.is_zero()
    flipped = q.o(3, 6) - e(4, 6).scale(2 * c46)
    omega = [list(row) for row in q.omega]
    omega[2][5] = flipped
    omega[5][2] = -flipped
    assert bianchi_defect(fd, Curvature(omega))


def test_fixture_mismatch_is_reported():
    doc = load_fixture("h3")
    entry = doc.curvatures["family"][0]
    entry.rhs = entry.rhs + e(5, 6)
    checks = compare_curvature(doc, q=family_data("h3").curvature)
    assert not checks[0].ok and "residual" in checks[0].detail
    assert all(c.ok for c in checks[1:])
    assert isinstance(entry.rhs, KForm)
