"""SU(3)-structures in an adapted basis.

The metric is the identity, ``F = e12 + e34 + e56`` and
``Psi = (e1 + i e2) ^ (e3 + i e4) ^ (e5 + i e6)``.  J acts on basis vectors
and on basis 1-forms through the same signed permutation:
``J e1 = -e2, J e2 = e1`` and likewise on the pairs (3, 4) and (5, 6).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from .exterior import DIM, KForm, LieAlgebra, _sort_sign, e, wedge
from .scalars import Scalar

__all__ = [
    "J_TABLE",
    "J_MATRIX",
    "SU3Structure",
    "apply_J",
    "J_vector",
    "torsion_T",
    "torsion_T_via_J",
    "torsion_C",
    "balanced_check",
    "psi_closed_check",
]

# basis index -> (sign, image index)
J_TABLE: Dict[int, Tuple[int, int]] = {1: (-1, 2), 2: (1, 1), 3: (-1, 4), 4: (1, 3), 5: (-1, 6), 6: (1, 5)}

# J_MATRIX[i][j] = component of e_(i+1) in J e_(j+1)
J_MATRIX = [[0] * DIM for _ in range(DIM)]
for _j, (_s, _i) in J_TABLE.items():
    J_MATRIX[_i - 1][_j - 1] = _s


def J_vector(i: int) -> Tuple[int, int]:
    """J e_i = sign * e_image."""
    return J_TABLE[i]


def apply_J(a: KForm) -> KForm:
    """Apply J to every 1-form factor of each basis monomial."""
    out = {}
    for idx, c in a.coeffs.items():
        sgn = 1
        img = []
        for i in idx:
            s, j = J_TABLE[i]
            sgn *= s
            img.append(j)
        s2, key = _sort_sign(img)
        sgn *= s2
        v = c if sgn > 0 else -c
        prev = out.get(key)
        out[key] = v if prev is None else prev + v
    return KForm(a.degree, out)


def _F() -> KForm:
    return e(1, 2) + e(3, 4) + e(5, 6)


def _psi() -> Tuple[KForm, KForm]:
    re = e(1, 3, 5) - e(1, 4, 6) - e(2, 3, 6) - e(2, 4, 5)
    im = e(1, 3, 6) + e(1, 4, 5) + e(2, 3, 5) - e(2, 4, 6)
    return re, im


@dataclass
class SU3Structure:
    algebra: LieAlgebra
    F: KForm = field(default_factory=_F)
    psi_re: KForm = field(default_factory=lambda: _psi()[0])
    psi_im: KForm = field(default_factory=lambda: _psi()[1])
    _dF: Optional[KForm] = field(default=None, repr=False, compare=False)

    @property
    def dF(self) -> KForm:
        if self._dF is None:
            self._dF = self.algebra.d(self.F)
        return self._dF

    def dF_at(self, i: int, j: int, k: int) -> Scalar:
        return self.dF.coeff(i, j, k)

    def dF_J(self, i: int, j: int, k: int, which: Tuple[bool, bool, bool]) -> Scalar:
        """dF evaluated with J applied to the flagged arguments."""
        sgn = 1
        args = []
        for idx, flag in zip((i, j, k), which):
            if flag:
                s, idx = J_TABLE[idx]
                sgn *= s
            args.append(idx)
        v = self.dF.coeff(*args)
        return v if sgn > 0 else -v

    def with_psi(self, re: KForm, im: KForm) -> "SU3Structure":
        return SU3Structure(self.algebra, self.F, re, im)

    def volume_check(self) -> Scalar:
        """Coefficient of e123456 in Re Psi ^ Im Psi."""
        return wedge(self.psi_re, self.psi_im).coeff(1, 2, 3, 4, 5, 6)


def torsion_T(s: SU3Structure) -> KForm:
    """T(X, Y, Z) = -dF(JX, JY, JZ), assembled coefficientwise."""
    out = {}
    for i in range(1, DIM + 1):
        for j in range(i + 1, DIM + 1):
            for k in range(j + 1, DIM + 1):
                v = -s.dF_J(i, j, k, (True, True, True))
                if not v.is_zero():
                    out[(i, j, k)] = v
    return KForm(3, out)


def torsion_T_via_J(s: SU3Structure) -> KForm:
    """T computed as J applied to dF, for cross-checking :func:`torsion_T`."""
    return apply_J(s.dF)


def torsion_C(s: SU3Structure) -> Dict[Tuple[int, int, int], Scalar]:
    """C(e_i, e_j, e_k) = dF(J e_i, e_j, e_k); nonzero entries only."""
    out = {}
    for i in range(1, DIM + 1):
        for j in range(1, DIM + 1):
            for k in range(1, DIM + 1):
                v = s.dF_J(i, j, k, (True, False, False))
                if not v.is_zero():
                    out[(i, j, k)] = v
    return out


def balanced_check(s: SU3Structure) -> bool:
    return s.algebra.d(wedge(s.F, s.F)).is_zero()


def psi_closed_check(s: SU3Structure) -> bool:
    g = s.algebra
    return g.d(s.psi_re).is_zero() and g.d(s.psi_im).is_zero()
