"""Invariant (Chevalley-Eilenberg) cohomology queries over the parameter field.

Linear systems are solved by Gaussian elimination over Scalars with exact
zero tests.  Constant pivots are preferred; every pivot that depends on
parameters is reported, since the answer may change where it vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .exterior import KForm, LieAlgebra, basis, wedge, zero_form
from .scalars import ONE, ZERO, Scalar
from .su3 import SU3Structure

__all__ = [
    "NotClosed",
    "ExactnessResult",
    "CupResult",
    "is_exact",
    "closed_forms",
    "cup_product_L_check",
    "F_squared",
]


class NotClosed(ValueError):
    pass


@dataclass
class ExactnessResult:
    form: KForm
    closed: bool
    exact: bool
    witness: Optional[KForm] = None
    generic_pivots: List[Scalar] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "form": self.form.to_text(),
            "closed": self.closed,
            "exact": self.exact,
            "witness": self.witness.to_text() if self.witness is not None else None,
            "generic_pivots": [p.to_text() for p in self.generic_pivots],
            "level": "invariant forms",
        }


def _rref(rows: List[List[Scalar]], ncols: int) -> Tuple[List[List[Scalar]], List[int], List[Scalar]]:
    """Reduced row echelon form on the first ncols columns (extra columns ride along)."""
    rows = [list(r) for r in rows]
    pivots, pivot_values = [], []
    r = 0
    for c in range(ncols):
        cands = [i for i in range(r, len(rows)) if not rows[i][c].is_zero()]
        if not cands:
            continue
        k = next((i for i in cands if rows[i][c].is_const()), cands[0])
        rows[r], rows[k] = rows[k], rows[r]
        lead = rows[r][c]
        pivot_values.append(lead)
        rows[r] = [x / lead for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots, pivot_values


def _differential_matrix(g: LieAlgebra, k: int):
    """Columns are d of the basis (k-1)-forms, rows the basis k-forms."""
    src = basis(k - 1)
    dst = basis(k)
    images = [g.d(KForm(k - 1, {idx: ONE})) for idx in src]
    return src, dst, [[img.coeff(*idx) for img in images] for idx in dst]


def is_exact(g: LieAlgebra, omega: KForm) -> ExactnessResult:
    """Decide whether omega = d(beta) for an invariant beta."""
    k = omega.degree
    if not g.d(omega).is_zero():
        raise NotClosed(f"d({omega.to_text()}) != 0")
    if k == 0:
        return ExactnessResult(omega, True, omega.is_zero(), zero_form(0) if omega.is_zero() else None)
    src, dst, mat = _differential_matrix(g, k)
    rhs = [omega.coeff(*idx) for idx in dst]
    aug = [row + [b] for row, b in zip(mat, rhs)]
    rows, pivots, pvals = _rref(aug, len(src))
    generic = [p for p in pvals if not p.is_const()]
    if any(not row[-1].is_zero() for row in rows[len(pivots):]):
        return ExactnessResult(omega, True, False, None, generic)
    coeffs = {src[c]: rows[i][-1] for i, c in enumerate(pivots) if not rows[i][-1].is_zero()}
    beta = KForm(k - 1, coeffs)
    if g.d(beta) != omega:
        raise ArithmeticError("exactness witness failed re-differentiation")
    return ExactnessResult(omega, True, True, beta, generic)


def _nullspace(mat: List[List[Scalar]], ncols: int) -> List[List[Scalar]]:
    rows, pivots, _ = _rref(mat, ncols)
    free_cols = [c for c in range(ncols) if c not in pivots]
    out = []
    for fc in free_cols:
        v = [ZERO] * ncols
        v[fc] = ONE
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fc]
        out.append(v)
    return out


def closed_forms(g: LieAlgebra, k: int) -> List[KForm]:
    """A basis of closed invariant k-forms (basis elements first when closed)."""
    idxs = basis(k)
    simple = [KForm(k, {idx: ONE}) for idx in idxs if g.d(KForm(k, {idx: ONE})).is_zero()]
    if k == 6:
        return simple
    _, dst, _ = _differential_matrix(g, k + 1)
    images = [g.d(KForm(k, {idx: ONE})) for idx in idxs]
    mat = [[img.coeff(*row) for img in images] for row in dst]
    kernel = _nullspace(mat, len(idxs))
    # keep the combination-free elements, then extend by kernel vectors
    out = list(simple)
    have = [[f.coeff(*idx) for idx in idxs] for f in out]
    for v in kernel:
        trial = have + [v]
        _, piv, _ = _rref([list(col) for col in zip(*trial)], len(trial))
        if len(piv) == len(trial):
            have.append(v)
            out.append(KForm(k, {idx: c for idx, c in zip(idxs, v) if not c.is_zero()}))
    return out


def F_squared(s: SU3Structure) -> KForm:
    return wedge(s.F, s.F)


@dataclass
class CupResult:
    injective: bool
    kernel_witness: Optional[KForm]
    witnesses: List[KForm] = field(default_factory=list)
    primitive: Optional[KForm] = None

    def as_dict(self) -> dict:
        return {
            "injective": self.injective,
            "kernel_witness": self.kernel_witness.to_text() if self.kernel_witness is not None else None,
            "primitive": self.primitive.to_text() if self.primitive is not None else None,
            "witnesses": [w.to_text() for w in self.witnesses],
            "level": "invariant forms",
        }


def cup_product_L_check(g: LieAlgebra, s: SU3Structure) -> CupResult:
    """Is [w] -> [w ^ F^2] injective on invariant H^1?

    Invariant 1-forms are never exact, so any nonzero closed w with w ^ F^2
    exact lies in the kernel.  A closed basis 1-form in the kernel is
    preferred as witness; failing that, combinations are searched.
    """
    f2 = F_squared(s)
    z1 = closed_forms(g, 1)
    witnesses = []
    primitive = None
    for w in z1:
        res = is_exact(g, wedge(w, f2))
        if res.exact:
            witnesses.append(w)
            if primitive is None:
                primitive = res.witness
    if witnesses:
        return CupResult(False, witnesses[0], witnesses, primitive)
    if not z1:
        return CupResult(True, None)
    # combinations: a_m (z_m ^ F^2) - d(beta) = 0 with some a_m != 0
    images = [wedge(w, f2) for w in z1]
    src, dst, dmat = _differential_matrix(g, 5)
    mat = [[img.coeff(*idx) for img in images] + [-x for x in row] for idx, row in zip(dst, dmat)]
    for v in _nullspace(mat, len(images) + len(src)):
        a = v[:len(images)]
        if any(not x.is_zero() for x in a):
            w = sum((z.scale(c) for z, c in zip(z1, a) if not c.is_zero()), zero_form(1))
            return CupResult(False, w, [w], is_exact(g, wedge(w, f2)).witness)
    return CupResult(True, None)
