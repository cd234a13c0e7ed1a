"""Exterior algebra of a 6-dimensional Lie algebra dual.

Basis k-forms are indexed by strictly increasing tuples of 1-based indices,
so ``(1, 2)`` is e^12.  Coefficients are :class:`~torsion_forge.scalars.Scalar`.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, Iterable, Mapping, Optional, Sequence, Tuple

from .scalars import ONE, ZERO, Scalar, ScalarLike, as_scalar, evaluate, subs

__all__ = [
    "DIM",
    "KForm",
    "LieAlgebra",
    "ExteriorError",
    "DegreeOverflow",
    "DegreeMismatch",
    "IndexOutOfRange",
    "JacobiViolation",
    "e",
    "zero_form",
    "wedge",
    "d",
    "eval_form",
    "basis",
]

DIM = 6

Index = Tuple[int, ...]


class ExteriorError(ValueError):
    pass


class DegreeOverflow(ExteriorError):
    pass


class DegreeMismatch(ExteriorError):
    pass


class IndexOutOfRange(ExteriorError, IndexError):
    pass


class JacobiViolation(ExteriorError):
    def __init__(self, k: int, residual: "KForm"):
        super().__init__(f"d(d e{k}) = {residual} is not zero")
        self.k = k
        self.residual = residual


def _sort_sign(idx: Sequence[int]) -> Tuple[int, Index]:
    """Sign of the permutation sorting idx, and the sorted tuple (sign 0 on repeats)."""
    if len(set(idx)) != len(idx):
        return 0, ()
    lst = list(idx)
    s = 1
    for i in range(len(lst)):
        for j in range(len(lst) - 1 - i):
            if lst[j] > lst[j + 1]:
                lst[j], lst[j + 1] = lst[j + 1], lst[j]
                s = -s
    return s, tuple(lst)


# wedge table for basis monomials: (I, J) -> (sign, K); absent when I, J overlap
_WEDGE: Dict[Tuple[Index, Index], Tuple[int, Index]] = {}
_ALL: Dict[int, list] = {k: list(combinations(range(1, DIM + 1), k)) for k in range(DIM + 1)}
for _a in range(DIM + 1):
    for _I in _ALL[_a]:
        for _b in range(DIM + 1 - _a):
            for _J in _ALL[_b]:
                _s, _K = _sort_sign(_I + _J)
                if _s:
                    _WEDGE[(_I, _J)] = (_s, _K)


def basis(k: int) -> list:
    """All increasing index tuples of length k."""
    return list(_ALL[k])


class KForm:
    """Alternating k-form with constant (parameter-dependent) coefficients."""

    __slots__ = ("degree", "coeffs")

    def __init__(self, degree: int, coeffs: Optional[Mapping[Index, ScalarLike]] = None):
        if not 0 <= degree <= DIM:
            raise DegreeOverflow(f"degree {degree} outside 0..{DIM}")
        self.degree = degree
        clean: Dict[Index, Scalar] = {}
        for idx, c in (coeffs or {}).items():
            c = as_scalar(c)
            if c.is_zero():
                continue
            idx = tuple(idx)
            if len(idx) != degree:
                raise DegreeMismatch(f"index {idx} in a {degree}-form")
            for i in idx:
                if not 1 <= i <= DIM:
                    raise IndexOutOfRange(f"basis index {i} outside 1..{DIM}")
            sgn, key = _sort_sign(idx)
            if not sgn:
                continue
            if sgn < 0:
                c = -c
            prev = clean.get(key)
            if prev is not None:
                c = prev + c
                if c.is_zero():
                    del clean[key]
                    continue
            clean[key] = c
        self.coeffs = clean

    @classmethod
    def _raw(cls, degree: int, coeffs: Dict[Index, Scalar]) -> "KForm":
        f = cls.__new__(cls)
        f.degree = degree
        f.coeffs = coeffs
        return f

    # queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, *idx: int) -> Scalar:
        if len(idx) == 1 and isinstance(idx[0], tuple):
            idx = idx[0]
        sgn, key = _sort_sign(idx)
        if not sgn:
            return ZERO
        c = self.coeffs.get(key, ZERO)
        return c if sgn > 0 else -c

    def items(self):
        return sorted(self.coeffs.items())

    def symbols(self) -> set:
        out = set()
        for c in self.coeffs.values():
            out |= c.symbols()
        return out

    # arithmetic -------------------------------------------------------
    def _check_same(self, other: "KForm"):
        if not isinstance(other, KForm):
            raise TypeError(f"expected a KForm, got {type(other).__name__}")
        if other.degree != self.degree and self.coeffs and other.coeffs:
            raise DegreeMismatch(f"cannot add a {self.degree}-form and a {other.degree}-form")

    def __add__(self, other: "KForm") -> "KForm":
        self._check_same(other)
        if not other.coeffs:
            return self
        if not self.coeffs:
            return other
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            v = out.get(k)
            if v is None:
                out[k] = c
            else:
                v = v + c
                if v.is_zero():
                    del out[k]
                else:
                    out[k] = v
        return KForm._raw(self.degree, out)

    def __neg__(self) -> "KForm":
        return KForm._raw(self.degree, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other: "KForm") -> "KForm":
        return self + (-other)

    def scale(self, c: ScalarLike) -> "KForm":
        c = as_scalar(c)
        if c.is_zero():
            return KForm._raw(self.degree, {})
        out = {}
        for k, v in self.coeffs.items():
            p = v * c
            if not p.is_zero():
                out[k] = p
        return KForm._raw(self.degree, out)

    def __mul__(self, c):
        if isinstance(c, KForm):
            return wedge(self, c)
        return self.scale(c)

    def __rmul__(self, c):
        return self.scale(c)

    def __truediv__(self, c):
        return self.scale(ONE / as_scalar(c))

    def __xor__(self, other: "KForm") -> "KForm":
        return wedge(self, other)

    def __eq__(self, other):
        if isinstance(other, KForm):
            if self.degree != other.degree and self.coeffs and other.coeffs:
                return False
            return (self - other).is_zero()
        if other == 0:
            return self.is_zero()
        return NotImplemented

    __hash__ = None

    def map(self, fn: Callable[[Scalar], ScalarLike]) -> "KForm":
        return KForm(self.degree, {k: fn(c) for k, c in self.coeffs.items()})

    def subs(self, mapping: Mapping[str, ScalarLike]) -> "KForm":
        return self.map(lambda c: subs(c, mapping))

    def evaluate(self, assignment: Mapping[str, Fraction]) -> Dict[Index, Fraction]:
        out = {}
        for k, c in self.coeffs.items():
            v = evaluate(c, assignment)
            if v:
                out[k] = v
        return out

    # text -------------------------------------------------------------
    def to_text(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for idx, c in self.items():
            name = "e" + "".join(str(i) for i in idx) if idx else "1"
            parts.append(f"({c.to_text()})*{name}" if idx else f"({c.to_text()})")
        return " + ".join(parts)

    def __repr__(self):
        return f"KForm[{self.degree}]({self.to_text()})"

    __str__ = to_text


def e(*idx: int) -> KForm:
    """Basis monomial e^{i1...ik} (indices in any order, with sign)."""
    return KForm(len(idx), {tuple(idx): ONE})


def zero_form(degree: int) -> KForm:
    return KForm._raw(degree, {})


def const_form(c: ScalarLike) -> KForm:
    return KForm(0, {(): c})


def wedge(a: KForm, b: KForm) -> KForm:
    deg = a.degree + b.degree
    if deg > DIM:
        raise DegreeOverflow(f"wedge of degrees {a.degree} and {b.degree} exceeds {DIM}")
    out: Dict[Index, Scalar] = {}
    table = _WEDGE
    for I, ca in a.coeffs.items():
        for J, cb in b.coeffs.items():
            hit = table.get((I, J))
            if hit is None:
                continue
            sgn, K = hit
            p = ca * cb
            if sgn < 0:
                p = -p
            prev = out.get(K)
            out[K] = p if prev is None else prev + p
    return KForm._raw(deg, {k: v for k, v in out.items() if not v.is_zero()})


def eval_form(a: KForm, indices: Sequence[int]) -> Scalar:
    """a(e_{j1}, ..., e_{jk}) for basis vectors e_j dual to e^j."""
    indices = tuple(indices)
    if len(indices) != a.degree:
        raise DegreeMismatch(f"{a.degree}-form evaluated on {len(indices)} vectors")
    for i in indices:
        if not 1 <= i <= DIM:
            raise IndexOutOfRange(f"basis index {i} outside 1..{DIM}")
    return a.coeff(*indices)


class LieAlgebra:
    """Lie algebra given by the differentials of its dual basis.

    ``diffs[k]`` is the 2-form d e^k; ``c(k, i, j)`` reads the structure
    constant c^k_ij (antisymmetric in i, j).  Construction checks d^2 = 0 on
    every e^k, which is equivalent to the Jacobi identity.
    """

    def __init__(self, diffs: Mapping[int, KForm], name: str = "", params: Iterable[str] = (),
                 constraints: Iterable[str] = (), check: bool = True):
        self.name = name
        self.params = tuple(params)
        self.constraints = tuple(constraints)
        self.diffs: Dict[int, KForm] = {}
        for k in range(1, DIM + 1):
            f = diffs.get(k, zero_form(2))
            if f.coeffs and f.degree != 2:
                raise DegreeMismatch(f"d e{k} must be a 2-form")
            self.diffs[k] = f if f.degree == 2 else zero_form(2)
        for k in diffs:
            if not 1 <= k <= DIM:
                raise IndexOutOfRange(f"basis index {k} outside 1..{DIM}")
        self._dcache: Dict[Index, KForm] = {}
        if check:
            for k in range(1, DIM + 1):
                dd = self.d(self.diffs[k])
                if not dd.is_zero():
                    raise JacobiViolation(k, dd)

    def c(self, k: int, i: int, j: int) -> Scalar:
        """Structure constant c^k_ij with d e^k = sum_{i<j} c^k_ij e^ij."""
        return self.diffs[k].coeff(i, j)

    def d_basis(self, idx: Index) -> KForm:
        got = self._dcache.get(idx)
        if got is not None:
            return got
        out = zero_form(len(idx) + 1)
        if len(idx) == 1:
            out = self.diffs[idx[0]]
        else:
            for pos, i in enumerate(idx):
                left = e(*idx[:pos]) if pos else const_form(ONE)
                right = e(*idx[pos + 1:]) if pos + 1 < len(idx) else const_form(ONE)
                term = wedge(wedge(left, self.diffs[i]), right)
                out = out + (term if pos % 2 == 0 else -term)
        self._dcache[idx] = out
        return out

    def d(self, a: KForm) -> KForm:
        if a.degree == 0:
            return zero_form(1)
        if a.degree == DIM:
            return zero_form(DIM)  # nothing above top degree; returned for symmetry
        out: Dict[Index, Scalar] = {}
        for idx, c in a.coeffs.items():
            for K, v in self.d_basis(idx).coeffs.items():
                p = c * v
                prev = out.get(K)
                out[K] = p if prev is None else prev + p
        return KForm._raw(a.degree + 1, {k: v for k, v in out.items() if not v.is_zero()})

    def subs(self, mapping: Mapping[str, ScalarLike], name: Optional[str] = None) -> "LieAlgebra":
        diffs = {k: f.subs(mapping) for k, f in self.diffs.items()}
        params = tuple(p for p in self.params if p not in mapping)
        return LieAlgebra(diffs, name or self.name, params, self.constraints, check=False)

    def is_abelian(self) -> bool:
        return all(f.is_zero() for f in self.diffs.values())

    def __repr__(self):
        return f"LieAlgebra({self.name or 'anonymous'})"


def d(g: LieAlgebra, a: KForm) -> KForm:
    return g.d(a)
