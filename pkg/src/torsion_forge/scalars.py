"""Exact coefficient arithmetic.

Polynomials over Q in named parameters, plus two kinds of adjoined symbols
that rewrite their squares: *sign* symbols (``d**2 -> 1``) and *radical*
symbols (``s**2 -> radicand``).  A :class:`Scalar` is a quotient of a
numerator polynomial by a product of radical-free factor polynomials.

Monomials are packed into a single Python int, 16 bits per parameter, so
monomial multiplication is integer addition.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple, Union

__all__ = [
    "Param",
    "Poly",
    "Scalar",
    "ScalarError",
    "NotPerfectSquare",
    "DenominatorZero",
    "MissingParam",
    "free",
    "sign",
    "radical",
    "as_scalar",
    "normalize",
    "is_zero",
    "evaluate",
    "eval_approx",
    "subs",
    "ZERO",
    "ONE",
    "exact_sign",
    "constant_radicals",
]

_BITS = 16
_MASK = (1 << _BITS) - 1
_GUARD = 1 << (_BITS - 1)

Number = Union[int, Fraction]


class ScalarError(ArithmeticError):
    pass


class NotPerfectSquare(ScalarError):
    def __init__(self, name: str, value: Fraction):
        super().__init__(f"radicand of {name} evaluates to {value}, not a rational square")
        self.name = name
        self.value = value


class DenominatorZero(ScalarError, ZeroDivisionError):
    pass


class MissingParam(ScalarError, KeyError):
    pass


# ---------------------------------------------------------------------------
# parameters


class Param:
    """A named symbol.  Instances are interned: equal definitions are identical."""

    __slots__ = ("name", "kind", "radicand", "index", "__weakref__")

    _registry: Dict[tuple, "Param"] = {}
    _by_index: list = []
    _special_indices: list = []
    _guard_mask = 0

    def __init__(self, name: str, kind: str, radicand: Optional["Poly"], index: int):
        self.name = name
        self.kind = kind
        self.radicand = radicand
        self.index = index

    @classmethod
    def get(cls, name: str, kind: str = "free", radicand: Optional["Poly"] = None) -> "Param":
        if kind not in ("free", "sign", "radical"):
            raise ValueError(f"unknown parameter kind {kind!r}")
        if not name.isidentifier():
            raise ValueError(f"parameter name must be an identifier, got {name!r}")
        if kind == "radical":
            if radicand is None:
                raise ValueError("radical parameter needs a radicand")
            radicand = Poly.coerce(radicand)
            if radicand.special_symbols():
                raise ValueError("radicand may only contain free parameters")
            key = (name, kind, radicand._key())
        else:
            if radicand is not None:
                raise ValueError(f"{kind} parameter takes no radicand")
            key = (name, kind, None)
        p = cls._registry.get(key)
        if p is None:
            p = cls(name, kind, radicand, len(cls._by_index))
            cls._registry[key] = p
            cls._by_index.append(p)
            if kind != "free":
                cls._special_indices.append(p.index)
            cls._guard_mask |= _GUARD << (_BITS * p.index)
        return p

    @property
    def shift(self) -> int:
        return _BITS * self.index

    def __reduce__(self):
        return (Param.get, (self.name, self.kind, self.radicand))

    def __repr__(self):
        if self.kind == "radical":
            return f"Param({self.name!r}, radical, {self.radicand})"
        return f"Param({self.name!r}, {self.kind})"

    def __str__(self):
        return self.name


def _exponent(mono: int, index: int) -> int:
    return (mono >> (_BITS * index)) & _MASK


def _decode(mono: int) -> Iterator[Tuple[Param, int]]:
    i = 0
    while mono:
        e = mono & _MASK
        if e:
            yield Param._by_index[i], e
        mono >>= _BITS
        i += 1


def _divides(a: int, b: int) -> bool:
    # every exponent of a is <= the matching exponent of b
    g = Param._guard_mask
    return ((b | g) - a) & g == g


# ---------------------------------------------------------------------------
# polynomials


class Poly:
    """Sparse polynomial: packed monomial -> Fraction, no stored zeros.

    Treated as immutable once constructed.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Optional[Dict[int, Fraction]] = None):
        self.terms: Dict[int, Fraction] = terms if terms is not None else {}
        self._hash = None

    # construction -----------------------------------------------------
    @staticmethod
    def const(c: Number) -> "Poly":
        c = Fraction(c)
        return Poly({0: c} if c else {})

    @staticmethod
    def symbol(p: Param) -> "Poly":
        return Poly({1 << p.shift: Fraction(1)})

    @staticmethod
    def coerce(x) -> "Poly":
        if isinstance(x, Poly):
            return x
        if isinstance(x, Param):
            return Poly.symbol(x)
        if isinstance(x, (int, Fraction)):
            return Poly.const(x)
        raise TypeError(f"cannot make a Poly from {type(x).__name__}")

    # queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def const_value(self) -> Fraction:
        if not self.is_const():
            raise ValueError("polynomial is not constant")
        return self.terms.get(0, Fraction(0))

    def symbols(self) -> set:
        acc = 0
        for m in self.terms:
            acc |= m
        out = set()
        i = 0
        while acc:
            if acc & _MASK:
                out.add(Param._by_index[i])
            acc >>= _BITS
            i += 1
        return out

    def special_symbols(self) -> set:
        return {p for p in self.symbols() if p.kind != "free"}

    def degree_in(self, p: Param) -> int:
        return max((_exponent(m, p.index) for m in self.terms), default=0)

    def _key(self):
        return frozenset(self.terms.items())

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Poly.const(other).terms
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = Poly.coerce(other)
        if len(self.terms) < len(other.terms):
            small, big = self.terms, other.terms
        else:
            small, big = other.terms, self.terms
        out = dict(big)
        for m, c in small.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v += c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-Poly.coerce(other))

    def __rsub__(self, other):
        return Poly.coerce(other) - self

    def scale(self, c: Number) -> "Poly":
        c = Fraction(c)
        if not c:
            return Poly()
        return Poly({m: v * c for m, v in self.terms.items()})

    def shift_mono(self, mono: int) -> "Poly":
        return Poly({m + mono: v for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction)):
                return self.scale(other)
            other = Poly.coerce(other)
        a, b = self.terms, other.terms
        if not a or not b:
            return Poly()
        if len(a) < len(b):
            a, b = b, a
        out: Dict[int, Fraction] = {}
        get = out.get
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = ma + mb
                v = get(m)
                out[m] = ca * cb if v is None else v + ca * cb
        out = {m: c for m, c in out.items() if c}
        return _rewrite(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a Poly")
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # structure --------------------------------------------------------
    def monomial_content(self) -> int:
        """Packed gcd of all monomials."""
        it = iter(self.terms)
        try:
            g = next(it)
        except StopIteration:
            return 0
        for m in it:
            if g == 0:
                return 0
            out = 0
            shift = 0
            x, y = g, m
            while x and y:
                e = min(x & _MASK, y & _MASK)
                out |= e << shift
                x >>= _BITS
                y >>= _BITS
                shift += _BITS
            g = out
        return g

    def content(self) -> Fraction:
        nums = [c.numerator for c in self.terms.values()]
        dens = [c.denominator for c in self.terms.values()]
        if not nums:
            return Fraction(0)
        g = 0
        for n in nums:
            g = math.gcd(g, n)
        lcm = 1
        for d in dens:
            lcm = lcm * d // math.gcd(lcm, d)
        return Fraction(g, lcm)

    def leading(self) -> Tuple[int, Fraction]:
        m = max(self.terms)
        return m, self.terms[m]

    def divide_exact(self, q: "Poly") -> Optional["Poly"]:
        """Quotient self / q if q divides self in the polynomial ring, else None.

        Special symbols are treated as plain variables; q must not contain any.
        """
        if not q.terms:
            raise DenominatorZero("division by the zero polynomial")
        if not self.terms:
            return Poly()
        lq, cq = q.leading()
        if len(q.terms) == 1:
            if not all(_divides(lq, m) for m in self.terms):
                return None
            inv = 1 / cq
            return Poly({m - lq: c * inv for m, c in self.terms.items()})
        rem = dict(self.terms)
        quot: Dict[int, Fraction] = {}
        qitems = list(q.terms.items())
        guard = 0
        while rem:
            lm = max(rem)
            if not _divides(lq, lm):
                return None
            dm = lm - lq
            dc = rem[lm] / cq
            quot[dm] = dc
            for m, c in qitems:
                k = m + dm
                v = rem.get(k, 0) - c * dc
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
            guard += 1
            if guard > 100000:  # pragma: no cover - runaway safety
                return None
        return Poly(quot)

    def primitive(self) -> Tuple[Fraction, "Poly"]:
        """(c, p) with self = c * p, p having integer coprime coefficients and
        positive leading coefficient."""
        c = self.content()
        if self.sorted_terms()[0][1] < 0:
            c = -c
        inv = 1 / c
        return c, Poly({m: v * inv for m, v in self.terms.items()})

    # evaluation -------------------------------------------------------
    def evaluate(self, values: Mapping[int, Fraction]) -> Fraction:
        """values maps parameter index -> value (already resolved)."""
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for p, e in _decode(m):
                try:
                    x = values[p.index]
                except KeyError:
                    raise MissingParam(p.name) from None
                v *= x ** e
            total += v
        return total

    # text -------------------------------------------------------------
    def sorted_terms(self):
        def key(item):
            m, _ = item
            fac = sorted(((p.name, e) for p, e in _decode(m)))
            deg = sum(e for _, e in fac)
            return (-deg, [(n, -e) for n, e in fac])

        return sorted(self.terms.items(), key=key)

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            fac = sorted(((p.name, e) for p, e in _decode(m)))
            names = "*".join(n if e == 1 else f"{n}^{e}" for n, e in fac)
            mag = abs(c)
            if names:
                body = names if mag == 1 else f"{_fmt_q(mag)}*{names}"
            else:
                body = _fmt_q(mag)
            parts.append(("-" if c < 0 else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for s, body in parts[1:]:
            out += f" {s} {body}"
        return out

    def __repr__(self):
        return f"Poly({self.to_text()})"

    __str__ = to_text


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _rewrite(terms: Dict[int, Fraction]) -> Poly:
    """Apply the square rewrites of sign and radical symbols."""
    specials = Param._special_indices
    if not specials:
        return Poly(terms)
    smask = 0
    for i in specials:
        smask |= (_MASK - 1) << (_BITS * i)
    if not any(m & smask for m in terms):
        return Poly(terms)
    out: Dict[int, Fraction] = {}
    extra: list = []
    for m, c in terms.items():
        if not m & smask:
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
            continue
        factor = None
        for i in specials:
            e = _exponent(m, i)
            if e < 2:
                continue
            p = Param._by_index[i]
            m -= (e - e % 2) << (_BITS * i)
            if p.kind == "radical":
                piece = p.radicand ** (e // 2)
                factor = piece if factor is None else factor * piece
        if factor is None:
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        else:
            extra.append(factor.shift_mono(m).scale(c))
    result = Poly(out)
    for e in extra:
        result = result + e
    return result


def normalize(p: Poly) -> Poly:
    """Rewrite sign and radical powers until every such exponent is 0 or 1."""
    return _rewrite(dict(p.terms))


# ---------------------------------------------------------------------------
# rational functions


_known_factors: Dict[Poly, None] = {}


def _register_factor(p: Poly) -> None:
    _known_factors[p] = None


def _conjugate_out(p: Poly) -> Tuple[Poly, Poly]:
    """Return (conj, p*conj) where p*conj has no sign/radical symbols."""
    conj = Poly.const(1)
    cur = p
    for _ in range(64):
        specials = cur.special_symbols()
        if not specials:
            return conj, cur
        x = max(specials, key=lambda q: q.index)
        bit = 1 << x.shift
        # cur = c0 + c1*x with c0, c1 free of x
        c0 = Poly({m: c for m, c in cur.terms.items() if not m & (_MASK << x.shift)})
        c1 = Poly({m - bit: c for m, c in cur.terms.items() if m & (_MASK << x.shift)})
        cj = c0 - c1 * Poly.symbol(x)
        conj = conj * cj
        cur = cur * cj
        if cur.is_zero():
            raise DenominatorZero(f"division by a zero divisor involving {x.name}")
    raise ScalarError("could not rationalize denominator")  # pragma: no cover


def _split_factors(p: Poly) -> Tuple[Fraction, Dict[Poly, int]]:
    """Write a radical-free nonzero polynomial as c * prod(factors)."""
    factors: Dict[Poly, int] = {}
    mono = p.monomial_content()
    if mono:
        for sym, e in _decode(mono):
            factors[Poly.symbol(sym)] = factors.get(Poly.symbol(sym), 0) + e
        p = Poly({m - mono: c for m, c in p.terms.items()})
    c, rest = p.primitive()
    if rest.is_const():
        return c, factors
    for f in list(_known_factors):
        while True:
            q = rest.divide_exact(f)
            if q is None:
                break
            factors[f] = factors.get(f, 0) + 1
            rest = q
            if rest.is_const():
                break
        if rest.is_const():
            break
    if not rest.is_const():
        c2, rest = rest.primitive()
        c *= c2
        factors[rest] = factors.get(rest, 0) + 1
    else:
        c *= rest.const_value()
    return c, factors


ScalarLike = Union["Scalar", Poly, Param, int, Fraction]


class Scalar:
    """num / prod(f**e for f, e in den).

    ``num`` is normalized; ``den`` maps radical-free primitive polynomials to
    positive exponents.  Equality is decided by ``is_zero(a - b)``.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Optional[Dict[Poly, int]] = None):
        self.num = num
        self.den = den if den is not None else {}

    # construction -----------------------------------------------------
    @staticmethod
    def coerce(x: ScalarLike) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, Poly):
            return Scalar(normalize(x))
        if isinstance(x, Param):
            return Scalar(Poly.symbol(x))
        if isinstance(x, (int, Fraction)):
            return Scalar(Poly.const(x))
        if isinstance(x, str):
            return Scalar(Poly.const(Fraction(x)))
        raise TypeError(f"cannot make a Scalar from {type(x).__name__}")

    def _den_poly(self) -> Poly:
        out = Poly.const(1)
        for f, e in self.den.items():
            out = out * (f ** e)
        return out

    @staticmethod
    def _cancel(num: Poly, den: Dict[Poly, int]) -> "Scalar":
        if num.is_zero():
            return Scalar(Poly())
        if not den:
            return Scalar(num)
        den = dict(den)
        mono = num.monomial_content()
        for f in list(den):
            e = den[f]
            if len(f.terms) == 1:
                # single-variable factor
                (fm,) = f.terms
                k = 0
                while k < e and _divides(fm, mono):
                    mono -= fm
                    num = Poly({m - fm: c for m, c in num.terms.items()})
                    k += 1
                e -= k
            else:
                while e:
                    q = num.divide_exact(f)
                    if q is None:
                        break
                    num = q
                    e -= 1
            if e:
                den[f] = e
            else:
                del den[f]
        return Scalar(num, den)

    # queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_const(self) -> bool:
        return self.num.is_const() and not self.den

    def to_fraction(self) -> Fraction:
        if not self.is_const():
            raise ValueError(f"{self} is not a rational constant")
        return self.num.const_value()

    def symbols(self) -> set:
        out = set(self.num.symbols())
        for f in self.den:
            out |= f.symbols()
        return out

    def free_symbols(self) -> set:
        out = set()
        for p in self.symbols():
            if p.kind == "radical":
                out |= p.radicand.symbols()
            elif p.kind == "free":
                out.add(p)
        return out

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = Scalar.coerce(other) if not isinstance(other, Scalar) else other
        if o.num.is_zero():
            return self
        if self.num.is_zero():
            return o
        if self.den == o.den:
            return Scalar._cancel(self.num + o.num, self.den)
        lcm = dict(self.den)
        for f, e in o.den.items():
            if lcm.get(f, 0) < e:
                lcm[f] = e
        a = self.num * _den_product(lcm, self.den)
        b = o.num * _den_product(lcm, o.den)
        return Scalar._cancel(a + b, lcm)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.num, self.den)

    def __sub__(self, other):
        o = Scalar.coerce(other) if not isinstance(other, Scalar) else other
        return self + (-o)

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Scalar(Poly())
            return Scalar(self.num.scale(other), self.den)
        o = Scalar.coerce(other) if not isinstance(other, Scalar) else other
        if self.num.is_zero() or o.num.is_zero():
            return Scalar(Poly())
        num = self.num * o.num
        if not self.den and not o.den:
            return Scalar(num)
        den = dict(self.den)
        for f, e in o.den.items():
            den[f] = den.get(f, 0) + e
        return Scalar._cancel(num, den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = Scalar.coerce(other) if not isinstance(other, Scalar) else other
        if o.num.is_zero():
            raise DenominatorZero("division by zero")
        if o.num.is_const():
            c = o.num.const_value()
            num = self.num.scale(1 / c)
            for f, e in o.den.items():
                num = num * (f ** e)
            return Scalar._cancel(num, dict(self.den))
        conj, plain = _conjugate_out(o.num)
        c, factors = _split_factors(plain)
        num = self.num * conj
        for f, e in o.den.items():
            num = num * (f ** e)
        num = num.scale(1 / c)
        den = dict(self.den)
        for f, e in factors.items():
            den[f] = den.get(f, 0) + e
        return Scalar._cancel(num, den)

    def __rtruediv__(self, other):
        return Scalar.coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return Scalar.coerce(1) / (self ** (-n))
        return Scalar._cancel(self.num ** n, {f: e * n for f, e in self.den.items()})

    def __eq__(self, other):
        if isinstance(other, (Scalar, Poly, Param, int, Fraction)):
            o = Scalar.coerce(other)
            if self.den == o.den:
                return self.num == o.num
            return (self - o).is_zero()
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    __hash__ = None

    def __bool__(self):
        return not self.is_zero()

    # text -------------------------------------------------------------
    def to_text(self) -> str:
        if not self.den:
            return self.num.to_text()
        num = self.num.to_text()
        dens = []
        for f, e in sorted(self.den.items(), key=lambda fe: fe[0].to_text()):
            t = f.to_text()
            if len(f.terms) > 1:
                t = f"({t})"
            dens.append(t if e == 1 else f"{t}^{e}")
        return f"({num}) / ({'*'.join(dens)})"

    def __repr__(self):
        return f"Scalar({self.to_text()})"

    __str__ = to_text


def _den_product(target: Dict[Poly, int], have: Dict[Poly, int]) -> Poly:
    out = Poly.const(1)
    for f, e in target.items():
        k = e - have.get(f, 0)
        if k:
            out = out * (f ** k)
    return out


ZERO = Scalar(Poly())
ONE = Scalar(Poly.const(1))


def as_scalar(x: ScalarLike) -> Scalar:
    return Scalar.coerce(x)


def free(name: str) -> Scalar:
    return Scalar(Poly.symbol(Param.get(name)))


def sign(name: str) -> Scalar:
    return Scalar(Poly.symbol(Param.get(name, "sign")))


def radical(name: str, radicand: ScalarLike) -> Scalar:
    rad = as_scalar(radicand)
    if rad.den:
        raise ValueError("radicand must be a polynomial")
    p = Param.get(name, "radical", rad.num)
    if not rad.num.is_const():
        _register_factor(rad.num.primitive()[1])
    return Scalar(Poly.symbol(p))


def is_zero(a: ScalarLike) -> bool:
    return as_scalar(a).is_zero()


# ---------------------------------------------------------------------------
# evaluation and substitution


def _rational_sqrt(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _resolve(symbols: Iterable[Param], assignment: Mapping[str, Number]) -> Dict[int, Fraction]:
    values: Dict[int, Fraction] = {}
    radicals = []
    for p in symbols:
        if p.kind == "radical":
            radicals.append(p)
            continue
        if p.name not in assignment:
            raise MissingParam(p.name)
        v = Fraction(assignment[p.name])
        if p.kind == "sign" and v not in (1, -1):
            raise ScalarError(f"sign parameter {p.name} must be +1 or -1, got {v}")
        values[p.index] = v
    for p in radicals:
        inner = _resolve(p.radicand.symbols(), assignment)
        value = p.radicand.evaluate(inner)
        root = _rational_sqrt(value)
        if root is None:
            raise NotPerfectSquare(p.name, value)
        values[p.index] = root
    return values


def evaluate(a: ScalarLike, assignment: Mapping[str, Number]) -> Fraction:
    """Exact rational value of ``a``; radicals take their nonnegative root."""
    a = as_scalar(a)
    values = _resolve(a.symbols(), assignment)
    den = Fraction(1)
    for f, e in a.den.items():
        den *= f.evaluate(values) ** e
    if den == 0:
        raise DenominatorZero(f"denominator of {a} vanishes at {dict(assignment)}")
    return a.num.evaluate(values) / den


def eval_approx(a: ScalarLike, assignment: Mapping[str, Number]) -> float:
    """Floating approximation; radicals become floating square roots."""
    a = as_scalar(a)

    def value_of(p: Param) -> float:
        if p.kind == "radical":
            return math.sqrt(_poly_float(p.radicand, value_of))
        if p.name not in assignment:
            raise MissingParam(p.name)
        return float(assignment[p.name])

    den = 1.0
    for f, e in a.den.items():
        den *= _poly_float(f, value_of) ** e
    if den == 0:
        raise DenominatorZero(f"denominator of {a} vanishes")
    return _poly_float(a.num, value_of) / den


def _poly_float(p: Poly, value_of) -> float:
    total = 0.0
    for m, c in p.terms.items():
        v = float(c)
        for sym, e in _decode(m):
            v *= value_of(sym) ** e
        total += v
    return total


def _even_monomial_root(p: Poly) -> Optional[Poly]:
    """Nonnegative square root of c*m when c is a rational square and every
    exponent of m is divisible by 4 (so the root is itself a square)."""
    if len(p.terms) != 1:
        return None
    ((m, c),) = p.terms.items()
    root = _rational_sqrt(c)
    if root is None:
        return None
    half = 0
    for sym, e in _decode(m):
        if e % 4:
            return None
        half += (e // 2) << sym.shift
    return Poly({half: root})


def subs(a: ScalarLike, mapping: Mapping[str, ScalarLike]) -> Scalar:
    """Substitute parameters by Scalars (or numbers).

    Radicals whose radicand involves substituted names are rebuilt with the
    new radicand; when that radicand becomes a rational square (or an
    even-power monomial) the radical is replaced by its nonnegative root.
    """
    a = as_scalar(a)
    if not mapping:
        return a
    mapping = {k: as_scalar(v) for k, v in mapping.items()}
    cache: Dict[int, Scalar] = {}

    def image(p: Param) -> Scalar:
        got = cache.get(p.index)
        if got is not None:
            return got
        if p.kind == "radical":
            if not any(q.name in mapping for q in p.radicand.symbols()) and p.name not in mapping:
                out = Scalar(Poly.symbol(p))
            elif p.name in mapping:
                out = mapping[p.name]
            else:
                new = _subs_poly(p.radicand, image)
                out = _make_root(p.name, new)
        elif p.name in mapping:
            out = mapping[p.name]
            if p.kind == "sign" and out.is_const() and out.to_fraction() not in (1, -1):
                raise ScalarError(f"sign parameter {p.name} must map to +1 or -1")
        else:
            out = Scalar(Poly.symbol(p))
        cache[p.index] = out
        return out

    num = _subs_poly(a.num, image)
    den = ONE
    for f, e in a.den.items():
        den = den * (_subs_poly(f, image) ** e)
    if den.is_zero():
        raise DenominatorZero(f"denominator of {a} vanishes under substitution")
    return num / den


def _subs_poly(p: Poly, image) -> Scalar:
    total = ZERO
    powers: Dict[Tuple[int, int], Scalar] = {}
    for m, c in p.terms.items():
        term = Scalar(Poly.const(c))
        for sym, e in _decode(m):
            key = (sym.index, e)
            pw = powers.get(key)
            if pw is None:
                pw = image(sym) ** e
                powers[key] = pw
            term = term * pw
        total = total + term
    return total


def _make_root(name: str, radicand: Scalar) -> Scalar:
    if radicand.is_zero():
        return ZERO
    if radicand.den:
        # sqrt(n / d) = sqrt(n * d) / d; only for a constant positive d
        d = radicand._den_poly()
        if not d.is_const() or d.const_value() < 0:
            raise ScalarError(f"cannot take the root of {radicand}")
        dv = d.const_value()
        return _make_root(name, Scalar(radicand.num.scale(dv))) / dv
    num = radicand.num
    if num.special_symbols():
        raise ScalarError(f"radicand of {name} would contain adjoined symbols: {num}")
    if num.is_const():
        v = num.const_value()
        root = _rational_sqrt(v)
        if root is not None:
            return as_scalar(root)
        if v < 0:
            raise ScalarError(f"radicand of {name} is negative: {v}")
    else:
        root = _even_monomial_root(num)
        if root is not None:
            return Scalar(root)
    return radical(name, Scalar(num))


# ---------------------------------------------------------------------------
# exact signs of constants


def constant_radicals(a: ScalarLike) -> set:
    return {p for p in as_scalar(a).symbols() if p.kind == "radical"}


def exact_sign(a: ScalarLike) -> int:
    """Sign of a constant built from rationals and radicals of positive
    rational radicands (taken as nonnegative roots)."""
    a = as_scalar(a)
    if a.den:
        raise ValueError(f"{a} is not a constant")
    return _sign_poly(a.num)


def _sign_poly(p: Poly) -> int:
    if not p.terms:
        return 0
    specials = p.special_symbols()
    if any(q.kind != "radical" for q in p.symbols()):
        raise ValueError(f"{p} depends on free or sign parameters")
    if not specials:
        v = p.const_value()
        return (v > 0) - (v < 0)
    x = max(specials, key=lambda q: q.index)
    if not x.radicand.is_const() or x.radicand.const_value() < 0:
        raise ValueError(f"radical {x.name} has no positive constant radicand")
    mask = _MASK << x.shift
    bit = 1 << x.shift
    a = Poly({m: c for m, c in p.terms.items() if not m & mask})
    b = Poly({m - bit: c for m, c in p.terms.items() if m & mask})
    sa, sb = _sign_poly(a), _sign_poly(b)
    if sa * sb >= 0:
        return sa or sb
    # a + b*x with opposite signs: compare a^2 with b^2 * radicand
    return sa * _sign_poly(a * a - (b * b).scale(x.radicand.const_value()))
