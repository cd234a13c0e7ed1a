"""Built-in structures: the Heisenberg-type nilpotent algebra h3, sl(2,C) and
the solvable algebra g7 (two signs of delta), each with its balanced
SU(3)-structure written in an adapted basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Mapping, Optional, Tuple

from .exterior import LieAlgebra, e
from .scalars import ONE, Scalar, ScalarLike, as_scalar, free, radical, sign
from .su3 import SU3Structure

__all__ = ["UnknownName", "Builtin", "builtin", "NAMES", "symbols"]

NAMES = ("h3", "sl2c", "g7")


class UnknownName(KeyError):
    pass


def symbols() -> Dict[str, Scalar]:
    """The shared parameter symbols."""
    t, r, u1, u2 = free("t"), free("r"), free("u1"), free("u2")
    return {
        "t": t,
        "r": r,
        "u1": u1,
        "u2": u2,
        "eps": free("eps"),
        "rho": free("rho"),
        "lam": free("lam"),
        "mu": free("mu"),
        "delta": sign("delta"),
        "s": radical("s", r**4 - u1**2 - u2**2),
        "w": radical("w", 7),
    }


@dataclass
class Builtin:
    name: str
    algebra: LieAlgebra
    su3: SU3Structure
    params: Tuple[str, ...]
    constraints: Tuple[str, ...] = ()
    values: Dict[str, ScalarLike] = field(default_factory=dict)


def _h3() -> LieAlgebra:
    t = symbols()["t"]
    return LieAlgebra({6: (e(1, 2) - e(3, 4)).scale(-2 * t)}, "h3", ("t",), ("t != 0",))


def _sl2c() -> LieAlgebra:
    t = symbols()["t"]
    k = ONE / t
    diffs = {
        1: (e(3, 5) - e(4, 6)).scale(k),
        2: (e(3, 6) + e(4, 5)).scale(k),
        3: (e(1, 5) - e(2, 6)).scale(-k),
        4: (e(1, 6) + e(2, 5)).scale(-k),
        5: (e(1, 3) - e(2, 4)).scale(k),
        6: (e(1, 4) + e(2, 3)).scale(k),
    }
    return LieAlgebra(diffs, "sl2c", ("t",), ("t != 0",))


def _g7(delta: Optional[int]) -> LieAlgebra:
    S = symbols()
    t, r, u1, u2, s = S["t"], S["r"], S["u1"], S["u2"], S["s"]
    dl = S["delta"] if delta is None else as_scalar(delta)
    two_t = 2 / t
    q = 4 / (t * s)
    diffs = {
        1: e(2, 5).scale(-two_t),
        2: e(1, 5).scale(two_t),
        3: (e(1, 5).scale(u2) + e(2, 5).scale(u1)).scale(-q) + e(4, 5).scale(two_t),
        4: (e(1, 5).scale(u1) - e(2, 5).scale(u2)).scale(q) - e(3, 5).scale(two_t),
        6: (e(1, 2) - e(3, 4) - (e(1, 3) + e(2, 4)).scale(u2 / s) + (e(1, 4) - e(2, 3)).scale(u1 / s))
        .scale(-2 * dl * t / r**2),
    }
    params = ("t", "r", "u1", "u2") + (("delta",) if delta is None else ())
    return LieAlgebra(diffs, "g7", params, ("t != 0", "r != 0", "r^2 > |u|"))


@lru_cache(maxsize=None)
def _symbolic(name: str, delta: Optional[int]) -> Builtin:
    if name == "h3":
        g = _h3()
    elif name == "sl2c":
        g = _sl2c()
    elif name == "g7":
        g = _g7(delta)
    else:
        raise UnknownName(name)
    return Builtin(name, g, SU3Structure(g), g.params, g.constraints)


def builtin(name: str, delta: Optional[int] = None,
            values: Optional[Mapping[str, ScalarLike]] = None) -> Builtin:
    """Look up a built-in structure.

    ``delta`` fixes the sign for g7 (``None`` keeps it symbolic).  ``values``
    substitutes parameters, e.g. ``{"t": 1}``; substituting r, u1, u2 also
    resolves the radical s when its radicand becomes a rational square.
    """
    if name not in NAMES:
        raise UnknownName(f"unknown structure {name!r}; choose from {', '.join(NAMES)}")
    if delta is not None and delta not in (1, -1):
        raise ValueError("delta must be +1 or -1")
    base = _symbolic(name, delta if name == "g7" else None)
    if not values:
        return base
    g = base.algebra.subs(values)
    return Builtin(name, g, SU3Structure(g), g.params, base.constraints, dict(values))
