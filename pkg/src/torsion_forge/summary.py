"""Machine-checked summary table of invariant solutions.

Each row states a regime of the (eps, rho) family on one structure together
with the claimed sign of alpha', instanton type, equations-of-motion verdict,
Bismut holonomy and the class of F^2.  Every claim is re-derived from exact
computations at sample points of the regime.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .anomaly import (PREFERRED, G7Solution, beta, g7_witness, hermitian_point, motion_equations_check,
                      region_report, solve_g7, solve_g7_u0, _root)
from .catalog import builtin
from .cohomology import F_squared, is_exact
from .connection import curvature, family_connection, flat_connection, g7_instanton, h3_instanton
from .holonomy import bismut_holonomy
from .scalars import Scalar, as_scalar, exact_sign

__all__ = ["Row", "EXPECTED", "build_table", "render_table"]

HALF = Fraction(1, 2)


@dataclass
class Row:
    algebra: str
    metric: str
    regime: str
    sign_alpha: str
    instanton: str
    particular: str
    motion: str
    holonomy: str
    f2_class: str
    evidence: List[str] = field(default_factory=list)
    mismatches: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def cells(self) -> List[str]:
        return [self.algebra, self.metric, self.regime, self.sign_alpha, self.instanton,
                self.particular, self.motion, self.holonomy, self.f2_class, "PASS" if self.ok else "FAIL"]

    def as_dict(self) -> dict:
        keys = ["algebra", "metric", "regime", "sign_alpha", "instanton", "particular", "motion",
                "holonomy", "f2_class"]
        return {**{k: getattr(self, k) for k in keys}, "ok": self.ok,
                "evidence": self.evidence, "mismatches": self.mismatches}


# reference rows, as (algebra, metric, regime, sign, instanton, particular, motion, hol, [F^2])
EXPECTED: List[Tuple[str, ...]] = [
    ("h3", "F_t", "rho >= eps + 1/2", "-", "non-flat", "chern, minus, t >= 1", "no", "U(1)", "non-trivial"),
    ("h3", "F_t", "rho < eps + 1/2", "+", "non-flat", "LC, bismut, t < 1", "yes (bismut)", "U(1)", "non-trivial"),
    ("sl2c", "F_t", "beta != 0", "sign beta", "flat", "alpha'>0: LC, bismut, t < 0", "yes (bismut)", "SO(3)", "trivial"),
    ("sl2c", "F_t", "beta != 8", "sign (beta - 8)", "non-flat", "alpha'>0: t < -1", "no", "SO(3)", "trivial"),
    ("g7", "u = 0", "rho >= eps + 1/2", "-", "non-flat", "chern, minus, t >= 1", "no", "U(1)", "non-trivial"),
    ("g7", "u = 0", "rho < eps + 1/2", "+", "non-flat", "LC, bismut, t < 1", "yes (bismut)", "U(1)", "non-trivial"),
    ("g7", "u != 0", "P1, Q1", "+", "flat", "", "no", "SU(3)", "non-trivial"),
    ("g7", "u != 0", "Delta - Delta+", "-", "non-flat", "t in I", "no", "SU(3)", "non-trivial"),
    ("g7", "u != 0", "Delta+", "+", "non-flat", "bismut, chern, t in I+", "no", "SU(3)", "non-trivial"),
]


def _sign_text(x: Scalar) -> str:
    return {1: "+", -1: "-", 0: "0"}[exact_sign(x)]


def _named(label: str) -> Tuple[Scalar, Scalar]:
    if label.startswith("t="):
        return hermitian_point(Fraction(label[2:]))
    e, r = PREFERRED[label]
    return as_scalar(e), as_scalar(r)


class _Collector:
    def __init__(self, row: Row):
        self.row = row
        self.signs: set = set()
        self.flat: set = set()
        self.motion_true: List[str] = []

    def note(self, text: str):
        self.row.evidence.append(text)

    def fail(self, text: str):
        self.row.mismatches.append(text)


def _motion_word(true_at: List[str]) -> str:
    return f"yes ({', '.join(true_at)})" if true_at else "no"


def _sign_word(signs: set) -> str:
    return "".join(sorted(signs)) if signs else "none"


# ---------------------------------------------------------------------------
# h3 and sl2c: one-line anomaly equations


def _small(found: Callable[[Fraction], bool]) -> Optional[Fraction]:
    for k in range(0, 12):
        lam = Fraction(1, 2**k)
        if found(lam):
            return lam
    return None


def _h3_rows(t_val: Fraction = Fraction(1)) -> List[Row]:
    b = builtin("h3", values={"t": t_val})
    s = b.su3
    rows = []
    for exp, points in zip(EXPECTED[0:2], (["chern", "minus", "t=1", "t=2", "t=5"],
                                           ["LC", "bismut", "t=0", "t=-3", "t=1/2"])):
        row = Row(*exp)
        c = _Collector(row)
        negative_regime = exp[2].startswith("rho >=")
        for label in points:
            e, r = _named(label)
            if negative_regime != (exact_sign(r - e - HALF) >= 0):
                c.fail(f"{label} lies outside the regime")
            q = curvature(b.algebra, family_connection(s, e, r))

            def check(lam, e=e, r=r, q=q):
                rep = motion_equations_check(s, e, r, h3_instanton(lam), q)
                return rep if rep.anomaly.status == "Unique" else None

            if negative_regime:
                lam = Fraction(1)
                rep = check(lam)
            else:
                lam = _small(lambda x: (lambda rp: rp is not None and exact_sign(rp.anomaly.alpha) > 0)(check(x)))
                rep = check(lam) if lam is not None else None
            if rep is None:
                c.fail(f"{label}: no solution")
                continue
            c.signs.add(_sign_text(rep.anomaly.alpha))
            c.flat.add("flat" if curvature(b.algebra, h3_instanton(lam)).is_flat() else "non-flat")
            if rep.ok:
                c.motion_true.append(label)
            c.note(f"{label}: lambda={lam}, alpha'={rep.anomaly.alpha}, motion={rep.ok}")
        _finish(c, "h3")
        rows.append(row)
    return rows


def _sl2c_rows(t_val: Fraction = Fraction(1)) -> List[Row]:
    b = builtin("sl2c", values={"t": t_val})
    s = b.su3
    bismut = family_connection(s, HALF, 0)
    rows = []
    specs = [
        (EXPECTED[2], flat_connection(), ["LC", "bismut", "t=-1/2", "t=-2", "minus", "t=1/2"], 0),
        (EXPECTED[3], bismut, ["t=-2", "t=-3", "LC", "minus", "t=3"], 8),
    ]
    for exp, inst, points, shift in specs:
        row = Row(*exp)
        c = _Collector(row)
        positive_required = {"alpha'>0: LC, bismut, t < 0": {"LC", "bismut", "t=-1/2", "t=-2"},
                             "alpha'>0: t < -1": {"t=-2", "t=-3"}}[exp[5]]
        for label in points:
            e, r = _named(label)
            rep = motion_equations_check(s, e, r, inst)
            if rep.anomaly.status != "Unique":
                c.fail(f"{label}: {rep.anomaly.status}")
                continue
            a = rep.anomaly.alpha
            law = exact_sign(a) == exact_sign(beta(e, r) - shift)
            if not law:
                c.fail(f"{label}: sign alpha' != sign(beta - {shift})")
            if label in positive_required and exact_sign(a) <= 0:
                c.fail(f"{label}: expected alpha' > 0")
            if rep.ok:
                c.motion_true.append(label)
            c.note(f"{label}: alpha'={a}, beta={beta(e, r)}, motion={rep.ok}")
        c.signs = {exp[3]} if not row.mismatches else {"?"}
        c.flat.add("flat" if curvature(b.algebra, inst).is_flat() else "non-flat")
        _finish(c, "sl2c")
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# g7


def _g7_u0_rows(values=None) -> List[Row]:
    vals = values or {"t": Fraction(1), "r": Fraction(1), "u1": 0, "u2": 0}
    b = builtin("g7", delta=1, values=vals)
    s = b.su3
    rows = []
    for exp, points in zip(EXPECTED[4:6], (["chern", "minus", "t=1", "t=2"],
                                           ["LC", "bismut", "t=0", "t=-1/2"])):
        row = Row(*exp)
        c = _Collector(row)
        negative_regime = exp[2].startswith("rho >=")
        for label in points:
            e, r = _named(label)
            if negative_regime:
                mu = Fraction(1)
            else:
                mu = _small(lambda m: exact_sign(solve_g7_u0(e, r, vals["r"], vals["t"], m, verify=False).alpha) > 0)
            sol = solve_g7_u0(e, r, vals["r"], vals["t"], mu)
            if not sol.verified:
                c.fail(f"{label}: back-substitution failed")
            rep = motion_equations_check(s, e, r, g7_instanton(0, mu))
            c.signs.add(_sign_text(sol.alpha))
            c.flat.add("flat" if mu == 0 else "non-flat")
            if rep.ok:
                c.motion_true.append(label)
            c.note(f"{label}: mu={mu}, alpha'={sol.alpha}, motion={rep.ok}")
        _finish(c, "g7", {"r": 1, "u1": 0, "u2": 0})
        rows.append(row)
    return rows


def _g7_point_check(c: _Collector, label: str, e, r, point: Dict[str, Fraction], expect_flat: bool):
    sol = solve_g7(e, r, point["r"], point["t"], point["u1"], point["u2"])
    if not isinstance(sol, G7Solution):
        c.fail(f"{label}: {sol.reason} {sol.detail}")
        return
    if not sol.verified:
        c.fail(f"{label}: back-substitution failed")
    flat = sol.instanton_flat
    if flat != expect_flat:
        c.fail(f"{label}: instanton flat={flat}")
    b = builtin("g7", delta=1, values={k: point[k] for k in ("t", "r", "u1", "u2")})
    mu = _root("mu_val", sol.mu_squared)
    rep = motion_equations_check(b.su3, e, r, g7_instanton(0, mu))
    if rep.ok:
        c.motion_true.append(label)
    c.signs.add(_sign_text(sol.alpha))
    c.flat.add("flat" if flat else "non-flat")
    c.note(f"{label}: point={ {k: str(v) for k, v in point.items()} }, mu^2={sol.mu_squared}, "
           f"alpha'={sol.alpha}, motion={rep.ok}")


def _g7_unot0_rows() -> List[Row]:
    from .anomaly import special_points

    sp = special_points()
    rows = []
    # P1, Q1: L = N = 0, so mu = 0 for every (t, u); alpha' > 0 once |u|^2 < 3/4 t^4
    row = Row(*EXPECTED[6])
    c = _Collector(row)
    point = {"t": Fraction(1), "r": Fraction(1), "u1": Fraction(3, 5), "u2": Fraction(0)}
    for label in ("P1", "Q1"):
        _g7_point_check(c, label, *sp[label], point, expect_flat=True)
    _finish(c, "g7", {"r": 3, "u1": 1, "u2": 4})
    rows.append(row)

    for exp, positive, points in (
        (EXPECTED[7], False, ["P3", "t=0", "e=1/4,r=1/8"]),
        (EXPECTED[8], True, ["bismut", "chern", "t=-5", "t=2", "e=1,r=-1"]),
    ):
        row = Row(*exp)
        c = _Collector(row)
        for label in points:
            if label == "P3":
                e, r = sp["P3"]
            elif label.startswith("e="):
                a, bb = label.split(",")
                e, r = as_scalar(Fraction(a[2:])), as_scalar(Fraction(bb[2:]))
            else:
                e, r = _named(label)
            rep = region_report(e, r)
            if not rep.in_Delta or rep.in_DeltaPlus != positive:
                c.fail(f"{label}: region flags Delta={rep.in_Delta}, Delta+={rep.in_DeltaPlus}")
            if not positive and rep.feasibility["nonflat_positive"]:
                c.fail(f"{label}: a positive solution exists outside Delta+")
            w = g7_witness(e, r, positive=positive)
            if w is None:
                c.fail(f"{label}: no witness")
                continue
            _g7_point_check(c, label, e, r, w, expect_flat=False)
        _finish(c, "g7", {"r": 3, "u1": 1, "u2": 4})
        rows.append(row)
    return rows


_HOL_NAMES = {"u(1)": "U(1)", "so(3)": "SO(3)", "su(3)": "SU(3)"}
_F2_CACHE: Dict[str, str] = {}


def _f2_class(name: str) -> str:
    if name not in _F2_CACHE:
        b = builtin(name)
        _F2_CACHE[name] = "trivial" if is_exact(b.algebra, F_squared(b.su3)).exact else "non-trivial"
    return _F2_CACHE[name]


def _finish(c: _Collector, name: str, hol_point: Optional[Dict] = None):
    row = c.row
    computed = {
        "sign_alpha": _sign_word(c.signs) if row.sign_alpha in ("+", "-") else row.sign_alpha,
        "instanton": _sign_word(c.flat) if len(c.flat) != 1 else next(iter(c.flat)),
        "motion": _motion_word(c.motion_true),
        "holonomy": _HOL_NAMES.get(bismut_holonomy(name, hol_point).classification, "?"),
        "f2_class": _f2_class(name),
    }
    if "?" in c.signs:
        computed["sign_alpha"] = "?"
    for key, val in computed.items():
        if val != getattr(row, key):
            row.mismatches.append(f"{key}: computed {val!r}, table says {getattr(row, key)!r}")
            setattr(row, key, f"{val} (!)")


def build_table() -> List[Row]:
    return _h3_rows() + _sl2c_rows() + _g7_u0_rows() + _g7_unot0_rows()


HEADERS = ["algebra", "metric", "regime", "sign a'", "instanton", "connections", "eq. motion",
           "Hol(bismut)", "[F^2]", "check"]


def render_table(rows: Sequence[Row]) -> str:
    data = [HEADERS] + [r.cells() for r in rows]
    widths = [max(len(row[i]) for row in data) for i in range(len(HEADERS))]
    line = "+".join("-" * (w + 2) for w in widths)
    out = []
    for k, row in enumerate(data):
        out.append("|".join(f" {cell:<{w}} " for cell, w in zip(row, widths)))
        if k == 0:
            out.append(line)
    return "\n".join(out)
