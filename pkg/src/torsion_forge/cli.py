"""Command line front end.

Exit codes: 0 when every check passes, 2 on a mathematical mismatch or an
unsolvable system, 3 on domain or usage errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 2, 3

CSV_COLUMNS = ["eps", "rho", "L", "N", "M", "S", "Z", "W", "d", "beta",
               "in_Delta", "in_DeltaPlus", "sign_alpha_flat", "sign_alpha_nonflat"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# value parsing


def parse_value(text: str):
    """A rational like 3/5 or -2, or sqrt(q) for a nonnegative rational q."""
    from .scalars import radical

    text = text.strip()
    m = re.fullmatch(r"sqrt\((.+)\)", text)
    try:
        if m:
            q = Fraction(m.group(1))
            if q < 0:
                raise UsageError(f"sqrt of a negative number: {text}")
            root = _exact_root(q)
            if root is not None:
                return root
            return radical("sqrt_" + re.sub(r"\W", "_", m.group(1)), q)
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational value: {text!r}") from exc


def _exact_root(q: Fraction) -> Optional[Fraction]:
    from math import isqrt

    n, d = q.numerator, q.denominator
    if isqrt(n) ** 2 == n and isqrt(d) ** 2 == d:
        return Fraction(isqrt(n), isqrt(d))
    return None


_COMPLEX = re.compile(r"(?P<re>[+-]?\d+(?:/\d+)?)?(?:(?P<sg>[+-])?(?P<im>\d+(?:/\d+)?)?i)?")


def parse_complex(text: str):
    """'3+4i', '2', '-i' or '1/2-3i' into (u1, u2) rationals."""
    t = text.replace(" ", "")
    m = _COMPLEX.fullmatch(t)
    if not t or m is None or (m.group("re") is None and not t.endswith("i")):
        raise UsageError(f"not a complex rational: {text!r}")
    if m.group("re") is not None and m.group("sg") is None and t.endswith("i") and m.group("im") is None:
        # '3i' parses as re=3 followed by a bare i
        return Fraction(0), Fraction(m.group("re"))
    re_part = Fraction(m.group("re")) if m.group("re") else Fraction(0)
    if not t.endswith("i"):
        return re_part, Fraction(0)
    im = Fraction(m.group("im")) if m.group("im") else Fraction(1)
    return re_part, -im if m.group("sg") == "-" else im


def _fmt(x) -> str:
    return str(x)


def _emit(args, payload: dict, text: str) -> None:
    print(json.dumps(payload, indent=2, default=str) if getattr(args, "json", False) else text)


def _default_threads() -> int:
    env = os.environ.get("TORSION_FORGE_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise UsageError(f"TORSION_FORGE_THREADS must be an integer, got {env!r}")
        if n < 1:
            raise UsageError("TORSION_FORGE_THREADS must be positive")
        return n
    return 1


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    from .verify import compare_curvature, run_suites
    from .dsl import parse, DSLError

    results = []
    if args.file:
        try:
            with open(args.file, encoding="utf-8") as fh:
                doc = parse(fh.read())
        except OSError as exc:
            raise UsageError(str(exc))
        except DSLError as exc:
            raise UsageError(f"{args.file}: {exc}")
        for block in doc.curvatures:
            results.append((args.file, f"curvature {block}", compare_curvature(doc, block)))
    else:
        names = ("h3", "sl2c", "g7") if args.algebra == "all" else (args.algebra,)
        suites = ("appendix", "identities") if args.suite == "all" else (args.suite,)
        results = run_suites(names, suites)
    lines, payload, first_fail = [], [], None
    for name, suite, checks in results:
        passed = sum(c.ok for c in checks)
        status = "PASS" if passed == len(checks) else "FAIL"
        lines.append(f"{status} {name} {suite}: {passed}/{len(checks)}")
        for c in checks:
            if not c.ok:
                lines.append(f"  FAIL {c.name} {c.detail}")
                first_fail = first_fail or f"{name} {suite}: {c.name}"
        payload.append({"algebra": name, "suite": suite, "passed": passed, "total": len(checks),
                        "checks": [c.as_dict() for c in checks]})
    if first_fail:
        lines.append(f"first failure: {first_fail}")
    _emit(args, {"ok": first_fail is None, "results": payload, "first_failure": first_fail}, "\n".join(lines))
    return EXIT_OK if first_fail is None else EXIT_MISMATCH


# ---------------------------------------------------------------------------
# solve


def _solve_payload_common(rep) -> dict:
    return {
        "balanced": rep.balanced,
        "psi_closed": rep.psi_closed,
        "instanton_is_instanton": rep.instanton_is_instanton,
        "anomaly": str(rep.anomaly),
        "connection_is_instanton": rep.connection_is_instanton,
        "motion_equations": rep.ok,
    }


def cmd_solve(args) -> int:
    from .anomaly import (DomainError, G7Solution, _root, motion_equations_check, solve_g7, solve_g7_u0)
    from .catalog import builtin
    from .connection import curvature, family_connection, flat_connection, g7_instanton, h3_instanton
    from .scalars import ScalarError, exact_sign

    eps, rho = parse_value(args.eps), parse_value(args.rho)
    t = parse_value(args.t)
    if exact_sign(t) == 0:
        raise UsageError("t must be nonzero")
    payload: Dict[str, object] = {"algebra": args.algebra, "eps": _fmt(eps), "rho": _fmt(rho), "t": _fmt(t)}
    if args.algebra in ("h3", "sl2c"):
        b = builtin(args.algebra, values={"t": t})
        if args.algebra == "h3":
            lam = parse_value(args.lam)
            inst = h3_instanton(lam)
            payload["lambda"] = _fmt(lam)
        else:
            inst = flat_connection() if args.instanton == "flat" else family_connection(b.su3, Fraction(1, 2), 0)
            payload["instanton"] = args.instanton
        rep = motion_equations_check(b.su3, eps, rho, inst)
        payload.update(_solve_payload_common(rep))
        payload["instanton_flat"] = curvature(b.algebra, inst).is_flat()
        alpha = rep.anomaly.alpha if rep.anomaly.status == "Unique" else None
        payload["alpha"] = _fmt(alpha) if alpha is not None else None
        payload["alpha_sign"] = exact_sign(alpha) if alpha is not None else None
        ok = alpha is not None
    else:
        r = parse_value(args.r)
        if args.u is not None:
            u1, u2 = parse_complex(args.u)
        else:
            u1, u2 = parse_value(args.u1), parse_value(args.u2)
        delta = args.delta
        payload.update({"r": _fmt(r), "u1": _fmt(u1), "u2": _fmt(u2), "delta": delta})
        try:
            if exact_sign(u1 * u1 + u2 * u2) == 0:
                mu = parse_value(args.mu)
                sol = solve_g7_u0(eps, rho, r, t, mu, delta=delta)
            else:
                if args.mu != "0":
                    print("note: for u != 0 the instanton scale mu is solved for; --mu is ignored",
                          file=sys.stderr)
                sol = solve_g7(eps, rho, r, t, u1, u2, require_positive_alpha=args.positive, delta=delta)
        except DomainError as exc:
            raise UsageError(str(exc))
        except ScalarError as exc:
            payload["failure"] = str(exc)
            _emit(args, payload, f"no solution: {exc}")
            return EXIT_MISMATCH
        if not isinstance(sol, G7Solution):
            payload["failure"] = f"{sol.reason}: {sol.detail}"
            _emit(args, payload, f"no solution: {sol.reason} ({sol.detail})")
            return EXIT_MISMATCH
        b = builtin("g7", delta=delta, values={"t": t, "r": r, "u1": u1, "u2": u2})
        mu = _root("mu_val", sol.mu_squared)
        rep = motion_equations_check(b.su3, eps, rho, g7_instanton(0, mu))
        payload.update(_solve_payload_common(rep))
        payload.update({"mu_squared": _fmt(sol.mu_squared), "alpha": _fmt(sol.alpha),
                        "alpha_sign": exact_sign(sol.alpha), "instanton_flat": sol.instanton_flat,
                        "back_substitution": sol.verified})
        ok = sol.verified
    lines = [f"{k}: {v}" for k, v in payload.items()]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if ok else EXIT_MISMATCH


# ---------------------------------------------------------------------------
# scan-region


def parse_grid(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError("grid must look like a:b:step, e.g. -2:2:1/20")
    try:
        a, b, step = (Fraction(p) for p in parts)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad grid {text!r}")
    if step <= 0 or b < a:
        raise UsageError("grid needs a <= b and step > 0")
    n = int((b - a) / step)
    return [a + k * step for k in range(n + 1)]


def _scan_column(args_tuple):
    from .anomaly import region_report

    eps, rhos = args_tuple
    out = []
    for rho in rhos:
        rep = region_report(eps, rho)
        d = rep.as_dict()
        row = {k: d[k] for k in CSV_COLUMNS}
        row["in_DeltaPlus_alt"] = rep.in_DeltaPlus_alt
        out.append(row)
    return out


def scan(values: Sequence[Fraction], threads: int = 1) -> List[dict]:
    jobs = [(e, list(values)) for e in values]
    if threads <= 1:
        chunks = [_scan_column(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(_scan_column, jobs))
    rows = [r for chunk in chunks for r in chunk]
    rows.sort(key=lambda r: (Fraction(r["eps"]), Fraction(r["rho"])))
    return rows


def cmd_scan(args) -> int:
    values = parse_grid(args.grid)
    threads = args.threads if args.threads is not None else _default_threads()
    if threads < 1:
        raise UsageError("--threads must be positive")
    rows = scan(values, threads)
    disagreements = [(r["eps"], r["rho"]) for r in rows if r["in_DeltaPlus"] != r["in_DeltaPlus_alt"]]
    try:
        if args.csv:
            with open(args.csv, "w", newline="", encoding="utf-8") as fh:
                w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, extrasaction="ignore")
                w.writeheader()
                w.writerows(rows)
        if args.svg:
            from .figures import region_figure

            step = float(values[1] - values[0]) if len(values) > 1 else 0.05
            region_figure(rows, args.svg, step, (float(values[0]), float(values[-1])))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    payload = {
        "points": len(rows),
        "in_Delta": sum(r["in_Delta"] for r in rows),
        "in_DeltaPlus": sum(r["in_DeltaPlus"] for r in rows),
        "DeltaPlus_definitions_disagree": [list(map(str, p)) for p in disagreements],
        "csv": args.csv,
        "figure": args.svg,
    }
    text = (f"{len(rows)} grid points, {payload['in_Delta']} in Delta, {payload['in_DeltaPlus']} in Delta+\n"
            f"Delta+ definitions disagree at {len(disagreements)} points")
    _emit(args, payload, text)
    return EXIT_OK if not disagreements else EXIT_MISMATCH


# ---------------------------------------------------------------------------
# holonomy, cohomology, table1


def cmd_holonomy(args) -> int:
    from .holonomy import admissible_g7_points, bismut_holonomy
    from .scalars import NotPerfectSquare

    values = {"t": parse_value(args.t)}
    if args.algebra == "g7":
        values["r"] = parse_value(args.r)
        if args.u is not None:
            values["u1"], values["u2"] = parse_complex(args.u)
        else:
            values["u1"], values["u2"] = parse_value(args.u1), parse_value(args.u2)
        rad = values["r"] ** 4 - values["u1"] ** 2 - values["u2"] ** 2
        if not isinstance(rad, Fraction) or rad <= 0 or _exact_root(rad) is None:
            hint = next(admissible_g7_points(4))
            raise UsageError(f"r^4 - |u|^2 = {rad} must be a positive rational square for exact rank; "
                             f"for example --r {hint['r']} --u1 {hint['u1']} --u2 {hint['u2']}")
    for k, v in values.items():
        if not isinstance(v, Fraction):
            raise UsageError(f"holonomy needs rational values, got {k} = {v}")
    if values["t"] == 0 or values.get("r", 1) == 0:
        raise UsageError("t and r must be nonzero")
    try:
        rep = bismut_holonomy(args.algebra, values, args.delta)
    except NotPerfectSquare as exc:
        raise UsageError(str(exc))
    d = rep.as_dict()
    _emit(args, d, f"{args.algebra} Bismut holonomy at {d['point']}: dimension {rep.dimension} "
                   f"({rep.classification}); {rep.generators_count} curvature generators, "
                   f"{rep.iterations} closure rounds\n{rep.note}")
    return EXIT_OK


def cmd_cohomology(args) -> int:
    from .catalog import builtin
    from .cohomology import F_squared, NotClosed, cup_product_L_check, is_exact
    from .dsl import DSLError, parse_form

    b = builtin(args.algebra, delta=args.delta if args.algebra == "g7" else None)
    if args.form:
        from .catalog import symbols

        try:
            form = parse_form(args.form, symbols())
        except DSLError as exc:
            raise UsageError(f"cannot parse form: {exc}")
        label = args.form
    else:
        form, label = F_squared(b.su3), "F^2"
    try:
        res = is_exact(b.algebra, form)
    except NotClosed as exc:
        payload = {"form": label, "closed": False, "exact": False, "witness": None}
        _emit(args, payload, f"{label} is not closed: {exc}")
        return EXIT_MISMATCH
    payload = {"algebra": args.algebra, **res.as_dict(), "form": label}
    lines = [f"{args.algebra}: {label} is {'exact' if res.exact else 'not exact'} (invariant forms)"]
    if res.witness is not None:
        lines.append(f"  witness: d({res.witness.to_text()}) = {label}")
    if args.cup:
        cup = cup_product_L_check(b.algebra, b.su3)
        payload["cup_product"] = cup.as_dict()
        lines.append(f"  w -> w ^ F^2 on H^1: {'injective' if cup.injective else 'not injective'}")
        if cup.kernel_witness is not None:
            lines.append(f"  kernel witness {cup.kernel_witness.to_text()}, "
                         f"w ^ F^2 = d({cup.primitive.to_text()})")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_table1(args) -> int:
    from .summary import build_table, render_table

    rows = build_table()
    ok = all(r.ok for r in rows)
    text = render_table(rows)
    if args.verbose or not ok:
        for r in rows:
            text += f"\n\n[{r.algebra} | {r.metric} | {r.regime}]"
            for ev in r.evidence:
                text += f"\n  {ev}"
            for mm in r.mismatches:
                text += f"\n  MISMATCH {mm}"
    _emit(args, {"ok": ok, "rows": [r.as_dict() for r in rows]}, text)
    return EXIT_OK if ok else EXIT_MISMATCH


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="torsion-forge", description="Exact checks for invariant Strominger-system solutions.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="symbolic verification suites")
    v.add_argument("--algebra", choices=["h3", "sl2c", "g7", "all"], default="all")
    v.add_argument("--suite", choices=["appendix", "identities", "all"], default="all")
    v.add_argument("--file", help="DSL file whose curvature blocks are checked against the family curvature")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("solve", help="solve the anomaly cancellation condition")
    s.add_argument("--algebra", choices=["h3", "sl2c", "g7"], required=True)
    s.add_argument("--eps", default="0")
    s.add_argument("--rho", default="0")
    s.add_argument("--t", default="1")
    s.add_argument("--r", default="1")
    s.add_argument("--u1", default="0")
    s.add_argument("--u2", default="0")
    s.add_argument("--u", help="u as a complex rational, e.g. 3+4i (overrides --u1/--u2)")
    s.add_argument("--delta", type=int, choices=[1, -1], default=1)
    s.add_argument("--mu", default="0", help="g7 instanton scale when u = 0")
    s.add_argument("--lambda", dest="lam", default="0", help="h3 instanton scale")
    s.add_argument("--instanton", choices=["flat", "bismut"], default="flat", help="sl2c instanton")
    s.add_argument("--positive", action="store_true", help="g7, u != 0: require alpha' > 0")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_solve)

    sc = sub.add_parser("scan-region", help="exact region classification on a rational grid")
    sc.add_argument("--grid", default="-2:2:1/20")
    sc.add_argument("--csv")
    sc.add_argument("--svg", "--figure", dest="svg", help="figure path (format from extension)")
    sc.add_argument("--threads", type=int, default=None)
    sc.add_argument("--json", action="store_true")
    sc.set_defaults(func=cmd_scan)

    h = sub.add_parser("holonomy", help="Bismut holonomy algebra at a rational point")
    h.add_argument("--algebra", choices=["h3", "sl2c", "g7"], required=True)
    h.add_argument("--t", default="1")
    h.add_argument("--r", default="1")
    h.add_argument("--u1", default="0")
    h.add_argument("--u2", default="0")
    h.add_argument("--u", help="u as a complex rational, e.g. 1+4i")
    h.add_argument("--delta", type=int, choices=[1, -1], default=1)
    h.add_argument("--json", action="store_true")
    h.set_defaults(func=cmd_holonomy)

    c = sub.add_parser("cohomology", help="exactness of invariant forms")
    c.add_argument("--algebra", choices=["h3", "sl2c", "g7"], required=True)
    c.add_argument("--form", help="form in DSL syntax (default F^2)")
    c.add_argument("--delta", type=int, choices=[1, -1], default=None)
    c.add_argument("--cup", action="store_true", help="also test w -> w ^ F^2 on H^1")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_cohomology)

    t = sub.add_parser("table1", help="machine-checked summary table")
    t.add_argument("--verbose", action="store_true")
    t.add_argument("--json", action="store_true")
    t.set_defaults(func=cmd_table1)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
