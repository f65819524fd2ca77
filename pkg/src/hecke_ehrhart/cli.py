"""Command-line driver: ``hecke-ehrhart <subcommand> ...``.

Exit status is 0 when every requested verification passed, 1 when one
failed and 2 for unusable input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from .ehrhart import count_points, ehrhart, regularized
from .exactmath import UniPoly, format_rational, is_prime
from .grassmann import eigenvalue_table, phi_polynomial
from .hecke import (
    average_regularized,
    check_theorem1,
    hecke_ehrhart,
    hecke_p_squared,
    hecke_p_squared_algebra,
)
from .lattice import enumerate_coindex_N_superlattices, enumerate_superlattices
from .polytope import (
    LatticePolytope,
    NotSimpleError,
    cube,
    polytope_from_json,
    prism,
    simplex,
    singular_triangle,
    volume_polynomial,
)
from .toddop import distribution_sides, kp_coefficient, table3_report, todd_terms


class InputError(Exception):
    pass


def _builtin(spec: str) -> LatticePolytope:
    name, _, arg = spec.partition(":")
    try:
        if name == "cube":
            return cube(int(arg or 2))
        if name == "simplex":
            return simplex(int(arg or 2))
    except ValueError:
        raise InputError(f"bad dimension in --builtin {spec!r}") from None
    if name == "prism":
        return prism()
    if name == "singular-triangle":
        return singular_triangle()
    raise InputError(f"unknown builtin polytope {spec!r} (cube:n, simplex:n, prism, singular-triangle)")


def _load_polytope(args) -> LatticePolytope:
    if args.builtin and args.polytope:
        raise InputError("give either --builtin or --polytope, not both")
    if args.builtin:
        return _builtin(args.builtin)
    if not args.polytope:
        raise InputError("a polytope is required (--builtin or --polytope FILE)")
    try:
        with open(args.polytope) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {args.polytope}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{args.polytope}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise InputError(f"{args.polytope}: expected a JSON object with field 'vertices'")
    try:
        return polytope_from_json(data)
    except ValueError as exc:
        raise InputError(f"{args.polytope}: {exc}") from None


def _prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if not is_prime(p):
        raise argparse.ArgumentTypeError(f"{p} is not prime")
    return p


def _poly_text(poly: UniPoly, args) -> str:
    return poly.format("t", decimal=args.decimal)


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_count(args) -> int:
    P = _load_polytope(args)
    counts = {t: count_points(P, None, t) for t in args.t}
    text = "\n".join(f"t={t}: {c}" for t, c in counts.items())
    _emit(args, {"counts": {str(t): c for t, c in counts.items()}}, text)
    return 0


def cmd_ehrhart(args) -> int:
    P = _load_polytope(args)
    E = ehrhart(P)
    payload = {"ehrhart": E.poly.to_json(), "samples": [list(s) for s in E.samples]}
    if args.regularized:
        payload["regularized"] = regularized(E, P).to_json()
    text = _poly_text(E.poly, args)
    if args.regularized:
        text += "\nregularized: " + _poly_text(regularized(E, P), args)
    _emit(args, payload, text)
    return 0


def cmd_hecke(args) -> int:
    P = _load_polytope(args)
    status = 0
    if args.k < 1 or args.k > P.n:
        raise InputError(f"--k must lie in 1..{P.n}")
    result = hecke_ehrhart(P, args.p, args.k)
    payload = result.to_json()
    lines = [f"T({args.p},{args.k})E = {_poly_text(result.total, args)}  ({len(result.lattices)} lattices)"]
    if args.check_theorem1:
        chk = check_theorem1(P, args.p, args.k, result)
        payload["theorem1"] = chk.to_json()
        for l in sorted(chk.ratios):
            mark = "ok" if chk.ratios[l] == chk.expected[l] else "MISMATCH"
            lines.append(f"c_{l}: ratio {format_rational(chk.ratios[l])}, nu = {chk.expected[l]}  {mark}")
        lines.append(f"E(pt) identity: {'ok' if chk.rel1 else 'MISMATCH'}")
        status |= 0 if chk.ok else 1
    if args.p_squared:
        direct = hecke_p_squared(P, args.p, check=False)
        algebra = hecke_p_squared_algebra(P, args.p)
        payload["p_squared"] = {"direct": direct.to_json(), "algebra": algebra.to_json(), "ok": direct == algebra}
        lines.append(f"T({args.p}^2)E = {_poly_text(direct, args)}  (algebra: {'ok' if direct == algebra else 'MISMATCH'})")
        status |= 0 if direct == algebra else 1
    _emit(args, payload, "\n".join(lines))
    return status


def cmd_nu(args) -> int:
    table = eigenvalue_table(args.n, via=args.via)
    _emit(args, table.to_json(), table.format())
    return 0


def cmd_phi(args) -> int:
    if not (0 <= args.k <= args.n and 0 <= args.l <= args.n):
        raise InputError("need 0 <= k, l <= n")
    poly = phi_polynomial(args.n, args.k, args.l)
    _emit(args, {"n": args.n, "k": args.k, "l": args.l, "phi": poly.to_json()}, poly.format("t"))
    return 0


def cmd_todd(args) -> int:
    P = _load_polytope(args)
    if not P.is_simple():
        print("error: not simple: the Todd operator needs a simple polytope", file=sys.stderr)
        return 2
    status = 0
    payload: dict = {}
    lines = []
    if args.degree is not None:
        terms = todd_terms(P, args.degree)
        payload["terms"] = [
            {
                "face": sorted(t.face.vertices),
                "partition": [[i, k] for i, k in t.partition],
                "A": format_rational(t.coefficient),
            }
            for t in terms
        ]
        for t in terms:
            part = " ".join(f"d{i}^{k}" if k > 1 else f"d{i}" for i, k in t.partition) or "1"
            lines.append(f"face {sorted(t.face.vertices)}: A = {format_rational(t.coefficient)}  [{part}]")
    if args.check_kp:
        V = volume_polynomial(P)
        E = ehrhart(P).poly
        checks = []
        for l in range(P.n + 1):
            kp = kp_coefficient(P, l, V)
            ok = kp == E.coeff(P.n - l)
            checks.append({"l": l, "kp": format_rational(kp), "ehrhart": format_rational(E.coeff(P.n - l)), "ok": ok})
            lines.append(f"c_{P.n - l}: todd {format_rational(kp)}, ehrhart {format_rational(E.coeff(P.n - l))}  "
                         f"{'ok' if ok else 'MISMATCH'}")
            status |= 0 if ok else 1
        payload["kp"] = checks
    if args.table3:
        edges = P.faces_of_dim(1)
        if P.n != 3 or not edges:
            raise InputError("--table3 needs a 3-dimensional polytope")
        if not 0 <= args.edge < len(edges):
            raise InputError(f"--edge must lie in 0..{len(edges) - 1}")
        try:
            report = table3_report(P, edges[args.edge], args.p)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        payload["table3"] = report.to_json()
        lines.append(report.format())
        status |= 0 if report.ok else 1
    _emit(args, payload, "\n".join(lines))
    return status


def cmd_dist(args) -> int:
    rows = []
    status = 0
    lines = []
    for n in range(2, args.max_n + 1):
        for k in range(1, args.max_k + 1):
            lhs, rhs = distribution_sides(n, k)
            ok = lhs == rhs
            status |= 0 if ok else 1
            rows.append({"n": n, "k": k, "lhs": format_rational(lhs), "rhs": format_rational(rhs), "ok": ok})
            lines.append(f"n={n} k={k}: {format_rational(lhs)} = {format_rational(rhs)}  {'ok' if ok else 'MISMATCH'}")
    _emit(args, {"grid": rows}, "\n".join(lines))
    return status


def cmd_avg(args) -> int:
    P = _load_polytope(args)
    if args.family == "L1":
        family = enumerate_superlattices(P.n, args.p, 1, base=P.lattice).members
        limit = 2
    else:
        family = enumerate_coindex_N_superlattices(P.n, args.p, 2, base=P.lattice)
        limit = 3
    avg = average_regularized(P, family)
    base = ehrhart(P).poly
    top = P.n - 1
    ratio = avg.coeff(top) / base.coeff(top) if base.coeff(top) else None
    within = ratio is not None and abs(ratio - limit) <= Fraction(5, args.p)
    payload = {
        "family": args.family,
        "size": len(family),
        "average": avg.to_json(),
        "leading_ratio": format_rational(ratio) if ratio is not None else None,
        "limit": limit,
        "within_5_over_p": within,
        "constant_term": format_rational(avg.coeff(0)),
    }
    text = (
        f"average over {len(family)} lattices: {_poly_text(avg, args)}\n"
        f"c_{top} ratio {format_rational(ratio) if ratio is not None else '-'} "
        f"(limit {limit}, {'within' if within else 'outside'} 5/p)"
    )
    _emit(args, payload, text)
    return 0 if within and avg.coeff(0) == 1 else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hecke-ehrhart", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, polytope=True):
        sp.add_argument("--format", choices=("table", "json"), default="table")
        sp.add_argument("--decimal", action="store_true", help="render coefficients approximately (display only)")
        if polytope:
            sp.add_argument("--polytope", metavar="FILE", help="JSON file with 'vertices' and optional 'lattice'")
            sp.add_argument("--builtin", metavar="NAME", help="cube:n, simplex:n, prism or singular-triangle")

    sp = sub.add_parser("count", help="lattice points in dilates tP")
    common(sp)
    sp.add_argument("--t", type=int, nargs="+", default=[1])
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("ehrhart", help="Ehrhart polynomial")
    common(sp)
    sp.add_argument("--regularized", action="store_true")
    sp.set_defaults(func=cmd_ehrhart)

    sp = sub.add_parser("hecke", help="T(p,k)E(P) and eigenvalue checks")
    common(sp)
    sp.add_argument("--p", type=_prime, required=True)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--check-theorem1", action="store_true")
    sp.add_argument("--p-squared", action="store_true")
    sp.set_defaults(func=cmd_hecke)

    sp = sub.add_parser("nu", help="table of eigenvalues nu_{n,k,l}(p)")
    common(sp, polytope=False)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--via", choices=("closed", "schubert"), default="closed")
    sp.set_defaults(func=cmd_nu)

    sp = sub.add_parser("phi", help="the positive polynomial Phi_{n,k,l}")
    common(sp, polytope=False)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--l", type=int, required=True)
    sp.set_defaults(func=cmd_phi)

    sp = sub.add_parser("todd", help="Todd-operator terms, KP/BV check, stratified edge table")
    common(sp)
    sp.add_argument("--degree", type=int)
    sp.add_argument("--check-kp", action="store_true")
    sp.add_argument("--table3", action="store_true")
    sp.add_argument("--p", type=_prime, default=5)
    sp.add_argument("--edge", type=int, default=0, help="index of the edge used by --table3")
    sp.set_defaults(func=cmd_todd)

    sp = sub.add_parser("dist", help="distribution relations for circle coefficients")
    common(sp, polytope=False)
    sp.add_argument("--max-n", type=int, default=6)
    sp.add_argument("--max-k", type=int, default=5)
    sp.set_defaults(func=cmd_dist)

    sp = sub.add_parser("avg", help="average regularized Ehrhart polynomial over a lattice family")
    common(sp)
    sp.add_argument("--p", type=_prime, required=True)
    sp.add_argument("--family", choices=("L1", "M2"), default="L1")
    sp.set_defaults(func=cmd_avg)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NotSimpleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
