"""Command line interface.

Exit codes: 0 success, 2 unreadable input, 3 invalid input (the error class
is printed), 4 degenerate torsion assembly, 5 failed verification.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import io
from .cellsys import twist, union_along
from .errors import DegenerateAssembly, ParseError, TorsionError, ValidationError
from .liealg import adjoint_data
from .linalg import Tolerance, eq_up_to_sign
from .scenarios import check_connected_sum, mv_scenario
from .spaces import SpaceRecipe, make_space, recipe_arity
from .suite import run_suite
from .torsion import (
    default_bases,
    homology_basis,
    homology_dims,
    mv_problem,
    reidemeister_torsion,
    verify_multiplicativity,
)

EXIT_OK, EXIT_PARSE, EXIT_INVALID, EXIT_DEGENERATE, EXIT_FAIL = 0, 2, 3, 4, 5


def fmt(z) -> str:
    z = complex(z)
    if not np.isfinite(z):
        return "undefined"
    return f"{z.real:.12g}{z.imag:+.12g}i"


def _tol(args) -> Tolerance:
    return Tolerance(pivot_eps=args.tol, compare_rel=args.compare_rel)


def _emit(args, payload: dict, text_lines: list):
    if args.format == "json":
        def conv(v):
            if isinstance(v, complex):
                return [v.real, v.imag]
            return v
        print(json.dumps({k: conv(v) for k, v in payload.items()}, indent=1))
    else:
        print("\n".join(text_lines))


def cmd_torsion(args) -> int:
    tol = _tol(args)
    cs = io.cellsystem_from_dict(io.load_json(args.complex))
    rep = io.representation_from_dict(io.load_json(args.rep), tol)
    cc = twist(cs, rep, adjoint_data(rep))
    if args.bases:
        h = io.bases_from_dict(io.load_json(args.bases), cc.dims)
    elif args.auto_bases:
        h = homology_basis(cc, tol)
    else:
        h = None
    dims = homology_dims(cc, tol)
    t = reidemeister_torsion(cc, h, tol)
    _emit(args, {"torsion": t.value, "homology_dims": dims, "pivot_eps": tol.pivot_eps, "compare_rel": tol.compare_rel}, [
        f"torsion: {fmt(t.value)}",
        f"homology dims: {' '.join(str(x) for x in dims)}",
        f"tolerances: pivot_eps={tol.pivot_eps:g} compare_rel={tol.compare_rel:g}",
    ])
    return EXIT_OK


def _report_identity(args, label, lhs, rhs, ok, extra_lines=(), extra=None) -> int:
    ratio = complex(lhs) / complex(rhs)
    lines = list(extra_lines) + [
        f"lhs: {fmt(lhs)}",
        f"rhs: {fmt(rhs)}",
        f"ratio: {fmt(ratio)}",
        f"{label}: {'PASS' if ok else 'FAIL'}",
    ]
    payload = {"lhs": complex(lhs), "rhs": complex(rhs), "ratio": ratio, "pass": bool(ok)}
    payload.update(extra or {})
    _emit(args, payload, lines)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify_mv(args) -> int:
    tol = _tol(args)
    if args.scenario == "custom":
        if len(args.files) != 4:
            raise ParseError("custom scenario needs X1 X2 REP1 REP2")
        x1 = io.cellsystem_from_dict(io.load_json(args.files[0]))
        x2 = io.cellsystem_from_dict(io.load_json(args.files[1]))
        r1 = io.representation_from_dict(io.load_json(args.files[2]), tol)
        r2 = io.representation_from_dict(io.load_json(args.files[3]), tol)
        for cs, r, k in ((x1, r1, 1), (x2, r2, 2)):
            if cs.alphabet_size != r.alphabet_size:
                from .errors import AlphabetMismatch

                raise AlphabetMismatch(f"representation {k} has {r.alphabet_size} letters, X{k} has {cs.alphabet_size}")
        x, inc = union_along(x1, x2, args.mark, args.mark2 or args.mark)
        rep = r1.concat(r2)
    else:
        if args.files:
            raise ParseError(f"scenario {args.scenario} takes no files")
        x, inc, rep = mv_scenario(args.scenario, np.random.default_rng(args.seed))
    prob = mv_problem(x, inc, rep)
    r = verify_multiplicativity(prob, default_bases(prob, tol), tol)
    return _report_identity(
        args, "T(X1)T(X2) = T(X)T(Y)T(H)", r.lhs, r.rhs, r.ok,
        [f"T(X): {fmt(r.t_x.value)}", f"T(X1): {fmt(r.t_x1.value)}", f"T(X2): {fmt(r.t_x2.value)}",
         f"T(Y): {fmt(r.t_y.value)}", f"T(H): {fmt(r.t_h.value)}"],
        {"t_x": r.t_x.value, "t_x1": r.t_x1.value, "t_x2": r.t_x2.value, "t_y": r.t_y.value, "t_h": r.t_h.value},
    )


def _parse_recipes(tokens):
    tokens = list(tokens)
    out = []
    while tokens:
        name = tokens.pop(0)
        k = recipe_arity(name)
        if len(tokens) < k:
            raise ParseError(f"{name} needs {k} integer parameters")
        try:
            params = tuple(int(tokens.pop(0)) for _ in range(k))
        except ValueError as exc:
            raise ParseError(str(exc)) from None
        out.append(SpaceRecipe(name, params))
    if len(out) != 2:
        raise ParseError("connected-sum needs exactly two recipes, M then N")
    return out


def cmd_verify_cs(args) -> int:
    tol = _tol(args)
    m, n = _parse_recipes(args.recipes)
    res = check_connected_sum(m, n, np.random.default_rng(args.seed), args.root_power, tol)
    product = res.t_m * res.t_nstar
    ok = res.ok and eq_up_to_sign(res.t_sum, product, tol)
    return _report_identity(
        args, "T(M#N) = T(M)T(N*)", res.t_sum, product, ok,
        [f"T(M): {fmt(res.t_m)}", f"T(N*): {fmt(res.t_nstar)}", f"T(disk): {fmt(res.t_disk)}",
         f"corrective term before: {fmt(res.corrective_before)}",
         f"corrective term after: {fmt(res.corrective_after)}"],
        {"t_m": res.t_m, "t_nstar": res.t_nstar, "t_disk": res.t_disk,
         "corrective_before": res.corrective_before, "corrective_after": res.corrective_after},
    )


def cmd_suite(args) -> int:
    res = run_suite(args.seed)
    sys.stdout.write(res.summary())
    return EXIT_OK if res.ok else EXIT_FAIL


def cmd_export(args) -> int:
    try:
        params = tuple(int(x) for x in args.params)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    print(io.dumps(io.cellsystem_to_dict(make_space(SpaceRecipe(args.recipe, params)))))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-9, help="pivot threshold for rank decisions")
    common.add_argument("--compare-rel", type=float, default=1e-6, help="relative tolerance for comparisons")
    common.add_argument("--format", choices=("text", "json"), default="text")

    ap = argparse.ArgumentParser(prog="adtorsion", description="Twisted Reidemeister torsion with adjoint SL_n(C) coefficients")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("torsion", parents=[common], help="torsion of a cell system twisted by a representation")
    p.add_argument("complex")
    p.add_argument("rep")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--bases", help="homology bases file")
    g.add_argument("--auto-bases", action="store_true", help="use canonical homology bases")
    p.set_defaults(func=cmd_torsion)

    v = sub.add_parser("verify", help="check a multiplicativity identity")
    vsub = v.add_subparsers(dest="identity", required=True)
    mv = vsub.add_parser("mv", parents=[common], help="Mayer-Vietoris product formula")
    mv.add_argument("scenario", choices=("wedge", "disk-sum", "custom"))
    mv.add_argument("files", nargs="*", help="custom: X1 X2 REP1 REP2")
    mv.add_argument("--mark", default="disk")
    mv.add_argument("--mark2")
    mv.add_argument("--seed", type=int, default=0)
    mv.set_defaults(func=cmd_verify_mv)
    cs = vsub.add_parser("connected-sum", parents=[common], help="T(M#N) = T(M)T(N*) after basis normalization")
    cs.add_argument("recipes", nargs="+", help="M recipe and params, then N recipe and params")
    cs.add_argument("--seed", type=int, default=0)
    cs.add_argument("--root-power", type=int, default=1, help="lens images diag(z^k, z^-k)")
    cs.set_defaults(func=cmd_verify_cs)

    s = sub.add_parser("suite", help="run the seeded property suite")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_suite)

    e = sub.add_parser("export", help="print a built-in cell system as JSON")
    e.add_argument("recipe")
    e.add_argument("params", nargs="*")
    e.set_defaults(func=cmd_export)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except DegenerateAssembly as exc:
        print(f"DegenerateAssembly: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except TorsionError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
