"""``lprips`` command line.

Exit codes: 0 success, 1 a check or acceptance criterion failed, 2 bad input,
3 a size cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from ._backend import BACKEND
from .acceptance import run_all
from .circle import circle_barcode, circle_experiment
from .complexes import build_tuple_complex, build_vr_filtration
from .errors import InputError, LpripsError
from .fileio import METRICS, parse_input
from .homology import PrimeField, homology, magnitude_complex, persistence
from .metric import INF, LeftInterval, NormDescriptor, norm_eval, ones_matrix, parse_p
from .stability import gromov_hausdorff, stability_campaign, stability_report
from .weights import cho_membership, subset_weight, tuple_weight


def _jsonable(obj):
    if isinstance(obj, float) and obj == INF:
        return "inf"
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def _dumps(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def _p_type(text: str) -> float:
    try:
        p = parse_p(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number or 'inf': {text!r}")
    if not p >= 1:
        raise argparse.ArgumentTypeError(f"p must be >= 1 or inf, got {text}")
    return p


def _field_type(text: str) -> int:
    try:
        return PrimeField(int(text)).p
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _p_list(text: str) -> list[float]:
    return [_p_type(v) for v in text.split(",") if v.strip()]


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _norm(args, symmetric: bool | None = None) -> NormDescriptor:
    sym = args.sym if symmetric is None else symmetric
    return NormDescriptor(args.p, sym, args.cyclic)


def _interval(args) -> LeftInterval:
    if args.r is None:
        return LeftInterval.everything()
    return LeftInterval.lt(args.r) if args.strict else LeftInterval.le(args.r)


def _space(args, path=None):
    return parse_input(path or args.input, points=args.points, metric=args.metric, pseudo=args.pseudo)


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# subcommands


def cmd_weight(args) -> int:
    X = _space(args)
    t = args.tuple
    nu = _norm(args)
    out = {"tuple": t, "norm": str(nu)}
    if nu.symmetric:
        w, order = subset_weight(nu, X, t, return_order=True)
        out["order"] = list(order)
    else:
        w = tuple_weight(nu, X, t)
    out["weight"] = w
    if args.cho is not None:
        if nu.symmetric or nu.cyclic:
            raise InputError("--cho compares against the plain lp weight; drop --sym/--cyclic")
        out["cho"] = cho_membership(X, t, args.cho, nu.p)
        out["weight_le_r"] = w <= args.cho
    if args.format == "json":
        _emit(args, _dumps(out))
    else:
        _emit(args, f"{','.join(map(str, t))}\t{w!r}\n")
    return 0


def cmd_norm_eval(args) -> int:
    nu = _norm(args)
    if args.ones is not None:
        D = ones_matrix(args.ones)
        source = f"E_{args.ones}"
    elif args.input:
        D = _space(args).dist
        source = args.input
    else:
        raise InputError("give a matrix file or --ones N")
    v = norm_eval(nu, D)
    if args.format == "json":
        _emit(args, _dumps({"norm": str(nu), "input": source, "order": len(D), "value": v}))
    else:
        _emit(args, f"{v!r}\n")
    return 0


def cmd_build(args) -> int:
    X = _space(args)
    L = _interval(args)
    if args.kind == "vr":
        nu = _norm(args, symmetric=True)
        C = build_vr_filtration(X, nu, args.max_dim)
    else:
        nu = _norm(args)
        C = build_tuple_complex(X, nu, L, args.max_dim)
    degrees = []
    for n in range(C.max_deg + 1):
        keep = L.mask(C.values(n))
        degrees.append(list(zip(C.cells(n)[keep].tolist(), C.values(n)[keep].tolist())))
    if args.format == "json":
        doc = {
            "kind": args.kind,
            "norm": str(nu),
            "interval": str(L),
            "sizes": [len(d) for d in degrees],
            "degrees": [[{"cell": c, "value": v} for c, v in d] for d in degrees],
        }
        _emit(args, _dumps(doc))
    else:
        lines = [f"{n}\t{v!r}\t{','.join(map(str, c))}\n" for n, d in enumerate(degrees) for c, v in d]
        _emit(args, "".join(lines))
    return 0


def cmd_persist(args) -> int:
    X = _space(args)
    if args.route == "complex":
        F = build_vr_filtration(X, _norm(args, symmetric=True), args.max_dim)
    else:
        F = build_tuple_complex(X, _norm(args), LeftInterval.everything(), args.max_dim)
    bc = persistence(F, args.field, max_dim=args.max_dim - 1)
    text = {"tsv": bc.to_tsv, "json": lambda: bc.to_json() + "\n", "svg": bc.to_svg}[args.format]()
    _emit(args, text)
    return 0


def cmd_magnitude(args) -> int:
    X = _space(args)
    C = magnitude_complex(X, args.r, args.variant, args.n + 1)
    H = homology(C, args.n, args.field)
    rank = H.rank
    if args.format == "json":
        doc = {
            "degree": args.n,
            "r": args.r,
            "variant": args.variant,
            "field": args.field,
            "rank": rank,
            "basis": [[[list(c), k] for c, k in rep] for rep in H.cells(C)],
        }
        _emit(args, _dumps(doc))
    else:
        _emit(args, f"degree\tr\tvariant\trank\n{args.n}\t{args.r!r}\t{args.variant}\t{rank}\n")
    return 0


def cmd_stability(args) -> int:
    routes = ("complex", "tuple") if args.route == "both" else (args.route,)
    if args.inputs:
        if len(args.inputs) != 2:
            raise InputError("stability takes exactly two distance-matrix files (or none for a seeded campaign)")
        X, Y = (_space(args, path) for path in args.inputs)
        d = gromov_hausdorff(X, Y)
        reports = []
        for p in args.p:
            for route in routes:
                rep = stability_report(X, Y, NormDescriptor(p), args.degrees, args.max_dim, route, args.field, d)
                reports.append(rep.to_dict())
        ok = all(r["pass"] for r in reports)
        _emit(args, _dumps(reports[0] if len(reports) == 1 else {"reports": reports, "pass": ok}))
        return 0 if ok else 1
    res = stability_campaign(args.trials, args.seed, tuple(args.p), tuple(args.degrees), routes, args.field, args.threads)
    _emit(args, _dumps(res))
    return 0 if res["pass"] else 1


def cmd_circle(args) -> int:
    rep = circle_experiment(args.p, args.n, args.max_dim, args.seed, args.route, args.tolerance)
    if args.svg:
        Path(args.svg).write_text(circle_barcode(args.p, args.n, args.max_dim, args.route, args.seed).to_svg())
    _emit(args, _dumps(rep))
    return 0 if rep["pass"] else 1


def cmd_selftest(args) -> int:
    results = run_all(args.scale, echo=lambda line: print(line, flush=True))
    failed = [r for r in results if not r.ok and (args.strict or r.known_issue is None)]
    known = [r for r in results if not r.ok and r.known_issue is not None]
    print(f"{len(results) - len(failed) - (0 if args.strict else len(known))}/{len(results)} passed"
          + (f", {len(known)} known issue(s)" if known and not args.strict else "")
          + f" (backend: {BACKEND}, scale {args.scale:g})")
    return 1 if failed else 0


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lprips", description=__doc__.splitlines()[0],
                                     formatter_class=argparse.RawDescriptionHelpFormatter,
                                     epilog="exit codes: 0 ok, 1 check failed, 2 input error, 3 size cap exceeded\n"
                                            "LPRIPS_MAX_CELLS overrides the cell-count guard (default 1000000);\n"
                                            "LPRIPS_BACKEND=python forces the pure-Python kernels.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND} kernels)")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    inp = argparse.ArgumentParser(add_help=False)
    inp.add_argument("--points", action="store_true", help="input rows are point coordinates, not a distance matrix")
    inp.add_argument("--metric", choices=METRICS, default="euclidean", help="metric for --points (default euclidean)")
    inp.add_argument("--pseudo", action="store_true", help="allow zero off-diagonal distances")

    norm = argparse.ArgumentParser(add_help=False)
    norm.add_argument("--p", type=_p_type, default=INF, help="exponent in [1, inf] (default inf)")
    norm.add_argument("--sym", action="store_true", help="use the symmetric (min over orderings) norm")
    norm.add_argument("--cyclic", action="store_true", help="use the cyclic norm")

    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("-o", "--output", help="write to this file instead of stdout")

    field = argparse.ArgumentParser(add_help=False)
    field.add_argument("--field", type=_field_type, default=2, help="prime characteristic of the coefficients (default 2)")

    def fmt(p, choices=("tsv", "json"), default="tsv"):
        p.add_argument("--format", choices=choices, default=default, help=f"output format (default {default})")

    p = sub.add_parser("weight", parents=[inp, norm, out], help="weight of a tuple of points")
    p.add_argument("input", help="distance-matrix CSV (or point cloud with --points); '-' for stdin")
    p.add_argument("--tuple", type=_int_list, required=True, help="comma-separated point indices, e.g. 0,2,1")
    p.add_argument("--cho", type=float, metavar="R", help="also evaluate the radius-sequence predicate at R")
    fmt(p)
    p.set_defaults(func=cmd_weight)

    p = sub.add_parser("norm-eval", parents=[inp, norm, out], help="evaluate a norm on a distance matrix")
    p.add_argument("input", nargs="?", help="distance-matrix CSV")
    p.add_argument("--ones", type=_positive, metavar="N", help="evaluate on the all-ones matrix E_N (gives C_N)")
    fmt(p)
    p.set_defaults(func=cmd_norm_eval)

    p = sub.add_parser("build", parents=[inp, norm, out], help="list cells of a filtered complex")
    p.add_argument("input")
    p.add_argument("--kind", choices=("vr", "tuple"), default="vr",
                   help="vr: simplices under the symmetric norm; tuple: normalized tuple chains")
    p.add_argument("--max-dim", type=int, default=2)
    p.add_argument("--r", type=float, help="keep cells with value <= r (< r with --strict)")
    p.add_argument("--strict", action="store_true")
    fmt(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("persist", parents=[inp, norm, out, field], help="persistence barcode")
    p.add_argument("input")
    p.add_argument("--max-dim", type=int, default=2, help="top cell dimension; bars are reported below it")
    p.add_argument("--route", choices=("complex", "tuple"), default="complex")
    fmt(p, ("tsv", "json", "svg"))
    p.set_defaults(func=cmd_persist)

    p = sub.add_parser("magnitude", parents=[inp, out, field], help="blurred magnitude homology rank")
    p.add_argument("input")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--variant", choices=("strict", "nonstrict", "graded"), default="graded")
    p.add_argument("--n", type=int, required=True, help="homological degree")
    fmt(p)
    p.set_defaults(func=cmd_magnitude)

    p = sub.add_parser("stability", parents=[inp, out, field],
                       help="bottleneck vs Gromov-Hausdorff bound for two spaces, or a seeded campaign")
    p.add_argument("inputs", nargs="*", help="two distance-matrix CSVs; omit for a random campaign")
    p.add_argument("--p", type=_p_list, default=[1.0, 2.0, INF], help="comma-separated exponents (default 1,2,inf)")
    p.add_argument("--degrees", type=_int_list, default=[0, 1])
    p.add_argument("--max-dim", type=int, default=None)
    p.add_argument("--route", choices=("complex", "tuple", "both"), default="both")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=_positive, default=100)
    p.add_argument("--threads", type=_positive, default=1, help="worker threads for the campaign (never changes results)")
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("circle", parents=[out], help="H_1 death on an n-point circle sample vs the threshold")
    p.add_argument("--p", type=_p_type, default=INF)
    p.add_argument("--n", type=int, default=60)
    p.add_argument("--max-dim", type=int, default=2)
    p.add_argument("--seed", type=int, default=None, help="random sample instead of equally spaced points")
    p.add_argument("--route", choices=("complex", "tuple"), default="complex")
    p.add_argument("--tolerance", type=float, default=None, help="override the sampling tolerance")
    p.add_argument("--svg", metavar="PATH", help="also write the barcode as SVG")
    p.set_defaults(func=cmd_circle)

    p = sub.add_parser("selftest", help="run the acceptance campaign at reduced scale")
    p.add_argument("--scale", type=float, default=0.1, help="fraction of the full trial counts (default 0.1)")
    p.add_argument("--strict", action="store_true", help="count known counterexamples as failures")
    p.set_defaults(func=cmd_selftest)
    for sp in (parser, *sub.choices.values()):
        sp.allow_abbrev = False  # a typo like --p on a command without it must not match --points
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except LpripsError as exc:
        witness = f" (witness: {exc.witness})" if exc.witness is not None else ""
        print(f"lprips: error: {exc}{witness}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"lprips: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
