"""Command-line front end.

Every command writes JSON (with the resolved configuration embedded) and a
short human summary on stdout.  Exit codes: 0 success, 2 validation failure,
3 budget exceeded, 4 bad input.

Polynomials are comma-separated exponents (``0,1,5`` is 1 + x + x^5).
Bivariate terms are ``a<i>b<j>`` tokens with ``e`` for the identity, so
``a9,b1,b2`` is a^9 + b + b^2; an omitted exponent means 1.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import warnings
from pathlib import Path

from . import __version__
from .cyclic import family_code, repetition_code
from .distance import (DEFAULT_BUDGET, combined, enumeration_cost, certifiable_weight,
                       round_certifier, side_distance, translation_orbit_reps)
from .errors import (BasisInvalid, BudgetExceeded, CatalogUnavailable, IsomorphismUnavailable,
                     ScheduleInvalid, TrivialTwist)
from .f2core import CyclicPoly
from .io import read_bundle, write_alist, write_bundle
from .lgroup import generated_group_order, gl_order, symplectic_group_order
from .logicals import generic_basis, kunneth_basis, verify_logicals
from .products import (BlueprintKind, EdgeKind, bb_bp_isomorphism, bb_build, bp_blueprint,
                       bp_build, hgp_blueprint)
from .search import SearchTask, run_search
from .twist import TwistSpec, run_twist, twist_catalog_16

EXIT_OK, EXIT_VALIDATION, EXIT_BUDGET, EXIT_INPUT = 0, 2, 3, 4
OUT_ENV = "DEHNTWIST_OUT"


class BadInput(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


# flag syntax -----------------------------------------------------------------------------

def parse_exponents(text: str) -> list[int]:
    try:
        out = [int(t) for t in text.split(",") if t.strip() != ""]
    except ValueError:
        raise BadInput(f"bad polynomial {text!r}: expected comma-separated exponents") from None
    if not out:
        raise BadInput(f"bad polynomial {text!r}: no terms")
    if any(e < 0 for e in out):
        raise BadInput(f"bad polynomial {text!r}: negative exponent")
    return out


_TERM = re.compile(r"^(?:a(\d*))?(?:b(\d*))?$")


def parse_bivariate_terms(text: str) -> list[tuple[int, int]]:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok == "e":
            out.append((0, 0))
            continue
        m = _TERM.match(tok)
        if not tok or m is None:
            raise BadInput(f"bad bivariate term {tok!r} in {text!r}")
        a, b = m.groups()
        out.append((0 if a is None else int(a or 1), 0 if b is None else int(b or 1)))
    return out


def format_bivariate(terms) -> str:
    def one(t):
        a, b = t
        if a == 0 and b == 0:
            return "e"
        return (f"a{a}" if a else "") + (f"b{b}" if b else "")
    return ",".join(one(t) for t in sorted(terms))


def read_config(path) -> dict[str, str]:
    out = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise BadInput(f"cannot read config {path}: {exc}") from None
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise BadInput(f"{path}:{n}: expected key=value")
        k, v = line.split("=", 1)
        out[k.strip().replace("-", "_")] = v.strip()
    return out


def _coerce(parser: argparse.ArgumentParser, key: str, value: str):
    for act in parser._actions:
        if act.dest != key:
            continue
        if isinstance(act, (argparse._StoreTrueAction, argparse._StoreFalseAction,
                            argparse.BooleanOptionalAction)):
            return value.lower() in ("1", "true", "yes", "on")
        return act.type(value) if act.type else value
    raise BadInput(f"unknown config key {key!r}")


def _out_dir(args) -> Path:
    d = Path(args.out or os.environ.get(OUT_ENV) or ".")
    d.mkdir(parents=True, exist_ok=True)
    return d


def _resolved(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "config_file")}


def _dump(path: Path, data: dict) -> None:
    path.write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")


def _load(path):
    try:
        return read_bundle(path)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise BadInput(f"cannot read bundle {path}: {exc}") from None


def _threads(args) -> int:
    return args.threads if args.threads else (os.cpu_count() or 1)


# build -----------------------------------------------------------------------------------

def _build_code(args):
    kind = args.kind
    if kind == "hgp":
        if args.toric:
            l = args.toric
            m = args.m or l
            return hgp_blueprint(repetition_code(l), repetition_code(m)).build(), f"toric_{l}x{m}"
        if args.q is None:
            raise BadInput("hgp needs --q or --toric")
        q = args.q
        l = 3 * q
        p1 = CyclicPoly(l, parse_exponents(args.p1)) if args.p1 else None
        p2 = CyclicPoly(l, parse_exponents(args.p2)) if args.p2 else None
        return hgp_blueprint(family_code(q, p1), family_code(q, p2)).build(), f"hgp_q{q}"
    if kind == "bp":
        if args.q is None:
            raise BadInput("bp needs --q")
        l = 3 * args.q
        p1 = CyclicPoly(l, parse_exponents(args.p1 or "0,1,2"))
        p2 = CyclicPoly(l, parse_exponents(args.p2 or "0,1,2"))
        return bp_build(p1, p2, l), f"bp_q{args.q}"
    if not (args.A and args.B and args.j and args.k):
        raise BadInput("bb needs --A, --B, --j and --k")
    A = parse_bivariate_terms(args.A)
    B = parse_bivariate_terms(args.B)
    return bb_build(A, B, args.j, args.k), f"bb_{args.j}x{args.k}"


def cmd_build(args) -> int:
    try:
        code, default_name = _build_code(args)
    except BadInput:
        raise
    except (ValueError, ArithmeticError) as exc:
        raise BadInput(f"invalid parameters: {exc}") from None
    name = args.name or default_name
    out = _out_dir(args)
    path = out / f"{name}.json"
    write_bundle(code, path, {"config": _resolved(args), "k": code.k})
    files = [str(path)]
    if args.alist:
        for tag, m in (("hx", code.hx), ("hz", code.hz)):
            p = out / f"{name}_{tag}.alist"
            write_alist(m, p)
            files.append(str(p))
    print(f"[[{code.n},{code.k}]] {code.kind}  hx weight {code.hx.max_row_weight()}  "
          f"hz weight {code.hz.max_row_weight()}  commutes {code.commutes()}")
    for f in files:
        print(f"wrote {f}")
    return EXIT_OK


# twist -----------------------------------------------------------------------------------

def _twist_blueprint(code):
    """Blueprint and code to twist on; BB bundles are carried to their BP partner."""
    bp = code.blueprint
    if bp is None:
        raise BadInput("bundle has no construction parameters")
    if bp.kind is not BlueprintKind.BIVARIATE:
        return bp, code, None
    from .products import bb_to_bp_polys
    if bp.m != 3 or bp.l % 3:
        raise BadInput("bivariate twists need j = 3q and k = 3")
    q = bp.l // 3
    try:
        mapped = bb_to_bp_polys(q, sorted(bp.A), sorted(bp.B))
    except IsomorphismUnavailable as exc:
        raise BadInput(str(exc)) from None
    if mapped is None:
        raise BadInput("bivariate polynomials do not split into the two balanced factors")
    p1, p2, swapped = mapped
    bpp = bp_blueprint(p1, p2, bp.l)
    rel = bb_bp_isomorphism(q, sorted(bp.A), sorted(bp.B), p1, p2)
    target = bpp.build()
    hx, hz = rel.apply(code)
    if hx != target.hx or hz != target.hz:
        raise BadInput("relabeled bivariate code differs from its balanced partner")  # pragma: no cover
    via = {"balanced_p1": p1.terms(), "balanced_p2": p2.terms(), "swapped": swapped,
           "images": [list(g) for g in rel.images]}
    return bpp, target, via


def _basis_for(bp, code):
    try:
        return kunneth_basis(bp, code), "kunneth"
    except BasisInvalid:
        return generic_basis(code), "generic"


def _twist_job(payload):
    kind, params, spec, wmax, budget = payload
    from .products import CodeBlueprint
    bp = CodeBlueprint.from_params(kind, params)
    code = bp.build()
    basis, _ = _basis_for(bp, code)
    hook = round_certifier(wmax, budget) if wmax else None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TrivialTwist)
        return run_twist(code, basis, TwistSpec.from_json(spec), on_round=hook)


def _spec_from_args(args) -> TwistSpec:
    if args.orientation is None or args.from_index is None or args.to_index is None:
        raise BadInput("give --catalog or --orientation, --from and --to")
    o = EdgeKind.VERTICAL if args.orientation == "v" else EdgeKind.HORIZONTAL
    return TwistSpec(o, args.from_index, args.to_index, args.target_t, args.implements, args.anchor_pos)


def cmd_twist(args) -> int:
    code = _load(args.bundle)
    bp, tcode, via = _twist_blueprint(code)
    try:
        specs = twist_catalog_16(bp) if args.catalog else [_spec_from_args(args)]
    except CatalogUnavailable as exc:
        raise BadInput(str(exc)) from None
    wmax = args.certify_wmax
    if wmax:
        reps = None
        if enumeration_cost(tcode.n, wmax, reps) > args.budget:
            print(f"weight {wmax} exceeds budget; certifiable up to "
                  f"{certifiable_weight(tcode.n, wmax, reps, args.budget)}", file=sys.stderr)
            return EXIT_BUDGET
    jobs = [(bp.kind.value, bp.params(), s.to_json(), wmax, args.budget) for s in specs]
    out = _out_dir(args)
    try:
        threads = _threads(args)
        if threads > 1 and len(jobs) > 1:
            from concurrent.futures import ProcessPoolExecutor
            with ProcessPoolExecutor(min(threads, len(jobs))) as ex:
                reports = list(ex.map(_twist_job, jobs))
        else:
            reports = [_twist_job(j) for j in jobs]
    except ScheduleInvalid as exc:
        print(f"schedule invalid: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    cfg = _resolved(args)
    ok = True
    for rep in reports:
        data = rep.to_json()
        data["config"] = cfg
        if via:
            data["via_balanced"] = via
        _dump(out / f"twist_{rep.spec.name()}.json", data)
        good = rep.closed and all(rep.commutes) and all(rep.predicted_ok) and rep.pairing_preserved
        ok &= good
        lower = min((c["min_lower"] for c in rep.certificates), default=None)
        extra = f"  min lower {lower}" if lower is not None else ""
        print(f"{rep.spec.name():10s} rounds {rep.rounds:3d}  closed {rep.closed}  "
              f"max weight {rep.max_weight}  overlap {rep.anchor_overlap}{extra}")
    if args.catalog:
        k = reports[0].glx.nrows
        order = generated_group_order([r.glx for r in reports])
        sp_order = symplectic_group_order([(r.glx, r.glz) for r in reports])
        lowers = [c["min_lower"] for r in reports for c in r.certificates]
        summary = {
            "config": cfg,
            "twists": [r.spec.name() for r in reports],
            "all_closed": all(r.closed for r in reports),
            "all_commute": all(all(r.commutes) for r in reports),
            "max_weight": max(r.max_weight for r in reports),
            "anchor_overlaps": sorted({r.anchor_overlap for r in reports}),
            "group_order": str(order),
            "symplectic_group_order": str(sp_order),
            "full_gl": order == gl_order(k),
            "intermediate_lower_bound": min(lowers) if lowers else None,
        }
        if via:
            summary["via_balanced"] = via
        _dump(out / "catalog_summary.json", summary)
        print(f"catalog: closed {summary['all_closed']}  max weight {summary['max_weight']}  "
              f"group order {order}  full GL({k},2) {summary['full_gl']}")
    return EXIT_OK if ok else EXIT_VALIDATION


# distance --------------------------------------------------------------------------------

def cmd_distance(args) -> int:
    code = _load(args.bundle)
    bp = code.blueprint
    if bp is not None and bp.kind is not BlueprintKind.BIVARIATE and args.basis != "generic":
        basis, bname = _basis_for(bp, code)
    else:
        basis, bname = generic_basis(code), "generic"
    symmetric = args.symmetry and bp is not None and code.same_checks(bp.build())
    reps = translation_orbit_reps(code) if symmetric else None
    exceeded = False
    if args.wmax is not None:
        reach = certifiable_weight(code.n, args.wmax, reps, args.budget)
        exceeded = reach < args.wmax
    results = []
    for side in args.sides:
        results.append(side_distance(code, side, basis, wmax=args.wmax, budget=args.budget,
                                     isd_iters=args.isd_iters, seed=args.seed, symmetry=symmetric))
    total = combined(results)
    out = _out_dir(args)
    name = args.name or Path(args.bundle).stem
    data = {"config": _resolved(args), "n": code.n, "k": code.k, "basis": bname,
            "sides": {r.side: r.to_json() for r in results}, "combined": total.to_json(),
            "budget_exceeded": exceeded}
    _dump(out / f"distance_{name}.json", data)
    for r in results:
        up = "?" if r.best_upper is None else r.best_upper
        print(f"d_{r.side}: {r.certified_lower} <= d <= {up}  exact {r.exact}  {','.join(r.methods)}")
    if exceeded:
        print(f"requested weight {args.wmax} exceeds the budget; partial certificate written",
              file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


# search ----------------------------------------------------------------------------------

def cmd_search(args) -> int:
    try:
        profile = tuple(int(t) for t in args.profile.split(","))
    except ValueError:
        raise BadInput(f"bad profile {args.profile!r}") from None
    if len(profile) != 2 or min(profile) < 1:
        raise BadInput(f"bad profile {args.profile!r}")
    task = SearchTask(args.q, profile, args.budget, args.seed, args.isd_iters, args.symmetry)
    out = _out_dir(args)
    path = Path(args.records) if args.records else out / f"search_q{args.q}_{profile[0]}{profile[1]}.jsonl"
    recs = run_search(task, path, resume=args.resume, limit=args.limit, workers=_threads(args))
    summary = {"config": _resolved(args), "records": str(path), "count": len(recs),
               "top": [{"p1": r.p1, "p2": r.p2, "certified_lower": r.certified_lower,
                        "best_upper": r.best_upper, "exact": r.exact} for r in recs[:args.top]]}
    _dump(out / f"search_q{args.q}_{profile[0]}{profile[1]}_summary.json", summary)
    print(f"{len(recs)} candidates for q={args.q} profile {profile}")
    for r in recs[:args.top]:
        up = "?" if r.best_upper is None else r.best_upper
        print(f"  p1={r.p1} p2={r.p2}  d in [{r.certified_lower},{up}]")
    return EXIT_OK


# verify ----------------------------------------------------------------------------------

def _check_against(code, other) -> tuple[bool, str]:
    a, b = code.blueprint, other.blueprint
    if a is None or b is None:
        return code.same_checks(other), "direct"
    kinds = {a.kind, b.kind}
    if kinds == {BlueprintKind.BIVARIATE, BlueprintKind.BALANCED}:
        bb, bpc = (code, other) if a.kind is BlueprintKind.BIVARIATE else (other, code)
        q = bpc.blueprint.l // 3
        rel = bb_bp_isomorphism(q, sorted(bb.blueprint.A), sorted(bb.blueprint.B),
                                bpc.blueprint.code1.p, bpc.blueprint.code2.p)
        hx, hz = rel.apply(bb)
        return hx == bpc.hx and hz == bpc.hz, f"isomorphism images {list(rel.images)}"
    return code.same_checks(other), "direct"


def cmd_verify(args) -> int:
    code = _load(args.bundle)
    checks = []

    def record(name, ok, detail=""):
        checks.append({"check": name, "ok": bool(ok), "detail": detail})

    record("commutation", code.commutes())
    bp = code.blueprint
    if bp is not None:
        ref = bp.build()
        record("matches construction", code.same_checks(ref))
        record("k", code.k == ref.k, f"k={code.k}, construction k={ref.k}")
        if bp.kind is not BlueprintKind.BIVARIATE:
            try:
                basis = kunneth_basis(bp, code)
                rep = verify_logicals(code, basis)
                record("kunneth basis", rep.ok, "; ".join(rep.failures))
            except BasisInvalid as exc:
                basis = generic_basis(code)
                rep = verify_logicals(code, basis)
                record("generic basis", rep.ok, f"kunneth unavailable: {exc}")
    if args.against:
        other = _load(args.against)
        try:
            ok, detail = _check_against(code, other)
        except IsomorphismUnavailable as exc:
            ok, detail = False, str(exc)
        record("equivalence", ok, detail)
    passed = all(c["ok"] for c in checks)
    out = _out_dir(args)
    name = args.name or Path(args.bundle).stem
    _dump(out / f"verify_{name}.json", {"config": _resolved(args), "passed": passed, "checks": checks})
    for c in checks:
        print(f"{'PASS' if c['ok'] else 'FAIL'} {c['check']}" + (f"  ({c['detail']})" if c["detail"] else ""))
    print("verify: " + ("pass" if passed else "fail"))
    return EXIT_OK if passed else EXIT_VALIDATION


# parser ----------------------------------------------------------------------------------

def _common(p):
    p.add_argument("--out", help=f"output directory (default ${OUT_ENV} or .)")
    p.add_argument("--config", dest="config_file", help="key=value file of flag defaults")
    p.add_argument("--threads", type=int, default=0, help="worker processes (default: all cores)")
    p.add_argument("--name", help="base name for output files")


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    parser = _Parser(prog="dehntwist", description=__doc__.split("\n\n")[0],
                     epilog="polynomials: 0,1,5 = 1+x+x^5; bivariate: a9,b1,b2 or e,a2,a7",
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)
    subs = {}

    p = sub.add_parser("build", help="construct a code and write a bundle")
    p.add_argument("kind", choices=["hgp", "bp", "bb"])
    p.add_argument("--q", type=int)
    p.add_argument("--p1", help="first representative polynomial, e.g. 0,1,5")
    p.add_argument("--p2", help="second representative polynomial")
    p.add_argument("--toric", type=int, help="hgp of repetition codes of this length")
    p.add_argument("--m", type=int, help="second length for --toric")
    p.add_argument("--A", help="bivariate A, e.g. a9,b1,b2")
    p.add_argument("--B", help="bivariate B, e.g. e,a2,a7")
    p.add_argument("--j", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--alist", action="store_true", help="also write hx/hz alist files")
    _common(p)
    p.set_defaults(func=cmd_build)
    subs["build"] = p

    p = sub.add_parser("twist", help="simulate twists on a bundle")
    p.add_argument("bundle")
    p.add_argument("--catalog", action="store_true", help="run all 16 catalog twists")
    p.add_argument("--orientation", choices=["v", "h"])
    p.add_argument("--from", dest="from_index", type=int)
    p.add_argument("--to", dest="to_index", type=int)
    p.add_argument("--target-t", dest="target_t", type=int, default=1)
    p.add_argument("--implements", choices=["X", "Z"], default="X")
    p.add_argument("--anchor-pos", dest="anchor_pos", type=int, default=0)
    p.add_argument("--certify-wmax", dest="certify_wmax", type=int, default=0,
                   help="certify every intermediate code up to this weight")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    _common(p)
    p.set_defaults(func=cmd_twist)
    subs["twist"] = p

    p = sub.add_parser("distance", help="certify the distance of a bundle")
    p.add_argument("bundle")
    p.add_argument("--wmax", type=int)
    p.add_argument("--isd-iters", dest="isd_iters", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--sides", choices=["X", "Z", "XZ"], default="XZ")
    p.add_argument("--basis", choices=["auto", "generic"], default="auto")
    p.add_argument("--symmetry", action=argparse.BooleanOptionalAction, default=True)
    _common(p)
    p.set_defaults(func=cmd_distance)
    subs["distance"] = p

    p = sub.add_parser("search", help="search representative polynomial pairs")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--profile", default="3,3")
    p.add_argument("--resume", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--records", help="JSON-lines record file")
    p.add_argument("--limit", type=int, help="stop after this many new evaluations")
    p.add_argument("--budget", type=int, default=200_000_000)
    p.add_argument("--isd-iters", dest="isd_iters", type=int, default=2000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--symmetry", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--top", type=int, default=5)
    _common(p)
    p.set_defaults(func=cmd_search)
    subs["search"] = p

    p = sub.add_parser("verify", help="check a bundle")
    p.add_argument("bundle")
    p.add_argument("--against", help="second bundle expected to be equivalent")
    _common(p)
    p.set_defaults(func=cmd_verify)
    subs["verify"] = p
    return parser, subs


def main(argv=None) -> int:
    parser, subs = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
        if args.config_file:
            sp = subs[args.command]
            sp.set_defaults(**{k: _coerce(sp, k, v) for k, v in read_config(args.config_file).items()})
            args = parser.parse_args(argv)
        return args.func(args)
    except BadInput as exc:
        print(f"dehntwist: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"dehntwist: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
