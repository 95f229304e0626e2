"""Command line entry point.

Exit codes: 0 success / member / pass, 1 non-member / check failed,
2 malformed input, 3 budget exceeded.  Every run writes a JSON manifest.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import BudgetExceeded

EXIT_OK, EXIT_NO, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3

DEFAULT_MAX_VERTICES = 5_000_000
DEFAULT_TIME_LIMIT = 3600.0
DEFAULT_MAX_RAYS = 5_000_000


class InputError(ValueError):
    pass


def _env(name, default, cast):
    v = os.environ.get(name)
    return cast(v) if v not in (None, "") else default


def _budget_args(p):
    p.add_argument("--max-vertices", type=int, default=None,
                   help=f"vertex storage budget (env CAUSALPOLY_MAX_VERTICES, default {DEFAULT_MAX_VERTICES})")
    p.add_argument("--time-limit", type=float, default=None,
                   help=f"seconds (env CAUSALPOLY_TIME_LIMIT, default {DEFAULT_TIME_LIMIT:g})")
    p.add_argument("--allow-large", action="store_true", help="permit n >= 4 storage and facet runs")


def _budgets(args) -> dict:
    return {
        "max_vertices": args.max_vertices if getattr(args, "max_vertices", None) is not None
        else _env("CAUSALPOLY_MAX_VERTICES", DEFAULT_MAX_VERTICES, int),
        "time_limit": args.time_limit if getattr(args, "time_limit", None) is not None
        else _env("CAUSALPOLY_TIME_LIMIT", DEFAULT_TIME_LIMIT, float),
        "max_rays": getattr(args, "max_rays", None) if getattr(args, "max_rays", None) is not None
        else _env("CAUSALPOLY_MAX_RAYS", DEFAULT_MAX_RAYS, int),
    }


def _scenario(args):
    from .scenario import make_lazy_scenario
    if args.lazy is None or args.lazy < 1:
        raise InputError("--lazy N (N >= 1) is required")
    return make_lazy_scenario(args.lazy)


def _cls(text, n):
    from .causal import check_class, parse_class
    try:
        c = parse_class(text)
        check_class(c, n)
        return c
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _read_correlation(path):
    from .scenario import Correlation
    try:
        data = json.loads(Path(path).read_text())
        return Correlation.from_json(data)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot read correlation {path}: {exc}") from exc


def _write(path, text, outputs):
    Path(path).write_text(text)
    outputs.append(str(path))


def _dump(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True, default=str) + "\n"


# ---------------------------------------------------------------------------
# subcommands

def cmd_vertices(args, ctx):
    from .causal import count_vertices, vertex_masks
    from .geometry import write_ext
    from .scenario import mask_to_det

    s = _scenario(args)
    cls = _cls(args.cls, s.n)
    b = ctx["budgets"]
    if args.count_only:
        count = count_vertices(s.n, cls, time_limit=b["time_limit"])
        print(count)
        ctx["summary"] = {"count": count}
        return EXIT_OK
    if s.n >= 4 and not args.allow_large:
        raise BudgetExceeded("storing n >= 4 vertices needs --allow-large")
    masks = vertex_masks(s.n, cls, max_vertices=b["max_vertices"], time_limit=b["time_limit"])
    print(len(masks))
    if args.out:
        pts = [mask_to_det(s, int(m)).parameter_vector() for m in masks]
        write_ext(args.out, pts, comment=f"lazy {s.n} class {cls} vertices {len(pts)}")
        ctx["outputs"].append(args.out)
    ctx["summary"] = {"count": len(masks)}
    return EXIT_OK


def _class_vertices(s, cls, ctx):
    from .causal import enumerate_vertices
    b = ctx["budgets"]
    return [v.parameter_vector() for v in enumerate_vertices(s, cls, b["max_vertices"], b["time_limit"])]


def cmd_membership(args, ctx):
    from .geometry import Weights, lp_membership
    from .scenario import to_parameter_vector

    p = _read_correlation(args.correlation)
    cls = _cls(args.cls, p.scenario.n)
    verts = _class_vertices(p.scenario, cls, ctx)
    res = lp_membership(to_parameter_vector(p), verts)
    if isinstance(res, Weights):
        cert = {"member": True, "class": str(cls),
                "weights": {str(k): str(v) for k, v in res.weights.items()}}
        print(f"member of {cls} ({len(res.weights)} vertices in the decomposition)")
        code = EXIT_OK
    else:
        cert = {"member": False, "class": str(cls), "inequality": res.inequality.line(),
                "slack": str(res.value)}
        print(f"not a member of {cls}; separating inequality {res.inequality.line()} (slack {res.value})")
        code = EXIT_NO
    if args.out:
        _write(args.out, _dump(cert), ctx["outputs"])
    ctx["summary"] = {"member": code == EXIT_OK}
    return code


def cmd_facets(args, ctx):
    from .geometry import double_description, write_hrep, write_ine

    s = _scenario(args)
    cls = _cls(args.cls, s.n)
    if s.n >= 4 and not args.allow_large:
        raise BudgetExceeded("facet enumeration for n >= 4 needs --allow-large")
    verts = _class_vertices(s, cls, ctx)
    b = ctx["budgets"]
    res = double_description(verts, order=args.order, max_rays=b["max_rays"], time_limit=b["time_limit"])
    print(f"{len(res.facets)} facets (dimension {res.hull.rank}, peak {res.peak_rays} rays, "
          f"{res.seconds:.1f}s, {res.backend})")
    if args.out:
        if args.out.endswith(".ine"):
            write_ine(args.out, res.facets, comment=f"lazy {s.n} class {cls}")
        else:
            write_hrep(args.out, res.facets, {"scenario": f"lazy {s.n}", "class": str(cls),
                                              "dimension": res.hull.rank, "facets": len(res.facets)})
        ctx["outputs"].append(args.out)
    ctx["summary"] = {"facets": len(res.facets), "dimension": res.hull.rank, "order": args.order,
                      "peak_rays": res.peak_rays, "backend": res.backend}
    return EXIT_OK


def _read_ineqs(path):
    from .geometry import read_hrep, read_ine
    try:
        if str(path).endswith(".ine"):
            return read_ine(path)
        return read_hrep(path)[0]
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read inequalities from {path}: {exc}") from exc


def cmd_classify(args, ctx):
    from .catalog import family_catalog

    s = _scenario(args)
    ineqs = _read_ineqs(args.facets)
    cat = family_catalog(ineqs, s, flags=args.flags, time_limit=ctx["budgets"]["time_limit"])
    trivial = sum(1 for o in cat if o.trivial)
    print(f"{len(ineqs)} inequalities, {len(cat)} families, {trivial} trivial")
    if args.out:
        lines = [f"# families {len(cat)} trivial {trivial}"] + [o.line() for o in cat]
        _write(args.out, "\n".join(lines) + "\n", ctx["outputs"])
    summary = {"inequalities": len(ineqs), "families": len(cat), "trivial": trivial}
    if args.flags:
        nt = [o for o in cat if not o.trivial]
        summary["not_saturated_fully"] = sum(1 for o in nt if not o.flags["sat_fully"])
        summary["not_saturated_fixed_order"] = sum(1 for o in nt if not o.flags["sat_fixed"])
        summary["facet_of_fully"] = sum(1 for o in nt if o.flags["facet_fully"])
        for k in ("not_saturated_fully", "not_saturated_fixed_order", "facet_of_fully"):
            print(f"{k}: {summary[k]}")
    ctx["summary"] = summary
    return EXIT_OK


def _family(text, n=None):
    from .inequalities import parse_family
    try:
        return parse_family(text, n)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def cmd_ineq(args, ctx):
    from . import inequalities as I

    if args.action == "eval":
        f = _family(args.family)
        p = _read_correlation(args.correlation)
        fn = I.functional(f)
        if p.scenario.n != fn.n or not p.scenario.is_lazy:
            raise InputError(f"{f} needs a lazy {fn.n}-party correlation")
        val = fn.value(p)
        print(f"{f}: value {val} (bound {fn.bound})")
        out = {"family": str(f), "value": str(val), "bound": str(fn.bound)}
        if args.game:
            g = I.game_success_probability(args.game, p)
            print(f"game {args.game}: {g}")
            out["game"] = str(g)
        ctx["summary"] = out
        if args.out:
            _write(args.out, _dump(out), ctx["outputs"])
        return EXIT_OK
    if args.action == "bound":
        f = _family(args.family)
        cls = _cls(args.cls, f.n)
        rep = I.verify_family_bound(f, cls, time_limit=ctx["budgets"]["time_limit"])
        for line in rep.lines():
            print(line)
        ctx["summary"] = {"family": rep.family, "class": rep.cls, "bound": str(rep.bound),
                          "min": str(rep.minimum), "saturated": rep.saturated, "ok": rep.ok}
        return EXIT_OK if rep.ok else EXIT_NO
    if args.action == "check-facet":
        from .catalog import facet_check
        f = _family(args.family)
        cls = _cls(args.cls, f.n)
        if f.n >= 4 and not args.allow_large:
            raise BudgetExceeded("facet checks for n >= 4 need --allow-large")
        res = facet_check(I.functional(f), cls, time_limit=ctx["budgets"]["time_limit"])
        print(f"{f} on {cls}: valid={res['valid']} facet={res['facet']} "
              f"tight={res['tight']} rank={res['rank']} dim={res['dim']}")
        ctx["summary"] = res
        return EXIT_OK if res["facet"] else EXIT_NO
    raise InputError(f"unknown ineq action {args.action}")


def cmd_construct(args, ctx):
    from . import constructions as C
    from .partition import Partition

    kind = args.kind
    try:
        if kind == "p-sigma":
            p = Partition.parse(args.partition)
            order = [int(v) - 1 for v in args.order.split(",")] if args.order else list(range(len(p)))
            obj = C.build_p_sigma(p, C.PermutationSigma.from_order(order))
        elif kind == "order-mixture":
            obj = C.build_order_mixture(args.n or 3)
        elif kind == "pairwise":
            obj = C.build_pairwise_saturator(args.n, [int(v) - 1 for v in args.block.split(",")])
        elif kind == "m-saturator":
            obj = C.build_m_causal_saturator(args.n, args.m)
        elif kind == "size-saturator":
            obj = C.build_size_s_saturator(args.n, args.s)
        elif kind == "dynamical-order":
            obj = C.build_dynamical_order()
        else:
            obj = C.named_correlation(kind)
    except (TypeError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    corr = obj.to_correlation() if hasattr(obj, "to_correlation") else obj
    text = corr.dumps() + "\n"
    if args.out:
        _write(args.out, text, ctx["outputs"])
    else:
        sys.stdout.write(text)
    ctx["summary"] = {"kind": kind}
    return EXIT_OK


def cmd_verify(args, ctx):
    from .verify import run_target
    try:
        reports = run_target(args.target, args.n)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    for r in reports:
        print(r.text())
    ok = all(r.passed for r in reports)
    if args.out:
        _write(args.out, _dump([r.to_json() for r in reports]), ctx["outputs"])
    ctx["summary"] = {"passed": ok, "reports": [r.to_json() for r in reports]}
    return EXIT_OK if ok else EXIT_NO


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="causalpoly", description="Causal correlation polytopes")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("--manifest", default=None,
                    help="manifest path (env CAUSALPOLY_MANIFEST, default causalpoly_manifest.json)")
    ap.add_argument("--workers", type=int, default=1, help="worker count (results do not depend on it)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("vertices", help="enumerate or count deterministic vertices of a class")
    p.add_argument("--lazy", type=int, required=True)
    p.add_argument("--class", dest="cls", default="2causal")
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--out")
    _budget_args(p)
    p.set_defaults(func=cmd_vertices)

    p = sub.add_parser("membership", help="exact LP membership with a certificate")
    p.add_argument("--correlation", required=True)
    p.add_argument("--class", dest="cls", default="2causal")
    p.add_argument("--out")
    _budget_args(p)
    p.set_defaults(func=cmd_membership)

    p = sub.add_parser("facets", help="facets of a class polytope by double description")
    p.add_argument("--lazy", type=int, required=True)
    p.add_argument("--class", dest="cls", default="2causal")
    p.add_argument("--order", default="lex", help="row insertion order: lex, lexmax, random:SEED, input, maxcutoff")
    p.add_argument("--max-rays", type=int, default=None)
    p.add_argument("--out")
    _budget_args(p)
    p.set_defaults(func=cmd_facets)

    p = sub.add_parser("classify", help="group inequalities into symmetry families")
    p.add_argument("--lazy", type=int, required=True)
    p.add_argument("--facets", required=True)
    p.add_argument("--flags", action="store_true", help="compute saturation and shared-facet flags")
    p.add_argument("--out")
    _budget_args(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("ineq", help="named inequality families")
    p.add_argument("action", choices=["eval", "bound", "check-facet"])
    p.add_argument("--family", required=True, help="i1, i2, i3, lgyni:i,j, j1:N, j2:N, blgyni:1|2,3")
    p.add_argument("--correlation")
    p.add_argument("--class", dest="cls", default="2causal")
    p.add_argument("--game", choices=["i1", "i2", "i3", "j1", "j2"])
    p.add_argument("--out")
    _budget_args(p)
    p.set_defaults(func=cmd_ineq)

    p = sub.add_parser("construct", help="write an explicit correlation as JSON")
    p.add_argument("kind", help="p-sigma, order-mixture, pairwise, m-saturator, size-saturator, "
                                "dynamical-order, all-xyz, zero-yz-yz, x-xy-yz, zero")
    p.add_argument("--partition")
    p.add_argument("--order", help="block order, 1-based block indices")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--block", help="1-based parties, comma separated")
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="bundled structural checks")
    p.add_argument("target", help="partition-separation, inclusions, pairwise-bounds, dynamical-order, coarse-graining")
    p.add_argument("--n", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)
    return ap


def _hash_inputs(args) -> dict:
    out = {}
    for name in ("correlation", "facets"):
        path = getattr(args, name, None)
        if path and Path(path).is_file():
            out[path] = hashlib.sha256(Path(path).read_bytes()).hexdigest()
    return out


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "ineq" and args.action == "eval" and not args.correlation:
        ap.error("ineq eval needs --correlation")
    ctx = {"budgets": _budgets(args), "outputs": [], "summary": None}
    t0 = time.monotonic()
    try:
        code = args.func(args, ctx)
        err = None
    except InputError as exc:
        code, err = EXIT_INPUT, str(exc)
    except BudgetExceeded as exc:
        code, err = EXIT_BUDGET, str(exc)
    if err:
        print(f"error: {err}", file=sys.stderr)
    from ._kernels import BACKEND
    manifest = {
        "command": args.command,
        "argv": list(sys.argv[1:] if argv is None else argv),
        "inputs": _hash_inputs(args),
        "scenario": f"lazy {args.lazy}" if getattr(args, "lazy", None) else None,
        "class": getattr(args, "cls", None),
        "budgets": ctx["budgets"],
        "outputs": ctx["outputs"],
        "wall_seconds": round(time.monotonic() - t0, 3),
        "exit_code": code,
        "error": err,
        "summary": ctx["summary"],
        "backend": BACKEND,
        "version": __version__,
    }
    mpath = args.manifest or os.environ.get("CAUSALPOLY_MANIFEST") or "causalpoly_manifest.json"
    Path(mpath).write_text(json.dumps(manifest, indent=1, sort_keys=True,
                                      default=lambda o: str(o) if isinstance(o, Fraction) else repr(o)) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
