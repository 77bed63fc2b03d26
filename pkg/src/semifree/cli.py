"""Command line interface and scenario reports.

Every subcommand builds one analysis and runs it through the same code as
``report``, so a scenario file and a command line give identical output.

Exit status: 0 when every requested analysis ran and met its expectations,
1 when an analysis failed or raised, 2 on usage or scenario errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

from . import __version__
from .circle_action import critical_values, fixed_components, poincare_polynomial, semifree_check
from .exceptional import FormVector, emin_set, eprime_set
from .fixed_point_data import (
    FULL,
    MODES,
    SAME,
    FixedPointData,
    all_normal_bundle_checks,
    compare_fpd,
    extract_fpd,
    merge_germs,
    monotone_check,
)
from .glue_homology import NAMED_PROBLEMS, classes_equal, glued_class, hirzebruch_euler_rigidity, mv_presentation
from .morse_wall import cross_level, euler_minus_plus
from .polygon import Affine, Quadratic, format_affine, format_fraction
from .polytope import check_delzant, slice_polygon
from .reduced_space import reduced_space, reduced_volume_profile, self_intersection
from .render import fixed_edges_at, render_slice
from .scenario import (
    BUNDLED,
    Analysis,
    Scenario,
    ScenarioError,
    evaluate,
    load_bundled,
    parse_scenario,
)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class AnalysisError(ValueError):
    pass


# -- JSON --------------------------------------------------------------------


def jsonable(x: Any) -> Any:
    """Plain JSON data: fractions as strings, tuples as lists, sets sorted."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return format_fraction(x)
    if isinstance(x, Affine):
        return format_affine(x)
    if isinstance(x, Quadratic):
        return format_quadratic(x)
    if dataclasses.is_dataclass(x) and not isinstance(x, type):
        return {f.name: jsonable(getattr(x, f.name)) for f in dataclasses.fields(x) if f.compare}
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (set, frozenset)):
        return sorted((jsonable(v) for v in x), key=lambda v: json.dumps(v, sort_keys=True))
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return str(x)


def format_quadratic(q: Quadratic, var: str = "t") -> str:
    terms = []
    for c, mono in ((q.c0, ""), (q.c1, var), (q.c2, f"{var}^2")):
        if c == 0:
            continue
        mag = format_fraction(abs(c))
        body = mono if mono and abs(c) == 1 else (f"{mag}*{mono}" if mono else mag)
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    head = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    return " ".join([head] + [f"{s} {b}" for s, b in terms[1:]])


def dumps(doc: Any) -> str:
    return json.dumps(jsonable(doc), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# -- helpers -------------------------------------------------------------------


class _Run:
    def __init__(self, sc: Scenario, a: Analysis):
        self.sc = sc
        self.a = a
        self.checks: list[dict] = []

    def arg(self, key: str, default=None, required: bool = False):
        if key in self.a.args:
            return self.a.args[key]
        if required:
            raise AnalysisError(f"analysis {self.a.id!r} needs '{key}'")
        return default

    def value(self, expr) -> Fraction:
        return evaluate(expr, self.sc.parameters)

    def check(self, name: str, expected, actual) -> None:
        self.checks.append({"name": name, "ok": jsonable(expected) == jsonable(actual),
                            "expected": jsonable(expected), "actual": jsonable(actual)})

    def expect(self, key: str, actual, transform: Callable = lambda v: v) -> None:
        if key in self.a.expect:
            self.check(key, transform(self.a.expect[key]), actual)

    def polytope(self, key="polytope"):
        name = self.arg(key, required=True)
        if name not in self.sc.polytopes:
            raise AnalysisError(f"unknown polytope {name!r}")
        return self.sc.polytopes[name]

    def space(self, key="space"):
        name = self.arg(key)
        if name is None:
            if not self.sc.spaces:
                raise AnalysisError("scenario defines no spaces")
            name = next(iter(self.sc.spaces))
        if name not in self.sc.spaces:
            raise AnalysisError(f"unknown space {name!r}")
        return self.sc.spaces[name]

    def action(self, key="space"):
        sp = self.space(key)
        if sp.glued:
            raise AnalysisError(f"space {sp.name!r} is glued; this analysis needs a polytope encoding")
        return self.sc.polytopes[sp.polytope], self.sc.circles[sp.circle]

    def fpd(self, key) -> FixedPointData:
        sp = self.space(key)
        if not sp.glued:
            P, xi = self.sc.polytopes[sp.polytope], self.sc.circles[sp.circle]
            return extract_fpd(P, xi, sp.name)
        lo, hi = self.sc.spaces[sp.lower], self.sc.spaces[sp.upper]
        d_lo = extract_fpd(self.sc.polytopes[lo.polytope], self.sc.circles[lo.circle], lo.name)
        d_hi = extract_fpd(self.sc.polytopes[hi.polytope], self.sc.circles[hi.circle], hi.name)
        return merge_germs(d_lo, d_hi, sp.cut, sp.name)

    def interval(self, key="interval"):
        iv = self.arg(key, required=True)
        if not isinstance(iv, (list, tuple)) or len(iv) != 2:
            raise AnalysisError(f"'{key}' must be a pair [a, b]")
        return tuple(self.value(x) for x in iv)


def _point(p) -> str:
    return "(" + ",".join(format_fraction(x) for x in p) + ")"


def _polygon_table(poly, t=None) -> list[dict]:
    lengths = poly.lengths()
    rows = []
    for i, e in enumerate(poly.edges):
        row = {"carriers": list(e.carriers), "normal": list(e.normal), "offset": e.offset,
               "length": lengths[i] if t is None else lengths[i](t)}
        if poly.compact:
            row["self_intersection"] = self_intersection(poly, i)
        rows.append(row)
    return rows


# -- analyses --------------------------------------------------------------------


def _check_delzant(r: _Run) -> dict:
    P = r.polytope()
    rep = check_delzant(P)
    verts = sorted(_point(v.point) for v in P.vertices)
    r.expect("ok", rep.ok)
    r.expect("vertices", verts, lambda v: sorted(_point(tuple(r.value(x) for x in p)) for p in v))
    r.expect("open_edges", len(P.open_edges()))
    return {
        "ok": rep.ok,
        "vertices": [
            {"point": _point(v.point), "determinant": v.determinant, "ok": v.ok,
             "directions": [list(d) for d in v.directions]}
            for v in rep.vertices
        ],
        "edges": len(P.edges),
        "open_edges": len(P.open_edges()),
    }


def _restrict(r: _Run) -> dict:
    P, xi = r.action()
    rep = semifree_check(P, xi)
    out = {"circle": list(xi), "semifree": rep.ok, "violating_edges": list(rep.violators)}
    r.expect("semifree", rep.ok)
    if rep.ok:
        comps = fixed_components(P, xi)
        out["critical_values"] = critical_values(P, xi)
        out["components"] = [
            {"kind": c.kind, "level": c.level, "index": c.index, "weights": list(c.weights),
             "size": c.size, "facets": sorted(P.labels(c.facets))}
            for c in comps
        ]
        out["poincare"] = poincare_polynomial(P, xi)
        r.expect("levels", out["critical_values"], lambda v: [r.value(x) for x in v])
        r.expect("components", len(comps))
    return out


def _slice(r: _Run) -> dict:
    P, xi = r.action()
    if "interval" in r.a.args:
        poly = slice_polygon(P, xi, interval=r.interval())
        t = None
    else:
        t = r.value(r.arg("level", required=True))
        poly = slice_polygon(P, xi, t)
    out = {"edges": _polygon_table(poly, t), "compact": poly.compact}
    if t is not None:
        out["level"] = t
        out["vertices"] = [_point(v) for v in poly.vertices_at(t)]
        out["area"] = poly.area()(t)
    else:
        out["interval"] = list(poly.interval)
    if poly.compact:
        R = reduced_space(poly)
        out["diffeo_type"] = R.lattice.diffeo_type
        out["classes"] = [R.lattice.format_class(c) for c in R.lattice.edge_classes]
        out["rigid_per_catalog"] = R.lattice.rigid_per_catalog
        r.expect("diffeo_type", R.lattice.diffeo_type)
        sis = {",".join(e.carriers): self_intersection(poly, i) for i, e in enumerate(poly.edges)}
        if "self_intersections" in r.a.expect:
            exp = r.a.expect["self_intersections"]
            r.check("self_intersections", dict(exp), {k: sis.get(k) for k in exp})
    r.expect("edge_count", len(poly.edges))
    return out


def _resolve_class(r: _Run, poly, desc) -> int:
    if not isinstance(desc, dict):
        raise AnalysisError("class must be {edge: carrier} or {sphere_of: space, level: t}")
    if "edge" in desc:
        label = desc["edge"]
    elif "sphere_of" in desc:
        sp = r.sc.spaces.get(desc["sphere_of"])
        if sp is None or sp.glued:
            raise AnalysisError(f"sphere_of needs a polytope space, got {desc['sphere_of']!r}")
        P, xi = r.sc.polytopes[sp.polytope], r.sc.circles[sp.circle]
        w = cross_level(P, xi, r.value(desc.get("level", 0)))
        traces = [s for s in w.spheres if s.below_edge is not None]
        if len(traces) != 1:
            raise AnalysisError(f"{sp.name} has {len(traces)} fixed spheres at that level; expected one")
        label = w.below.polygon.edges[traces[0].below_edge].carriers[0]
    else:
        raise AnalysisError("class must be {edge: carrier} or {sphere_of: space, level: t}")
    i = poly.edge_by_carrier(label)
    if i is None:
        raise AnalysisError(f"no edge carried by {label!r}")
    return i


def _dh_report(r: _Run) -> dict:
    P, xi = r.action()
    iv = r.interval()
    poly = slice_polygon(P, xi, interval=iv)
    R = reduced_space(poly)
    lengths = poly.lengths()
    out = {"interval": list(iv), "diffeo_type": R.lattice.diffeo_type, "profiles": {}, "volume": poly.area()}
    picked = {}
    for name, desc in (r.arg("classes", {}) or {}).items():
        i = _resolve_class(r, poly, desc)
        picked[name] = lengths[i]
        out["profiles"][name] = {
            "carrier": poly.edges[i].carriers[0],
            "class": R.lattice.format_class(R.lattice.edge_classes[i]),
            "area": lengths[i],
            "slope": int(lengths[i].b),
        }
    if "profiles" in r.a.expect:
        exp = {k: str(v) for k, v in r.a.expect["profiles"].items()}
        r.check("profiles", exp, {k: format_affine(picked[k]) if k in picked else None for k in exp})
    if "slopes" in r.a.expect:
        exp = dict(r.a.expect["slopes"])
        r.check("slopes", exp, {k: int(picked[k].b) if k in picked else None for k in exp})
    if "distinct" in r.a.expect:
        a, b = r.a.expect["distinct"]
        diff = picked[a] - picked[b]
        lo, hi = iv
        # an affine function vanishes somewhere in (lo, hi) iff it changes sign or is zero
        zero_inside = (diff.b == 0 and diff.a == 0) or (diff.b != 0 and lo < -diff.a / diff.b < hi)
        out["difference"] = diff
        r.check(f"{a} and {b} differ on the open interval", True, not zero_inside)
    if "volume_interval" in r.a.args:
        vp = reduced_volume_profile(P, xi, r.interval("volume_interval"))
        out["volume_profile"] = {
            "pieces": [{"interval": list(p.interval), "area": p.area} for p in vp.pieces],
            "critical": [{"level": l, "area": a} for l, a in vp.critical],
            "continuous": vp.one_sided_continuous(),
        }
        r.expect("continuous", vp.one_sided_continuous())
    return out


def _emin(r: _Run) -> dict:
    form = r.arg("form", required=True)
    vals = [r.value(x) for x in form]
    v = FormVector(vals[0], tuple(vals[1:]))
    s = sorted(str(x) for x in emin_set(v))
    r.expect("classes", s, lambda v: sorted(str(x) for x in v))
    return {"form": str(v), "emin": s}


def _wall(r: _Run) -> dict:
    P, xi = r.action()
    lam = r.value(r.arg("level", required=True))
    w = cross_level(P, xi, lam)
    ep = euler_minus_plus(P, xi, lam)
    lat = w.at.lattice
    out = {
        "level": lam,
        "critical_slice": lat.diffeo_type,
        "basis": list(lat.basis),
        "D": [w.below.lattice.format_class(c) for c in w.D] if w.below else [],
        "D_plus": [w.above.lattice.format_class(c) for c in w.D_plus] if w.above else [],
        "D_sph": [w.below.lattice.format_class(c) for c in w.D_sph] if w.below else [],
        "e_minus": list(ep.e_minus) if ep.e_minus is not None else None,
        "e_plus": list(ep.e_plus) if ep.e_plus is not None else None,
        "spheres": [
            {"class": lat.format_class(lat.edge_classes[s.at_edge]),
             "self_intersection": lat.pair(lat.edge_classes[s.at_edge], lat.edge_classes[s.at_edge]),
             "e_minus": w.e_minus(lat.edge_classes[s.at_edge]) if w.below else None,
             "e_plus": w.e_plus(lat.edge_classes[s.at_edge]) if w.above else None}
            for s in w.spheres
        ],
    }
    if w.below:
        out["D_areas"] = [w.below.space.area(c) for c in w.D]
    r.expect("D_count", len(out["D"]))
    r.expect("D_sph_count", len(out["D_sph"]))
    if "e_minus_differs" in r.a.expect:
        r.check("e_minus_differs", r.a.expect["e_minus_differs"], ep.e_minus != ep.e_plus)
    return out


def _eprime(r: _Run) -> dict:
    P, xi = r.action()
    lam = r.value(r.arg("level", required=True))
    w = cross_level(P, xi, lam)
    rep = eprime_set(w, check=False)
    out = {"level": lam, "sample": rep.sample, "eprime": sorted(map(str, rep.eprime)),
           "D": sorted(map(str, rep.D)), "agree": rep.agree}
    r.expect("agree", rep.agree)
    r.expect("count", len(rep.eprime))
    return out


def _compare(r: _Run) -> dict:
    mode = r.arg("mode", FULL)
    if mode not in MODES:
        raise AnalysisError(f"mode must be one of {', '.join(MODES)}")
    d1, d2 = r.fpd("left"), r.fpd("right")
    rep = compare_fpd(d1, d2, mode)
    out = {"mode": mode, "verdict": rep.verdict, "reasons": list(rep.reasons),
           "levels": [{"level": v.level, "ok": v.ok, "reasons": list(v.reasons)} for v in rep.levels],
           "left": d1, "right": d2}
    r.expect("verdict", rep.verdict, lambda v: SAME if v == "same" else v)
    return out


def _parse_side_class(item):
    if isinstance(item, str):
        side, _, coeffs = item.partition(":")
        return side.strip(), tuple(int(x) for x in coeffs.split(","))
    side, coeffs = item
    return str(side), tuple(int(x) for x in coeffs)


def _glue(r: _Run) -> dict:
    name = r.arg("problem", required=True)
    if name in r.sc.gluings:
        problem = r.sc.gluings[name]
    elif name in NAMED_PROBLEMS:
        problem = NAMED_PROBLEMS[name]()
    else:
        raise AnalysisError(f"unknown gluing {name!r}")
    pres = mv_presentation(problem)
    out = {"problem": name, "H2": pres.describe(), "invariant_factors": list(pres.invariant_factors),
           "rank": pres.rank}
    r.expect("H2", pres.describe())
    pair = r.arg("compare")
    if pair is not None:
        x, y = (_parse_side_class(p) for p in pair)
        eq = classes_equal(pres, x, y)
        out["compare"] = {"x": {"side": x[0], "class": list(x[1]), "image": glued_class(pres, *x)},
                          "y": {"side": y[0], "class": list(y[1]), "image": glued_class(pres, *y)},
                          "equal": eq}
        r.expect("equal", eq)
    return out


def _monotone(r: _Run) -> dict:
    rep = monotone_check(r.fpd("space"))
    r.expect("ok", rep.ok)
    r.expect("reasons", list(rep.reasons), list)
    return {"ok": rep.ok, "failures": [{"reason": a, "level": b} for a, b in rep.failures]}


def _normal_bundle(r: _Run) -> dict:
    P, xi = r.action()
    rows = []
    for c, rep in all_normal_bundle_checks(P, xi):
        rows.append({"level": c.level, "facets": sorted(P.labels(c.facets)), "c_minus": rep.c_minus,
                     "c_plus": rep.c_plus, "c": rep.c, "ok": rep.ok})
    ok = all(x["ok"] for x in rows)
    r.expect("ok", ok)
    r.expect("spheres", len(rows))
    return {"spheres": rows, "ok": ok}


def _hirzebruch(r: _Run) -> dict:
    ks = r.arg("k", list(range(11)))
    ks = ks if isinstance(ks, list) else [ks]
    certs = [hirzebruch_euler_rigidity(int(k)) for k in ks]
    forced = all(c.forced_zero for c in certs)
    r.expect("forced_zero", forced)
    return {"certificates": [{"k": c.k, "solutions": sorted(c.solutions), "reason": c.reason} for c in certs],
            "forced_zero": forced}


def _render(r: _Run) -> dict:
    P, xi = r.action()
    lam = r.value(r.arg("level", required=True))
    basis = r.arg("basis")
    svg = render_slice(P, xi, lam, basis=basis)
    poly = slice_polygon(P, xi, lam, basis=basis)
    fixed = fixed_edges_at(P, xi, poly, lam)
    out = {"level": lam, "fixed_edges": [",".join(poly.edges[i].carriers) for i in fixed],
           "bytes": len(svg.encode())}
    if "top_edge_fixed" in r.a.expect:
        verts = poly.vertices_at(lam)
        top = max(y for _, y in verts)
        tops = [i for i in range(len(poly.edges)) if verts[i - 1][1] == verts[i][1] == top]
        r.check("top_edge_fixed", r.a.expect["top_edge_fixed"], bool(tops) and set(tops) <= set(fixed))
    r.expect("fixed_count", len(fixed))
    r._svg = svg  # kept for the render subcommand
    return out


RUNNERS: dict[str, Callable[[_Run], dict]] = {
    "check-delzant": _check_delzant,
    "restrict": _restrict,
    "slice": _slice,
    "dh-report": _dh_report,
    "emin": _emin,
    "eprime": _eprime,
    "wall": _wall,
    "compare-fpd": _compare,
    "glue": _glue,
    "monotone": _monotone,
    "normal-bundle": _normal_bundle,
    "hirzebruch": _hirzebruch,
    "render": _render,
}


def run_analysis(sc: Scenario, a: Analysis) -> tuple[dict, Optional[_Run]]:
    run = _Run(sc, a)
    entry = {"id": a.id, "kind": a.kind}
    try:
        entry["result"] = RUNNERS[a.kind](run)
        entry["checks"] = run.checks
        entry["ok"] = all(c["ok"] for c in run.checks)
    except Exception as exc:  # collected per analysis, never fatal for the report
        entry["error"] = f"{type(exc).__name__}: {exc}"
        entry["checks"] = run.checks
        entry["ok"] = False
    return entry, run


def run_report(sc: Scenario) -> dict:
    """Run every analysis; errors are recorded, not raised."""
    entries = [run_analysis(sc, a)[0] for a in sc.analyses]
    return {
        "scenario": sc.name,
        "description": sc.description,
        "parameters": sc.parameters,
        "analyses": entries,
        "ok": all(e["ok"] for e in entries),
        "note": "fixed point data verdicts are combinatorial; no symplectomorphism is constructed",
    }


def render_svg(sc: Scenario, space: Optional[str], level, basis=None) -> str:
    args = {"level": level}
    if space:
        args["space"] = space
    if basis:
        args["basis"] = basis
    _, run = run_analysis(sc, Analysis("render", "render", args, {}, "<cli>"))
    if not hasattr(run, "_svg"):
        raise AnalysisError("render failed")
    return run._svg


# -- command line -------------------------------------------------------------------


def _load(args) -> Scenario:
    overrides = dict(kv.split("=", 1) for kv in (args.param or []))
    src = args.scenario
    if src is None:
        return Scenario("command-line", "<cli>")
    if not Path(src).exists() and src in BUNDLED:
        return load_bundled(src, overrides)
    return parse_scenario(src, overrides)


def _selector_args(args) -> dict:
    out = {}
    for key in ("space", "polytope", "left", "right", "problem", "mode"):
        v = getattr(args, key, None)
        if v is not None:
            out[key] = v
    if getattr(args, "level", None) is not None:
        out["level"] = args.level
    if getattr(args, "interval", None) is not None:
        out["interval"] = [x.strip() for x in args.interval.split(",")]
    return out


def _emit(args, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _single(args, kind: str, extra: Optional[dict] = None) -> int:
    sc = _load(args)
    a = Analysis(kind, kind, {**_selector_args(args), **(extra or {})}, {}, "<cli>")
    if kind == "check-delzant" and "polytope" not in a.args:
        if not sc.polytopes:
            raise ScenarioError("scenario defines no polytopes")
        a.args["polytope"] = next(iter(sc.polytopes))
    entry, run = run_analysis(sc, a)
    if kind == "render" and args.format == "svg":
        if not entry["ok"]:
            sys.stderr.write(entry.get("error", "render failed") + "\n")
            return EXIT_FAILED
        _emit(args, run._svg)
        return EXIT_OK
    _emit(args, dumps(entry))
    return EXIT_OK if entry["ok"] else EXIT_FAILED


def _cmd_report(args) -> int:
    sc = _load(args)
    rep = run_report(sc)
    _emit(args, dumps(rep))
    return EXIT_OK if rep["ok"] else EXIT_FAILED


def _cmd_verify(args) -> int:
    overrides = dict(kv.split("=", 1) for kv in (args.param or []))
    sc = load_bundled(args.fixture, overrides)
    rep = run_report(sc)
    if args.output:
        Path(args.output).write_text(dumps(rep), encoding="utf-8")
    for e in rep["analyses"]:
        status = "PASS" if e["ok"] else "FAIL"
        detail = e.get("error", "")
        failed = [c["name"] for c in e["checks"] if not c["ok"]]
        if failed:
            detail = (detail + " " if detail else "") + "failed checks: " + ", ".join(failed)
        sys.stdout.write(f"{status} {e['id']}" + (f"  ({detail})" if detail else "") + "\n")
    sys.stdout.write(("verified " if rep["ok"] else "NOT verified ") + sc.name + "\n")
    return EXIT_OK if rep["ok"] else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semifree",
        description="Exact computations for semi-free circle actions encoded by momentum polytopes.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", help="scenario file, or the name of a bundled scenario")
    common.add_argument("--output", help="write output to this file instead of stdout")
    common.add_argument("--format", choices=("json", "svg"), default="json")
    common.add_argument("--param", action="append", metavar="NAME=EXPR", help="override a scenario parameter")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_, *opts):
        p = sub.add_parser(name, parents=[common], help=help_)
        for o in opts:
            p.add_argument(f"--{o}")
        return p

    add("check-delzant", "Delzant test at every vertex", "polytope")
    add("restrict", "semi-free test and fixed components of the circle", "space")
    add("slice", "reduced-space polygon at a level or over an interval", "space", "level", "interval")
    p = add("dh-report", "area profiles of edges over a regular interval", "space", "interval")
    p.add_argument("--edge", action="append", help="carrier label of an edge to profile (repeatable)")
    p = add("emin", "exceptional classes of minimal area for a blowup form")
    p.add_argument("--form", required=True, help="alpha;delta_1,...,delta_k e.g. '9;4,4,1'")
    add("eprime", "the set E' at a critical level and its comparison with D", "space", "level")
    add("wall", "class bookkeeping across a critical level", "space", "level")
    add("compare-fpd", "compare fixed point data of two spaces", "left", "right", "mode")
    p = add("glue", "second homology after regluing", "problem")
    p.add_argument("--class", dest="classes", action="append", metavar="SIDE:COEFFS",
                   help="a side class such as '-:0,1'; give two to compare")
    add("monotone", "monotone constraints on fixed point data", "space")
    add("render", "SVG of the slice at a level with fixed spheres in red", "space", "level")
    add("report", "run every analysis of the scenario")
    p = sub.add_parser("verify", parents=[common], help="run a bundled scenario and check its assertions")
    p.add_argument("fixture", choices=sorted(BUNDLED))
    return parser


_VALUE_FLAGS = ("--level", "--interval", "--class", "--param", "--form")


def _attach_negative_values(argv: Sequence[str]) -> list[str]:
    """Rewrite ``--level -1/5`` as ``--level=-1/5`` so argparse accepts it."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
            else:
                out.append(f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_attach_negative_values(sys.argv[1:] if argv is None else list(argv)))
    try:
        cmd = args.command
        if cmd == "report":
            return _cmd_report(args)
        if cmd == "verify":
            return _cmd_verify(args)
        if cmd == "emin":
            head, _, tail = args.form.partition(";")
            return _single(args, "emin", {"form": [head] + [x for x in tail.split(",") if x.strip()]})
        if cmd == "dh-report":
            extra = {"classes": {e: {"edge": e} for e in (args.edge or [])}}
            return _single(args, "dh-report", extra)
        if cmd == "glue":
            extra = {"compare": args.classes} if args.classes else {}
            if args.classes and len(args.classes) != 2:
                parser.error("--class must be given exactly twice")
            return _single(args, "glue", extra)
        return _single(args, cmd)
    except ScenarioError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
