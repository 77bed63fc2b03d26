"""Scenario files: a YAML schema naming polytopes, circles, spaces and analyses.

Numbers are exact. Plain YAML decimals such as ``0.4`` are read as the
fraction they spell, and strings may hold arithmetic over the scenario
parameters, e.g. ``"-(1 + eps)"``. Every diagnostic carries the file
position of the offending field.
"""

from __future__ import annotations

import ast
import operator
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Optional

import yaml

from .exact_linalg import is_unimodular
from .glue_homology import NAMED_PROBLEMS, GluingError, GluingProblem
from .polytope import HalfSpace, LabeledPolytope, PolytopeError, apply_unimodular, from_halfspaces, transform_circle

ANALYSIS_KINDS = (
    "check-delzant",
    "restrict",
    "slice",
    "dh-report",
    "emin",
    "eprime",
    "wall",
    "compare-fpd",
    "glue",
    "monotone",
    "normal-bundle",
    "hirzebruch",
    "render",
)

BUNDLED = {
    "example-2.1": "example-2.1.scenario",
    "example-2.9": "example-2.9.scenario",
    "tilted-cube": "tilted-cube.scenario",
}


class ScenarioError(ValueError):
    pass


# -- YAML with positions ----------------------------------------------------


class MarkedMap(dict):
    mark = None

    def __init__(self, *a, **k):
        super().__init__(*a, **k)
        self.marks: dict = {}


class MarkedList(list):
    mark = None

    def __init__(self, *a):
        super().__init__(*a)
        self.marks: list = []


class _Loader(yaml.SafeLoader):
    pass


def _construct_map(loader, node):
    m = MarkedMap()
    m.mark = node.start_mark
    for k_node, v_node in node.value:
        key = loader.construct_object(k_node, deep=True)
        if key in m:
            raise yaml.constructor.ConstructorError(None, None, f"duplicate key {key!r}", k_node.start_mark)
        m[key] = loader.construct_object(v_node, deep=True)
        m.marks[key] = v_node.start_mark
    return m


def _construct_seq(loader, node):
    s = MarkedList()
    s.mark = node.start_mark
    for item in node.value:
        s.append(loader.construct_object(item, deep=True))
        s.marks.append(item.start_mark)
    return s


def _construct_float(loader, node):
    return Fraction(node.value.replace("_", ""))


_Loader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_MAPPING_TAG, _construct_map)
_Loader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_SEQUENCE_TAG, _construct_seq)
_Loader.add_constructor("tag:yaml.org,2002:float", _construct_float)


def _where(source: str, mark) -> str:
    if mark is None:
        return source
    return f"{source}:{mark.line + 1}:{mark.column + 1}"


class _Ctx:
    def __init__(self, source: str):
        self.source = source

    def fail(self, mark, msg: str):
        raise ScenarioError(f"{_where(self.source, mark)}: {msg}")

    def field(self, m: MarkedMap, key: str, required: bool = True, default=None):
        if not isinstance(m, dict):
            self.fail(getattr(m, "mark", None), "expected a mapping")
        if key not in m:
            if required:
                self.fail(m.mark, f"missing field '{key}'")
            return default
        return m[key]

    def mark_of(self, m, key):
        if isinstance(m, MarkedMap):
            return m.marks.get(key, m.mark)
        if isinstance(m, MarkedList) and isinstance(key, int) and key < len(m.marks):
            return m.marks[key]
        return getattr(m, "mark", None)


# -- exact expressions ------------------------------------------------------

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}
_UNOPS = {ast.USub: operator.neg, ast.UAdd: operator.pos}


def evaluate(expr, params: dict[str, Fraction]) -> Fraction:
    """Exact value of a number or an arithmetic string over ``params``."""
    if isinstance(expr, bool):
        raise ScenarioError("expected a number, got a boolean")
    if isinstance(expr, (int, Fraction)):
        return Fraction(expr)
    if not isinstance(expr, str):
        raise ScenarioError(f"expected a number or expression, got {type(expr).__name__}")
    try:
        tree = ast.parse(expr.strip(), mode="eval")
    except SyntaxError as exc:
        raise ScenarioError(f"cannot parse expression {expr!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            seg = ast.get_source_segment(expr.strip(), node)
            return Fraction(seg) if seg else Fraction(node.value)
        if isinstance(node, ast.Name):
            if node.id not in params:
                raise ScenarioError(f"unknown parameter {node.id!r}")
            return params[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Div) and right == 0:
                raise ScenarioError("division by zero")
            return _BINOPS[type(node.op)](left, right)
        if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Pow):
            base, exp = ev(node.left), ev(node.right)
            if exp.denominator != 1 or abs(exp) > 64:
                raise ScenarioError("only small integer powers are allowed")
            return base ** int(exp)
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
            return _UNOPS[type(node.op)](ev(node.operand))
        raise ScenarioError(f"unsupported syntax in {expr!r}")

    return ev(tree)


# -- the scenario ----------------------------------------------------------


@dataclass(frozen=True)
class Space:
    """A Hamiltonian circle action encoded by a polytope and a direction, or a
    space glued from two such germs along a regular overlap."""

    name: str
    polytope: Optional[str] = None
    circle: Optional[str] = None
    lower: Optional[str] = None
    upper: Optional[str] = None
    cut: Optional[tuple[Fraction, Fraction]] = None

    @property
    def glued(self) -> bool:
        return self.lower is not None


@dataclass(frozen=True)
class Analysis:
    id: str
    kind: str
    args: dict
    expect: dict
    where: str


@dataclass
class Scenario:
    name: str
    source: str
    parameters: dict[str, Fraction] = field(default_factory=dict)
    matrices: dict[str, list[list[int]]] = field(default_factory=dict)
    polytopes: dict[str, LabeledPolytope] = field(default_factory=dict)
    circles: dict[str, tuple[int, ...]] = field(default_factory=dict)
    gluings: dict[str, GluingProblem] = field(default_factory=dict)
    spaces: dict[str, Space] = field(default_factory=dict)
    analyses: list[Analysis] = field(default_factory=list)
    description: str = ""

    def value(self, expr) -> Fraction:
        return evaluate(expr, self.parameters)


def _int_vector(ctx: _Ctx, v, mark, n: Optional[int] = None) -> tuple[int, ...]:
    if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        ctx.fail(mark, "expected a list of integers")
    if n is not None and len(v) != n:
        ctx.fail(mark, f"expected {n} entries, got {len(v)}")
    return tuple(v)


def _matrix(ctx: _Ctx, v, mark) -> list[list[int]]:
    if not isinstance(v, list) or not v:
        ctx.fail(mark, "expected a non-empty list of rows")
    rows = [list(_int_vector(ctx, r, ctx.mark_of(v, i))) for i, r in enumerate(v)]
    if len({len(r) for r in rows}) != 1:
        ctx.fail(mark, "rows have different lengths")
    return rows


def _halfspaces(ctx: _Ctx, sc: Scenario, items, mark, dim: int) -> list[HalfSpace]:
    if not isinstance(items, list):
        ctx.fail(mark, "expected a list of halfspaces")
    out = []
    for i, h in enumerate(items):
        hm = ctx.mark_of(items, i)
        if not isinstance(h, dict):
            ctx.fail(hm, "halfspace must be a mapping")
        normal = _int_vector(ctx, ctx.field(h, "normal"), ctx.mark_of(h, "normal"), dim)
        try:
            offset = sc.value(ctx.field(h, "offset"))
        except ScenarioError as exc:
            ctx.fail(ctx.mark_of(h, "offset"), str(exc))
        excluded = ctx.field(h, "excluded", required=False, default=False)
        if not isinstance(excluded, bool):
            ctx.fail(ctx.mark_of(h, "excluded"), "excluded must be true or false")
        label = ctx.field(h, "label", required=False, default=None)
        try:
            out.append(HalfSpace(normal, offset, excluded, None if label is None else str(label)))
        except (PolytopeError, ValueError) as exc:
            ctx.fail(hm, str(exc))
    return out


def _build_polytopes(ctx: _Ctx, sc: Scenario, raw, mark) -> None:
    if not isinstance(raw, dict):
        ctx.fail(mark, "polytopes must be a mapping")
    descs = {}
    for name, desc in raw.items():
        descs[name] = desc
    built: dict[str, tuple[list[HalfSpace], int]] = {}

    def build(name, stack=()):
        if name in built:
            return built[name]
        if name in stack:
            ctx.fail(raw.marks.get(name), f"polytope {name!r} refers to itself")
        desc = descs[name]
        pm = raw.marks.get(name)
        if not isinstance(desc, dict):
            ctx.fail(pm, "polytope must be a mapping")
        if "base" in desc:
            base = desc["base"]
            if base not in descs:
                ctx.fail(ctx.mark_of(desc, "base"), f"unknown polytope {base!r}")
            hs, dim = build(base, stack + (name,))
            hs = list(hs)
        else:
            dim = ctx.field(desc, "dim")
            if dim not in (2, 3):
                ctx.fail(ctx.mark_of(desc, "dim"), "dim must be 2 or 3")
            hs = []
        for key in ("halfspaces", "add"):
            if key in desc:
                hs += _halfspaces(ctx, sc, desc[key], ctx.mark_of(desc, key), dim)
        built[name] = (hs, dim)
        return built[name]

    for name in descs:
        hs, dim = build(name)
        desc = descs[name]
        try:
            P = from_halfspaces(hs, dim)
        except PolytopeError as exc:
            ctx.fail(raw.marks.get(name), f"polytope {name!r}: {exc}")
        if "transform" in desc:
            tname = desc["transform"]
            if tname not in sc.matrices:
                ctx.fail(ctx.mark_of(desc, "transform"), f"unknown matrix {tname!r}")
            try:
                P = apply_unimodular(P, sc.matrices[tname])
            except (PolytopeError, ValueError) as exc:
                ctx.fail(ctx.mark_of(desc, "transform"), str(exc))
        sc.polytopes[name] = P


def _build_circles(ctx: _Ctx, sc: Scenario, raw, mark) -> None:
    if not isinstance(raw, dict):
        ctx.fail(mark, "circles must be a mapping")
    pending = dict(raw)
    while pending:
        progressed = False
        for name, desc in list(pending.items()):
            cm = raw.marks.get(name)
            if isinstance(desc, list):
                sc.circles[name] = _int_vector(ctx, desc, cm)
            elif isinstance(desc, dict):
                base = ctx.field(desc, "base")
                if base not in raw:
                    ctx.fail(ctx.mark_of(desc, "base"), f"unknown circle {base!r}")
                if base not in sc.circles:
                    continue
                tname = ctx.field(desc, "transform")
                if tname not in sc.matrices:
                    ctx.fail(ctx.mark_of(desc, "transform"), f"unknown matrix {tname!r}")
                sc.circles[name] = transform_circle(sc.circles[base], sc.matrices[tname])
            else:
                ctx.fail(cm, "circle must be a list of integers or a {base, transform} mapping")
            del pending[name]
            progressed = True
        if not progressed:
            ctx.fail(mark, "circles refer to each other in a cycle")


def _build_gluings(ctx: _Ctx, sc: Scenario, raw, mark) -> None:
    if not isinstance(raw, dict):
        ctx.fail(mark, "gluings must be a mapping")
    for name, desc in raw.items():
        gm = raw.marks.get(name)
        if not isinstance(desc, dict):
            ctx.fail(gm, "gluing must be a mapping")
        try:
            if "fixture" in desc:
                fx = desc["fixture"]
                if fx not in NAMED_PROBLEMS:
                    ctx.fail(ctx.mark_of(desc, "fixture"), f"unknown gluing fixture {fx!r}")
                sc.gluings[name] = NAMED_PROBLEMS[fx]()
                continue
            G = _matrix(ctx, ctx.field(desc, "G"), ctx.mark_of(desc, "G"))
            sc.gluings[name] = GluingProblem(
                len(G),
                tuple(map(tuple, _matrix(ctx, ctx.field(desc, "A_minus"), ctx.mark_of(desc, "A_minus")))),
                tuple(map(tuple, _matrix(ctx, ctx.field(desc, "A_plus"), ctx.mark_of(desc, "A_plus")))),
                tuple(map(tuple, G)),
                int(desc.get("free_rank", 0)),
                name,
            )
        except GluingError as exc:
            ctx.fail(gm, str(exc))


def _build_spaces(ctx: _Ctx, sc: Scenario, raw, mark) -> None:
    if not isinstance(raw, dict):
        ctx.fail(mark, "spaces must be a mapping")
    for name, desc in raw.items():
        sm = raw.marks.get(name)
        if not isinstance(desc, dict):
            ctx.fail(sm, "space must be a mapping")
        if "glue" in desc:
            g = desc["glue"]
            lower, upper = ctx.field(g, "lower"), ctx.field(g, "upper")
            for key, ref in (("lower", lower), ("upper", upper)):
                if ref not in raw or "glue" in raw[ref]:
                    ctx.fail(ctx.mark_of(g, key), f"{key} must name a polytope space, got {ref!r}")
            cut = ctx.field(g, "cut")
            if not isinstance(cut, list) or len(cut) != 2:
                ctx.fail(ctx.mark_of(g, "cut"), "cut must be a pair [a, b]")
            try:
                a, b = (sc.value(x) for x in cut)
            except ScenarioError as exc:
                ctx.fail(ctx.mark_of(g, "cut"), str(exc))
            if not a < b:
                ctx.fail(ctx.mark_of(g, "cut"), "cut must satisfy a < b")
            sc.spaces[name] = Space(name, lower=lower, upper=upper, cut=(a, b))
            continue
        P, xi = ctx.field(desc, "polytope"), ctx.field(desc, "circle")
        if P not in sc.polytopes:
            ctx.fail(ctx.mark_of(desc, "polytope"), f"unknown polytope {P!r}")
        if xi not in sc.circles:
            ctx.fail(ctx.mark_of(desc, "circle"), f"unknown circle {xi!r}")
        if len(sc.circles[xi]) != sc.polytopes[P].dim:
            ctx.fail(ctx.mark_of(desc, "circle"), "circle and polytope dimensions differ")
        sc.spaces[name] = Space(name, polytope=P, circle=xi)


_REFS = {
    "polytope": "polytopes",
    "space": "spaces",
    "left": "spaces",
    "right": "spaces",
    "problem": "gluings",
}


def _build_analyses(ctx: _Ctx, sc: Scenario, raw, mark) -> None:
    if raw is None:
        return
    if not isinstance(raw, list):
        ctx.fail(mark, "analyses must be a list")
    seen = set()
    for i, item in enumerate(raw):
        am = ctx.mark_of(raw, i)
        if not isinstance(item, dict):
            ctx.fail(am, "analysis must be a mapping")
        kind = ctx.field(item, "kind")
        if kind not in ANALYSIS_KINDS:
            ctx.fail(ctx.mark_of(item, "kind"), f"unknown analysis {kind!r}; expected one of {', '.join(ANALYSIS_KINDS)}")
        aid = str(item.get("id", f"{kind}-{i + 1}"))
        if aid in seen:
            ctx.fail(ctx.mark_of(item, "id"), f"duplicate analysis id {aid!r}")
        seen.add(aid)
        for key, table in _REFS.items():
            if key in item and item[key] not in getattr(sc, table):
                ctx.fail(ctx.mark_of(item, key), f"unknown {key} {item[key]!r}")
        expect = item.get("expect", {}) or {}
        if not isinstance(expect, dict):
            ctx.fail(ctx.mark_of(item, "expect"), "expect must be a mapping")
        args = {k: v for k, v in item.items() if k not in ("id", "kind", "expect")}
        sc.analyses.append(Analysis(aid, kind, args, dict(expect), _where(ctx.source, am)))


def parse_text(text: str, source: str = "<scenario>", overrides: Optional[dict] = None) -> Scenario:
    ctx = _Ctx(source)
    try:
        doc = yaml.load(text, Loader=_Loader)
    except yaml.MarkedYAMLError as exc:
        mk = exc.problem_mark or exc.context_mark
        raise ScenarioError(f"{_where(source, mk)}: {exc.problem or exc.context}") from exc
    except yaml.YAMLError as exc:
        raise ScenarioError(f"{source}: {exc}") from exc
    if doc is None:
        doc = MarkedMap()
    if not isinstance(doc, dict):
        raise ScenarioError(f"{source}: scenario must be a mapping at the top level")
    known = {"name", "description", "parameters", "matrices", "polytopes", "circles", "gluings", "spaces", "analyses"}
    for key in doc:
        if key not in known:
            ctx.fail(doc.marks.get(key), f"unknown top-level field {key!r}")
    sc = Scenario(str(doc.get("name", Path(source).stem)), source, description=str(doc.get("description", "")))
    params = doc.get("parameters", {}) or {}
    for key, val in params.items():
        try:
            sc.parameters[key] = evaluate(val, sc.parameters)
        except ScenarioError as exc:
            ctx.fail(params.marks.get(key), str(exc))
    for key, val in (overrides or {}).items():
        if key not in sc.parameters:
            raise ScenarioError(f"{source}: cannot override unknown parameter {key!r}")
        sc.parameters[key] = evaluate(val, sc.parameters)
    for name, M in (doc.get("matrices", {}) or {}).items():
        mm = doc["matrices"].marks.get(name)
        rows = _matrix(ctx, M, mm)
        if len(rows) != len(rows[0]) or not is_unimodular(rows):
            ctx.fail(mm, f"matrix {name!r} must be square and unimodular")
        sc.matrices[name] = rows
    _build_polytopes(ctx, sc, doc.get("polytopes", MarkedMap()) or MarkedMap(), doc.marks.get("polytopes"))
    _build_circles(ctx, sc, doc.get("circles", MarkedMap()) or MarkedMap(), doc.marks.get("circles"))
    _build_gluings(ctx, sc, doc.get("gluings", MarkedMap()) or MarkedMap(), doc.marks.get("gluings"))
    _build_spaces(ctx, sc, doc.get("spaces", MarkedMap()) or MarkedMap(), doc.marks.get("spaces"))
    _build_analyses(ctx, sc, doc.get("analyses"), doc.marks.get("analyses"))
    return sc


def parse_scenario(path, overrides: Optional[dict] = None) -> Scenario:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"{path}: cannot read scenario ({exc.strerror})") from exc
    return parse_text(text, str(path), overrides)


def bundled_path(name: str) -> Path:
    if name not in BUNDLED:
        raise ScenarioError(f"unknown bundled scenario {name!r}; choose from {', '.join(sorted(BUNDLED))}")
    return Path(str(resources.files("semifree") / "data" / BUNDLED[name]))


def load_bundled(name: str, overrides: Optional[dict] = None) -> Scenario:
    path = bundled_path(name)
    text = path.read_text(encoding="utf-8")
    return parse_text(text, BUNDLED[name], overrides)
