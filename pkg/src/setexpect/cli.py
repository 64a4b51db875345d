"""Command-line interface: parse scenario instances, run computations, render results.

Instance documents are JSON objects::

    {
      "probs": [0.5, 0.5],
      "sets": {"X": {"cone": {"kind": "wedge", "dirs": [[-1, 0], [0, -1]]},
                     "values": [{"vertices": [[0, 0]], "cone": {...}}, ...]}},
      "vectors": {"xi": [[0, 0], [1, -1]]},
      "family": {"kind": "avar", "alpha": 0.7},
      "grid_size": 3600,
      "seed": 0
    }

Exit codes: 0 success, 2 validation error, 3 capacity guard, 4 empty result
where a non-empty one was required.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import set_expectation as se
from .errors import CapacityError, DomainError, EmptyResultError
from .geometry import Cone2, ConvexSet2, DirectionGrid, intersect_halfspaces
from .numeric_expectation import AVaR, DensityBand, Expectation, MaxOfN, RepresentingFamily
from .random_set import RandomConvexSet, selection_expectation
from .risk_depth import (
    PROVENANCES,
    SampleOfSets,
    depth,
    flag_outliers,
    is_acceptable,
    make_portfolio,
    risk_set,
)
from .scenario import RandomScalar, RandomVector2, ScenarioSpace

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CAPACITY = 3
EXIT_EMPTY = 4


class ParseError(DomainError):
    """Schema violation; the message starts with the offending JSON path."""


@dataclass
class Instance:
    space: ScenarioSpace
    sets: dict[str, RandomConvexSet] = field(default_factory=dict)
    vectors: dict[str, RandomVector2] = field(default_factory=dict)
    family: RepresentingFamily = field(default_factory=Expectation)
    family_doc: dict = field(default_factory=lambda: {"kind": "expectation"})
    grid_size: int = se.DEFAULT_GRID
    seed: int = 0


# ----------------------------------------------------------------------
# parsing


def _fail(path: str, msg: str):
    raise ParseError(f"{path}: {msg}")


def _number(x, path: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        _fail(path, f"expected a number, got {type(x).__name__}")
    if not math.isfinite(x):
        _fail(path, "expected a finite number")
    return float(x)


def _point(x, path: str) -> tuple[float, float]:
    if not isinstance(x, list) or len(x) != 2:
        _fail(path, "expected a pair [x, y]")
    return _number(x[0], f"{path}[0]"), _number(x[1], f"{path}[1]")


def _points(x, path: str) -> np.ndarray:
    if not isinstance(x, list):
        _fail(path, "expected a list of points")
    return np.array([_point(p, f"{path}[{i}]") for i, p in enumerate(x)], dtype=float).reshape(-1, 2)


def _object(x, path: str) -> dict:
    if not isinstance(x, dict):
        _fail(path, "expected an object")
    return x


def parse_cone(doc, path: str = "$.cone") -> Cone2:
    """Cone from ``{"kind": ..., "dirs": [...]}``; also accepts the names of the two quadrants."""
    doc = _object(doc, path)
    kind = doc.get("kind")
    if kind == "lower_quadrant":
        return Cone2.lower_quadrant()
    if kind == "upper_quadrant":
        return Cone2.upper_quadrant()
    if kind not in ("zero", "full", "ray", "wedge", "halfplane", "line"):
        _fail(f"{path}.kind", f"unknown cone kind {kind!r}")
    dirs = []
    for i, d in enumerate(doc.get("dirs", [])):
        x, y = _point(d, f"{path}.dirs[{i}]")
        norm = math.hypot(x, y)
        if norm == 0.0:
            _fail(f"{path}.dirs[{i}]", "direction must be nonzero")
        # keep unit input bit-exact so that rendered cones parse back identically
        dirs.append((x, y) if abs(norm - 1.0) <= 1e-12 else (x / norm, y / norm))
    try:
        return Cone2(kind, tuple(dirs))
    except DomainError as exc:
        _fail(path, str(exc))


def parse_set(doc, path: str = "$") -> ConvexSet2:
    """Convex set from ``{"vertices": [...], "cone": {...}}`` or ``{"empty": true}``."""
    doc = _object(doc, path)
    if doc.get("empty") is True:
        return ConvexSet2.empty()
    if "vertices" not in doc:
        _fail(path, "missing 'vertices'")
    pts = _points(doc["vertices"], f"{path}.vertices")
    cone = parse_cone(doc["cone"], f"{path}.cone") if "cone" in doc else Cone2.zero()
    try:
        return ConvexSet2(pts, cone)
    except DomainError as exc:
        _fail(path, str(exc))


def parse_family(doc, space: ScenarioSpace, path: str = "$.family") -> RepresentingFamily:
    doc = _object(doc, path)
    kind = doc.get("kind")
    try:
        if kind == "expectation":
            return Expectation()
        if kind == "avar":
            return AVaR(_number(doc.get("alpha"), f"{path}.alpha"))
        if kind == "max_of_n":
            n = doc.get("n")
            if not isinstance(n, int) or isinstance(n, bool):
                _fail(f"{path}.n", "expected an integer")
            return MaxOfN(n)
        if kind == "band":
            lo = [_number(v, f"{path}.lower[{i}]") for i, v in enumerate(doc.get("lower", []))]
            hi = [_number(v, f"{path}.upper[{i}]") for i, v in enumerate(doc.get("upper", []))]
            if len(lo) != space.n or len(hi) != space.n:
                _fail(path, f"band bounds need {space.n} entries each")
            return DensityBand(RandomScalar(space, np.array(lo)), RandomScalar(space, np.array(hi)))
    except ParseError:
        raise
    except DomainError as exc:
        _fail(path, str(exc))
    _fail(f"{path}.kind", f"unknown family kind {kind!r}")


def parse_instance(text: str | bytes) -> Instance:
    """Validated instance from a JSON document; errors name the JSON path."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"$: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    doc = _object(doc, "$")
    if "probs" not in doc:
        _fail("$", "missing 'probs'")
    if not isinstance(doc["probs"], list):
        _fail("$.probs", "expected a list")
    probs = [_number(p, f"$.probs[{i}]") for i, p in enumerate(doc["probs"])]
    try:
        space = ScenarioSpace(np.array(probs))
    except DomainError as exc:
        raise DomainError(f"$.probs: {exc}") from None

    inst = Instance(space)
    grid_size = doc.get("grid_size", se.DEFAULT_GRID)
    if not isinstance(grid_size, int) or isinstance(grid_size, bool) or grid_size < 4:
        _fail("$.grid_size", "expected an integer of at least 4")
    seed = doc.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        _fail("$.seed", "expected an integer")
    inst.grid_size, inst.seed = grid_size, seed

    names: set[str] = set()
    for name, sdoc in _object(doc.get("sets", {}), "$.sets").items():
        path = f"$.sets.{name}"
        sdoc = _object(sdoc, path)
        values = sdoc.get("values")
        if not isinstance(values, list):
            _fail(f"{path}.values", "expected a list with one set per scenario")
        if len(values) != space.n:
            _fail(f"{path}.values", f"expected {space.n} scenario values, got {len(values)}")
        vals = tuple(parse_set(v, f"{path}.values[{i}]") for i, v in enumerate(values))
        cone = parse_cone(sdoc["cone"], f"{path}.cone") if "cone" in sdoc else Cone2.zero()
        try:
            inst.sets[name] = RandomConvexSet(space, vals, cone)
        except DomainError as exc:
            _fail(path, str(exc))
        names.add(name)
    for name, vdoc in _object(doc.get("vectors", {}), "$.vectors").items():
        path = f"$.vectors.{name}"
        if name in names:
            _fail(path, f"name {name!r} is already used by a set")
        pts = _points(vdoc, path)
        if pts.shape[0] != space.n:
            _fail(path, f"expected {space.n} points, got {pts.shape[0]}")
        inst.vectors[name] = RandomVector2(space, pts)
    if "family" in doc:
        inst.family = parse_family(doc["family"], space)
        inst.family_doc = doc["family"]
    return inst


# ----------------------------------------------------------------------
# rendering


def _fmt(x: float) -> str:
    return f"{x:.6f}".rstrip("0").rstrip(".") if math.isfinite(x) else "inf"


def _clip(s: ConvexSet2, bbox: tuple[float, float, float, float]) -> np.ndarray:
    """Vertices of ``s`` intersected with the box, counterclockwise."""
    x0, y0, x1, y1 = bbox
    N = [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)]
    b = [x1, -x0, y1, -y0]
    if not s.is_whole_plane:
        Ns, bs = s.halfspaces()
        N.extend(Ns.tolist())
        b.extend(bs.tolist())
    clipped = intersect_halfspaces(np.array(N), np.array(b))
    return np.zeros((0, 2)) if clipped.is_empty else clipped.vertices


def _auto_bbox(sets) -> tuple[float, float, float, float]:
    pts = [s.vertices for s in sets if not s.is_empty]
    if not pts:
        return (-1.0, -1.0, 1.0, 1.0)
    P = np.vstack(pts)
    lo, hi = P.min(axis=0), P.max(axis=0)
    pad = max(float(np.max(hi - lo)) * 0.25, 1.0)
    return (lo[0] - pad, lo[1] - pad, hi[0] + pad, hi[1] + pad)


_LAYER_STYLE = [
    'fill="#dbe6f3" stroke="#1f4e79" stroke-width="1.5"',
    'fill="#8fb3d9" fill-opacity="0.8" stroke="#0b2545" stroke-width="1.5"',
    'fill="none" stroke="#a23b2a" stroke-width="1.5"',
]


def render_svg(sets, bbox=None, size: int = 400) -> str:
    """SVG 1.1 drawing of the sets as stacked layers, unbounded parts clipped to ``bbox``."""
    sets = list(sets)
    x0, y0, x1, y1 = bbox or _auto_bbox(sets)
    if not (x1 > x0 and y1 > y0):
        raise DomainError("bounding box must have positive width and height")
    scale = size / max(x1 - x0, y1 - y0)
    w, h = (x1 - x0) * scale, (y1 - y0) * scale

    def xy(p) -> tuple[str, str]:
        return _fmt((p[0] - x0) * scale), _fmt((y1 - p[1]) * scale)

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(w)}" '
        f'height="{_fmt(h)}" viewBox="0 0 {_fmt(w)} {_fmt(h)}">',
        f'<rect x="0" y="0" width="{_fmt(w)}" height="{_fmt(h)}" fill="white" stroke="#999999"/>',
    ]
    ox, oy = xy((0.0, 0.0))
    if x0 < 0 < x1:
        lines.append(f'<line x1="{ox}" y1="0" x2="{ox}" y2="{_fmt(h)}" stroke="#cccccc"/>')
    if y0 < 0 < y1:
        lines.append(f'<line x1="0" y1="{oy}" x2="{_fmt(w)}" y2="{oy}" stroke="#cccccc"/>')
    for k, s in enumerate(sets):
        style = _LAYER_STYLE[k % len(_LAYER_STYLE)]
        V = np.zeros((0, 2)) if s.is_empty else _clip(s, (x0, y0, x1, y1))
        if V.shape[0] == 0:
            lines.append(f'<g id="layer{k}"/>')
        elif V.shape[0] == 1:
            cx, cy = xy(V[0])
            lines.append(f'<g id="layer{k}"><circle cx="{cx}" cy="{cy}" r="3" {style}/></g>')
        else:
            pts = " ".join(",".join(xy(p)) for p in V)
            lines.append(f'<g id="layer{k}"><polygon points="{pts}" {style}/></g>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_csv(s: ConvexSet2, grid_size: int = 360) -> str:
    """Support values on a uniform grid of the full circle (``inf`` where unbounded)."""
    if s.is_empty:
        raise EmptyResultError("the support function of the empty set is not tabulated")
    U = DirectionGrid.uniform(grid_size, Cone2.full()).directions
    H = s.support_many(U)
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["ux", "uy", "support"])
    for (ux, uy), hv in zip(U, H):
        wr.writerow([repr(float(ux)), repr(float(uy)), repr(float(hv)) if math.isfinite(hv) else "inf"])
    return buf.getvalue()


def render(result, fmt: str = "json", bbox=None, grid_size: int = 360) -> bytes:
    """Serialize a set, a list of sets, or a JSON-ready mapping."""
    if isinstance(result, ConvexSet2):
        sets, payload = [result], result.to_dict()
    elif isinstance(result, (list, tuple)) and all(isinstance(s, ConvexSet2) for s in result):
        sets, payload = list(result), [s.to_dict() for s in result]
    else:
        sets, payload = None, result
    if fmt == "json":
        return (json.dumps(payload, sort_keys=True) + "\n").encode("utf-8")
    if sets is None:
        raise DomainError(f"format {fmt!r} needs a set-valued result")
    if fmt == "csv":
        return "".join(render_csv(s, grid_size) for s in sets).encode("utf-8")
    if fmt == "svg":
        return render_svg(sets, bbox).encode("utf-8")
    raise DomainError(f"unknown output format {fmt!r}")


# ----------------------------------------------------------------------
# commands


def _pick(mapping: dict, name: str | None, what: str):
    if not mapping:
        raise DomainError(f"the instance defines no {what}s")
    if name is None:
        return next(iter(mapping.values()))
    if name not in mapping:
        raise DomainError(f"unknown {what} {name!r}")
    return mapping[name]


def _spec(inst: Instance, cone: Cone2, args) -> se.NonlinearSpec:
    return se.make_spec(inst.family, cone, args.grid or inst.grid_size)


def _alpha(inst: Instance, args) -> float:
    if args.alpha is not None:
        return args.alpha
    if isinstance(inst.family, AVaR):
        return inst.family.alpha
    raise DomainError("give --alpha or an AVaR family")


def _nonempty(s: ConvexSet2, args, what: str) -> ConvexSet2:
    if s.is_empty and not args.allow_empty:
        raise EmptyResultError(f"{what} is empty")
    return s


def _bbox(text: str | None):
    if text is None:
        return None
    parts = text.split(",")
    if len(parts) != 4:
        raise DomainError("--bbox needs x0,y0,x1,y1")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise DomainError("--bbox needs four numbers") from None


def _read_instance(path: str) -> Instance:
    if path == "-":
        return parse_instance(sys.stdin.buffer.read())
    try:
        with open(path, "rb") as fh:
            return parse_instance(fh.read())
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from None


def run(args) -> object:
    """Dispatch a parsed command line; returns the object to render."""
    cmd = args.command
    if cmd == "example62":
        a = [float(t) for t in args.a.split(",")]
        if len(a) != 2:
            raise DomainError("--a needs two comma-separated numbers")
        tilde, lower = se.example62(a, args.pi, args.pi_prime, args.alpha, args.resolution)
        return [tilde, lower]

    inst = _read_instance(args.instance)
    if cmd == "expect":
        return selection_expectation(_pick(inst.sets, args.set, "set"))
    if cmd == "sublinear":
        X = _pick(inst.sets, args.set, "set")
        return se.sublinear(X, _spec(inst, X.cone, args))
    if cmd == "superlinear":
        X = _pick(inst.sets, args.set, "set")
        return _nonempty(se.superlinear_reduced_max(X, _spec(inst, X.cone, args)), args, "the superlinear expectation")
    if cmd == "superlinear-min":
        X = _pick(inst.sets, args.set, "set")
        U = se.superlinear_min_lower(X, _spec(inst, X.cone, args), args.resolution)
        return _nonempty(U, args, "the minimal superlinear extension")
    if cmd == "zonoid":
        xi = _pick(inst.vectors, args.vector, "vector")
        return se.zonoid_region(xi, _alpha(inst, args), args.grid or inst.grid_size)
    if cmd == "lift":
        xi = _pick(inst.vectors, args.vector, "vector")
        Z = se.lift_expectation(xi.component(args.component))
        if args.alpha is None:
            return Z
        lo, hi = se.lift_slice(Z, args.alpha)
        return {"alpha": args.alpha, "slice": [lo + 0.0, hi + 0.0]}
    if cmd == "depth":
        X = _pick(inst.sets, args.set, "set")
        F = parse_set(json.loads(args.target), "--target")
        return {"depth": depth(F, X, args.tol, seed=args.seed if args.seed is not None else inst.seed)}
    if cmd == "risk":
        xi = _pick(inst.vectors, args.vector, "vector")
        K = parse_cone(json.loads(args.cone), "--cone") if args.cone else None
        P = make_portfolio(xi, args.mode, K)
        spec = _spec(inst, P.set.cone, args)
        R = risk_set(P, spec)
        if args.format != "json":
            return R
        return {"acceptable": is_acceptable(P, spec), "risk_set": R.to_dict()}
    if cmd == "flag-outliers":
        X = _pick(inst.sets, args.set, "set")
        sample = SampleOfSets(X.values)
        spec = _spec(inst, sample.observations[0].recession, args)
        seed = args.seed if args.seed is not None else inst.seed
        return {"outliers": flag_outliers(sample, spec, args.threshold, args.tol, seed)}
    raise DomainError(f"unknown command {cmd!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="setexpect", description=__doc__.split("\n\n")[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid", type=int, default=None, help="direction grid size")
    common.add_argument("--seed", type=int, default=None, help="random seed (overrides the instance)")
    common.add_argument("--tol", type=float, default=1e-3, help="lambda tolerance for depth")
    common.add_argument("--format", choices=("json", "csv", "svg"), default="json")
    common.add_argument("--bbox", default=None, help="x0,y0,x1,y1 viewport for SVG output")
    common.add_argument("--allow-empty", action="store_true", help="render empty results instead of exit 4")
    common.add_argument("-o", "--output", default="-", help="output file (default stdout)")

    sub = parser.add_subparsers(dest="command", required=True)

    def cmd(name, help_text, instance=True):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if instance:
            p.add_argument("instance", help="instance JSON file, or - for stdin")
        return p

    for name, text in (
        ("expect", "selection expectation"),
        ("sublinear", "sublinear set-valued expectation"),
        ("superlinear", "reduced maximal superlinear expectation"),
    ):
        cmd(name, text).add_argument("--set", default=None)
    p = cmd("superlinear-min", "minimal superlinear extension for lower sets")
    p.add_argument("--set", default=None)
    p.add_argument("--resolution", type=int, default=400)
    p = cmd("zonoid", "zonoid-trimmed region")
    p.add_argument("--vector", default=None)
    p.add_argument("--alpha", type=float, default=None)
    p = cmd("lift", "lift expectation of one coordinate, optionally sliced at --alpha")
    p.add_argument("--vector", default=None)
    p.add_argument("--component", type=int, choices=(0, 1), default=0)
    p.add_argument("--alpha", type=float, default=None)
    p = cmd("depth", "depth of a set with respect to a random set")
    p.add_argument("--set", default=None)
    p.add_argument("--target", required=True, help='JSON set, e.g. {"vertices": [[0,0]]}')
    p = cmd("risk", "acceptability and risk set of a portfolio")
    p.add_argument("--vector", default=None)
    p.add_argument("--mode", choices=PROVENANCES, default="consumption_only")
    p.add_argument("--cone", default=None, help="exchange cone as JSON for cone_exchange")
    p = cmd("flag-outliers", "leave-one-out depth outliers among scenario values")
    p.add_argument("--set", default=None)
    p.add_argument("--threshold", type=float, default=0.1)
    p = cmd("example62", "two-point lower-set example with a transaction-cost cone", instance=False)
    p.add_argument("--a", default="1,-1", help="second outcome as x,y")
    p.add_argument("--pi", type=float, default=2.0)
    p.add_argument("--pi-prime", type=float, default=2.0)
    p.add_argument("--alpha", type=float, default=0.7)
    p.add_argument("--resolution", type=int, default=400)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = run(args)
        data = render(result, args.format, _bbox(args.bbox), args.grid or 360)
    except EmptyResultError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (DomainError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    if args.output == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        with open(args.output, "wb") as fh:
            fh.write(data)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
