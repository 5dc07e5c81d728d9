"""Serialization: system documents, DIMACS, certificate text, descent paths, SVG.

System documents are JSON::

    {
      "schema": "ksgeo-system/1",
      "points": [{"id": "x", "v": [1, 0, 0]}, ...],
      "triples": [["x", "y", "z"]],
      "pairs": [["a", "b"]],
      "spans": [["c", "a", "b"]],          # c lies in span(a, b)
      "derive": {"triples": false, "pairs": false, "spans": false},
      "tolerances": {"orth": 1e-9},
      "circuit": ["N", "A", ...]            # optional
    }

Only ``schema`` and ``points`` are required.  Floats are written with
``repr`` precision, which round-trips doubles exactly.

Certificate text is line oriented, one step per line::

    KSCERT 1
    SPLIT T0
    ASSUME R3
    PROP G5 T0 R3
    PROBE G7
    PROP ...
    CONFLICT S4 G1 G2 R7
    CONCLUDE R7
    ...
    CONFLICT T0 R3 R9

Literals are ``R<i>`` (Red) or ``G<i>`` (Green) over 0-based point
indices.  ``ASSUME`` opens a top-level branch; ``PROBE`` opens a nested
sequence that must end with ``CONFLICT`` and then ``CONCLUDE``; each branch
ends with a top-level ``CONFLICT``.  Lines starting with ``c`` are comments.
"""

import json
import math
import xml.etree.ElementTree as ET

import numpy as np

from . import geom
from .csp import (Branch, Certificate, CnfDoc, ConflictStep, ConstraintSystem,
                  Probe, Propagate)
from .descent import DescentPath, DescentStep
from .errors import DuplicateId, ParseError, TooManyPoints, ZeroVector
from .geom import Frame
from .tolerances import DEFAULT, Tolerances

SCHEMA = "ksgeo-system/1"
PATH_SCHEMA = "ksgeo-path/1"
MAX_DERIVE_POINTS = 500


# -- constraint derivation -------------------------------------------------------

def derive_constraints(points, triples=True, pairs=True, spans=True, labels=None,
                       tol: Tolerances = DEFAULT) -> ConstraintSystem:
    """All TRIPLE/PAIR/SPAN relations present among ``points``.

    Points are normalized and canonicalized.  Triples are mutually
    orthogonal index triples; pairs are orthogonal pairs in no emitted
    triple; spans ``(c; a, b)`` have a, b non-parallel and c in their plane,
    once per unordered witness pair.
    """
    P = np.array([geom.canonicalize(geom.normalize(v), tol) for v in points]).reshape(-1, 3)
    n = len(P)
    if n > MAX_DERIVE_POINTS:
        raise TooManyPoints(f"{n} points exceeds the derivation limit {MAX_DERIVE_POINTS}")
    G = np.abs(P @ P.T) <= tol.orth
    np.fill_diagonal(G, False)
    tri, pr, sp = [], [], []
    if triples or pairs:
        found = []
        for i in range(n):
            for j in range(i + 1, n):
                if G[i, j]:
                    ks = np.nonzero(G[i, j + 1:] & G[j, j + 1:])[0] + j + 1
                    found += [(i, j, int(k)) for k in ks]
        if triples:
            tri = found
        if pairs:
            covered = set()
            for i, j, k in found:
                covered |= {(i, j), (i, k), (j, k)}
            pr = [(i, j) for i, j in zip(*np.nonzero(np.triu(G)))
                  if (i, j) not in covered or not triples]
    if spans:
        for a in range(n):
            for b in range(a + 1, n):
                nrm = np.cross(P[a], P[b])
                s = np.linalg.norm(nrm)
                if s <= tol.parallel:
                    continue
                on = np.abs(P @ (nrm / s)) <= tol.orth
                on[[a, b]] = False
                sp += [(int(c), a, b) for c in np.nonzero(on)[0]]
    return ConstraintSystem(P, tri, [(int(i), int(j)) for i, j in pr], sp, labels, None, tol)


# -- system documents -------------------------------------------------------------

def _field(doc, key, kind, where, required=False):
    if key not in doc:
        if required:
            raise ParseError("missing field", field=where + key)
        return None
    val = doc[key]
    if not isinstance(val, kind):
        raise ParseError(f"expected {kind.__name__}", field=where + key)
    return val


def _vector(raw, where):
    if not isinstance(raw, list) or len(raw) != 3 or not all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in raw):
        raise ParseError("vector must be three numbers", field=where)
    v = np.array(raw, dtype=float)
    if not np.all(np.isfinite(v)):
        raise ParseError("vector has a non-finite component", field=where)
    if np.linalg.norm(v) == 0.0:
        raise ZeroVector(f"zero vector at {where}")
    return v


def parse_system(text: str) -> ConstraintSystem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    schema = _field(doc, "schema", str, "", required=True)
    if schema != SCHEMA:
        raise ParseError(f"unsupported schema {schema!r}", field="schema")
    tol = DEFAULT
    over = _field(doc, "tolerances", dict, "")
    if over:
        try:
            tol = DEFAULT.override(**over)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(str(exc), field="tolerances") from None

    ids, vecs = [], []
    for k, pt in enumerate(_field(doc, "points", list, "", required=True)):
        where = f"points[{k}]"
        if not isinstance(pt, dict):
            raise ParseError("point must be an object", field=where)
        pid = _field(pt, "id", str, where + ".", required=True)
        if pid in ids:
            raise DuplicateId(f"duplicate point id {pid!r}")
        ids.append(pid)
        vecs.append(_vector(pt.get("v"), where + ".v"))
    index = {pid: i for i, pid in enumerate(ids)}

    def records(key, arity):
        out = []
        for k, rec in enumerate(_field(doc, key, list, "") or []):
            where = f"{key}[{k}]"
            if not isinstance(rec, list) or len(rec) != arity:
                raise ParseError(f"expected {arity} ids", field=where)
            try:
                out.append(tuple(index[r] for r in rec))
            except (KeyError, TypeError):
                raise ParseError("unknown point id", field=where) from None
            if len(set(out[-1])) != arity:
                raise ParseError("repeated point id", field=where)
        return out

    tri, pr, sp = records("triples", 3), records("pairs", 2), records("spans", 3)
    circuit = _field(doc, "circuit", list, "")
    if circuit is not None:
        try:
            circuit = tuple(index[c] for c in circuit)
        except (KeyError, TypeError):
            raise ParseError("unknown point id", field="circuit") from None
        if len(circuit) % 3:
            raise ParseError("circuit length must be divisible by 3", field="circuit")

    flags = _field(doc, "derive", dict, "") or {}
    pts = [geom.canonicalize(geom.normalize(v), tol) for v in vecs]
    if any(flags.get(k) for k in ("triples", "pairs", "spans")):
        d = derive_constraints(pts, bool(flags.get("triples")), bool(flags.get("pairs")),
                               bool(flags.get("spans")), tol=tol)
        tri, pr, sp = tri + list(d.triples), pr + list(d.pairs), sp + list(d.spans)
    return ConstraintSystem(np.array(pts).reshape(-1, 3), tri, pr, sp, ids, circuit, tol)


def system_to_doc(sys: ConstraintSystem) -> dict:
    ids = [sys.label(i) for i in range(len(sys))]
    if len(set(ids)) != len(ids):
        ids = [f"p{i}" for i in range(len(sys))]
    doc = {
        "schema": SCHEMA,
        "points": [{"id": ids[i], "v": [float(x) for x in v]} for i, v in enumerate(sys.points)],
        "triples": [[ids[i] for i in t] for t in sys.triples],
        "pairs": [[ids[i] for i in p] for p in sys.pairs],
        "spans": [[ids[i] for i in s] for s in sys.spans],
    }
    if sys.tol != DEFAULT:
        doc["tolerances"] = {k: v for k, v in sys.tol.as_dict().items()
                             if v != getattr(DEFAULT, k)}
    if sys.circuit is not None:
        doc["circuit"] = [ids[i] for i in sys.circuit]
    return doc


def write_system(sys: ConstraintSystem) -> str:
    return json.dumps(system_to_doc(sys), indent=1) + "\n"


def parse_vectors(text: str) -> tuple:
    """Plain vector list: one ``[id] x y z`` per line, ``#`` comments."""
    ids, vecs = [], []
    for ln, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if len(parts) == 4:
            pid, nums = parts[0], parts[1:]
        elif len(parts) == 3:
            pid, nums = f"p{len(ids)}", parts
        else:
            raise ParseError("expected '[id] x y z'", line=ln)
        try:
            v = np.array([float(x) for x in nums])
        except ValueError:
            raise ParseError("bad number", line=ln) from None
        if np.linalg.norm(v) == 0.0:
            raise ZeroVector(f"zero vector on line {ln}")
        if pid in ids:
            raise DuplicateId(f"duplicate point id {pid!r}")
        ids.append(pid)
        vecs.append(v)
    return ids, vecs


# -- DIMACS ---------------------------------------------------------------------

def write_dimacs(cnf: CnfDoc) -> str:
    lines = [f"c {var} {name}" for var, name in sorted(cnf.comments.items())]
    lines.append(f"p cnf {cnf.num_vars} {len(cnf.clauses)}")
    lines += [" ".join(map(str, cl)) + " 0" for cl in cnf.clauses]
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> CnfDoc:
    nv = None
    clauses, comments, cur = [], {}, []
    for ln, line in enumerate(text.splitlines(), start=1):
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "c":
            if len(parts) >= 3 and parts[1].isdigit():
                comments[int(parts[1])] = " ".join(parts[2:])
            continue
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError("bad problem line", line=ln)
            nv = int(parts[2])
            continue
        try:
            for lit in map(int, parts):
                if lit == 0:
                    clauses.append(tuple(cur))
                    cur = []
                else:
                    cur.append(lit)
        except ValueError:
            raise ParseError("bad literal", line=ln) from None
    if nv is None:
        raise ParseError("missing problem line")
    return CnfDoc(nv, tuple(clauses), comments)


# -- certificates --------------------------------------------------------------

def _lit(lit) -> str:
    return f"{'R' if lit[1] else 'G'}{lit[0]}"


def _parse_lit(tok: str, ln: int):
    if len(tok) < 2 or tok[0] not in "RG" or not tok[1:].isdigit():
        raise ParseError(f"bad literal {tok!r}", line=ln)
    return int(tok[1:]), tok[0] == "R"


def write_certificate(cert: Certificate) -> str:
    out = ["KSCERT 1", f"SPLIT {cert.split}"]

    def emit(steps):
        for st in steps:
            if isinstance(st, Probe):
                out.append(f"PROBE {_lit(st.assume)}")
                emit(st.steps)
                out.append(f"CONCLUDE {_lit(st.conclude)}")
            elif isinstance(st, ConflictStep):
                out.append(" ".join(["CONFLICT", st.constraint, *map(_lit, st.premises)]))
            else:
                out.append(" ".join(["PROP", _lit(st.lit), st.constraint,
                                     *map(_lit, st.premises)]))

    for br in cert.branches:
        out.append(f"ASSUME {_lit(br.assume)}")
        emit(br.steps)
    return "\n".join(out) + "\n"


def parse_certificate(text: str) -> Certificate:
    lines = [(ln, line.split()) for ln, line in enumerate(text.splitlines(), start=1)
             if line.strip() and not line.lstrip().startswith("c")]
    if not lines or lines[0][1] != ["KSCERT", "1"]:
        raise ParseError("missing 'KSCERT 1' header", line=lines[0][0] if lines else 1)
    if len(lines) < 2 or lines[1][1][0] != "SPLIT" or len(lines[1][1]) != 2:
        raise ParseError("expected 'SPLIT <cid>'", line=lines[1][0] if len(lines) > 1 else None)
    split = lines[1][1][1]

    branches = []
    stack = []  # open sequences as [assumed literal, steps, start line]; [0] is the branch

    def closed(steps):
        return bool(steps) and isinstance(steps[-1], ConflictStep)

    def close_branch(ln):
        if len(stack) > 1:
            raise ParseError("PROBE without CONCLUDE", line=ln)
        if stack:
            assume, steps, start = stack.pop()
            if not closed(steps):
                raise ParseError("branch must end in CONFLICT", line=start)
            branches.append(Branch(assume, tuple(steps)))

    for ln, tok in lines[2:]:
        op, args = tok[0], tok[1:]
        if op == "ASSUME":
            if len(args) != 1:
                raise ParseError("ASSUME takes one literal", line=ln)
            close_branch(ln)
            stack.append([_parse_lit(args[0], ln), [], ln])
            continue
        if not stack:
            raise ParseError(f"{op} outside a branch", line=ln)
        if op == "CONCLUDE":
            if len(stack) < 2 or len(args) != 1:
                raise ParseError("CONCLUDE without an open PROBE", line=ln)
            assume, steps, start = stack.pop()
            if not closed(steps):
                raise ParseError("probe must end in CONFLICT", line=start)
            stack[-1][1].append(Probe(assume, tuple(steps), _parse_lit(args[0], ln)))
            continue
        steps = stack[-1][1]
        if closed(steps):
            raise ParseError(f"{op} after CONFLICT", line=ln)
        if op == "PROP":
            if len(args) < 2:
                raise ParseError("PROP needs a literal and a constraint", line=ln)
            steps.append(Propagate(_parse_lit(args[0], ln), args[1],
                                   tuple(_parse_lit(a, ln) for a in args[2:])))
        elif op == "CONFLICT":
            if not args:
                raise ParseError("CONFLICT needs a constraint", line=ln)
            steps.append(ConflictStep(args[0], tuple(_parse_lit(a, ln) for a in args[1:])))
        elif op == "PROBE":
            if len(args) != 1:
                raise ParseError("PROBE takes one literal", line=ln)
            stack.append([_parse_lit(args[0], ln), [], ln])
        else:
            raise ParseError(f"unknown keyword {op!r}", line=ln)
    close_branch(lines[-1][0])
    if not branches:
        raise ParseError("certificate has no branches", line=lines[-1][0])
    return Certificate(split, tuple(branches))


# -- descent paths ---------------------------------------------------------------

def path_to_doc(path: DescentPath) -> dict:
    f = path.frame
    return {
        "schema": PATH_SCHEMA,
        "frame": [[float(x) for x in e] for e in (f.e1, f.e2, f.e3)],
        "points": [[float(x) for x in p] for p in path.points],
        "latlon": [list(geom.vec_to_latlon(f, p)) for p in path.points],
        "betas_deg": [float(b) for b in path.betas],
    }


def write_path(path: DescentPath) -> str:
    return json.dumps(path_to_doc(path), indent=1) + "\n"


def parse_path(text: str) -> DescentPath:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    if not isinstance(doc, dict) or doc.get("schema") != PATH_SCHEMA:
        raise ParseError("not a descent path document", field="schema")
    try:
        f = Frame(*(np.array(e, dtype=float) for e in doc["frame"]))
        pts = tuple(np.array(p, dtype=float) for p in doc["points"])
        betas = [float(b) for b in doc["betas_deg"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed path: {exc}") from None
    if len(betas) != max(len(pts) - 1, 0):
        raise ParseError("step count does not match point count", field="betas_deg")
    steps = tuple(DescentStep(b, pts[i], pts[i + 1]) for i, b in enumerate(betas))
    return DescentPath(f, pts, steps)


# -- SVG -----------------------------------------------------------------------

SVG_NS = "http://www.w3.org/2000/svg"
_SCALE = 200.0


def _num(x: float) -> str:
    return repr(float(x))


def render_svg(frame: Frame, points=None, chains=(), latitudes=(30.0, 60.0),
               tol: Tolerances = DEFAULT) -> str:
    """Gnomonic figure in ``frame``.

    ``points`` maps labels to vectors; ``chains`` is a sequence of descent
    paths (or vector sequences); ``latitudes`` draws circles of radius
    ``tan(90 - lat)``.  Geometry lives in a group whose user units are
    gnomonic plane coordinates, so every ``cx``/``cy`` and polyline vertex
    is the exact plane point.
    """
    points = dict(points or {})
    plane_pts = {k: geom.gnomonic(frame, v, tol) for k, v in points.items()}
    plane_chains = []
    for ch in chains:
        verts = ch.points if isinstance(ch, DescentPath) else ch
        plane_chains.append([geom.gnomonic(frame, v, tol) for v in verts])
    radii = [math.tan(math.radians(90.0 - lat)) for lat in latitudes]

    ext = max([1.0] + radii + [abs(c) for p in plane_pts.values() for c in p]
              + [abs(c) for ch in plane_chains for p in ch for c in p]) * 1.1
    size = 2 * ext * _SCALE
    root = ET.Element("svg", {
        "xmlns": SVG_NS, "version": "1.1",
        "width": _num(size), "height": _num(size),
        "viewBox": f"{_num(-ext * _SCALE)} {_num(-ext * _SCALE)} {_num(size)} {_num(size)}",
    })
    g = ET.SubElement(root, "g", {"id": "plane",
                                  "transform": f"scale({_num(_SCALE)},{_num(-_SCALE)})"})
    sw = _num(1.0 / _SCALE)
    axes = ET.SubElement(g, "g", {"id": "axes", "stroke": "#999", "stroke-width": sw})
    ET.SubElement(axes, "line", {"x1": _num(-ext), "y1": "0.0", "x2": _num(ext), "y2": "0.0"})
    ET.SubElement(axes, "line", {"x1": "0.0", "y1": _num(-ext), "x2": "0.0", "y2": _num(ext)})

    lat_g = ET.SubElement(g, "g", {"id": "latitudes", "fill": "none",
                                   "stroke": "#36c", "stroke-width": sw})
    for lat, r in zip(latitudes, radii):
        ET.SubElement(lat_g, "circle", {"class": "latitude", "data-lat": _num(lat),
                                        "cx": "0.0", "cy": "0.0", "r": _num(r)})

    ch_g = ET.SubElement(g, "g", {"id": "chains", "fill": "none",
                                  "stroke": "#c33", "stroke-width": sw})
    for k, ch in enumerate(plane_chains):
        ET.SubElement(ch_g, "polyline", {
            "class": "chain", "data-chain": str(k),
            "points": " ".join(f"{_num(p.u)},{_num(p.v)}" for p in ch)})

    pt_g = ET.SubElement(g, "g", {"id": "points", "fill": "#000"})
    lab_g = ET.SubElement(root, "g", {"id": "labels", "font-size": "12",
                                      "font-family": "sans-serif"})
    for label, p in plane_pts.items():
        ET.SubElement(pt_g, "circle", {"class": "point", "data-label": label,
                                       "cx": _num(p.u), "cy": _num(p.v), "r": _num(3 / _SCALE)})
        t = ET.SubElement(lab_g, "text", {"x": _num(p.u * _SCALE + 5),
                                          "y": _num(-p.v * _SCALE - 5)})
        t.text = label
    ET.indent(root)
    return ET.tostring(root, encoding="unicode") + "\n"


def read_svg_points(text: str) -> dict:
    """Labeled point coordinates of a figure made by :func:`render_svg`."""
    root = ET.fromstring(text)
    out = {}
    for el in root.iter(f"{{{SVG_NS}}}circle"):
        if el.get("class") == "point":
            out[el.get("data-label")] = (float(el.get("cx")), float(el.get("cy")))
    return out


def read_svg_chains(text: str) -> list:
    root = ET.fromstring(text)
    out = []
    for el in root.iter(f"{{{SVG_NS}}}polyline"):
        out.append([tuple(map(float, p.split(","))) for p in el.get("points").split()])
    return out
