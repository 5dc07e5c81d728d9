"""The explicit uncolorable configuration: a 30-degree circuit of gadgets.

A *gadget* on a pole ``u`` and a target ``s`` at 30 degrees from it adds,
in the frame with pole ``u`` and meridian 0 through ``s``:

* the frame triple ``TRIPLE(u, e1, e2)``,
* the triple ``TRIPLE(s, s_E, s_perp)`` with ``s_E = e2``,
* a descent chain ``s = psi_0, ..., psi_n = s_perp`` with
  ``SPAN(psi_{i+1}; psi_i, psi_i_E)`` for every step, and
* ``SPAN(h; e1, e2)`` for every equatorial helper ``psi_i_E``.

If ``u`` is Red and ``s`` Green, every helper is Green, greenness runs
down the chain to ``s_perp`` and the second triple has no Red member, so
``u`` Red forces ``s`` Red.  Chaining gadgets around the nine-point circuit
(pole, three steps to the equator, three along it, three back) makes any
Red corner turn every corner Red, contradicting the corner triple.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import descent, geom
from .csp import ConstraintSystem
from .errors import BadAngle, BadStep
from .geom import Frame, LatLon
from .tolerances import DEFAULT, Tolerances

CIRCUIT_NAMES = "NABCDEFGH"


@dataclass(frozen=True, eq=False)
class Circuit:
    points: tuple          # cyclic tour, pole first
    labels: tuple
    step_deg: float

    @property
    def corners(self) -> tuple:
        k = len(self.points) // 3
        return 0, k, 2 * k

    @property
    def corner_points(self) -> tuple:
        return tuple(self.points[i] for i in self.corners)

    def edges(self):
        n = len(self.points)
        return [(i, (i + 1) % n) for i in range(n)]


def _steps_per_leg(step_deg: float) -> int:
    if not step_deg > 0:
        raise BadStep(f"step {step_deg!r} must be positive")
    k = round(90.0 / step_deg)
    if k < 1 or abs(k * step_deg - 90.0) > 1e-9:
        raise BadStep(f"step {step_deg!r} deg does not divide 90")
    return k


def build_circuit(step_deg: float = 30.0) -> Circuit:
    """Closed tour: pole down meridian 0, along the equator, up meridian 90."""
    pts = []
    for ll in circuit_latlons(step_deg):
        v = geom.latlon_to_vec(geom.STANDARD, ll)
        v[np.abs(v) < 1e-15] = 0.0
        pts.append(geom.canonicalize(v / np.linalg.norm(v)))
    if len(pts) == len(CIRCUIT_NAMES):
        labels = tuple(CIRCUIT_NAMES)
    else:
        labels = tuple(f"c{i}" for i in range(len(pts)))
    return Circuit(tuple(pts), labels, float(step_deg))


@dataclass(frozen=True, eq=False)
class Gadget:
    u: np.ndarray
    s: np.ndarray
    frame: Frame
    s_e: np.ndarray
    s_perp: np.ndarray
    chain: descent.DescentPath
    helpers: tuple          # psi_i_E for every chain step
    points: dict            # name -> vector
    triples: tuple          # name triples
    spans: tuple            # (c, a, b) names

    def to_system(self, tol: Tolerances = DEFAULT) -> ConstraintSystem:
        b = SystemBuilder(tol)
        b.add_points(self.points)
        b.add_constraints(triples=self.triples, spans=self.spans)
        return b.build()


def build_gadget(u, s, angle_deg: float = 30.0, prefix: str = "",
                 tol: Tolerances = DEFAULT) -> Gadget:
    """Gadget forcing ``s`` Red whenever ``u`` is Red.

    ``s`` must sit ``angle_deg`` from ``u``; it is then at latitude
    ``90 - angle_deg`` in the gadget frame and its orthogonal complement at
    latitude ``angle_deg``, so the descent needs ``angle_deg < 45``.
    """
    u, s = geom.normalize(u), geom.normalize(s)
    ang = geom.proj_angle(u, s)
    if abs(math.radians(ang - angle_deg)) > tol.ang:
        raise BadAngle(f"points are {ang!r} deg apart, expected {angle_deg!r}")
    if np.dot(u, s) < 0:
        s = -s
    f = Frame.from_pole(u, s, tol)
    s_e = geom.e_point(f, s, tol)
    s_perp = geom.perp_point(f, s, tol)
    start = geom.vec_to_latlon(f, s)
    chain = descent.plan(f, start, geom.vec_to_latlon(f, s_perp), tol)

    names = {prefix + k: v for k, v in
             (("u", u), ("e1", f.e1), ("e2", f.e2), ("s", s), ("sE", s_e), ("sP", s_perp))}
    chain_names = [prefix + "s"]
    for i, v in enumerate(chain.points[1:-1], start=1):
        chain_names.append(f"{prefix}psi{i}")
        names[chain_names[-1]] = v
    chain_names.append(prefix + "sP")
    helpers = [geom.e_point(f, v, tol) for v in chain.points[:-1]]
    helper_names = [prefix + "sE"]
    for i, h in enumerate(helpers[1:], start=1):
        helper_names.append(f"{prefix}psi{i}E")
        names[helper_names[-1]] = h

    triples = ((prefix + "u", prefix + "e1", prefix + "e2"),
               (prefix + "s", prefix + "sE", prefix + "sP"))
    spans = [(chain_names[i + 1], chain_names[i], helper_names[i])
             for i in range(len(chain.steps))]
    spans += [(h, prefix + "e1", prefix + "e2") for h in dict.fromkeys(helper_names)
              if not _same_line(names[h], f.e1, tol) and not _same_line(names[h], f.e2, tol)]
    return Gadget(u, s, f, s_e, s_perp, chain, tuple(helpers), names, triples, tuple(spans))


def _same_line(a, b, tol: Tolerances) -> bool:
    return math.radians(geom.proj_angle(a, b)) < tol.merge


class SystemBuilder:
    """Collects named vectors and named constraints; merges equal lines.

    Vectors are canonicalized and sorted before greedy clustering with
    radius ``tol.merge``, so the result does not depend on insertion order.
    Each merged point keeps its shortest name (ties broken alphabetically).
    Index order: circuit points first in tour order, then canonical order.
    """

    def __init__(self, tol: Tolerances = DEFAULT):
        self.tol = tol
        self.vectors = {}
        self.triples = []
        self.spans = []
        self.pairs = []

    def add_points(self, named: dict):
        for name, v in named.items():
            if name in self.vectors:
                if not _same_line(self.vectors[name], v, self.tol):
                    raise ValueError(f"name {name!r} reused for a different direction")
                continue
            self.vectors[name] = geom.canonicalize(geom.normalize(v), self.tol)

    def add_constraints(self, triples=(), pairs=(), spans=()):
        self.triples += [tuple(t) for t in triples]
        self.pairs += [tuple(p) for p in pairs]
        self.spans += [tuple(s) for s in spans]

    def build(self, circuit_names=None) -> ConstraintSystem:
        items = sorted(self.vectors.items(), key=lambda kv: (tuple(kv[1]), kv[0]))
        reps, members = [], []
        of = {}
        for name, v in items:
            for k, r in enumerate(reps):
                if _same_line(r, v, self.tol):
                    members[k].append(name)
                    of[name] = k
                    break
            else:
                of[name] = len(reps)
                reps.append(v)
                members.append([name])
        # circuit points lead the index order so that lowest-index branching
        # in the solver decides them first
        lead = list(dict.fromkeys(of[n] for n in circuit_names or ()))
        order = lead + [k for k in range(len(reps)) if k not in set(lead)]
        rank = {k: i for i, k in enumerate(order)}
        of = {name: rank[k] for name, k in of.items()}
        reps = [reps[k] for k in order]
        members = [members[k] for k in order]
        labels = [min(m, key=lambda s: (len(s), s)) for m in members]
        idx = lambda names: tuple(of[n] for n in names)  # noqa: E731
        circuit = idx(circuit_names) if circuit_names is not None else None
        return ConstraintSystem(
            np.array(reps),
            sorted(tuple(sorted(idx(t))) for t in self.triples),
            sorted(tuple(sorted(idx(p))) for p in self.pairs),
            sorted((of[c], *sorted(idx((a, b)))) for c, a, b in self.spans),
            labels, circuit, self.tol)


def build_system(step_deg: float = 30.0, tol: Tolerances = DEFAULT) -> ConstraintSystem:
    """Circuit corner triple plus one gadget per directed circuit edge."""
    circ = build_circuit(step_deg)
    b = SystemBuilder(tol)
    b.add_points(dict(zip(circ.labels, circ.points)))
    b.add_constraints(triples=[tuple(circ.labels[i] for i in circ.corners)])
    for i, j in circ.edges():
        g = build_gadget(circ.points[i], circ.points[j], step_deg,
                         prefix=f"{circ.labels[i]}{circ.labels[j]}.", tol=tol)
        b.add_points(g.points)
        b.add_constraints(triples=g.triples, spans=g.spans)
    return b.build(circuit_names=circ.labels)


def validate_geometry(sys: ConstraintSystem, tol: Tolerances = None) -> list:
    """Constraints not licensed by orthogonality or coplanarity, as messages."""
    tol = tol or sys.tol
    P = sys.points
    out = []
    for i, v in enumerate(P):
        if abs(np.linalg.norm(v) - 1.0) > tol.norm:
            out.append(f"point {i} ({sys.label(i)}) is not a unit vector")
    for cid, kind, rec in sys.constraints():
        if kind in "TP":
            for a, b in ((rec[0], rec[1]), (rec[0], rec[-1]), (rec[1], rec[-1])):
                if a != b and abs(np.dot(P[a], P[b])) > tol.orth:
                    out.append(f"{cid}: points {a} and {b} are not orthogonal")
        else:
            c, a, b = rec
            if np.linalg.norm(np.cross(P[a], P[b])) <= tol.parallel:
                out.append(f"{cid}: witnesses {a} and {b} are parallel")
            elif abs(geom.det3(P[a], P[b], P[c])) > tol.orth:
                out.append(f"{cid}: point {c} is not in the span of {a} and {b}")
    return out


def circuit_latlons(step_deg: float = 30.0) -> list:
    k = _steps_per_leg(step_deg)
    return ([LatLon(90.0 - i * step_deg, 0.0) for i in range(k)]
            + [LatLon(0.0, i * step_deg) for i in range(k)]
            + [LatLon(i * step_deg, 90.0) for i in range(k)])
