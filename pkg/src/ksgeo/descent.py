"""Finite chains of great-circle descents between two latitudes.

Working in the gnomonic plane of a frame, a descent step of plane angle
``beta`` rotates a point by ``beta`` about the origin and multiplies its
radius by ``sec(beta)``.  To get from radius ``r`` and polar angle ``phi0``
to radius ``R > r`` and polar angle ``phi1``, :func:`plan` takes the fewest
``n`` equal steps of ``dphi / n`` whose total growth ``sec(dphi/n)**n``
does not overshoot ``R / r``, then closes the remaining radius gap with one
``(+gamma, -gamma)`` zigzag, ``sec(gamma)**2 = (R / r) / sec(dphi/n)**n``.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import geom
from .errors import DegenerateEndpoint, KSError, NotMoreSoutherly
from .geom import Frame, LatLon
from .tolerances import DEFAULT, Tolerances


@dataclass(frozen=True, eq=False)
class DescentStep:
    beta_deg: float
    start: np.ndarray
    end: np.ndarray


@dataclass(frozen=True, eq=False)
class DescentPath:
    frame: Frame
    points: tuple
    steps: tuple

    @property
    def betas(self) -> list:
        return [s.beta_deg for s in self.steps]

    def __len__(self):
        return len(self.steps)


def _wrap180(d: float) -> float:
    """Representative of ``d`` in (-180, 180]."""
    d = math.fmod(d, 360.0)
    if d <= -180.0:
        d += 360.0
    elif d > 180.0:
        d -= 360.0
    return d


def step_schedule(r: float, R: float, dphi_deg: float, eps: float = DEFAULT.ang) -> list:
    """Plane angles, in degrees, taking radius ``r`` to ``R`` while turning ``dphi_deg``."""
    ratio = R / r
    if abs(math.radians(dphi_deg)) < eps:
        dphi_deg = 0.0  # a sub-tolerance turn would be a zero-length step
    n = 0
    if dphi_deg != 0.0:
        n = max(1, math.floor(abs(dphi_deg) / 90.0) + 1)
        while (1.0 / math.cos(math.radians(dphi_deg / n))) ** n > ratio:
            n += 1
    betas = [dphi_deg / n] * n if n else []
    growth = (1.0 / math.cos(math.radians(dphi_deg / n))) ** n if n else 1.0
    gamma = math.acos(math.sqrt(min(1.0, growth / ratio)))
    if gamma >= eps:
        g = math.degrees(gamma)
        betas += [g, -g]
    return betas


def plan(frame: Frame, start, target, tol: Tolerances = DEFAULT) -> DescentPath:
    """Descent path from ``start`` to the strictly more southerly ``target``.

    Both endpoints are :class:`LatLon` in ``frame`` and must lie strictly
    inside the open northern band.
    """
    start, target = LatLon(*start), LatLon(*target)
    for p in (start, target):
        if not (tol.lat_deg < p.lat < 90.0 - tol.lat_deg):
            raise DegenerateEndpoint(f"endpoint latitude {p.lat!r} is at the pole or equator")
    if not target.lat < start.lat:
        raise NotMoreSoutherly(
            f"target latitude {target.lat!r} is not south of {start.lat!r}")

    r = math.tan(math.radians(90.0 - start.lat))
    R = math.tan(math.radians(90.0 - target.lat))
    betas = step_schedule(r, R, _wrap180(target.lon - start.lon), tol.ang)

    pts = [geom.latlon_to_vec(frame, start)]
    steps = []
    for b in betas:
        nxt = geom.descent_point(frame, pts[-1], b, tol)
        steps.append(DescentStep(b, pts[-1], nxt))
        pts.append(nxt)
    return DescentPath(frame, tuple(pts), tuple(steps))


def validate(path: DescentPath, tol: Tolerances = DEFAULT) -> list:
    """Every broken path invariant as ``(index, message)``; empty if valid."""
    f = path.frame
    out = []
    pts = path.points
    if len(path.steps) != max(len(pts) - 1, 0):
        out.append((None, f"{len(pts)} points but {len(path.steps)} steps"))
        return out
    for i, p in enumerate(pts):
        if abs(np.linalg.norm(p) - 1.0) > tol.norm:
            out.append((i, "point is not a unit vector"))
        lat = geom.vec_to_latlon(f, p).lat
        if not (tol.lat_deg < lat < 90.0 - tol.lat_deg):
            out.append((i, f"latitude {lat!r} outside the open band"))
    for i, st in enumerate(path.steps):
        a, b = pts[i], pts[i + 1]
        if not 0.0 < abs(st.beta_deg) < 90.0:
            out.append((i, f"step angle {st.beta_deg!r} outside 0 < |beta| < 90"))
            continue
        if not (np.allclose(st.start, a, rtol=0, atol=tol.ang)
                and np.allclose(st.end, b, rtol=0, atol=tol.ang)):
            out.append((i, "step endpoints disagree with the point list"))
        try:
            want = geom.descent_point(f, a, st.beta_deg, tol)
            he = geom.e_point(f, a, tol)
        except KSError as exc:
            out.append((i, f"step not computable: {exc}"))
            continue
        if math.radians(geom.proj_angle(want, b)) > tol.ang:
            out.append((i + 1, "point is not the descent of its predecessor"))
        if abs(geom.det3(a, he, b)) > tol.orth:
            out.append((i + 1, "point is off the descent circle of its predecessor"))
        ca, cb = geom.colatitude(f, a), geom.colatitude(f, b)
        if not cb > ca:
            out.append((i + 1, "colatitude does not increase"))
        law = math.tan(ca) / math.cos(math.radians(st.beta_deg))
        if abs(math.tan(cb) - law) > tol.ang * max(1.0, law):
            out.append((i + 1, "radius law tan(colat') = tan(colat) sec(beta) fails"))
    return out
