"""Spherical and projective geometry on the unit sphere in R^3.

Directions are plain ``numpy`` arrays of shape ``(3,)``.  A *projective
point* is a unit vector in canonical sign form (see :func:`canonicalize`).
Latitudes and longitudes are degrees at the API boundary; all internal
trigonometry is in radians.

Every frame-relative operation takes a :class:`Frame` whose ``e3`` is the
pole and whose ``e1``/``e2`` span the equator (longitudes 0 and 90).
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import BetaOutOfRange, DegeneratePoint, EquatorOrSouthern, NonUnitVector
from .tolerances import DEFAULT, Tolerances


class LatLon(NamedTuple):
    lat: float  # degrees, [-90, 90]
    lon: float  # degrees, (-180, 180]


class PlanePoint(NamedTuple):
    u: float
    v: float

    @property
    def radius(self) -> float:
        return float(np.hypot(self.u, self.v))


def as_vec(v) -> np.ndarray:
    return np.asarray(v, dtype=float).reshape(3)


def normalize(v) -> np.ndarray:
    v = as_vec(v)
    n = np.linalg.norm(v)
    if n == 0.0:
        raise NonUnitVector("zero vector has no direction")
    if abs(n - 1.0) <= 4 * np.finfo(float).eps:
        return v  # already unit; keeps repeated normalization bit-stable
    return v / n


def check_unit(v, tol: Tolerances = DEFAULT) -> np.ndarray:
    v = as_vec(v)
    if abs(np.linalg.norm(v) - 1.0) > tol.norm:
        raise NonUnitVector(f"|v| = {np.linalg.norm(v)!r} is not 1")
    return v


def canonicalize(v, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Sign-canonical representative of the line through ``v``.

    The first component with magnitude above ``tol.canon`` is made positive.
    Idempotent, and ``canonicalize(v) == canonicalize(-v)``.
    """
    v = check_unit(v, tol)
    for c in v:
        if abs(c) > tol.canon:
            out = v if c > 0 else -v
            return out + 0.0  # drop negative zeros
    raise NonUnitVector("no component above the canonicalization threshold")


def proj_angle(a, b) -> float:
    """Angle in degrees, in [0, 90], between the lines through ``a`` and ``b``.

    Equal to ``arccos(|a.b|)`` for unit vectors; computed with ``atan2`` so
    that angles near zero keep full precision (needed for deduplication).
    """
    a, b = as_vec(a), as_vec(b)
    s = np.linalg.norm(np.cross(a, b))
    c = abs(float(np.dot(a, b)))
    return float(np.degrees(np.arctan2(s, c)))


@dataclass(frozen=True, eq=False)
class Frame:
    """Right-handed orthonormal basis; ``e3`` is the pole."""

    e1: np.ndarray
    e2: np.ndarray
    e3: np.ndarray

    def __post_init__(self):
        for name in ("e1", "e2", "e3"):
            v = as_vec(getattr(self, name)).copy()
            v.flags.writeable = False
            object.__setattr__(self, name, v)

    @property
    def matrix(self) -> np.ndarray:
        """Rows are e1, e2, e3 (maps world vectors to frame coordinates)."""
        return np.vstack([self.e1, self.e2, self.e3])

    def local(self, v) -> np.ndarray:
        return self.matrix @ as_vec(v)

    def world(self, x) -> np.ndarray:
        return self.matrix.T @ as_vec(x)

    def violations(self, tol: Tolerances = DEFAULT) -> list:
        out = []
        m = self.matrix
        g = m @ m.T
        if np.max(np.abs(g - np.eye(3))) > tol.orth:
            out.append("basis is not orthonormal")
        if abs(np.linalg.det(m) - 1.0) > tol.orth:
            out.append("basis is not right-handed")
        return out

    @classmethod
    def from_pole(cls, pole, meridian=None, tol: Tolerances = DEFAULT) -> "Frame":
        """Frame with ``e3 = pole`` and longitude 0 through ``meridian``.

        ``meridian`` must not be parallel to the pole.  When omitted, the
        world axis least aligned with the pole is used.
        """
        e3 = normalize(pole)
        if meridian is None:
            meridian = np.eye(3)[int(np.argmin(np.abs(e3)))]
        m = as_vec(meridian)
        h = m - np.dot(m, e3) * e3
        if np.linalg.norm(h) <= tol.parallel:
            raise DegeneratePoint("meridian direction is parallel to the pole")
        e1 = h / np.linalg.norm(h)
        e2 = np.cross(e3, e1)
        return cls(e1, e2 / np.linalg.norm(e2), e3)


STANDARD = Frame(np.array([1.0, 0, 0]), np.array([0, 1.0, 0]), np.array([0, 0, 1.0]))


def latlon_to_vec(f: Frame, p) -> np.ndarray:
    lat, lon = np.radians(p[0]), np.radians(p[1])
    return (np.cos(lat) * np.cos(lon) * f.e1
            + np.cos(lat) * np.sin(lon) * f.e2
            + np.sin(lat) * f.e3)


def vec_to_latlon(f: Frame, v) -> LatLon:
    x, y, z = f.local(v)
    rho = np.hypot(x, y)
    lat = float(np.degrees(np.arctan2(z, rho)))
    if rho == 0.0:
        return LatLon(lat, 0.0)
    lon = float(np.degrees(np.arctan2(y, x)))
    if lon == -180.0:
        lon = 180.0
    return LatLon(lat, lon)


def colatitude(f: Frame, v) -> float:
    """Angle from the pole, radians."""
    x, y, z = f.local(v)
    return float(np.arctan2(np.hypot(x, y), z))


def _banded(f: Frame, psi, tol: Tolerances):
    """Frame coordinates of ``psi`` flipped into the northern hemisphere.

    Raises DegeneratePoint unless the latitude lies strictly inside the band
    between equator and pole.
    """
    x, y, z = f.local(psi)
    if z < 0:
        x, y, z = -x, -y, -z
    rho = np.hypot(x, y)
    lat = np.degrees(np.arctan2(z, rho))
    if not (tol.lat_deg < lat < 90.0 - tol.lat_deg):
        raise DegeneratePoint(f"latitude {lat!r} deg is at the pole or on the equator")
    return x, y, z, rho


def e_point(f: Frame, psi, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Equator point at longitude(psi) + 90 degrees."""
    x, y, _, rho = _banded(f, psi, tol)
    return f.world([-y / rho, x / rho, 0.0])


def perp_point(f: Frame, psi, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Common orthogonal of ``psi`` and ``e_point(psi)``.

    Latitude 90 - lat(psi), longitude lon(psi) + 180.
    """
    x, y, z, rho = _banded(f, psi, tol)
    return f.world([-z * x / rho, -z * y / rho, rho])


def gnomonic(f: Frame, v, tol: Tolerances = DEFAULT) -> PlanePoint:
    x, y, z = f.local(v)
    if z <= tol.norm:
        raise EquatorOrSouthern(f"frame z-component {z!r} is not positive")
    return PlanePoint(float(x / z), float(y / z))


def ungnomonic(f: Frame, p) -> np.ndarray:
    return normalize(f.world([p[0], p[1], 1.0]))


def descent_point(f: Frame, psi, beta_deg: float, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Move from ``psi`` along its descent circle by plane angle ``beta_deg``.

    In the gnomonic plane the descent circle is the line tangent at the
    image of ``psi`` to the circle through it; a step of plane angle beta
    (positive = increasing longitude) multiplies the radius by sec(beta).
    """
    if not abs(beta_deg) < 90.0:
        raise BetaOutOfRange(f"|beta| = {abs(beta_deg)!r} deg must be below 90")
    x, y, z, _ = _banded(f, psi, tol)
    u, v = x / z, y / z
    r = np.hypot(u, v)
    t = r * np.tan(np.radians(beta_deg))
    return ungnomonic(f, (u - t * v / r, v + t * u / r))


def det3(a, b, c) -> float:
    return float(np.linalg.det(np.vstack([as_vec(a), as_vec(b), as_vec(c)])))
