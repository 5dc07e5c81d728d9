import itertools

import numpy as np
import pytest

from ksgeo import formats


def _lattice(maxc=1):
    """Projective classes of small integer vectors."""
    seen, out = set(), []
    for v in itertools.product(range(-maxc, maxc + 1), repeat=3):
        if not any(v):
            continue
        first = next(c for c in v if c)
        key = tuple(c if first > 0 else -c for c in v)
        g = np.gcd.reduce([abs(c) for c in key if c])
        key = tuple(c // g for c in key)
        if key not in seen:
            seen.add(key)
            out.append(np.array(key, dtype=float))
    return out


LATTICE = _lattice(2)


def random_rotation(rng):
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_system(rng, max_points=16):
    """Rotated subset of small integer directions, constraints auto-derived."""
    n = int(rng.integers(3, max_points + 1))
    idx = rng.choice(len(LATTICE), size=n, replace=False)
    rot = random_rotation(rng)
    pts = [rot @ (LATTICE[i] / np.linalg.norm(LATTICE[i])) for i in idx]
    return formats.derive_constraints(pts)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
