import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ksgeo import descent, geom
from ksgeo.descent import DescentPath
from ksgeo.errors import DegenerateEndpoint, NotMoreSoutherly
from ksgeo.geom import STANDARD


def sec(deg):
    return 1.0 / math.cos(math.radians(deg))


def oracle_schedule(ratio, dphi):
    """Scalar re-derivation of the step policy, written out longhand."""
    n = 0
    if dphi:
        n = 1
        while abs(dphi / n) >= 90 or sec(dphi / n) ** n > ratio:
            n += 1
    growth = sec(dphi / n) ** n if n else 1.0
    gamma = math.degrees(math.acos(math.sqrt(growth / ratio)))
    return n, gamma


def test_sixty_to_thirty_across_the_pole():
    path = descent.plan(STANDARD, (60, 0), (30, 180))
    n, gamma = oracle_schedule(3.0, 180.0)
    assert n == 5
    assert sec(36) ** 5 == pytest.approx(2.88538, abs=1e-4)
    assert gamma == pytest.approx(11.269, abs=1e-3)
    assert len(path) == 7
    assert path.betas[:5] == [36.0] * 5
    assert path.betas[5] == pytest.approx(gamma, abs=1e-9)
    assert path.betas[6] == pytest.approx(-gamma, abs=1e-9)
    assert descent.validate(path) == []
    end = geom.latlon_to_vec(STANDARD, (30, 180))
    assert math.radians(geom.proj_angle(path.points[-1], end)) < 1e-9


def test_radius_law_on_every_step():
    path = descent.plan(STANDARD, (60, 0), (30, 180))
    for st_ in path.steps:
        a = math.tan(geom.colatitude(STANDARD, st_.start))
        b = math.tan(geom.colatitude(STANDARD, st_.end))
        assert b == pytest.approx(a * sec(st_.beta_deg), abs=1e-9)


def test_same_meridian_uses_only_the_zigzag():
    path = descent.plan(STANDARD, (60, 0), (59.9, 0))
    r = math.tan(math.radians(30)), math.tan(math.radians(30.1))
    n, gamma = oracle_schedule(r[1] / r[0], 0.0)
    assert n == 0
    assert path.betas == pytest.approx([gamma, -gamma], abs=1e-9)
    assert descent.validate(path) == []


def test_not_more_southerly():
    with pytest.raises(NotMoreSoutherly):
        descent.plan(STANDARD, (30, 0), (60, 0))
    with pytest.raises(NotMoreSoutherly):
        descent.plan(STANDARD, (30, 0), (30, 90))


@pytest.mark.parametrize("a, b", [((90, 0), (30, 0)), ((60, 0), (0, 0))])
def test_degenerate_endpoints(a, b):
    with pytest.raises(DegenerateEndpoint):
        descent.plan(STANDARD, a, b)


def test_validate_flags_injected_fault():
    path = descent.plan(STANDARD, (60, 0), (30, 180))
    pts = list(path.points)
    # pull point 3 back up toward the pole
    pts[3] = geom.latlon_to_vec(STANDARD, (55.0, 108.0))
    bad = DescentPath(path.frame, tuple(pts), path.steps)
    problems = descent.validate(bad)
    assert problems
    assert 3 in {i for i, _ in problems}
    assert any("colatitude" in m for _, m in problems)


def test_validate_single_point_path():
    p = geom.latlon_to_vec(STANDARD, (40, 0))
    assert descent.validate(DescentPath(STANDARD, (p,), ())) == []


def test_plan_is_deterministic():
    a = descent.plan(STANDARD, (71.3, -20), (12.5, 141))
    b = descent.plan(STANDARD, (71.3, -20), (12.5, 141))
    assert a.betas == b.betas
    for p, q in zip(a.points, b.points):
        assert np.array_equal(p, q)


@st.composite
def endpoints(draw):
    lat1 = draw(st.floats(0.5, 88.0))
    lat0 = draw(st.floats(min_value=lat1 + 1.0, max_value=89.9))
    lon0 = draw(st.floats(-180, 180))
    dlon = draw(st.one_of(st.just(0.0), st.floats(1e-3, 180), st.floats(-180, -1e-3)))
    return (lat0, lon0), (lat1, lon0 + dlon)


def _check(a, b):
    path = descent.plan(STANDARD, a, b)
    assert descent.validate(path) == []
    end = geom.latlon_to_vec(STANDARD, b)
    assert math.radians(geom.proj_angle(path.points[-1], end)) < 1e-9


@given(endpoints())
@settings(max_examples=300, deadline=None)
def test_plan_then_validate_hypothesis(ends):
    _check(*ends)


def test_plan_then_validate_1000_random_pairs(rng):
    for _ in range(1000):
        lat = np.sort(rng.uniform(0.5, 89.5, size=2))
        if lat[1] - lat[0] < 1e-6:
            continue
        _check((lat[1], rng.uniform(-180, 180)), (lat[0], rng.uniform(-180, 180)))


def test_tiny_longitude_difference_is_ignored():
    path = descent.plan(STANDARD, (2.0, 1e-170), (1.0, 0.0))
    assert descent.validate(path) == []
