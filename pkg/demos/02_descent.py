"""
Descending from latitude 60 to latitude 30
==========================================

Moving along a great circle away from its most northerly point always
increases colatitude.  A short chain of such moves reaches any point
further south; the planner picks equal steps for the turn and a single
zigzag to absorb the leftover stretch.
"""

import math

from ksgeo import descent, geom

f = geom.STANDARD
path = descent.plan(f, (60.0, 0.0), (30.0, 180.0))
print(f"{len(path)} steps, problems: {descent.validate(path) or 'none'}")

for i, p in enumerate(path.points):
    lat, lon = geom.vec_to_latlon(f, p)
    beta = f"{path.betas[i - 1]:+10.6f}" if i else " " * 10
    print(f"{i}  beta={beta}  lat={lat:10.6f}  lon={lon:11.6f}")

# The growth of the five equal steps falls short of tan(60)/tan(30) = 3;
# the zigzag makes up the difference.
growth = (1 / math.cos(math.radians(36))) ** 5
gamma = math.degrees(math.acos(math.sqrt(growth / 3)))
print(f"equal-step growth {growth:.6f}, zigzag angle {gamma:.6f} deg")

# Any more southerly target works; the number of steps depends on the turn.
for lon in (0, 45, 90, 135, 179):
    n = len(descent.plan(f, (60.0, 0.0), (30.0, lon)))
    print(f"to (30, {lon:3d}): {n} steps")

try:
    descent.plan(f, (30.0, 0.0), (60.0, 0.0))
except descent.NotMoreSoutherly as exc:
    print("northward request refused:", exc)
