"""
Frames, triples and the gnomonic plane
======================================

A point between pole and equator comes with two companions: the equator
point 90 degrees further east, and their common orthogonal.  Together
they form an orthogonal triple.
"""

import numpy as np

from ksgeo import geom

# A frame is a pole plus an equator; the standard one is the world basis.
f = geom.STANDARD
psi = geom.latlon_to_vec(f, (60.0, 0.0))
psi_e = geom.e_point(f, psi)
psi_p = geom.perp_point(f, psi)

for name, v in (("psi", psi), ("psi_E", psi_e), ("psi_perp", psi_p)):
    lat, lon = geom.vec_to_latlon(f, v)
    print(f"{name:9s} lat={lat:7.3f} lon={lon:8.3f}  {np.round(v, 6)}")

# The three directions are mutually orthogonal.
gram = np.array([psi, psi_e, psi_p]) @ np.array([psi, psi_e, psi_p]).T
print("Gram matrix is the identity:", np.allclose(gram, np.eye(3)))

# Central projection sends latitude circles to circles of radius tan(colatitude)
# and great circles to straight lines.
p = geom.gnomonic(f, psi)
print(f"psi projects to ({p.u:.6f}, {p.v:.6f}), radius {p.radius:.6f} = tan 30 deg")

# A descent step of plane angle beta stretches the radius by sec(beta).
q = geom.descent_point(f, psi, 25.0)
r = geom.gnomonic(f, q).radius
print(f"after a 25 deg step the radius is {r:.6f}; sec(25) * tan(30) = "
      f"{np.tan(np.radians(30)) / np.cos(np.radians(25)):.6f}")

# Frames can sit anywhere; here the pole is the body diagonal.
tilted = geom.Frame.from_pole([1, 1, 1], meridian=[1, 0, 0])
print("tilted frame violations:", tilted.violations() or "none")
print("the world x axis sits at", geom.vec_to_latlon(tilted, [1, 0, 0]))
