"""Finite uncolorable direction sets in R^3 built from great-circle descents.

Modules:

* :mod:`ksgeo.geom` - frames, latitude/longitude, gnomonic projection,
  the descent-circle construction.
* :mod:`ksgeo.descent` - planning and checking chains of descents.
* :mod:`ksgeo.construct` - the circuit of gadgets and its constraint system.
* :mod:`ksgeo.csp` - coloring rules, propagation, search, certificates, CNF.
* :mod:`ksgeo.formats` - documents, DIMACS, certificate text, SVG figures.
"""

from .construct import build_circuit, build_gadget, build_system, validate_geometry
from .csp import (Coloring, ConstraintSystem, check_certificate, count_colorings,
                  propagate, prove_paper_style, solve, to_cnf)
from .descent import plan
from .tolerances import DEFAULT, Tolerances

__all__ = [
    "Coloring", "ConstraintSystem", "DEFAULT", "Tolerances",
    "build_circuit", "build_gadget", "build_system", "check_certificate",
    "count_colorings", "plan", "propagate", "prove_paper_style", "solve",
    "to_cnf", "validate_geometry",
]

__version__ = "0.1.0"
