"""
An uncolorable set of directions, with a readable proof
=======================================================

Nine points on a closed tour, 30 degrees apart, each linked to the next
by a gadget.  If a point is Red the gadget forces its successor Red, so
one Red corner makes every corner Red.  The three corners are mutually
orthogonal, and a triple cannot hold three Reds.
"""

import sys
import tempfile
from pathlib import Path

from ksgeo import construct, csp, formats, geom

out = Path(sys.argv[1] if len(sys.argv) > 1 else tempfile.mkdtemp(prefix="ksgeo-"))
out.mkdir(parents=True, exist_ok=True)

# One gadget on its own: pole u, target s at 30 degrees.
g = construct.build_gadget([0, 0, 1], geom.latlon_to_vec(geom.STANDARD, (60.0, 0.0)))
gs = g.to_system()
print("gadget:", gs.summary())
print("  chain angles:", [round(b, 6) for b in g.chain.betas])
u, s = gs.index("u"), gs.index("s")
print("  u=Red, s=Green gives", csp.propagate(gs, [(u, csp.RED), (s, csp.GREEN)]))

# The full system.
system = construct.build_system(30.0)
print("system:", system.summary())
print("geometry problems:", construct.validate_geometry(system) or "none")
res = csp.solve(system)
print(f"colorable: {res.colorable} (search visited {res.nodes} nodes)")

# The proof: split on the corner triple, then walk the tour probing Green.
cert = csp.prove_paper_style(system, system.corner_triple(), system.circuit)
print(f"certificate: {cert.n_steps} steps, checker says {csp.check_certificate(system, cert)}")
for br in cert.branches:
    probed = [system.label(st.assume[0]) for st in br.steps if isinstance(st, csp.Probe)]
    print(f"  branch {system.label(br.assume[0])}=Red probes {' '.join(probed)}")

(out / "system.json").write_text(formats.write_system(system))
(out / "proof.txt").write_text(formats.write_certificate(cert))
(out / "system.cnf").write_text(formats.write_dimacs(csp.to_cnf(system)))
shown = {k: v for k, v in g.points.items() if g.frame.local(v)[2] > 1e-6}
(out / "gadget.svg").write_text(formats.render_svg(g.frame, shown, [g.chain]))
print("wrote", ", ".join(sorted(p.name for p in out.iterdir())), "to", out)
