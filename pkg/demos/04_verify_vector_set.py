"""
Checking a hand-made vector set
===============================

Constraints need not be written by hand: orthogonal triples, orthogonal
pairs and coplanar spans can be read off the vectors themselves.  Small
sets can then be decided three ways, which should agree.  The span rule
is what makes small sets rigid: drop it and the same vectors color easily.
"""

import itertools

import numpy as np

from ksgeo import csp, formats

# The basis, the x-y face diagonals and a few more small integer directions.
vecs = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, -1, 0),
        (1, 0, 1), (1, 0, -1), (0, 1, 1), (0, 1, -1), (1, 1, 1)]
points = [np.array(v, float) for v in vecs]
labels = ["".join(map(str, v)).replace("-1", "m") for v in vecs]
system = formats.derive_constraints(points, labels=labels)
print(system.summary())

res = csp.solve(system)
print("search:", "colorable" if res.colorable else "uncolorable")
if res.colorable:
    print("  Red:", [system.label(i) for i in res.coloring.reds])
print("brute force count:", csp.count_colorings(system))

# The same question as a SAT instance; count models by hand.
cnf = csp.to_cnf(system)
models = sum(all(any((lit > 0) == bits[abs(lit) - 1] for lit in cl) for cl in cnf.clauses)
             for bits in itertools.product((False, True), repeat=cnf.num_vars))
print(f"CNF: {cnf.num_vars} variables, {len(cnf.clauses)} clauses, {models} models")

# Without spans only the triple and pair rules remain.
loose = formats.derive_constraints(points, spans=False, labels=labels)
res = csp.solve(loose)
print(f"without spans: {loose.summary()}; {csp.count_colorings(loose)} colorings")
print("  one of them has Red:", [loose.label(i) for i in res.coloring.reds])

# Assumptions can be pushed through the rules without search.
first = loose.triples[0]
col = csp.propagate(loose, [(first[0], csp.RED)])
forced = [f"{loose.label(i)}={'R' if v else 'G'}" for i, v in enumerate(col.values) if v is not None]
print(f"making {loose.label(first[0])} Red forces:", " ".join(forced))
