import itertools

import numpy as np
import pytest
from conftest import random_system

from ksgeo import construct, csp
from ksgeo.csp import (Certificate, Conflict, ConflictStep, ConstraintSystem, Propagate,
                       count_colorings, is_valid_coloring, propagate, solve)
from ksgeo.errors import NotDerivable, TooLarge

R, G = True, False
X, Y, Z = np.eye(3)


def system(n, triples=(), pairs=(), spans=()):
    """Combinatorial system; coordinates are irrelevant to the solver."""
    return ConstraintSystem(np.tile(X, (n, 1)), triples, pairs, spans)


def enumerate_valid(sys):
    """Oracle: literal reading of the rules over all 2^n assignments."""
    out = []
    for col in itertools.product((G, R), repeat=len(sys)):
        ok = all(sum(col[i] for i in t) == 1 for t in sys.triples)
        ok = ok and all(not (col[a] and col[b]) for a, b in sys.pairs)
        ok = ok and all(not (col[c] and not col[a] and not col[b]) for c, a, b in sys.spans)
        if ok:
            out.append(col)
    return out


TRIPLE = system(3, triples=[(0, 1, 2)])
PAIR = system(2, pairs=[(0, 1)])
TRIPLE_SPAN = system(3, triples=[(0, 1, 2)], spans=[(2, 0, 1)])


@pytest.mark.parametrize("sys_, want", [(TRIPLE, 3), (PAIR, 3), (TRIPLE_SPAN, 2)])
def test_micro_counts(sys_, want):
    assert len(enumerate_valid(sys_)) == want
    assert count_colorings(sys_) == want


def test_triple_span_colorings_put_red_on_a_or_b():
    assert sorted(enumerate_valid(TRIPLE_SPAN)) == [(G, R, G), (R, G, G)]


def test_system_canonicalizes_records():
    s = system(4, triples=[(2, 0, 1), (0, 1, 2)], pairs=[(3, 1)], spans=[(3, 2, 0), (3, 0, 2)])
    assert s.triples == ((0, 1, 2),)
    assert s.pairs == ((1, 3),)
    assert s.spans == ((3, 0, 2),)
    with pytest.raises(ValueError):
        system(3, triples=[(0, 0, 1)])
    with pytest.raises(ValueError):
        system(3, pairs=[(0, 5)])


def test_propagate_triple_red():
    res = propagate(TRIPLE, [(0, R)])
    assert res.values == (R, G, G)


def test_propagate_triple_two_green():
    assert propagate(TRIPLE, [(0, G), (2, G)]).values == (G, R, G)


def test_propagate_span_conflict():
    s = system(3, spans=[(2, 0, 1)])
    res = propagate(s, [(0, G), (1, G), (2, R)])
    assert res == Conflict("S0", ((2, R), (0, G), (1, G)))


def test_propagate_span_backward():
    s = system(3, spans=[(2, 0, 1)])
    assert propagate(s, [(2, R), (0, G)]).values == (G, R, R)


def test_propagate_fixed_point_unchanged():
    assert propagate(TRIPLE).values == (None, None, None)


def test_propagate_monotone_and_idempotent(rng):
    for _ in range(50):
        s = random_system(rng)
        p = int(rng.integers(len(s)))
        res = propagate(s, [(p, bool(rng.integers(2)))])
        if isinstance(res, Conflict):
            continue
        assert res[p] is not None
        again = propagate(s, res)
        assert again == res


def test_solve_single_triple():
    res = solve(TRIPLE)
    assert res.colorable
    assert res.coloring.values == (R, G, G)


def test_solve_triple_span():
    res = solve(TRIPLE_SPAN)
    assert res.colorable and is_valid_coloring(TRIPLE_SPAN, res.coloring.values)


def test_solve_uncolorable_toy():
    # two triples sharing a point plus spans forcing both reds apart
    s = system(3, triples=[(0, 1, 2)], spans=[(0, 1, 2), (1, 0, 2), (2, 0, 1)])
    assert enumerate_valid(s) == []
    assert not solve(s).colorable


def test_solve_deterministic(rng):
    s = random_system(rng)
    assert solve(s) == solve(s)


def test_solver_matches_oracle_on_random_constraints(rng):
    """Non-geometric constraint soups exercise the uncolorable side too."""
    uncolorable = 0
    for _ in range(150):
        n = int(rng.integers(3, 11))
        recs = lambda k, m: [tuple(rng.choice(n, size=m, replace=False)) for _ in range(k)]  # noqa: E731
        s = system(n, recs(int(rng.integers(0, 5)), 3), recs(int(rng.integers(0, 3)), 2),
                   recs(int(rng.integers(0, 8)), 3))
        want = len(enumerate_valid(s))
        assert count_colorings(s) == want
        res = solve(s)
        assert res.colorable == (want > 0)
        if res.colorable:
            assert is_valid_coloring(s, res.coloring.values)
        uncolorable += want == 0
    assert uncolorable > 10


def test_count_guard():
    with pytest.raises(TooLarge):
        count_colorings(system(25))


def test_to_cnf_triple():
    cnf = csp.to_cnf(TRIPLE)
    assert cnf.num_vars == 3
    assert cnf.clauses == ((1, 2, 3), (-1, -2), (-1, -3), (-2, -3))


def test_to_cnf_span():
    s = system(3, spans=[(2, 0, 1)])
    assert csp.to_cnf(s).clauses == ((1, 2, -3),)


def cnf_models(cnf):
    out = []
    for bits in itertools.product((False, True), repeat=cnf.num_vars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in cl) for cl in cnf.clauses):
            out.append(bits)
    return out


def test_cnf_models_equal_valid_colorings(rng):
    for _ in range(60):
        s = random_system(rng, max_points=12)
        assert set(cnf_models(csp.to_cnf(s))) == set(enumerate_valid(s))


# -- gadget and certificates ---------------------------------------------------

@pytest.fixture(scope="module")
def gadget_sys():
    g = construct.build_gadget(Z, construct.build_circuit().points[1])
    return g.to_system()


def test_gadget_green_target_conflicts_by_propagation(gadget_sys):
    u, s = gadget_sys.index("u"), gadget_sys.index("s")
    res = propagate(gadget_sys, [(u, R), (s, G)])
    assert isinstance(res, Conflict)
    assert not solve(gadget_sys, [(u, R), (s, G)]).colorable


def test_gadget_red_pole_forces_red_target(gadget_sys):
    u, s = gadget_sys.index("u"), gadget_sys.index("s")
    res = solve(gadget_sys, [(u, R)])
    assert res.colorable
    assert res.coloring[s] is R
    assert is_valid_coloring(gadget_sys, res.coloring.values)


@pytest.fixture(scope="module")
def proof():
    s = construct.build_system()
    return s, csp.prove_paper_style(s, s.corner_triple(), s.circuit)


def test_certificate_shape(proof):
    s, cert = proof
    assert len(cert.branches) == 3
    assert s.constraint(cert.split) == ("T", tuple(sorted(s.corner_triple())))
    assert csp.check_certificate(s, cert)


def test_certificate_with_deleted_premise_is_rejected(proof):
    s, cert = proof
    br = cert.branches[0]
    k = next(i for i, st in enumerate(br.steps) if isinstance(st, Propagate))
    st = br.steps[k]
    broken = Propagate(st.lit, st.constraint, st.premises[:-1])
    steps = br.steps[:k] + (broken,) + br.steps[k + 1:]
    bad = Certificate(cert.split, (csp.Branch(br.assume, steps),) + cert.branches[1:])
    res = csp.check_certificate(s, bad)
    assert not res.ok
    assert res.path == (0, k)


def test_certificate_wrong_constraint_rejected(proof):
    s, cert = proof
    br = cert.branches[1]
    last = br.steps[-1]
    bad_last = ConflictStep("S0", last.premises)
    bad = Certificate(cert.split, (cert.branches[0],
                                   csp.Branch(br.assume, br.steps[:-1] + (bad_last,)),
                                   cert.branches[2]))
    assert not csp.check_certificate(s, bad)


def test_empty_certificate_rejected():
    assert not csp.check_certificate(TRIPLE, Certificate("T0", ()))
    assert not csp.check_certificate(TRIPLE, None)


def test_not_derivable_without_triple():
    with pytest.raises(NotDerivable):
        csp.prove_paper_style(PAIR, (0, 1, 0), [0, 1])
    with pytest.raises(NotDerivable):
        csp.prove_paper_style(TRIPLE, (0, 1, 2), [0, 1, 2])
