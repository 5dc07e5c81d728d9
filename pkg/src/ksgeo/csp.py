"""Red/green coloring constraints, propagation, search and refutation certificates.

A point is *Red* (``True``) or *Green* (``False``).  Three constraint kinds:

``TRIPLE(a, b, c)``
    exactly one of a, b, c is Red;
``PAIR(a, b)``
    at most one of a, b is Red;
``SPAN(c; a, b)``
    if a and b are Green then c is Green.

Constraints are addressed by string ids: ``T<i>``, ``P<i>``, ``S<i>`` index
into ``triples``, ``pairs`` and ``spans``.  A literal is ``(point, red)``.
"""

import heapq
import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import NotDerivable, TooLarge
from .tolerances import DEFAULT, Tolerances

RED, GREEN = True, False
KINDS = ("T", "P", "S")


@dataclass(frozen=True, eq=False)
class ConstraintSystem:
    """Points plus TRIPLE/PAIR/SPAN records over their indices.

    Records are stored in canonical form (sorted triple and pair indices,
    spans as ``(c, a, b)`` with ``a < b``) and duplicates are dropped.
    ``circuit``, when set, is a cyclic tour of point indices whose every
    third point (starting at 0) forms the corner triple.
    """

    points: np.ndarray
    triples: tuple = ()
    pairs: tuple = ()
    spans: tuple = ()
    labels: tuple = None
    circuit: tuple = None
    tol: Tolerances = DEFAULT

    def __post_init__(self):
        pts = np.array(self.points, dtype=float).reshape(-1, 3)
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)
        n = len(pts)

        def canon(records, arity, fix):
            out, seen = [], set()
            for r in records:
                r = tuple(int(i) for i in r)
                if len(r) != arity:
                    raise ValueError(f"record {r} should have {arity} indices")
                if len(set(r)) != arity:
                    raise ValueError(f"record {r} repeats an index")
                if any(not 0 <= i < n for i in r):
                    raise ValueError(f"record {r} has an index out of range")
                r = fix(r)
                if r not in seen:
                    seen.add(r)
                    out.append(r)
            return tuple(out)

        object.__setattr__(self, "triples", canon(self.triples, 3, lambda r: tuple(sorted(r))))
        object.__setattr__(self, "pairs", canon(self.pairs, 2, lambda r: tuple(sorted(r))))
        object.__setattr__(self, "spans", canon(
            self.spans, 3, lambda r: (r[0], min(r[1:]), max(r[1:]))))
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != n:
                raise ValueError("one label per point required")
            object.__setattr__(self, "labels", labels)
        if self.circuit is not None:
            c = tuple(int(i) for i in self.circuit)
            if len(c) % 3 or any(not 0 <= i < n for i in c):
                raise ValueError("circuit must be indices, length divisible by 3")
            object.__setattr__(self, "circuit", c)

    def __len__(self):
        return len(self.points)

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels is not None else f"p{i}"

    def index(self, label: str) -> int:
        if self.labels is None:
            raise KeyError(label)
        return self.labels.index(label)

    @property
    def n_constraints(self) -> int:
        return len(self.triples) + len(self.pairs) + len(self.spans)

    def constraints(self):
        """Yield ``(cid, kind, indices)`` in id order: triples, pairs, spans."""
        for kind, recs in zip(KINDS, (self.triples, self.pairs, self.spans)):
            for i, r in enumerate(recs):
                yield f"{kind}{i}", kind, r

    def constraint(self, cid: str):
        kind, i = cid[:1], cid[1:]
        recs = {"T": self.triples, "P": self.pairs, "S": self.spans}.get(kind)
        if recs is None or not i.isdigit() or int(i) >= len(recs):
            raise KeyError(cid)
        return kind, recs[int(i)]

    def find_triple(self, a: int, b: int, c: int) -> str:
        key = tuple(sorted((a, b, c)))
        for i, t in enumerate(self.triples):
            if t == key:
                return f"T{i}"
        raise KeyError(key)

    def corner_triple(self):
        if self.circuit is None:
            return None
        k = len(self.circuit) // 3
        return self.circuit[0], self.circuit[k], self.circuit[2 * k]

    def with_constraints(self, triples=(), pairs=(), spans=()) -> "ConstraintSystem":
        return ConstraintSystem(self.points, self.triples + tuple(triples),
                                self.pairs + tuple(pairs), self.spans + tuple(spans),
                                self.labels, self.circuit, self.tol)

    def summary(self) -> str:
        return (f"{len(self)} points, {len(self.triples)} triples, "
                f"{len(self.pairs)} pairs, {len(self.spans)} spans")


# -- colorings ---------------------------------------------------------------

@dataclass(frozen=True)
class Coloring:
    """Per-point color: True = Red, False = Green, None = unset."""

    values: tuple

    @classmethod
    def empty(cls, n: int) -> "Coloring":
        return cls((None,) * n)

    @classmethod
    def from_literals(cls, n: int, lits) -> "Coloring":
        vals = [None] * n
        for p, red in lits:
            vals[p] = bool(red)
        return cls(tuple(vals))

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    @property
    def is_total(self) -> bool:
        return all(v is not None for v in self.values)

    @property
    def reds(self) -> list:
        return [i for i, v in enumerate(self.values) if v is True]


def is_valid_coloring(sys: ConstraintSystem, col) -> bool:
    """The VALID predicate on a total coloring."""
    col = list(col)
    if len(col) != len(sys) or any(v is None for v in col):
        return False
    if any(sum(bool(col[i]) for i in t) != 1 for t in sys.triples):
        return False
    if any(col[a] and col[b] for a, b in sys.pairs):
        return False
    return not any(col[c] and not col[a] and not col[b] for c, a, b in sys.spans)


# -- single-constraint inference -----------------------------------------------

def infer(kind: str, rec, color):
    """Consequences of one constraint under a partial assignment.

    ``color(i)`` returns True/False/None.  Returns ``(conflict, forced)``:
    ``conflict`` is the tuple of literals violating the constraint (or
    None); ``forced`` lists ``(literal, premises)`` for each unset point the
    constraint determines.  This is the only inference code; propagation
    and certificate replay both go through it.
    """
    vals = [color(i) for i in rec]
    lit = lambda j: (rec[j], vals[j])  # noqa: E731
    if kind == "T":
        reds = [j for j in range(3) if vals[j] is True]
        greens = [j for j in range(3) if vals[j] is False]
        if len(reds) >= 2:
            return (lit(reds[0]), lit(reds[1])), []
        if len(greens) == 3:
            return tuple(lit(j) for j in greens), []
        if len(reds) == 1:
            prem = (lit(reds[0]),)
            return None, [((rec[j], GREEN), prem) for j in range(3) if vals[j] is None]
        if len(greens) == 2:
            (j,) = [j for j in range(3) if vals[j] is None]
            return None, [((rec[j], RED), tuple(lit(g) for g in greens))]
        return None, []
    if kind == "P":
        a, b = vals
        if a is True and b is True:
            return (lit(0), lit(1)), []
        if a is True and b is None:
            return None, [((rec[1], GREEN), (lit(0),))]
        if b is True and a is None:
            return None, [((rec[0], GREEN), (lit(1),))]
        return None, []
    if kind == "S":
        c, a, b = vals
        if c is True and a is False and b is False:
            return (lit(0), lit(1), lit(2)), []
        if a is False and b is False and c is None:
            return None, [((rec[0], GREEN), (lit(1), lit(2)))]
        if c is True and a is False and b is None:
            return None, [((rec[2], RED), (lit(0), lit(1)))]
        if c is True and b is False and a is None:
            return None, [((rec[1], RED), (lit(0), lit(2)))]
        return None, []
    raise ValueError(f"unknown constraint kind {kind!r}")


@dataclass(frozen=True)
class Conflict:
    constraint: str
    premises: tuple = ()


class _Index:
    """Flat constraint table with point -> constraint watch lists."""

    def __init__(self, sys: ConstraintSystem):
        self.cons = list(sys.constraints())
        self.watch = [[] for _ in range(len(sys))]
        for k, (_, _, rec) in enumerate(self.cons):
            for p in rec:
                self.watch[p].append(k)


_INDEX_CACHE: dict = {}


def _index(sys: ConstraintSystem) -> _Index:
    idx = _INDEX_CACHE.get(id(sys))
    if idx is None or idx[0] is not sys:
        idx = (sys, _Index(sys))
        _INDEX_CACHE.clear()
        _INDEX_CACHE[id(sys)] = idx
    return idx[1]


def _propagate(sys, vals: list, dirty, trace=None):
    """Fixed point of :func:`infer`, mutating ``vals`` in place.

    Pending constraints are always processed lowest id first.  Returns a
    :class:`Conflict` or None.  ``trace`` collects ``(literal, cid, premises)``.
    """
    ix = _index(sys)
    heap = sorted(set(dirty))
    queued = set(heap)
    color = vals.__getitem__
    while heap:
        k = heapq.heappop(heap)
        queued.discard(k)
        cid, kind, rec = ix.cons[k]
        conflict, forced = infer(kind, rec, color)
        if conflict is not None:
            return Conflict(cid, conflict)
        for (p, red), prem in forced:
            if vals[p] is not None:
                continue
            vals[p] = red
            if trace is not None:
                trace.append(((p, red), cid, prem))
            for k2 in ix.watch[p]:
                if k2 not in queued:
                    queued.add(k2)
                    heapq.heappush(heap, k2)
    return None


def propagate(sys: ConstraintSystem, partial=None):
    """Extend ``partial`` (a :class:`Coloring` or literal iterable) to the
    least fixed point of the rules, or return the :class:`Conflict` met."""
    vals = _as_values(sys, partial)
    res = _propagate(sys, vals, range(len(_index(sys).cons)))
    return res if res is not None else Coloring(tuple(vals))


def _as_values(sys, partial) -> list:
    if partial is None:
        return [None] * len(sys)
    if isinstance(partial, Coloring):
        if len(partial) != len(sys):
            raise ValueError("coloring size does not match the system")
        return list(partial.values)
    vals = [None] * len(sys)
    for p, red in partial:
        if vals[p] is not None and vals[p] != bool(red):
            raise ValueError(f"contradictory assumptions on point {p}")
        vals[p] = bool(red)
    return vals


# -- search ------------------------------------------------------------------

@dataclass(frozen=True)
class SolveResult:
    coloring: Coloring = None
    nodes: int = 0

    @property
    def colorable(self) -> bool:
        return self.coloring is not None

    def __bool__(self):
        return self.colorable


def solve(sys: ConstraintSystem, assumptions=None) -> SolveResult:
    """Complete backtracking search with propagation at every node.

    Branches on the lowest-index unset point, Red first.  Returns a result
    holding a VALID total coloring, or one with ``coloring=None`` when the
    system (under ``assumptions``) is uncolorable.
    """
    ix = _index(sys)
    vals = _as_values(sys, assumptions)
    if _propagate(sys, vals, range(len(ix.cons))) is not None:
        return SolveResult(None, 1)
    nodes = 1
    # explicit stack of (values, next point to try, remaining branches)
    stack = [(vals, 0)]
    while stack:
        vals, start = stack.pop()
        p = next((i for i in range(start, len(vals)) if vals[i] is None), None)
        if p is None:
            return SolveResult(Coloring(tuple(vals)), nodes)
        green = vals.copy()
        green[p] = GREEN
        red = vals
        red[p] = RED
        # push Green first so Red is explored first
        for branch in (green, red):
            nodes += 1
            if _propagate(sys, branch, ix.watch[p]) is None:
                stack.append((branch, p + 1))
    return SolveResult(None, nodes)


def count_colorings(sys: ConstraintSystem, limit: int = 24, chunk: int = 1 << 20) -> int:
    """Number of VALID total colorings, by exhaustive enumeration."""
    n = len(sys)
    if n > limit:
        raise TooLarge(f"{n} points exceeds the enumeration guard of {limit}")
    total = 0
    for lo in range(0, 1 << n, chunk):
        k = np.arange(lo, min(lo + chunk, 1 << n), dtype=np.uint32)
        bit = lambda i: ((k >> np.uint32(i)) & np.uint32(1)).astype(bool)  # noqa: E731
        ok = np.ones(len(k), dtype=bool)
        for t in sys.triples:
            ok &= (bit(t[0]).astype(np.int8) + bit(t[1]) + bit(t[2])) == 1
        for a, b in sys.pairs:
            ok &= ~(bit(a) & bit(b))
        for c, a, b in sys.spans:
            ok &= ~(bit(c) & ~bit(a) & ~bit(b))
        total += int(ok.sum())
    return total


# -- CNF ---------------------------------------------------------------------

@dataclass(frozen=True)
class CnfDoc:
    """DIMACS-style CNF; variable ``i + 1`` is true iff point ``i`` is Red."""

    num_vars: int
    clauses: tuple
    comments: dict = field(default_factory=dict)


def to_cnf(sys: ConstraintSystem) -> CnfDoc:
    clauses = []
    for a, b, c in sys.triples:
        a, b, c = a + 1, b + 1, c + 1
        clauses += [(a, b, c), (-a, -b), (-a, -c), (-b, -c)]
    for a, b in sys.pairs:
        clauses.append((-(a + 1), -(b + 1)))
    for c, a, b in sys.spans:
        clauses.append((a + 1, b + 1, -(c + 1)))
    comments = {i + 1: sys.label(i) for i in range(len(sys))}
    return CnfDoc(len(sys), tuple(clauses), comments)


# -- certificates --------------------------------------------------------------

@dataclass(frozen=True)
class Propagate:
    lit: tuple
    constraint: str
    premises: tuple


@dataclass(frozen=True)
class ConflictStep:
    constraint: str
    premises: tuple


@dataclass(frozen=True)
class Probe:
    assume: tuple
    steps: tuple          # ends with a ConflictStep
    conclude: tuple


@dataclass(frozen=True)
class Branch:
    assume: tuple
    steps: tuple          # ends with a ConflictStep


@dataclass(frozen=True)
class Certificate:
    split: str            # id of the TRIPLE case-split on
    branches: tuple

    @property
    def n_steps(self) -> int:
        def count(steps):
            return sum(1 + count(s.steps) if isinstance(s, Probe) else 1 for s in steps)
        return sum(count(b.steps) for b in self.branches)


def _as_steps(trace) -> list:
    return [Propagate(lit, cid, tuple(prem)) for lit, cid, prem in trace]


def prove_paper_style(sys: ConstraintSystem, corner_triple, circuit_order) -> Certificate:
    """Refutation shaped like the circuit argument.

    Case split on the corner TRIPLE.  In each branch the corner is assumed
    Red and propagated; then, walking the circuit from that corner, each
    point not yet Red is probed Green, which must propagate to a conflict,
    and is concluded Red.  The branch closes at the first conflict.
    Raises :class:`NotDerivable` if any probe or branch fails to close.
    """
    corners = tuple(int(i) for i in corner_triple)
    order = [int(i) for i in circuit_order]
    try:
        split = sys.find_triple(*corners)
    except KeyError:
        raise NotDerivable(f"system has no triple on {corners}") from None
    if not set(corners) <= set(order):
        raise NotDerivable("corner triple is not on the circuit")
    ix = _index(sys)
    branches = []
    for corner in corners:
        vals = [None] * len(sys)
        vals[corner] = RED
        trace = []
        conflict = _propagate(sys, vals, ix.watch[corner], trace)
        steps = _as_steps(trace)
        start = order.index(corner)
        walk = order[start + 1:] + order[:start]
        for p in walk:
            if conflict is not None:
                break
            if vals[p] is RED:
                continue
            if vals[p] is GREEN:
                raise NotDerivable(f"{sys.label(p)} is already Green; nothing to probe")
            inner = vals.copy()
            inner[p] = GREEN
            itrace = []
            ic = _propagate(sys, inner, ix.watch[p], itrace)
            if ic is None:
                raise NotDerivable(f"probe {sys.label(p)}=Green does not close")
            steps.append(Probe((p, GREEN), tuple(_as_steps(itrace))
                               + (ConflictStep(ic.constraint, ic.premises),), (p, RED)))
            vals[p] = RED
            trace = []
            conflict = _propagate(sys, vals, ix.watch[p], trace)
            steps += _as_steps(trace)
        if conflict is None:
            raise NotDerivable(f"branch {sys.label(corner)}=Red does not close")
        steps.append(ConflictStep(conflict.constraint, conflict.premises))
        branches.append(Branch((corner, RED), tuple(steps)))
    return Certificate(split, tuple(branches))


@dataclass(frozen=True)
class CertCheck:
    ok: bool
    path: tuple = ()
    message: str = ""

    def __bool__(self):
        return self.ok


def check_certificate(sys: ConstraintSystem, cert: Certificate) -> CertCheck:
    """Replay ``cert`` step by step; report the first unlicensed step."""
    if cert is None or not cert.branches:
        return CertCheck(False, (), "certificate has no case split")
    try:
        kind, rec = sys.constraint(cert.split)
    except KeyError:
        return CertCheck(False, (), f"unknown split constraint {cert.split}")
    if kind != "T":
        return CertCheck(False, (), "case split must be on a TRIPLE")
    if sorted(b.assume for b in cert.branches) != sorted((p, RED) for p in rec) \
            or len(cert.branches) != 3:
        return CertCheck(False, (), "branches must assume each triple point Red")

    def lookup(known):
        def color(i):
            r, g = (i, RED) in known, (i, GREEN) in known
            return RED if r and not g else GREEN if g and not r else None
        return color

    def run(steps, known, path):
        if not steps or not isinstance(steps[-1], ConflictStep):
            return CertCheck(False, path, "sequence does not end in a conflict")
        for j, st in enumerate(steps):
            here = path + (j,)
            if isinstance(st, ConflictStep) and j != len(steps) - 1:
                return CertCheck(False, here, "conflict before the end of a sequence")
            if isinstance(st, Probe):
                res = run(st.steps, known | {st.assume}, here)
                if not res:
                    return res
                if st.conclude != (st.assume[0], not st.assume[1]):
                    return CertCheck(False, here, "probe conclusion is not the negated assumption")
                known = known | {st.conclude}
                continue
            prem = set(st.premises)
            if not prem <= known:
                return CertCheck(False, here, "premise not established")
            try:
                kind, rec = sys.constraint(st.constraint)
            except KeyError:
                return CertCheck(False, here, f"unknown constraint {st.constraint}")
            if any(p not in rec for p, _ in prem):
                return CertCheck(False, here, "premise is not on the constraint")
            conflict, forced = infer(kind, rec, lookup(prem))
            if isinstance(st, ConflictStep):
                if conflict is None:
                    return CertCheck(False, here, "premises do not violate the constraint")
            else:
                if conflict is not None or st.lit not in [lit for lit, _ in forced]:
                    return CertCheck(False, here, "inference not licensed by the constraint")
                known = known | {st.lit}
        return CertCheck(True, path)

    for b, br in enumerate(cert.branches):
        res = run(br.steps, frozenset({br.assume}), (b,))
        if not res:
            return res
    return CertCheck(True)


def enumerate_colorings(sys: ConstraintSystem):
    """All VALID total colorings (small systems only; for tests and demos)."""
    n = len(sys)
    if n > 20:
        raise TooLarge(f"{n} points is too many to enumerate")
    for bits in itertools.product((False, True), repeat=n):
        if is_valid_coloring(sys, bits):
            yield bits
