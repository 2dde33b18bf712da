"""Sector partitions of injectives, of homology of complexes of injectives, and of local cohomology.

A list J of labels (F_j, alpha_j) gives a tau-vector per label (tau_F of
alpha, infinite off the facets containing F).  Sorting the finite values
per facet cuts the lattice into strips; every degree of a strip lies in
the support of the same labels, so strips with equal label sets form one
sector.  Everything here needs a saturated semigroup.
"""

from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import NotComplex, NotSaturated
from .field import QQ, Reducer, nullspace, solve
from .matrices import Summand
from .polyhedra import GE, LE, Constraint, RationalPolyhedron, lattice_points, polyhedron_is_empty
from .semigroup import INF, AffineSemigroup, strip, tau_of, zonotope

NEG_INF = -math.inf


def _require_saturated(Q: AffineSemigroup):
    if not Q.saturated:
        raise NotSaturated("sector partitions are only defined over saturated semigroups")


def tau_table(Q: AffineSemigroup, labels):
    """(tau-vector per label, per-facet sorted lists with -inf/+inf sentinels)."""
    cols = [tau_of(Q, s.face, s.degree, internal=True) for s in labels]
    rows = [[NEG_INF] + sorted(c[i] for c in cols) + [INF] for i in range(Q.n)]
    return cols, rows


@dataclass
class Sector:
    index: tuple  # sorted label indices (a flat tuple; see SectorPartition.split for triples)
    strips: list  # slot tuples l
    regions: list  # RationalPolyhedron per strip, internal coordinates
    space_dim: int = 0
    basis: list = dc_field(default_factory=list)


@dataclass
class SectorPartition:
    Q: AffineSemigroup
    labels: list
    taus: list
    sorted_taus: list
    sectors: list
    strip_count: int
    parts: tuple = ()  # label counts of the three terms for a homology partition
    transitions: dict = dc_field(default_factory=dict)  # (from, to) -> matrix (rows: target basis)
    _projections: dict = dc_field(default_factory=dict, repr=False)
    _images: dict = dc_field(default_factory=dict, repr=False)

    def slot_of(self, alpha):
        t = self.Q.tau(alpha)
        return tuple(bisect.bisect_left(row, v) - 1 for row, v in zip(self.sorted_taus, t))

    def sector_at(self, alpha) -> int:
        return self._slot_lookup[self.slot_of(alpha)]

    def dimension_at(self, alpha) -> int:
        return self.sectors[self.sector_at(alpha)].space_dim

    def split(self, index):
        """(A', A, A'') label indices of each term, for a homology partition."""
        if not self.parts:
            return (), tuple(index), ()
        a, b, _ = self.parts
        return (
            tuple(j for j in index if j < a),
            tuple(j - a for j in index if a <= j < a + b),
            tuple(j - a - b for j in index if j >= a + b),
        )

    def __post_init__(self):
        self._slot_lookup = {l: k for k, s in enumerate(self.sectors) for l in s.strips}


def _truncation(Q: AffineSemigroup, rows):
    """Finite per-facet bounds used to decide lattice emptiness of unbounded strips."""
    zmax = max((max(Q.tau(p)) for p in zonotope(Q).points), default=1)
    pad = 2 * zmax + 2
    out = []
    for row in rows:
        finite = [v for v in row if v not in (INF, NEG_INF)]
        lo = min(finite, default=0) - pad
        hi = max(finite, default=0) + pad
        out.append((lo, hi))
    return out


def _truncated(Q: AffineSemigroup, P: RationalPolyhedron, bounds):
    cons = list(P.constraints)
    for t, (lo, hi) in zip(Q.facet_functionals, bounds):
        cons.append(Constraint(t, Fraction(lo), GE))
        cons.append(Constraint(t, Fraction(hi), LE))
    return RationalPolyhedron(Q.rank, tuple(cons))


def _labels_at_slot(cols, rows, ell):
    uppers = [row[l + 1] for row, l in zip(rows, ell)]
    return tuple(j for j, c in enumerate(cols) if all(u <= v for u, v in zip(uppers, c)))


def sector_set(Q: AffineSemigroup, labels, parts=()) -> SectorPartition:
    """Strips grouped by the labels whose supports contain them."""
    _require_saturated(Q)
    labels = list(labels)
    cols, rows = tau_table(Q, labels)
    bounds = _truncation(Q, rows)
    groups: dict = {}
    count = 0
    for ell in itertools.product(*[range(len(row) - 1) for row in rows]):
        if any(row[l] == INF for row, l in zip(rows, ell)):
            continue
        P = strip(Q, rows, ell)
        count += 1
        if polyhedron_is_empty(P):
            continue
        if not lattice_points(_truncated(Q, P, bounds), limit=1):
            continue
        A = _labels_at_slot(cols, rows, ell)
        groups.setdefault(A, []).append((ell, P))
    sectors = [Sector(A, [e for e, _ in g], [p for _, p in g]) for A, g in sorted(groups.items(), key=lambda kv: (len(kv[0]), kv[0]))]
    return SectorPartition(Q, labels, cols, rows, sectors, count, tuple(parts))


def _pair_witness(Q: AffineSemigroup, PA, PB, bounds):
    """Lattice alpha in PA and beta in PB with beta - alpha in Q, or None."""
    r = Q.rank
    cons = []
    for c in _truncated(Q, PA, bounds).constraints:
        cons.append(Constraint(tuple(c.functional) + (0,) * r, c.bound, c.sense))
    for c in _truncated(Q, PB, bounds).constraints:
        cons.append(Constraint((0,) * r + tuple(c.functional), c.bound, c.sense))
    for t in Q.facet_functionals:
        cons.append(Constraint(tuple(-x for x in t) + tuple(t), Fraction(0), GE))
    joint = RationalPolyhedron(2 * r, tuple(cons))
    if polyhedron_is_empty(joint):
        return None
    pts = lattice_points(joint, limit=1)
    if not pts:
        return None
    return pts[0][:r], pts[0][r:]


def sector_comparable(SP: SectorPartition, s: int, t: int) -> bool:
    """Whether some beta in sector t and alpha in sector s have beta - alpha in Q."""
    Q = SP.Q
    A, B = SP.sectors[s], SP.sectors[t]
    if not set(A.index) >= set(B.index):
        return False
    if s == t:
        return True
    bounds = _truncation(Q, SP.sorted_taus)
    for la, PA in zip(A.strips, A.regions):
        for lb, PB in zip(B.strips, B.regions):
            if all(x <= y for x, y in zip(la, lb)) and _pair_witness(Q, PA, PB, bounds) is not None:
                return True
    return False


def comparability(SP: SectorPartition):
    return {(s, t) for s in range(len(SP.sectors)) for t in range(len(SP.sectors)) if sector_comparable(SP, s, t)}


def _projection(src, dst, zero, one):
    """Matrix of the coordinate projection k^src -> k^dst (index tuples)."""
    pos = {j: k for k, j in enumerate(src)}
    return [[one if pos.get(j) == c else zero for c in range(len(src))] for j in dst]


def sector_partition_injective(Q: AffineSemigroup, labels, field=QQ, transitions: bool = True) -> SectorPartition:
    SP = sector_set(Q, labels)
    one, zero = field.one, field.zero
    for sec in SP.sectors:
        sec.space_dim = len(sec.index)
        sec.basis = [[one if i == k else zero for i in range(len(sec.index))] for k in range(len(sec.index))]
    if transitions:
        for s, t in sorted(comparability(SP)):
            SP.transitions[(s, t)] = _projection(SP.sectors[s].index, SP.sectors[t].index, zero, one)
    return SP


def _submatrix(mat, rows, cols):
    return [[mat[q][p] for p in cols] for q in rows]


def _matmul(A, B, zero):
    if not A or not B:
        return [[zero] * (len(B[0]) if B else 0) for _ in A]
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), zero) for j in range(len(B[0]))] for i in range(len(A))]


def sector_partition_cohomology(
    Q: AffineSemigroup,
    before,
    middle,
    after,
    phi,
    psi,
    field=QQ,
    transitions: bool = True,
) -> SectorPartition:
    """Sectors of the homology of J' -phi-> J -psi-> J''; phi is |J| x |J'|, psi is |J''| x |J|."""
    zero, one = field.zero, field.one
    phi = [[field(x) for x in row] for row in phi]
    psi = [[field(x) for x in row] for row in psi]
    if phi and psi and any(x != 0 for row in _matmul(psi, phi, zero) for x in row):
        raise NotComplex("the two maps do not compose to zero")
    SP = sector_set(Q, list(before) + list(middle) + list(after), parts=(len(before), len(middle), len(after)))
    for k, sec in enumerate(SP.sectors):
        A1, A, A2 = SP.split(sec.index)
        n = len(A)
        images = [[row[c] for row in _submatrix(phi, A, A1)] for c in range(len(A1))] if A else []
        down = _submatrix(psi, A2, A)
        ker = nullspace(down, n, zero) if down and n else [[one if i == j else zero for i in range(n)] for j in range(n)]
        red = Reducer(n, zero)
        for v in images:
            red.add(v)
        basis = []
        for v in ker:
            if red.add(v):
                basis.append(v)
        sec.space_dim = len(basis)
        sec.basis = basis
        SP._images[k] = images
    if transitions:
        for s, t in sorted(comparability(SP)):
            SP.transitions[(s, t)] = _homology_transition(SP, s, t, zero, one)
    return SP


def _homology_transition(SP: SectorPartition, s, t, zero, one):
    src, dst = SP.sectors[s], SP.sectors[t]
    _, As, _ = SP.split(src.index)
    _, At, _ = SP.split(dst.index)
    proj = _projection(As, At, zero, one)
    cols = [list(v) for v in dst.basis] + [list(v) for v in SP._images[t]]
    out = [[zero] * len(src.basis) for _ in dst.basis]
    for c, v in enumerate(src.basis):
        w = [sum((proj[r][k] * v[k] for k in range(len(v))), zero) for r in range(len(At))]
        sol = solve(cols, w, zero)
        if sol is None:
            raise NotComplex("transition leaves the kernel")
        for r in range(len(dst.basis)):
            out[r][c] = sol[r]
    return out


def hilbert_table(SP: SectorPartition):
    return [(sec.regions, sec.space_dim) for sec in SP.sectors]


# ---------------------------------------------------------------------------
# local cohomology


def keeps_summand(Q: AffineSemigroup, F, ideal_generators) -> bool:
    """P_F contains I: no generator of I lies on F."""
    return all(not Q.on_face(F, g) for g in ideal_generators)


def gamma_I(resolution, ideal_generators):
    """(kept index lists per stage, restricted stages, restricted maps) of Gamma_I of a resolution."""
    from .errors import EngineError

    if not ideal_generators:
        raise EngineError("the ideal needs at least one generator")
    Q = resolution.Q
    keep = [[k for k, s in enumerate(st) if keeps_summand(Q, s.face, ideal_generators)] for st in resolution.stages]
    stages = [[st[k] for k in kk] for st, kk in zip(resolution.stages, keep)]
    maps = [_submatrix(m.entries, keep[j + 1], keep[j]) for j, m in enumerate(resolution.maps)]
    return keep, stages, maps


_RESOLUTION_CACHE: dict = {}


def _resolution_for(M, n, box):
    from .injective import injective_resolution

    key = id(M)
    hit = _RESOLUTION_CACHE.get(key)
    if hit is not None and hit[0] is M and hit[1] >= n:
        return hit[2]
    R = injective_resolution(M, n, box)
    _RESOLUTION_CACHE[key] = (M, n, R)
    return R


def local_cohomology(M, ideal_generators, i: int, box=None, transitions: bool = False, resolution=None) -> SectorPartition:
    """Sector partition of H^i_I(M), with degrees in the coordinates of M.

    The injective resolution is shared across calls on the same module
    when it already reaches stage i + 1.
    """
    Q = M.Q
    _require_saturated(Q)
    if not 0 <= i <= Q.rank + 1:
        from .errors import IndexOutOfRange

        raise IndexOutOfRange(f"cohomological index {i} outside 0..{Q.rank + 1}")
    R = resolution or _resolution_for(M, i + 1, box)
    _, stages, maps = gamma_I(R, [tuple(g) for g in ideal_generators])
    a = R.shift

    def unshift(st):
        return [Summand(s.face, tuple(x - y for x, y in zip(s.degree, a))) for s in st]

    def stage(j):
        return unshift(stages[j]) if 0 <= j < len(stages) else []

    def mapping(j, rows, cols):
        if 0 <= j < len(maps):
            return maps[j]
        return [[M.field.zero] * cols for _ in range(rows)]

    before, middle, after = stage(i - 1), stage(i), stage(i + 1)
    phi = mapping(i - 1, len(middle), len(before))
    psi = mapping(i, len(after), len(middle))
    return sector_partition_cohomology(Q, before, middle, after, phi, psi, M.field, transitions)
