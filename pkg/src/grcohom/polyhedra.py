"""Exact rational polyhedra in H-representation.

Projection is done by Fourier-Motzkin elimination (equalities are
substituted first).  That single routine gives emptiness, linear
optimisation, Minkowski sums and bounding boxes, all in exact rational
arithmetic.  Desk-scale dimensions only.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch, Unbounded

GE, LE = "ge", "le"


def _primitive(a: Sequence[Fraction], b: Fraction):
    """Scale (a, b) by a positive rational so that a is a primitive integer vector."""
    den = 1
    for x in a:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in a]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        return tuple(0 for _ in a), Fraction(b)
    return tuple(x // g for x in ints), Fraction(b) * den / g


class _System:
    """Inequalities a.x <= b and equalities a.x = b over Fractions."""

    def __init__(self, nvars: int):
        self.nvars = nvars
        self.le: dict[tuple, Fraction] = {}
        self.eq: list[tuple[tuple, Fraction]] = []
        self.infeasible = False

    def add_le(self, a, b):
        a, b = _primitive([Fraction(x) for x in a], b)
        if not any(a):
            if b < 0:
                self.infeasible = True
            return
        if a not in self.le or b < self.le[a]:
            self.le[a] = b

    def add_eq(self, a, b):
        a = [Fraction(x) for x in a]
        if not any(a):
            if b != 0:
                self.infeasible = True
            return
        self.eq.append((tuple(a), Fraction(b)))

    def eliminate(self, k: int) -> "_System":
        out = _System(self.nvars)
        out.infeasible = self.infeasible
        if self.infeasible:
            return out
        piv = next((e for e in self.eq if e[0][k] != 0), None)
        if piv is not None:
            pa, pb = piv

            def sub(a, b):
                c = a[k] / pa[k]
                return [x - c * y for x, y in zip(a, pa)], b - c * pb

            for e in self.eq:
                if e is not piv:
                    out.add_eq(*sub(*e))
            for a, b in self.le.items():
                out.add_le(*sub(a, b))
            return out
        for a, b in self.eq:
            out.add_eq(a, b)
        pos, neg = [], []
        for a, b in self.le.items():
            if a[k] > 0:
                pos.append((a, b))
            elif a[k] < 0:
                neg.append((a, b))
            else:
                out.add_le(a, b)
        for (pa, pb), (na, nb) in itertools.product(pos, neg):
            cp, cn = -na[k], pa[k]
            out.add_le([cp * x + cn * y for x, y in zip(pa, na)], cp * pb + cn * nb)
        return out

    def eliminate_all_but(self, keep: Iterable[int]) -> "_System":
        keep = set(keep)
        s = self
        for k in range(self.nvars):
            if k not in keep:
                s = s.eliminate(k)
        return s

    def feasible(self) -> bool:
        return not self.eliminate_all_but(()).infeasible

    def range_of(self, k: int):
        """(lo, hi) of variable k over the system; None for an infinite side."""
        s = self.eliminate_all_but((k,))
        if s.infeasible:
            return "empty"
        lo, hi = None, None
        for a, b in s.eq:
            v = b / a[k]
            lo = v if lo is None else max(lo, v)
            hi = v if hi is None else min(hi, v)
        for a, b in s.le.items():
            v = b / a[k]
            if a[k] > 0:
                hi = v if hi is None else min(hi, v)
            else:
                lo = v if lo is None else max(lo, v)
        if lo is not None and hi is not None and lo > hi:
            return "empty"
        return lo, hi


@dataclass(frozen=True)
class Constraint:
    functional: tuple
    bound: Fraction
    sense: str = GE

    def holds(self, x) -> bool:
        v = sum(Fraction(a) * c for a, c in zip(self.functional, x))
        return v >= self.bound if self.sense == GE else v <= self.bound

    def as_le(self):
        if self.sense == LE:
            return self.functional, self.bound
        return tuple(-a for a in self.functional), -self.bound


@dataclass(frozen=True)
class RationalPolyhedron:
    dim: int
    constraints: tuple = field(default_factory=tuple)

    @staticmethod
    def make(dim: int, constraints) -> "RationalPolyhedron":
        cons = []
        for c in constraints:
            if not isinstance(c, Constraint):
                c = Constraint(*c)
            if len(c.functional) != dim:
                raise DimensionMismatch(f"functional of length {len(c.functional)} in dimension {dim}")
            a, b = _primitive([Fraction(x) for x in c.functional], Fraction(c.bound))
            cons.append(Constraint(a, b, c.sense))
        return RationalPolyhedron(dim, tuple(cons))

    @staticmethod
    def empty(dim: int) -> "RationalPolyhedron":
        return RationalPolyhedron(dim, (Constraint(tuple([0] * dim), Fraction(-1), LE),))

    @staticmethod
    def whole(dim: int) -> "RationalPolyhedron":
        return RationalPolyhedron(dim, ())

    @staticmethod
    def box(lower, upper) -> "RationalPolyhedron":
        d = len(lower)
        cons = []
        for i in range(d):
            e = tuple(1 if j == i else 0 for j in range(d))
            cons.append(Constraint(e, Fraction(lower[i]), GE))
            cons.append(Constraint(e, Fraction(upper[i]), LE))
        return RationalPolyhedron(d, tuple(cons))

    def system(self) -> _System:
        s = _System(self.dim)
        for c in self.constraints:
            s.add_le(*c.as_le())
        return s

    def contains(self, x) -> bool:
        return all(c.holds(x) for c in self.constraints)

    def negate(self) -> "RationalPolyhedron":
        return RationalPolyhedron(
            self.dim,
            tuple(Constraint(tuple(-a for a in c.functional), c.bound, c.sense) for c in self.constraints),
        )

    def translate(self, v) -> "RationalPolyhedron":
        out = []
        for c in self.constraints:
            shift = sum(Fraction(a) * x for a, x in zip(c.functional, v))
            out.append(Constraint(c.functional, c.bound + shift, c.sense))
        return RationalPolyhedron(self.dim, tuple(out))

    def to_json(self):
        return {
            "constraints": [
                {
                    "functional": list(c.functional),
                    "bound": f"{c.bound.numerator}/{c.bound.denominator}",
                    "sense": c.sense,
                }
                for c in self.constraints
            ]
        }


def _check(P: RationalPolyhedron, R: RationalPolyhedron):
    if P.dim != R.dim:
        raise DimensionMismatch(f"dimensions {P.dim} and {R.dim}")


def _from_system(dim: int, s: _System) -> RationalPolyhedron:
    if s.infeasible:
        return RationalPolyhedron.empty(dim)
    cons = [Constraint(a, b, LE) for a, b in s.le.items()]
    for a, b in s.eq:
        a, b = _primitive(a, b)
        cons.append(Constraint(a, b, LE))
        cons.append(Constraint(a, b, GE))
    return RationalPolyhedron(dim, tuple(cons))


def polyhedron_is_empty(P: RationalPolyhedron) -> bool:
    return not P.system().feasible()


def maximize(P: RationalPolyhedron, functional):
    """Supremum of functional over P: a Fraction, None when unbounded, "empty" if P is empty."""
    d = P.dim
    s = _System(d + 1)
    for c in P.constraints:
        a, b = c.as_le()
        s.add_le(tuple(a) + (0,), b)
    s.add_eq(tuple(Fraction(-x) for x in functional) + (1,), 0)
    r = s.range_of(d)
    if r == "empty":
        return "empty"
    return r[1]


def _prune(P: RationalPolyhedron) -> RationalPolyhedron:
    """Drop duplicate and redundant constraints; fold an infeasible system to the empty form."""
    if polyhedron_is_empty(P):
        return RationalPolyhedron.empty(P.dim)
    tight: dict[tuple, Fraction] = {}
    for c in P.constraints:
        a, b = c.as_le()
        a, b = _primitive([Fraction(x) for x in a], b)
        if not any(a):
            continue
        if a not in tight or b < tight[a]:
            tight[a] = b
    items = sorted(tight.items())
    keep = list(items)
    for item in items:
        others = [x for x in keep if x != item]
        rest = RationalPolyhedron(P.dim, tuple(Constraint(a, b, LE) for a, b in others))
        top = maximize(rest, item[0])
        if top is not None and top != "empty" and top <= item[1]:
            keep = others
    cons = []
    for a, b in keep:
        if any(x > 0 for x in a) or not any(x < 0 for x in a):
            cons.append(Constraint(a, b, LE))
        else:
            cons.append(Constraint(tuple(-x for x in a), -b, GE))
    return RationalPolyhedron(P.dim, tuple(cons))


def canonical(P: RationalPolyhedron) -> RationalPolyhedron:
    return _prune(P)


def polyhedron_intersect(P: RationalPolyhedron, R: RationalPolyhedron) -> RationalPolyhedron:
    _check(P, R)
    return _prune(RationalPolyhedron(P.dim, P.constraints + R.constraints))


def polyhedron_minkowski(P: RationalPolyhedron, R: RationalPolyhedron) -> RationalPolyhedron:
    """P + R as the projection of {(z, y) : z - y in P, y in R} onto z."""
    _check(P, R)
    d = P.dim
    s = _System(2 * d)
    for c in P.constraints:
        a, b = c.as_le()
        s.add_le(tuple(a) + tuple(-x for x in a), b)
    for c in R.constraints:
        a, b = c.as_le()
        s.add_le(tuple([0] * d) + tuple(a), b)
    for k in range(d, 2 * d):
        s = s.eliminate(k)
    if s.infeasible:
        return RationalPolyhedron.empty(d)
    out = _System(d)
    for a, b in s.le.items():
        out.add_le(a[:d], b)
    for a, b in s.eq:
        out.add_eq(a[:d], b)
    return _prune(_from_system(d, out))


def bounding_box(P: RationalPolyhedron):
    """Per-coordinate (lo, hi) over P, or None if P is empty.  Infinite sides are None."""
    s = P.system()
    out = []
    for k in range(P.dim):
        r = s.range_of(k)
        if r == "empty":
            return None
        out.append(r)
    return out


def lattice_points(P: RationalPolyhedron, box: RationalPolyhedron | None = None, key=None, limit=None):
    """All integer points of P (intersected with box), sorted by key (default: lexicographic).

    With ``limit`` the scan stops once that many points are found.
    """
    if box is not None:
        _check(P, box)
        P = RationalPolyhedron(P.dim, P.constraints + box.constraints)
    d = P.dim
    base = P.system()
    if not base.feasible():
        return []
    # projections onto the leading coordinates drive a depth-first scan
    projections = []
    s = base
    for k in range(d - 1, -1, -1):
        projections.append(s)
        s = s.eliminate(k)
    projections.reverse()
    pts = []

    def interval(sys_k: _System, k: int, prefix):
        lo, hi = None, None
        for a, b in sys_k.eq:
            if a[k] == 0:
                continue
            v = (b - sum(x * y for x, y in zip(a[:k], prefix))) / a[k]
            lo = v if lo is None else max(lo, v)
            hi = v if hi is None else min(hi, v)
        for a, b in sys_k.le.items():
            if a[k] == 0:
                continue
            v = (b - sum(x * y for x, y in zip(a[:k], prefix))) / a[k]
            if a[k] > 0:
                hi = v if hi is None else min(hi, v)
            else:
                lo = v if lo is None else max(lo, v)
        if lo is None or hi is None:
            raise Unbounded("polyhedron has no finite lattice bounding box")
        return math.ceil(lo), math.floor(hi)

    def rec(prefix):
        k = len(prefix)
        if k == d:
            if P.contains(prefix):
                pts.append(tuple(prefix))
            return
        lo, hi = interval(projections[k], k, prefix)
        for v in range(lo, hi + 1):
            rec(prefix + [v])
            if limit is not None and len(pts) >= limit:
                return

    if d == 0:
        return [()] if P.contains(()) else []
    rec([])
    return sorted(pts, key=key)


def vertices(P: RationalPolyhedron):
    """Vertices of a bounded polyhedron, sorted; raises Unbounded otherwise."""
    d = P.dim
    bb = bounding_box(P)
    if bb is None:
        return []
    if any(lo is None or hi is None for lo, hi in bb):
        raise Unbounded("vertex list requested for an unbounded polyhedron")
    from .field import rref

    rows = [c.as_le() for c in P.constraints]
    found = set()
    for combo in itertools.combinations(range(len(rows)), d):
        mat = [[Fraction(x) for x in rows[i][0]] + [Fraction(rows[i][1])] for i in combo]
        red, piv = rref(mat, d + 1)
        if len(piv) != d or d in piv:
            continue
        x = tuple(r[d] for r in red)
        if P.contains(x):
            found.add(x)
    if d == 0:
        found.add(())
    return sorted(found)


def from_points(dim: int, points) -> RationalPolyhedron:
    """H-representation of the convex hull of finitely many points."""
    pts = [tuple(Fraction(x) for x in p) for p in points]
    if not pts:
        return RationalPolyhedron.empty(dim)
    m = len(pts)
    # variables: x (dim) then convex weights (m)
    s = _System(dim + m)
    for i in range(dim):
        row = [Fraction(0)] * (dim + m)
        row[i] = Fraction(1)
        for j, p in enumerate(pts):
            row[dim + j] = -p[i]
        s.add_eq(row, 0)
    s.add_eq([0] * dim + [1] * m, 1)
    for j in range(m):
        row = [0] * (dim + m)
        row[dim + j] = -1
        s.add_le(row, 0)
    for k in range(dim, dim + m):
        s = s.eliminate(k)
    out = _System(dim)
    for a, b in s.le.items():
        out.add_le(a[:dim], b)
    for a, b in s.eq:
        out.add_eq(a[:dim], b)
    return _prune(_from_system(dim, out))
