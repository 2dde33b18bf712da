"""Affine semigroups: facets, faces, membership, saturation, zonotopes, strips.

Every semigroup carries two coordinate systems.  *Original* coordinates
are the ones the generators were given in.  *Internal* coordinates are
coordinates on the group generated by the semigroup, so that this group
is the full integer lattice there.  The two agree unless the generators
span a proper sublattice.  The engine works in internal coordinates;
``to_internal`` and ``to_original`` translate at the boundary.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_decomp

from .errors import IndexOutOfRange, NotSharp, ZeroDimension
from .field import rank as _rank, rref
from .polyhedra import GE, LE, Constraint, RationalPolyhedron, from_points, lattice_points

INF = math.inf


def _as_int(x):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else x


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _primitive_int(v):
    den = 1
    for x in v:
        den = math.lcm(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return tuple(x // g for x in ints) if g else tuple(ints)


@dataclass(frozen=True)
class Face:
    id: int
    facet_indices: frozenset
    generator_indices: tuple
    dim: int

    def __repr__(self):
        return f"Face({self.id}, facets={sorted(self.facet_indices)}, dim={self.dim})"


def _dual_rays(gens, r):
    """Extreme rays of {t : t.g >= 0 for all g} by the double description method."""
    basis_idx = []
    rows = []
    for i, g in enumerate(gens):
        if _rank(rows + [list(map(Fraction, g))], r) > len(rows):
            rows.append(list(map(Fraction, g)))
            basis_idx.append(i)
        if len(rows) == r:
            break
    # initial simplicial cone: rays are the columns of the inverse of the basis matrix
    aug = [row + [Fraction(int(i == j)) for j in range(r)] for i, row in enumerate(rows)]
    red, _ = rref(aug, 2 * r)
    inv = [row[r:] for row in red]
    rays = [tuple(inv[i][k] for i in range(r)) for k in range(r)]
    processed = list(basis_idx)
    for i, g in enumerate(gens):
        if i in basis_idx:
            continue
        vals = [_dot(ray, g) for ray in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        zer = [k for k, v in enumerate(vals) if v == 0]
        if not neg:
            processed.append(i)
            continue
        zsets = [frozenset(j for j in processed if _dot(ray, gens[j]) == 0) for ray in rays]
        new = [rays[k] for k in pos + zer]
        for p in pos:
            for q in neg:
                common = zsets[p] & zsets[q]
                if len(common) < r - 2:
                    continue
                if any(common <= zsets[t] for t in range(len(rays)) if t not in (p, q)):
                    continue
                sub = [list(map(Fraction, gens[j])) for j in common]
                if sub and _rank(sub, r) < r - 2:
                    continue
                vp, vq = vals[p], vals[q]
                new.append(tuple(vp * b - vq * a for a, b in zip(rays[p], rays[q])))
        rays = [tuple(Fraction(x) for x in _primitive_int(v)) for v in new]
        rays = list(dict.fromkeys(rays))
        processed.append(i)
    return [_primitive_int(v) for v in rays]


class AffineSemigroup:
    """A sharp affine semigroup, with facet functionals and face lattice."""

    def __init__(self, generators, _rel=None):
        gens = [tuple(int(x) for x in g) for g in generators]
        if not gens:
            raise ZeroDimension("no generators")
        d = len(gens[0])
        if any(len(g) != d for g in gens):
            raise ValueError("generators of unequal length")
        self.dim = d
        self.generators = [g for g in gens if any(g)]
        if not self.generators:
            raise ZeroDimension("all generators are zero")
        self._relattice(_rel)
        self.internal_generators = [self.to_internal(g) for g in self.generators]
        r = self.rank
        rays = _dual_rays(self.internal_generators, r)
        if _rank([list(map(Fraction, v)) for v in rays], r) < r:
            raise NotSharp("the cone contains a line")
        zero_on = {v: min((k for k, g in enumerate(self.internal_generators) if _dot(v, g) == 0), default=len(self.generators)) for v in rays}
        rays.sort(key=lambda v: (zero_on[v], v))
        self.facet_functionals = rays
        self.n = len(rays)
        self._member_cache: dict = {}
        self._face_basis: dict = {}
        self._build_faces()
        self.saturated = self._check_saturated()

    # coordinates -----------------------------------------------------------------
    def _relattice(self, rel):
        d = self.dim
        if rel is not None:
            self.basis, self._inv, self.rank = rel
        else:
            A = Matrix([[g[i] for g in self.generators] for i in range(d)])
            D, U, _ = smith_normal_decomp(A)
            r = sum(1 for i in range(min(D.shape)) if D[i, i] != 0)
            Uinv = U.inv()
            basis = [[int(Uinv[i, k] * D[k, k]) for k in range(r)] for i in range(d)]
            if r == d and all(abs(D[k, k]) == 1 for k in range(d)):
                basis = [[int(i == k) for k in range(d)] for i in range(d)]
            self.basis = basis
            self.rank = r
            # left inverse on the span: internal = inv * original
            B = Matrix(basis)
            pinv = (B.T * B).inv() * B.T
            self._inv = [[Fraction(int(pinv[i, j].p), int(pinv[i, j].q)) for j in range(d)] for i in range(r)]
        self.relatticed = not (self.rank == d and all(self.basis[i][k] == int(i == k) for i in range(d) for k in range(d)))

    def to_internal(self, alpha):
        """Internal coordinates of an original-coordinate vector (Fractions off the lattice)."""
        if not self.relatticed:
            return tuple(_as_int(x) for x in alpha)
        x = tuple(_as_int(_dot(row, alpha)) for row in self._inv)
        if self.to_original(x) != tuple(_as_int(v) for v in alpha):
            raise ValueError(f"{tuple(alpha)} is outside the real span of the generators")
        return x

    def to_original(self, x):
        if not self.relatticed:
            return tuple(_as_int(v) for v in x)
        return tuple(_as_int(sum(self.basis[i][k] * x[k] for k in range(self.rank))) for i in range(self.dim))

    def relattice_matrix(self):
        """Columns form a basis of the group generated by the semigroup, in original coordinates."""
        return [list(row) for row in self.basis] if self.relatticed else None

    # functionals -----------------------------------------------------------------
    def tau(self, x):
        return tuple(_as_int(_dot(t, x)) for t in self.facet_functionals)

    def order_key(self, x):
        """Global degree order: lexicographic on (tau_1..tau_n, coordinates)."""
        return (self.tau(x), tuple(x))

    def sort(self, degrees):
        return sorted(degrees, key=self.order_key)

    # faces -------------------------------------------------------------------------
    def _build_faces(self):
        gens = self.internal_generators
        zero = [frozenset(i for i, t in enumerate(self.facet_functionals) if _dot(t, g) == 0) for g in gens]
        seen = {}
        for size in range(self.n + 1):
            for S in itertools.combinations(range(self.n), size):
                on = tuple(k for k in range(len(gens)) if set(S) <= zero[k])
                if on in seen:
                    continue
                facets = frozenset(i for i in range(self.n) if all(i in zero[k] for k in on))
                dim = _rank([list(map(Fraction, gens[k])) for k in on], self.rank) if on else 0
                seen[on] = (facets, dim)
        faces = sorted(seen.items(), key=lambda kv: (kv[1][1], kv[0]))
        self.faces = [Face(i, f, on, dim) for i, (on, (f, dim)) in enumerate(faces)]

    def face_of_facets(self, facet_indices):
        target = frozenset(facet_indices)
        for F in self.faces:
            if F.facet_indices == target:
                return F
        raise IndexOutOfRange(f"no face is cut out by exactly the facets {sorted(target)}")

    @property
    def zero_face(self):
        return self.faces[0]

    @property
    def full_face(self):
        return self.faces[-1]

    def facet_face(self, i):
        return self.face_of_facets([i])

    def on_face(self, F: Face, x) -> bool:
        return all(_dot(self.facet_functionals[i], x) == 0 for i in F.facet_indices)

    def face_contains(self, G: Face, F: Face) -> bool:
        """G contains F as a subset."""
        return G.facet_indices <= F.facet_indices

    def prime_generators(self, F: Face):
        """Internal degrees of the generators off F; their monomials generate P_F."""
        return [g for k, g in enumerate(self.internal_generators) if k not in F.generator_indices]

    def face_generators(self, F: Face):
        return [self.internal_generators[k] for k in F.generator_indices]

    def rays(self):
        """Primitive lattice vectors along the extreme rays (internal coordinates)."""
        out = []
        for F in self.faces:
            if F.dim == 1:
                out.append(_primitive_int(self.internal_generators[F.generator_indices[0]]))
        return out

    # membership -----------------------------------------------------------------
    def in_lattice(self, x) -> bool:
        return all(Fraction(v).denominator == 1 for v in x)

    def contains(self, x) -> bool:
        """Internal-coordinate membership in Q."""
        x = tuple(x)
        if not self.in_lattice(x):
            return False
        x = tuple(int(v) for v in x)
        t = self.tau(x)
        if any(v < 0 for v in t):
            return False
        if getattr(self, "saturated", False):
            return True
        return self._search(x)

    def _search(self, target):
        # every nonzero generator raises the tau-sum by at least one, so the search is finite
        cache = self._member_cache
        stack = [target]
        while stack:
            x = stack[-1]
            if x in cache:
                stack.pop()
                continue
            if not any(x):
                cache[x] = True
                stack.pop()
                continue
            pending = False
            found = False
            for g in self.internal_generators:
                y = tuple(a - b for a, b in zip(x, g))
                if any(v < 0 for v in self.tau(y)):
                    continue
                if y in cache:
                    if cache[y]:
                        found = True
                        break
                    continue
                stack.append(y)
                pending = True
            if found:
                cache[x] = True
                stack.pop()
            elif not pending:
                cache[x] = False
                stack.pop()
        return cache[target]

    def in_translate(self, F: Face, x) -> bool:
        """Whether x lies in Q + ZF (equivalently in F - Q negated; the support test for k{F - Q})."""
        if not self.in_lattice(x):
            return False
        if self.saturated:
            return all(_dot(self.facet_functionals[i], x) >= 0 for i in F.facet_indices)
        if not F.generator_indices:
            return self.contains(x)
        w = [sum(c) for c in zip(*self.face_generators(F))]
        t = self.tau(x)
        horizon = sum(abs(v) for v in t) + 2 * sum(self.tau(w)) + 2
        for s in range(horizon + 1):
            if self.contains(tuple(a + s * b for a, b in zip(x, w))):
                return True
        return False

    def in_face_lattice(self, F: Face, x) -> bool:
        """Whether x lies in the group ZF generated by the face."""
        gens = self.face_generators(F)
        if not gens:
            return not any(x)
        basis = self._face_basis.get(F.id)
        if basis is None:
            basis = self._face_basis[F.id] = _lattice_basis(gens)
        from .field import solve

        sol = solve([list(map(Fraction, b)) for b in basis], [Fraction(v) for v in x], Fraction(0))
        return sol is not None and all(c.denominator == 1 for c in sol)

    # saturation ---------------------------------------------------------------
    def _zonotope_candidates(self):
        rays = self.rays()
        sums = [tuple(sum(c[k] * r[k2] for k, r in enumerate(rays)) for k2 in range(self.rank)) for c in itertools.product((0, 1), repeat=len(rays))]
        P = from_points(self.rank, sums)
        return rays, P, lattice_points(P, key=self.order_key)

    def _check_saturated(self) -> bool:
        self.saturated = False
        _, _, pts = self._zonotope_candidates()
        rays = self.rays()
        return all(self._search_if_needed(p) for p in pts) and all(self._search_if_needed(r) for r in rays)

    def _search_if_needed(self, x):
        t = self.tau(x)
        return all(v >= 0 for v in t) and self._search(tuple(x))

    def __repr__(self):
        return f"AffineSemigroup({self.generators})"


def _lattice_basis(vectors):
    """A basis (row list) of the integer span of vectors, via Smith normal form."""
    A = Matrix([list(v) for v in vectors]).T
    D, U, _ = smith_normal_decomp(A)
    k = sum(1 for i in range(min(D.shape)) if D[i, i] != 0)
    Uinv = U.inv()
    return [tuple(int(Uinv[i, j]) * int(D[j, j]) for i in range(A.shape[0])) for j in range(k)]


def build_semigroup(generators) -> AffineSemigroup:
    return AffineSemigroup(generators)


def membership(Q: AffineSemigroup, alpha) -> bool:
    """Original-coordinate membership test."""
    return Q.contains(Q.to_internal(alpha))


def prime_generators(Q: AffineSemigroup, F: Face):
    return [Q.to_original(g) for g in Q.prime_generators(F)]


def tau_of(Q: AffineSemigroup, F: Face, alpha, internal: bool = False):
    """tau_F(alpha): tau_i(alpha) where tau_i vanishes on F, infinity otherwise."""
    x = tuple(alpha) if internal else Q.to_internal(alpha)
    t = Q.tau(x)
    return tuple(t[i] if i in F.facet_indices else INF for i in range(Q.n))


def saturate(Q: AffineSemigroup):
    """(Q^sat, Q-set generators of Q^sat over Q), the generators in original coordinates."""
    rays, _, zpts = Q._zonotope_candidates()
    hilbert = []
    candidates = [p for p in zpts if any(p)] + [r for r in rays]
    candidates = list(dict.fromkeys(candidates))

    def sat_member(x):
        return all(v >= 0 for v in Q.tau(x))

    for p in Q.sort(candidates):
        reducible = any(
            any(h) and sat_member(tuple(a - b for a, b in zip(p, h))) and any(a != b for a, b in zip(p, h))
            for h in candidates
        )
        if not reducible:
            hilbert.append(p)
    sat = AffineSemigroup([Q.to_original(h) for h in hilbert], _rel=(Q.basis, Q._inv, Q.rank)) if Q.relatticed else AffineSemigroup([Q.to_original(h) for h in hilbert])
    # multiples of primitive rays that first land in Q
    mults = []
    for r in rays:
        c = 1
        while not Q.contains(tuple(c * v for v in r)):
            c += 1
        mults.append(c)
    cands = set()
    for z in zpts:
        for rs in itertools.product(*[range(c) for c in mults]):
            cands.add(tuple(z[k] + sum(m * r[k] for m, r in zip(rs, rays)) for k in range(Q.rank)))
    gens = []
    for h in Q.sort(cands):
        if all(not sat_member(tuple(a - b for a, b in zip(h, g))) for g in Q.internal_generators):
            gens.append(h)
    return sat, [Q.to_original(h) for h in gens]


@dataclass
class ZonotopeLattice:
    polyhedron: RationalPolyhedron
    points: list  # internal coordinates, global degree order


def zonotope(Q: AffineSemigroup) -> ZonotopeLattice:
    """Minkowski sum of [0, rho] over the primitive ray vectors, with its lattice points."""
    _, P, pts = Q._zonotope_candidates()
    return ZonotopeLattice(P, pts)


def strip(Q: AffineSemigroup, sorted_taus, ell) -> RationalPolyhedron:
    """Delta(ell): the intersection over facets i of tau~_i^ell_i + 1 <= tau_i <= tau~_i^(ell_i + 1).

    ``sorted_taus[i]`` is the full sentinel list (-inf, values..., +inf).
    """
    if len(ell) != Q.n:
        raise IndexOutOfRange(f"strip index of length {len(ell)} for {Q.n} facets")
    cons = []
    for i, l in enumerate(ell):
        row = sorted_taus[i]
        if not 0 <= l < len(row) - 1:
            raise IndexOutOfRange(f"strip slot {l} outside 0..{len(row) - 2}")
        lo, hi = row[l], row[l + 1]
        if lo == INF:
            return RationalPolyhedron.empty(Q.rank)
        t = Q.facet_functionals[i]
        if lo != -INF:
            cons.append(Constraint(t, Fraction(lo) + 1, GE))
        if hi != INF:
            cons.append(Constraint(t, Fraction(hi), LE))
    return RationalPolyhedron(Q.rank, tuple(cons))


def tau_box(Q: AffineSemigroup, lower, upper) -> RationalPolyhedron:
    """The region lower_i <= tau_i <= upper_i (per-facet bounds; scalars broadcast)."""
    if not isinstance(lower, (list, tuple)):
        lower = [lower] * Q.n
    if not isinstance(upper, (list, tuple)):
        upper = [upper] * Q.n
    cons = []
    for t, lo, hi in zip(Q.facet_functionals, lower, upper):
        cons.append(Constraint(t, Fraction(lo), GE))
        cons.append(Constraint(t, Fraction(hi), LE))
    return RationalPolyhedron(Q.rank, tuple(cons))


def box_points(Q: AffineSemigroup, lower, upper):
    """Internal lattice points with tau in the given bounds, in the global degree order."""
    return lattice_points(tau_box(Q, lower, upper), key=Q.order_key)
