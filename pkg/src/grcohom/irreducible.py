"""Irreducible hulls, irreducible ideals and irreducible resolutions.

An irreducible sum is a direct sum of modules k{Q cap (alpha + F - Q)},
one per summand (F, alpha).  Its cyclic pieces are k[Q]/W where W is the
monomial ideal on Q minus (alpha + F - Q); the routines here find
generators of W, embed a module into an irreducible sum (its hull), and
iterate hull and cokernel into a resolution.

Degrees are internal coordinates of the semigroup throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import NotQGraded, NotSaturated, VerificationFailed
from .matrices import MonomialMatrix, Summand
from .modules import (
    DegreeBox,
    Element,
    GradedModule,
    colon_submodule,
    coefficient_on_basis,
    gamma_F,
    gamma_ideal,
    in_colon,
    localization_basis,
    same_class,
)
from .polyhedra import GE, LE, Constraint, RationalPolyhedron, lattice_points, polyhedron_minkowski
from .semigroup import AffineSemigroup, Face, box_points, saturate, zonotope


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _max_gen_tau(Q: AffineSemigroup) -> int:
    return max(max(Q.tau(g)) for g in Q.internal_generators)


def minimalize(Q: AffineSemigroup, points):
    """Minimal elements of a set of degrees under b <= c iff c - b in Q."""
    kept = []
    for p in Q.sort(set(map(tuple, points))):
        if not any(Q.contains(_sub(p, q)) for q in kept):
            kept.append(p)
    return kept


def generated(Q: AffineSemigroup, gens, b) -> bool:
    return any(Q.contains(_sub(b, g)) for g in gens)


def verification_bound(Q: AffineSemigroup, a) -> int:
    zmax = max((max(Q.tau(p)) for p in zonotope(Q).points), default=0)
    return max(Q.tau(a), default=0) + zmax + 2 * _max_gen_tau(Q)


def outside_translate(Q: AffineSemigroup, F: Face, a, b) -> bool:
    """b not in a + F - Q."""
    return not Q.in_translate(F, _sub(a, b))


def canonical_degree(Q: AffineSemigroup, F: Face, alpha):
    """The smallest element of Q cap (alpha + ZF) in the global degree order."""
    alpha = tuple(alpha)
    w = tuple(map(sum, zip(*Q.face_generators(F)))) if F.generator_indices else tuple([0] * Q.rank)
    start = alpha
    t = 0
    while not Q.contains(start):
        t += 1
        start = tuple(x + t * y for x, y in zip(alpha, w))
        if t > 10000 or not any(w):
            raise ValueError(f"{alpha} + ZF does not meet the semigroup")
    ts = Q.tau(start)
    lower = [ts[i] if i in F.facet_indices else 0 for i in range(Q.n)]
    pts = box_points(Q, lower, list(ts))
    for p in pts:
        if Q.contains(p) and Q.in_face_lattice(F, _sub(p, alpha)):
            return p
    return start


# ---------------------------------------------------------------------------
# irreducible ideals, saturated case


def halfspace_ideal_generators(Q: AffineSemigroup, h: int, a, verify: bool = True):
    """Minimal generators of the monomial ideal on {b in Q : tau_h(b) > tau_h(a)}."""
    if not Q.saturated:
        raise NotSaturated("the halfspace construction needs a saturated semigroup")
    a = tuple(a)
    th = Q.facet_functionals[h]
    level = Q.tau(a)[h]
    facet = Q.facet_face(h)
    on_facet = set(facet.generator_indices)
    disjoint = [D for D in Q.faces if not on_facet & set(D.generator_indices)]
    maximal = [D for D in disjoint if not any(E.id != D.id and Q.face_contains(E, D) for E in disjoint)]
    Z = zonotope(Q).polyhedron
    found = set()
    for D in maximal:
        cons = [Constraint(t, 0, GE) for t in Q.facet_functionals]
        cons += [Constraint(Q.facet_functionals[i], 0, LE) for i in D.facet_indices]
        cons += [Constraint(th, level, GE), Constraint(th, level, LE)]
        slice_ = RationalPolyhedron(Q.rank, tuple(cons))
        found.update(lattice_points(polyhedron_minkowski(slice_, Z)))

    def in_target(b):
        return Q.contains(b) and Q.tau(b)[h] > level

    raising = [g for g in Q.internal_generators if Q.tau(g)[h] >= 1]
    gens = set()
    frontier = {p for p in found if Q.contains(p)}
    while frontier:
        nxt = set()
        for p in frontier:
            if in_target(p):
                gens.add(p)
            else:
                nxt.update(_add(p, g) for g in raising)
        frontier = nxt
    gens = minimalize(Q, gens)
    if verify:
        bound = verification_bound(Q, a)
        for b in box_points(Q, 0, bound):
            if in_target(b) and not generated(Q, gens, b):
                raise VerificationFailed(f"degree {b} of the target ideal is not generated")
    return gens


def irreducible_ideal_generators(Q: AffineSemigroup, F: Face, a, verify: bool = True):
    """Minimal generators of the ideal on Q minus (a + F - Q), saturated Q."""
    if not Q.saturated:
        raise NotSaturated("use irreducible_ideal_generators_unsat for unsaturated semigroups")
    gens = []
    for h in sorted(F.facet_indices):
        gens.extend(halfspace_ideal_generators(Q, h, a, verify))
    return minimalize(Q, gens)


# ---------------------------------------------------------------------------
# irreducible ideals, general case


def _saturation(Q: AffineSemigroup):
    sat = getattr(Q, "_saturation", None)
    if sat is None:
        sat = saturate(Q)[0]
        Q._saturation = sat
    return sat


def _matching_face(Q: AffineSemigroup, sat: AffineSemigroup, F: Face) -> Face:
    lookup = {tuple(t): i for i, t in enumerate(sat.facet_functionals)}
    return sat.face_of_facets(frozenset(lookup[tuple(Q.facet_functionals[i])] for i in F.facet_indices))


def _face_facets(Q: AffineSemigroup, F: Face):
    """Faces of Q that are facets of F."""
    return [D for D in Q.faces if D.dim == F.dim - 1 and Q.face_contains(F, D)]


def _intersection_ideal(Q: AffineSemigroup, faces, bound):
    """Generators of the monomial ideal of degrees lying on none of the given faces."""
    if not faces:
        return [tuple([0] * Q.rank)]
    pts = [
        b
        for b in box_points(Q, 0, bound)
        if Q.contains(b) and not any(Q.on_face(D, b) for D in faces)
    ]
    return minimalize(Q, pts)


def irreducible_ideal_generators_unsat(Q: AffineSemigroup, F: Face, a, box: DegreeBox | None = None):
    """Generators of the ideal on Q minus (a + F - Q) for any semigroup, by repairing the saturated answer."""
    a = tuple(a)
    sat = _saturation(Q) if not Q.saturated else Q
    Fs = _matching_face(Q, sat, F) if sat is not Q else F
    V = irreducible_ideal_generators(sat, Fs, a)
    bound = verification_bound(sat, a) + _max_gen_tau(Q) + max((max(Q.tau(v)) for v in V), default=0)
    pts = [b for b in box_points(Q, 0, bound) if Q.contains(b) and any(sat.contains(_sub(b, v)) for v in V)]
    gens = minimalize(Q, pts)
    box = box or DegreeBox(-bound, max(bound + _max_gen_tau(Q), 12))
    ideal_I = _intersection_ideal(Q, _face_facets(Q, F), bound)
    while True:
        Wbar = GradedModule.monomial_quotient(Q, gens)
        C = colon_submodule(Wbar, F, box)
        bad = [g.degree for g in C.generators if not Q.in_face_lattice(F, _sub(g.degree, a))]
        extra = list(bad)
        if not bad:
            extra = [g.degree for g in gamma_ideal(Wbar, ideal_I, box).generators]
        if not extra:
            break
        gens = minimalize(Q, gens + extra)
    return gens


def ideal_generators(Q: AffineSemigroup, F: Face, a):
    if Q.saturated:
        return irreducible_ideal_generators(Q, F, a)
    return irreducible_ideal_generators_unsat(Q, F, a)


# ---------------------------------------------------------------------------
# hulls


@dataclass
class EffectiveVector:
    degree: tuple
    entries: list


@dataclass
class EffectiveHull:
    Q: AffineSemigroup
    summands: list  # of Summand
    vectors: list  # of EffectiveVector, one per module generator

    def zero_pattern_violations(self):
        bad = []
        for k, v in enumerate(self.vectors):
            for j, (s, c) in enumerate(zip(self.summands, v.entries)):
                if c != 0 and outside_translate(self.Q, s.face, s.degree, v.degree):
                    bad.append((k, j))
        return bad


def _colon_multiple(N: GradedModule, g: Element, F: Face, rep, degrees):
    """x^u g for the first degree (in order) of the class of rep where it is a nonzero element of the colon."""
    Q = N.Q
    for alpha in degrees:
        if not same_class(Q, F, alpha, rep):
            continue
        if not Q.contains(_sub(alpha, g.degree)):
            continue
        z = Element(alpha, g.vec)
        if not N.is_zero(z) and in_colon(N, z, F):
            return z
    return None


def irreducible_hull(M: GradedModule, box: DegreeBox | None = None) -> EffectiveHull:
    """Embed M into an irreducible sum, face by face in order of increasing dimension."""
    Q = M.Q
    if not M.is_q_graded():
        raise NotQGraded("every generator degree must lie in the semigroup")
    box = box or DegreeBox()
    N = M
    summands = []
    columns = [[] for _ in range(M.ngens)]
    zero = M.field.zero
    for F in Q.faces:
        C = colon_submodule(N, F, box)
        if C.is_zero():
            continue
        B = localization_basis(N, F, box, colon=C)
        reps = []
        for y in B.elements:
            if not any(same_class(Q, F, y.degree, r) for r in reps):
                reps.append(y.degree)
        degrees = N.scan_degrees(box)
        for gi in range(M.ngens):
            g = N.generator(gi)
            coeffs = [zero] * len(B.elements)
            for rep in reps:
                z = _colon_multiple(N, g, F, rep, degrees)
                if z is None:
                    continue
                for k, c in enumerate(coefficient_on_basis(N, z, B, check=False)):
                    if c != 0:
                        coeffs[k] = c
            columns[gi].extend(coeffs)
        summands.extend(Summand(F, canonical_degree(Q, F, y.degree)) for y in B.elements)
        torsion = gamma_F(N, F, box)
        if torsion.generators:
            N = torsion.quotient()
    vectors = [EffectiveVector(M.generator_degrees[i], columns[i]) for i in range(M.ngens)]
    return EffectiveHull(Q, summands, vectors)


def irreducible_sum(Q: AffineSemigroup, summands, field=None) -> GradedModule:
    """The direct sum of the k[Q]/W_j, one generator e_j in degree 0 per summand."""
    from .field import QQ

    field = field or QQ
    r = len(summands)
    rels = []
    cache = {}
    for j, s in enumerate(summands):
        key = (s.face.id, s.degree)
        if key not in cache:
            cache[key] = ideal_generators(Q, s.face, s.degree)
        unit = tuple(field.one if k == j else field.zero for k in range(r))
        rels.extend(Element(w, unit) for w in cache[key])
    return GradedModule(Q, [tuple([0] * Q.rank)] * r, rels, field)


def hull_cokernel(M: GradedModule, hull: EffectiveHull):
    """(irreducible sum, cokernel of M into it)."""
    W = irreducible_sum(M.Q, hull.summands, M.field)
    images = [Element(v.degree, tuple(M.field(c) for c in v.entries)) for v in hull.vectors]
    return W, W.quotient(images)


def hull_is_injective(M: GradedModule, hull: EffectiveHull, degrees) -> bool:
    W = irreducible_sum(M.Q, hull.summands, M.field)
    return _embedding_injective(M, W, hull.vectors, range(len(hull.summands)), degrees)


def _embedding_injective(M, W, vectors, keep, degrees):
    from .field import rank

    keep = list(keep)
    for alpha in degrees:
        n = M.dim(alpha)
        if n == 0:
            continue
        cols = []
        for v in M.basis_vectors(alpha):
            img = [M.field.zero] * W.ngens
            for c, vec in zip(v, vectors):
                if c != 0:
                    for j in keep:
                        img[j] = img[j] + c * M.field(vec.entries[j])
            cols.append(W.coords(alpha, img))
        rows = [[cols[c][r] for c in range(n)] for r in range(W.dim(alpha))]
        if rank(rows, n) < n:
            return False
    return True


def hull_is_minimal(M: GradedModule, hull: EffectiveHull, degrees) -> bool:
    """Dropping any one summand must break injectivity somewhere on the degrees."""
    W = irreducible_sum(M.Q, hull.summands, M.field)
    r = len(hull.summands)
    for j in range(r):
        keep = [k for k in range(r) if k != j]
        if _embedding_injective(M, W, hull.vectors, keep, degrees):
            return False
    return True


# ---------------------------------------------------------------------------
# resolutions


@dataclass
class IrreducibleResolution:
    Q: AffineSemigroup
    stages: list  # list of lists of Summand
    maps: list = dc_field(default_factory=list)  # MonomialMatrix from stage j to stage j+1
    hull: EffectiveHull | None = None

    @property
    def length(self):
        return len(self.stages) - 1


def irreducible_resolution(M: GradedModule, n: int, box: DegreeBox | None = None) -> IrreducibleResolution:
    """Hull, cokernel, hull of the cokernel, ... until the cokernel vanishes or stage n is built."""
    Q = M.Q
    hull = irreducible_hull(M, box)
    res = IrreducibleResolution(Q, [hull.summands], [], hull)
    _, coker = hull_cokernel(M, hull)
    for _ in range(n):
        if coker.is_zero_module():
            break
        nxt = irreducible_hull(coker, box)
        entries = [[v.entries[q] for v in nxt.vectors] for q in range(len(nxt.summands))]
        res.maps.append(MonomialMatrix(Q, nxt.summands, res.stages[-1], entries))
        res.stages.append(nxt.summands)
        _, coker = hull_cokernel(coker, nxt)
    return res
