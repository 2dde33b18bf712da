"""Finitely generated Z^d-graded modules over k[Q], one degree at a time.

A module is a free module on generators in fixed degrees modulo a list
of homogeneous relation elements.  Because k[Q] is spanned by monomials,
the degree-alpha piece is the span of the generators j with
alpha - deg(j) in Q, modulo the relations r with alpha - deg(r) in Q.
An element is a degree plus a coefficient vector on the generators, and
multiplication by a monomial only changes the degree.  All linear
algebra is exact.

Generating sets of submodules are found by scanning a finite box of
degrees (see ``DegreeBox``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

from .errors import BoxTooSmall, NotInColon
from .field import QQ, Field, Reducer, nullspace, solve
from .semigroup import AffineSemigroup, Face, box_points

DEFAULT_BOX = 12
MAX_ENLARGE = 6


class Element(NamedTuple):
    degree: tuple
    vec: tuple


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


@dataclass
class DegreeBox:
    """Degrees alpha with lower <= tau_i(alpha) <= upper; generator searches need margin to spare."""

    lower: int = -DEFAULT_BOX
    upper: int = DEFAULT_BOX
    margin: int | None = None

    def margin_for(self, Q: AffineSemigroup) -> int:
        if self.margin is not None:
            return self.margin
        return max(max(Q.tau(g)) for g in Q.internal_generators)

    def enlarged(self, Q: AffineSemigroup) -> "DegreeBox":
        m = self.margin_for(Q)
        return DegreeBox(self.lower - m, self.upper + m, self.margin)


class _Component:
    __slots__ = ("degree", "active", "reducer", "basis", "relations")

    def __init__(self, degree, active, reducer, basis, relations):
        self.degree = degree
        self.active = active
        self.reducer = reducer
        self.basis = basis
        self.relations = relations

    @property
    def dim(self):
        return len(self.basis)


class GradedModule:
    """Generators in given (internal) degrees modulo homogeneous relation elements."""

    def __init__(self, Q: AffineSemigroup, generator_degrees, relations=(), field: Field = QQ):
        self.Q = Q
        self.field = field
        self.generator_degrees = [tuple(g) for g in generator_degrees]
        self.ngens = len(self.generator_degrees)
        zero = field.zero
        rels = []
        for r in relations:
            vec = tuple(field(c) for c in r.vec)
            if len(vec) != self.ngens:
                raise ValueError("relation vector length differs from the number of generators")
            for j, c in enumerate(vec):
                if c != 0 and not Q.contains(_sub(r.degree, self.generator_degrees[j])):
                    raise ValueError(f"relation in degree {r.degree} uses generator {j} outside its degree range")
            if any(c != 0 for c in vec):
                rels.append(Element(tuple(r.degree), vec))
        self.relations = rels
        self._zero = zero
        self._cache: dict = {}

    # construction ---------------------------------------------------------
    @classmethod
    def from_terms(cls, Q, generator_degrees, rows, field: Field = QQ):
        """Relations given as rows of (coefficient, generator index, monomial degree)."""
        gens = [tuple(g) for g in generator_degrees]
        rels = []
        for row in rows:
            if not row:
                continue
            degs = {_add(gens[j], tuple(mon)) for _, j, mon in row}
            if len(degs) != 1:
                raise ValueError("relation row is not homogeneous")
            for _, j, mon in row:
                if not Q.contains(tuple(mon)):
                    raise ValueError(f"monomial degree {tuple(mon)} is not in the semigroup")
            vec = [field.zero] * len(gens)
            for c, j, _ in row:
                vec[j] = vec[j] + field(c)
            rels.append(Element(degs.pop(), tuple(vec)))
        return cls(Q, gens, rels, field)

    @classmethod
    def free(cls, Q, degrees, field: Field = QQ):
        return cls(Q, degrees, (), field)

    @classmethod
    def ring(cls, Q, field: Field = QQ):
        return cls(Q, [tuple([0] * Q.rank)], (), field)

    @classmethod
    def monomial_quotient(cls, Q, monomials, field: Field = QQ):
        """k[Q]/I for the monomial ideal I generated in the given degrees."""
        one = field.one
        return cls(Q, [tuple([0] * Q.rank)], [Element(tuple(m), (one,)) for m in monomials], field)

    @classmethod
    def residue_field(cls, Q, field: Field = QQ):
        return cls.monomial_quotient(Q, Q.internal_generators, field)

    def shift(self, a) -> "GradedModule":
        """M(-a): the same module with every degree raised by a."""
        a = tuple(a)
        return GradedModule(
            self.Q,
            [_add(g, a) for g in self.generator_degrees],
            [Element(_add(r.degree, a), r.vec) for r in self.relations],
            self.field,
        )

    def quotient(self, elements) -> "GradedModule":
        return GradedModule(self.Q, self.generator_degrees, list(self.relations) + [Element(tuple(e.degree), tuple(e.vec)) for e in elements], self.field)

    def generator(self, j) -> Element:
        vec = [self._zero] * self.ngens
        vec[j] = self.field.one
        return Element(self.generator_degrees[j], tuple(vec))

    def zero_vector(self):
        return tuple([self._zero] * self.ngens)

    # degreewise data --------------------------------------------------------
    def component(self, alpha) -> _Component:
        alpha = tuple(alpha)
        comp = self._cache.get(alpha)
        if comp is not None:
            return comp
        Q = self.Q
        active = [j for j, g in enumerate(self.generator_degrees) if Q.contains(_sub(alpha, g))]
        red = Reducer(self.ngens, self._zero)
        rels = []
        if active:
            for r in self.relations:
                if Q.contains(_sub(alpha, r.degree)):
                    red.add(r.vec)
                    rels.append(r)
        piv = set(red.rows)
        basis = [j for j in active if j not in piv]
        comp = _Component(alpha, active, red, basis, rels)
        self._cache[alpha] = comp
        return comp

    def dim(self, alpha) -> int:
        return self.component(alpha).dim

    def normal_form(self, alpha, vec):
        return tuple(self.component(alpha).reducer.reduce(vec))

    def coords(self, alpha, vec):
        comp = self.component(alpha)
        red = comp.reducer.reduce(vec)
        return [red[j] for j in comp.basis]

    def from_coords(self, alpha, coords):
        comp = self.component(alpha)
        vec = [self._zero] * self.ngens
        for j, c in zip(comp.basis, coords):
            vec[j] = c
        return tuple(vec)

    def basis_vectors(self, alpha):
        comp = self.component(alpha)
        one = self.field.one
        out = []
        for j in comp.basis:
            v = [self._zero] * self.ngens
            v[j] = one
            out.append(tuple(v))
        return out

    def is_zero(self, elem: Element) -> bool:
        return all(c == 0 for c in self.normal_form(elem.degree, elem.vec))

    def is_zero_module(self) -> bool:
        return all(self.is_zero(self.generator(j)) for j in range(self.ngens))

    def multiply(self, elem: Element, u) -> Element:
        return Element(_add(elem.degree, u), elem.vec)

    def mult_matrix(self, alpha, u):
        """Matrix of multiplication by x^u from M_alpha to M_(alpha+u), in basis coordinates."""
        beta = _add(alpha, u)
        cols = [self.coords(beta, v) for v in self.basis_vectors(alpha)]
        nrows = self.dim(beta)
        return [[cols[c][r] for c in range(len(cols))] for r in range(nrows)]

    def is_q_graded(self) -> bool:
        return all(self.Q.contains(g) for g in self.generator_degrees)

    def scan_degrees(self, box: DegreeBox):
        """Degrees of the box where this module can be nonzero, in the global degree order."""
        Q = self.Q
        if self.is_q_graded():
            pts = box_points(Q, 0, box.upper)
            return [p for p in pts if Q.contains(p)]
        pts = box_points(Q, box.lower, box.upper)
        return [p for p in pts if any(Q.contains(_sub(p, g)) for g in self.generator_degrees)]

    def minimal_generator_degrees(self):
        """Degrees (with multiplicity) of a minimal generating set; exact, no box needed."""
        out = []
        for alpha in self.Q.sort(set(self.generator_degrees)):
            comp = self.component(alpha)
            red = Reducer(self.ngens, self._zero)
            for r in comp.relations:
                red.add(r.vec)
            for j in comp.active:
                if self.generator_degrees[j] != alpha:
                    v = [self._zero] * self.ngens
                    v[j] = self.field.one
                    red.add(v)
            out.extend([alpha] * (len(comp.active) - len(red)))
        return out

    def __repr__(self):
        return f"GradedModule({len(self.generator_degrees)} generators, {len(self.relations)} relations)"


# ---------------------------------------------------------------------------
# submodules and generator scans


class Submodule:
    """The submodule of ``ambient`` generated by a list of elements."""

    def __init__(self, ambient: GradedModule, generators):
        self.ambient = ambient
        self.generators = [Element(tuple(g.degree), tuple(g.vec)) for g in generators]

    def span_reducer(self, alpha):
        M = self.ambient
        comp = M.component(alpha)
        red = Reducer(M.ngens, M._zero)
        for r in comp.relations:
            red.add(r.vec)
        base = len(red)
        for g in self.generators:
            if M.Q.contains(_sub(alpha, g.degree)):
                red.add(g.vec)
        return red, base

    def dim(self, alpha) -> int:
        red, base = self.span_reducer(alpha)
        return len(red) - base

    def contains(self, elem: Element) -> bool:
        red, _ = self.span_reducer(elem.degree)
        return all(c == 0 for c in red.reduce(elem.vec))

    def generator_degrees(self):
        return [g.degree for g in self.generators]

    def is_zero(self) -> bool:
        return not self.generators

    def quotient(self) -> GradedModule:
        return self.ambient.quotient(self.generators)

    def presentation(self, box: DegreeBox | None = None) -> GradedModule:
        """The submodule as generators and relations (syzygies found on the box)."""
        M = self.ambient
        F = GradedModule.free(M.Q, self.generator_degrees(), M.field)
        f = GradedMap(F, M, [g.vec for g in self.generators])
        syz = kernel(f, box)
        return GradedModule(M.Q, self.generator_degrees(), syz.generators, M.field)

    def __repr__(self):
        return f"Submodule(generated in degrees {self.generator_degrees()})"


def scan_generators(M: GradedModule, subspace: Callable, box: DegreeBox | None = None, degrees=None):
    """Generators of the submodule whose degree-alpha piece is spanned by subspace(alpha).

    Degrees are visited in the global degree order; a vector becomes a new
    generator when it is not in the span of multiples of earlier ones.  If a
    generator shows up inside the margin band at the top of the box, the box
    is enlarged (up to a fixed number of times) and the scan restarted.
    """
    Q = M.Q
    box = box or DegreeBox()
    for _ in range(MAX_ENLARGE + 1):
        gens = []
        for alpha in (degrees if degrees is not None else M.scan_degrees(box)):
            vecs = subspace(alpha)
            if not vecs:
                continue
            comp = M.component(alpha)
            red = Reducer(M.ngens, M._zero)
            for r in comp.relations:
                red.add(r.vec)
            for g in gens:
                if Q.contains(_sub(alpha, g.degree)):
                    red.add(g.vec)
            for v in vecs:
                w = tuple(red.reduce(v))
                if red.add(w):
                    gens.append(Element(alpha, w))
        if degrees is not None:
            return gens
        band = box.upper - box.margin_for(Q)
        if all(max(Q.tau(g.degree)) <= band for g in gens):
            return gens
        box = box.enlarged(Q)
    raise BoxTooSmall(f"generators keep appearing near the top of the degree box (upper bound {box.upper})")


# ---------------------------------------------------------------------------
# maps


class GradedMap:
    """Degree-preserving map given by the image vector (in target coordinates) of each source generator."""

    def __init__(self, source: GradedModule, target: GradedModule, images):
        self.source = source
        self.target = target
        self.images = [tuple(target.field(c) for c in v) for v in images]
        if len(self.images) != source.ngens:
            raise ValueError("one image per source generator is required")

    def apply(self, elem: Element) -> Element:
        T = self.target
        vec = [T._zero] * T.ngens
        for c, img in zip(elem.vec, self.images):
            if c != 0:
                vec = [a + c * b for a, b in zip(vec, img)]
        return Element(elem.degree, tuple(vec))

    def matrix_at(self, alpha):
        """Rows: target basis coordinates, columns: source basis coordinates."""
        S, T = self.source, self.target
        cols = [T.coords(alpha, self.apply(Element(alpha, v)).vec) for v in S.basis_vectors(alpha)]
        nrows = T.dim(alpha)
        return [[cols[c][r] for c in range(len(cols))] for r in range(nrows)]

    def kernel_at(self, alpha):
        S = self.source
        mat = self.matrix_at(alpha)
        n = S.dim(alpha)
        if n == 0:
            return []
        null = nullspace(mat, n, S._zero) if mat else [[S.field.one if i == j else S._zero for i in range(n)] for j in range(n)]
        return [S.from_coords(alpha, c) for c in null]

    def image_at(self, alpha):
        S = self.source
        return [self.apply(Element(alpha, v)).vec for v in S.basis_vectors(alpha)]


def kernel(f: GradedMap, box: DegreeBox | None = None) -> Submodule:
    gens = scan_generators(f.source, f.kernel_at, box)
    return Submodule(f.source, gens)


def image_cokernel(f: GradedMap, box: DegreeBox | None = None):
    """(image as a submodule of the target, cokernel module)."""
    img = Submodule(f.target, [f.apply(f.source.generator(j)) for j in range(f.source.ngens)])
    # drop redundant generators so the image is minimally generated on the box
    gens = scan_generators(f.target, lambda a: [v for v in _span_basis(f.target, a, img)], box, degrees=f.target.Q.sort({g.degree for g in img.generators}))
    img = Submodule(f.target, gens)
    return img, f.target.quotient(gens)


def _span_basis(M: GradedModule, alpha, sub: Submodule):
    return [g.vec for g in sub.generators if M.Q.contains(_sub(alpha, g.degree))]


def degree_component(M: GradedModule, alpha):
    """(dimension, basis vectors) of M_alpha; basis in generator order."""
    return M.dim(alpha), M.basis_vectors(alpha)


# ---------------------------------------------------------------------------
# annihilators and torsion


def _annihilated_at(M: GradedModule, alpha, monomials, inside=None):
    """Vectors of M_alpha sent by every x^u (u in monomials) into ``inside`` (default: zero)."""
    n = M.dim(alpha)
    if n == 0:
        return []
    basis = M.basis_vectors(alpha)
    rows = []
    for u in monomials:
        beta = _add(alpha, u)
        comp = M.component(beta)
        if inside is None:
            cols = [M.coords(beta, v) for v in basis]
        else:
            red = Reducer(M.ngens, M._zero)
            for r in comp.relations:
                red.add(r.vec)
            for v in inside(beta):
                red.add(v)
            free = [j for j in comp.active if j not in red.rows]
            cols = [[red.reduce(v)[j] for j in free] for v in basis]
        for r in range(len(cols[0]) if cols else 0):
            rows.append([cols[c][r] for c in range(n)])
    if not rows:
        return basis
    return [M.from_coords(alpha, coef) for coef in nullspace(rows, n, M._zero)]


def colon_at(M: GradedModule, alpha, F: Face):
    return _annihilated_at(M, alpha, M.Q.prime_generators(F))


def colon_submodule(M: GradedModule, F: Face, box: DegreeBox | None = None) -> Submodule:
    """(0 :_M P_F), generated on the box."""
    return Submodule(M, scan_generators(M, lambda a: colon_at(M, a, F), box))


def _power_monomials(gens, k):
    return sorted({tuple(map(sum, zip(*c))) for c in itertools.combinations_with_replacement(gens, k)})


def gamma_ideal(M: GradedModule, ideal_generators, box: DegreeBox | None = None) -> Submodule:
    """Sections supported on the monomial ideal: the union of the chain (0 :_M I^k)."""
    box = box or DegreeBox()
    ideal_generators = [tuple(g) for g in ideal_generators]
    if not ideal_generators:
        # the zero ideal: every element is killed by its powers
        return Submodule(M, [M.generator(j) for j in range(M.ngens) if not M.is_zero(M.generator(j))])
    degrees = M.scan_degrees(box)
    memo: dict = {}

    def level(k, alpha):
        key = (k, alpha)
        if key in memo:
            return memo[key]
        if k == 0:
            memo[key] = []
            return []
        vecs = _annihilated_at(M, alpha, ideal_generators, inside=lambda b: level(k - 1, b))
        memo[key] = vecs
        return vecs

    k = 1
    while True:
        if all(len(level(k, a)) == len(level(k + 1, a)) for a in degrees):
            break
        k += 1
    return Submodule(M, scan_generators(M, lambda a: level(k, a), box))


def gamma_F(M: GradedModule, F: Face, box: DegreeBox | None = None) -> Submodule:
    return gamma_ideal(M, M.Q.prime_generators(F), box)


def minimal_generators(M, box: DegreeBox | None = None):
    """Minimal generator degrees of a module (exact) or of a submodule (on the box)."""
    if isinstance(M, GradedModule):
        return M.minimal_generator_degrees()
    gens = scan_generators(M.ambient, lambda a: _span_basis(M.ambient, a, M), box, degrees=M.ambient.Q.sort({g.degree for g in M.generators}))
    return [g.degree for g in gens]


# ---------------------------------------------------------------------------
# localization along a face


def _face_weight(Q: AffineSemigroup, F: Face):
    gens = Q.face_generators(F)
    return tuple(map(sum, zip(*gens))) if gens else tuple([0] * Q.rank)


def same_class(Q: AffineSemigroup, F: Face, a, b) -> bool:
    return Q.in_face_lattice(F, _sub(a, b))


def _in_face(Q: AffineSemigroup, F: Face, x) -> bool:
    return Q.on_face(F, x) and Q.contains(x)


def common_degree(Q: AffineSemigroup, F: Face, degrees):
    """A degree beta with beta - a in F for every listed degree a (all in one class mod ZF)."""
    w = _face_weight(Q, F)
    base = degrees[0]
    t = 0
    while True:
        beta = tuple(x + t * y for x, y in zip(base, w))
        if all(_in_face(Q, F, _sub(beta, a)) for a in degrees):
            return beta
        t += 1
        if t > 10000:
            raise BoxTooSmall("no common degree along the face")


@dataclass
class LocalizationBasis:
    face: Face
    elements: list = field(default_factory=list)

    def in_class(self, Q, degree):
        return [k for k, y in enumerate(self.elements) if same_class(Q, self.face, y.degree, degree)]


def localization_basis(N: GradedModule, F: Face, box: DegreeBox | None = None, colon: Submodule | None = None) -> LocalizationBasis:
    """A k[ZF]-basis of (0 :_N P_F)[ZF] made of colon generators, picked greedily in degree order.

    A candidate is kept when its image generates a submodule with annihilator
    exactly P_F modulo the earlier picks; in a common degree deep along F this
    is linear independence of the images.
    """
    Q = N.Q
    C = colon if colon is not None else colon_submodule(N, F, box)
    classes: list[list[Element]] = []
    for g in C.generators:
        for cl in classes:
            if same_class(Q, F, cl[0].degree, g.degree):
                cl.append(g)
                break
        else:
            classes.append([g])
    chosen = []
    for cl in classes:
        beta = common_degree(Q, F, [g.degree for g in cl])
        comp = N.component(beta)
        red = Reducer(N.ngens, N._zero)
        for r in comp.relations:
            red.add(r.vec)
        for g in sorted(cl, key=lambda e: Q.order_key(e.degree)):
            if red.add(g.vec):
                chosen.append(g)
    chosen.sort(key=lambda e: Q.order_key(e.degree))
    return LocalizationBasis(F, chosen)


def in_colon(N: GradedModule, z: Element, F: Face) -> bool:
    return all(N.is_zero(N.multiply(z, g)) for g in N.Q.prime_generators(F))


def coefficient_on_basis(N: GradedModule, z: Element, B: LocalizationBasis, check: bool = True):
    """Scalars c_y with x^a z = sum c_y x^(a_y) y in a common degree along the face (0 off the class of z)."""
    Q = N.Q
    F = B.face
    if check and not in_colon(N, z, F):
        raise NotInColon(f"element of degree {z.degree} is not annihilated by P_F")
    out = [N._zero] * len(B.elements)
    idx = B.in_class(Q, z.degree)
    if not idx:
        return out
    beta = common_degree(Q, F, [z.degree] + [B.elements[k].degree for k in idx])
    cols = [N.coords(beta, B.elements[k].vec) for k in idx]
    target = N.coords(beta, z.vec)
    sol = solve(cols, target, N._zero)
    if sol is None:
        raise NotInColon(f"element of degree {z.degree} is outside the span of the localization basis")
    for k, c in zip(idx, sol):
        out[k] = c
    return out
