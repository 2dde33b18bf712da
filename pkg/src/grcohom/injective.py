"""Bass numbers, shifts and minimal injective resolutions.

Bass numbers at the maximal ideal come from Hom(F, M) for a minimal
free resolution F of the residue field, computed degree by degree.
An injective resolution of M is read off an irreducible resolution of a
shifted copy M(-a) whose relevant Bass degrees all lie in Q.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import BoxTooSmall
from .field import rank
from .irreducible import IrreducibleResolution, irreducible_resolution
from .matrices import MonomialMatrix, Summand
from .modules import DegreeBox, GradedMap, GradedModule, colon_submodule, gamma_F, kernel
from .semigroup import AffineSemigroup, box_points


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


@dataclass
class FreeResolution:
    """Free modules F_0 <- F_1 <- ...; ``differentials[j]`` maps F_(j+1) to F_j."""

    Q: AffineSemigroup
    degrees: list  # degrees[j]: generator degrees of F_j
    differentials: list  # GradedMap objects


_RESIDUE_CACHE: dict = {}


def residue_field_resolution(Q: AffineSemigroup, length: int, box: DegreeBox | None = None, field=None) -> FreeResolution:
    """Minimal free resolution of k up to homological degree ``length`` (cached per semigroup)."""
    from .field import QQ

    field = field or QQ
    key = (id(Q), field)
    res = _RESIDUE_CACHE.get(key)
    if res is not None and res[0] is Q and len(res[1].degrees) > length:
        return res[1]
    box = box or DegreeBox()
    zero = tuple([0] * Q.rank)
    F0 = GradedModule.free(Q, [zero], field)
    gens = [g for g in Q.sort(Q.internal_generators)]
    # keep only indecomposable generators
    gens = [g for g in gens if not any(h != g and Q.contains(_sub(g, h)) for h in gens)]
    F1 = GradedModule.free(Q, gens, field)
    d1 = GradedMap(F1, F0, [(field.one,)] * len(gens))
    out = FreeResolution(Q, [[zero], gens], [d1])
    while len(out.degrees) <= length:
        d = out.differentials[-1]
        K = kernel(d, _box_for(Q, d.source, box))
        src = GradedModule.free(Q, [g.degree for g in K.generators], field)
        out.degrees.append(src.generator_degrees)
        out.differentials.append(GradedMap(src, d.source, [g.vec for g in K.generators]))
        if not K.generators:
            break
    _RESIDUE_CACHE[key] = (Q, out)
    return out


def _box_for(Q, F: GradedModule, box: DegreeBox) -> DegreeBox:
    """A box that leaves the margin free above the generator degrees of F."""
    margin = box.margin_for(Q)
    top = max((max(Q.tau(g)) for g in F.generator_degrees), default=0)
    upper = max(box.upper, top + 3 * margin)
    return DegreeBox(box.lower, upper, box.margin)


def _hom_matrix(M: GradedModule, d: GradedMap, alpha):
    """Matrix of Hom(F_j, M)_alpha -> Hom(F_(j+1), M)_alpha induced by d: F_(j+1) -> F_j."""
    src_degs = d.target.generator_degrees  # F_j
    tgt_degs = d.source.generator_degrees  # F_(j+1)
    col_blocks = [(i, M.basis_vectors(_add(alpha, b))) for i, b in enumerate(src_degs)]
    ncols = sum(len(v) for _, v in col_blocks)
    rows = []
    for k, bk in enumerate(tgt_degs):
        beta = _add(alpha, bk)
        block_rows = [[] for _ in range(M.dim(beta))]
        for i, basis in col_blocks:
            c = d.images[k][i]
            for v in basis:
                coords = M.coords(beta, tuple(c * x for x in v)) if c != 0 else [M.field.zero] * M.dim(beta)
                for r, x in enumerate(coords):
                    block_rows[r].append(x)
        rows.extend(block_rows)
    return rows, ncols


@dataclass
class BassTable:
    entries: dict = dc_field(default_factory=dict)  # (j, degree) -> multiplicity

    def at(self, j, alpha) -> int:
        return self.entries.get((j, tuple(alpha)), 0)

    def degrees(self, j=None):
        return sorted({a for (i, a), m in self.entries.items() if m and (j is None or i == j)})


def bass_numbers(M: GradedModule, jmax: int, box: DegreeBox | None = None) -> BassTable:
    """mu^(j, alpha)(M) for j <= jmax: dimensions of Ext^j(k, M)_alpha on the box."""
    Q = M.Q
    box = box or DegreeBox()
    res = residue_field_resolution(Q, jmax + 1, box, M.field)
    table = BassTable()
    candidates = box_points(Q, box.lower, box.upper)
    band_lo = box.lower + box.margin_for(Q)
    band_hi = box.upper - box.margin_for(Q)
    for j in range(jmax + 1):
        if j >= len(res.degrees):
            break
        degs = res.degrees[j]
        d_in = res.differentials[j - 1] if j >= 1 else None  # F_j -> F_(j-1)
        d_out = res.differentials[j] if j < len(res.differentials) else None  # F_(j+1) -> F_j
        for alpha in candidates:
            n = sum(M.dim(_add(alpha, b)) for b in degs)
            if n == 0:
                continue
            if d_out is not None:
                rows, ncols = _hom_matrix(M, d_out, alpha)
                ker = n - rank(rows, ncols)
            else:
                ker = n
            if ker == 0:
                continue
            im = 0
            if d_in is not None:
                rows, ncols = _hom_matrix(M, d_in, alpha)
                im = rank(rows, ncols)
            mu = ker - im
            if mu:
                if not all(band_lo <= t <= band_hi for t in Q.tau(alpha)):
                    raise BoxTooSmall(f"Bass number found at the edge of the box, degree {alpha}")
                table.entries[(j, alpha)] = mu
    return table


def module_dimension(M: GradedModule, box: DegreeBox | None = None) -> int:
    """Largest dimension of a face whose prime is associated to M (-1 for the zero module).

    Faces are visited in order of increasing dimension and the torsion along
    each face is divided out before the next one, as in the hull, so a
    nonzero colon at F means P_F is associated.
    """
    N = M
    best = -1
    for F in M.Q.faces:
        if colon_submodule(N, F, box).is_zero():
            continue
        best = max(best, F.dim)
        torsion = gamma_F(N, F, box)
        if torsion.generators:
            N = torsion.quotient()
    return best


def choose_shift(M: GradedModule, i: int, box: DegreeBox | None = None):
    """Smallest a in Q moving every Bass degree through j = i + 1 + dim M into Q."""
    Q = M.Q
    jmax = max(i + 1 + module_dimension(M, box), 0)
    table = bass_numbers(M, jmax, box)
    degs = table.degrees()
    if all(Q.contains(a) for a in degs):
        return tuple([0] * Q.rank)
    w = tuple(map(sum, zip(*Q.internal_generators)))
    t = 1
    while not all(Q.contains(tuple(a + t * x for a, x in zip(alpha, w))) for alpha in degs):
        t += 1
    bound = max(Q.tau(tuple(t * x for x in w)))
    for a in box_points(Q, 0, bound):
        if Q.contains(a) and all(Q.contains(_add(alpha, a)) for alpha in degs):
            return a
    return tuple(t * x for x in w)


@dataclass
class InjectiveResolution:
    Q: AffineSemigroup
    shift: tuple
    stages: list  # lists of Summand, labels of the shifted module
    maps: list
    irreducible: IrreducibleResolution | None = None

    def unshifted_stages(self):
        return [[Summand(s.face, _sub(s.degree, self.shift)) for s in st] for st in self.stages]

    def unshifted_maps(self):
        out = []
        for m in self.maps:
            rows = [Summand(s.face, _sub(s.degree, self.shift)) for s in m.row_labels]
            cols = [Summand(s.face, _sub(s.degree, self.shift)) for s in m.col_labels]
            out.append(MonomialMatrix(self.Q, rows, cols, m.entries))
        return out


def injective_resolution(M: GradedModule, n: int, box: DegreeBox | None = None, shift=None) -> InjectiveResolution:
    """First n+1 stages of a minimal injective resolution, as labelled data of M(-a)."""
    a = tuple(shift) if shift is not None else choose_shift(M, n - 1, box)
    R = irreducible_resolution(M.shift(a), n, box)
    return InjectiveResolution(M.Q, a, R.stages, R.maps, R)
