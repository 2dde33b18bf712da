"""Independent cross-checks: a Cech-complex computation of local cohomology and brute-force monomial decompositions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

from .errors import NotStabilized
from .field import rank
from .modules import DegreeBox, GradedModule
from .semigroup import box_points


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _scale(t, v):
    return tuple(t * x for x in v)


@dataclass
class CechOracleResult:
    dims: dict  # degree -> dimension
    horizon: int
    localizations: list = dc_field(default_factory=list)  # the inverted monomial of each subset


def _is_iso(M: GradedModule, alpha, u) -> bool:
    a = M.dim(alpha)
    if a != M.dim(_add(alpha, u)):
        return False
    if a == 0:
        return True
    return rank(M.mult_matrix(alpha, u), a) == a


def _stable(M: GradedModule, alpha, g, T) -> bool:
    """Whether multiplication by g-powers is an isomorphism from level T on, tested at T -> T+1 and T -> 2T."""
    if not any(g):
        return True
    base = _add(alpha, _scale(T, g))
    return _is_iso(M, base, g) and _is_iso(M, base, _scale(T, g))


def cech_oracle(M: GradedModule, ideal_generators, i: int, degrees=None, box: DegreeBox | None = None) -> CechOracleResult:
    """dim H^i_I(M) at every degree (default: the tau-box), from the Cech complex on the generators of I."""
    Q = M.Q
    gens = [tuple(g) for g in ideal_generators]
    if degrees is None:
        box = box or DegreeBox(-5, 5)
        degrees = box_points(Q, box.lower, box.upper)
        width = box.upper - box.lower
    else:
        width = max(max(abs(t) for t in Q.tau(a)) for a in degrees) * 2 if degrees else 1
    k = len(gens)
    subsets = {p: [S for S in itertools.combinations(range(k), p)] for p in range(k + 1)}
    weight = {S: tuple(map(sum, zip(*[gens[j] for j in S]))) if S else tuple([0] * Q.rank) for p in subsets for S in subsets[p]}

    def horizon_for(alpha):
        T = max(width, 1)
        for _ in range(3):
            if all(_stable(M, alpha, weight[S], T) for p in (i - 1, i, i + 1) if 0 <= p <= k for S in subsets[p]):
                return T
            T *= 2
        raise NotStabilized(f"localizations at degree {alpha} did not stabilize by horizon {T // 2}")

    def differential(alpha, p, T):
        """Matrix C^p -> C^(p+1) at degree alpha, components M_(alpha + T * g_S)."""
        src = subsets[p]
        dst = subsets[p + 1]
        src_dims = [M.dim(_add(alpha, _scale(T, weight[S]))) for S in src]
        dst_dims = [M.dim(_add(alpha, _scale(T, weight[S]))) for S in dst]
        ncols = sum(src_dims)
        rows = []
        for S2, n2 in zip(dst, dst_dims):
            beta = _add(alpha, _scale(T, weight[S2]))
            block = [[M.field.zero] * ncols for _ in range(n2)]
            offset = 0
            for S, n1 in zip(src, src_dims):
                if set(S) <= set(S2):
                    (j,) = set(S2) - set(S)
                    sign = -1 if S2.index(j) % 2 else 1
                    src_deg = _add(alpha, _scale(T, weight[S]))
                    for c, v in enumerate(M.basis_vectors(src_deg)):
                        for r, x in enumerate(M.coords(beta, v)):
                            block[r][offset + c] = sign * x
                offset += n1
            rows.extend(block)
        return rows, ncols

    dims = {}
    used = 0
    for alpha in degrees:
        if not 0 <= i <= k:
            dims[alpha] = 0
            continue
        T = horizon_for(alpha)
        used = max(used, T)
        n = sum(M.dim(_add(alpha, _scale(T, weight[S]))) for S in subsets[i])
        if n == 0:
            dims[alpha] = 0
            continue
        ker = n
        if i + 1 <= k:
            rows, ncols = differential(alpha, i, T)
            ker = n - rank(rows, ncols)
        im = 0
        if i >= 1:
            rows, ncols = differential(alpha, i - 1, T)
            im = rank(rows, ncols)
        dims[alpha] = ker - im
    return CechOracleResult(dims, used, [weight[S] for p in sorted(subsets) for S in subsets[p]])


# ---------------------------------------------------------------------------
# monomial ideals in two variables


def staircase_components(monomials, bound: int):
    """Irredundant irreducible components of a monomial ideal of k[x, y], by exhaustive search.

    A component is (a, b) for the ideal (x^a, y^b), with None for a missing
    power.  Candidates up to ``bound`` are tested for containing the ideal;
    the inclusion-minimal ones are the components, and their intersection
    is checked against the ideal on the box.
    """
    gens = [tuple(m) for m in monomials]

    def in_ideal(p):
        return any(p[0] >= g[0] and p[1] >= g[1] for g in gens)

    def contains_ideal(a, b):
        return all((a is not None and g[0] >= a) or (b is not None and g[1] >= b) for g in gens)

    powers = list(range(1, bound + 1)) + [None]
    cands = [(a, b) for a in powers for b in powers if not (a is None and b is None) and contains_ideal(a, b)]

    def le(c, d):
        # ideal c contained in ideal d
        (a, b), (a2, b2) = c, d
        ok_x = a is None or (a2 is not None and a2 <= a)
        ok_y = b is None or (b2 is not None and b2 <= b)
        return ok_x and ok_y

    minimal = [c for c in cands if not any(d != c and le(d, c) for d in cands)]
    for p in itertools.product(range(bound + 2), repeat=2):
        inside = all((a is not None and p[0] >= a) or (b is not None and p[1] >= b) for a, b in minimal)
        if inside != in_ideal(p):
            raise AssertionError(f"components disagree with the ideal at {p}")
    return sorted(minimal, key=lambda c: (c[0] is None, c[1] is None, c))
