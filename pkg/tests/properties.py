"""Invariant checks shared by the unit tests and the acceptance run.

Each check returns a list of offending cases; an empty list means the
invariant holds on everything inspected.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from grcohom.field import rank, solve
from grcohom.injective import injective_resolution
from grcohom.irreducible import generated, minimalize, outside_translate, verification_bound
from grcohom.matrices import evaluate_matrix_at_degree
from grcohom.polyhedra import GE, Constraint, RationalPolyhedron, lattice_points, polyhedron_is_empty
from grcohom.sectors import gamma_I, local_cohomology, sector_comparable, tau_table
from grcohom.semigroup import INF, box_points, strip, tau_of, zonotope


def supported(Q, labels, alpha):
    """Labels whose support contains alpha.

    On-lattice labels are tested by coset membership, independently of any
    tau bookkeeping.  A label degree off the lattice of Q (allowed for
    sector inputs) is compared through its tau-vector instead.
    """
    t = Q.tau(alpha)
    out = []
    for j, s in enumerate(labels):
        diff = tuple(x - y for x, y in zip(s.degree, alpha))
        if all(Fraction(x).denominator == 1 for x in diff):
            hit = Q.in_translate(s.face, tuple(int(x) for x in diff))
        else:
            hit = all(a <= b for a, b in zip(t, tau_of(Q, s.face, s.degree, internal=True)))
        if hit:
            out.append(j)
    return tuple(out)


def partition_defects(SP, degrees):
    """Degrees not covered by exactly one region, or covered by a sector other than the lookup's."""
    bad = []
    for alpha in degrees:
        owners = [k for k, sec in enumerate(SP.sectors) for P in sec.regions if P.contains(alpha)]
        if len(owners) != 1 or owners[0] != SP.sector_at(alpha):
            bad.append((alpha, owners))
    return bad


def index_defects(SP, degrees):
    """Degrees whose set of supporting labels differs from their sector's index."""
    return [alpha for alpha in degrees if supported(SP.Q, SP.labels, alpha) != tuple(SP.sectors[SP.sector_at(alpha)].index)]


def homology_dim_at(SP, phi, psi, alpha):
    """dim of ker/im at alpha for the complex whose labels SP records, by direct evaluation."""
    a, b, _ = SP.parts
    sup = supported(SP.Q, SP.labels, alpha)
    A1 = [j for j in sup if j < a]
    A = [j - a for j in sup if a <= j < a + b]
    A2 = [j - a - b for j in sup if j >= a + b]
    down = [[psi[q][p] for p in A] for q in A2]
    up = [[phi[q][p] for p in A1] for q in A]
    r_down = rank(down, len(A)) if A and A2 else 0
    r_up = rank(up, len(A1)) if A and A1 else 0
    return len(A) - r_down - r_up


def sample_by_sector(SP, degrees, per_sector=20):
    out: dict = {}
    for alpha in degrees:
        bucket = out.setdefault(SP.sector_at(alpha), [])
        if len(bucket) < per_sector:
            bucket.append(alpha)
    return out


def constancy_defects(SP, degrees, dim_at, per_sector=20):
    bad = []
    for k, pts in sample_by_sector(SP, degrees, per_sector).items():
        for alpha in pts:
            d = dim_at(alpha)
            if d != SP.sectors[k].space_dim:
                bad.append((k, alpha, d, SP.sectors[k].space_dim))
    return bad


def poset_defects(SP):
    bad = []
    for s in range(len(SP.sectors)):
        for t in range(len(SP.sectors)):
            if sector_comparable(SP, s, t) and not set(SP.sectors[s].index) >= set(SP.sectors[t].index):
                bad.append((s, t))
    return bad


def _mul(A, B, inner):
    return [[sum((A[i][k] * B[k][j] for k in range(inner)), 0) for j in range(len(B[0]) if B else 0)] for i in range(len(A))]


def transition_defects(SP):
    """Non-identity self transitions and failures of x^(R-T) x^(T-S) = x^(R-S)."""
    bad = []
    T = SP.transitions
    for k, sec in enumerate(SP.sectors):
        if sec.space_dim and (k, k) in T:
            n = sec.space_dim
            if T[(k, k)] != [[1 if i == j else 0 for j in range(n)] for i in range(n)]:
                bad.append(("identity", k))
    for (s, t), m1 in T.items():
        for (t2, r), m2 in T.items():
            if t2 != t or (s, r) not in T:
                continue
            inner = SP.sectors[t].space_dim
            if not SP.sectors[s].space_dim or not SP.sectors[r].space_dim:
                continue
            if _mul(m2, m1, inner) != T[(s, r)]:
                bad.append(("compose", s, t, r))
    return bad


def commuting_square_defects(SP, degrees, per_sector=3):
    """For sampled alpha in S, beta in T with beta - alpha in Q: the pair is comparable and
    multiplication at degree level agrees with the stored transition."""
    Q = SP.Q
    samples = sample_by_sector(SP, degrees, per_sector)
    bad = []
    for s, pts_s in samples.items():
        for t, pts_t in samples.items():
            for alpha in pts_s:
                for beta in pts_t:
                    if not Q.contains(tuple(y - x for x, y in zip(alpha, beta))):
                        continue
                    if (s, t) not in SP.transitions:
                        bad.append(("missing", s, t, alpha, beta))
                        continue
                    src, dst = SP.sectors[s], SP.sectors[t]
                    if not src.space_dim or not dst.space_dim:
                        continue
                    mid_s = SP.split(src.index)[1]
                    mid_t = SP.split(dst.index)[1]
                    images = SP._images.get(t, [])
                    m = SP.transitions[(s, t)]
                    for c, v in enumerate(src.basis):
                        pushed = [v[mid_s.index(j)] if j in mid_s else 0 for j in mid_t]
                        predicted = [sum((m[r][c] * dst.basis[r][k] for r in range(dst.space_dim)), 0) for k in range(len(mid_t))]
                        diff = [x - y for x, y in zip(pushed, predicted)]
                        if any(diff) and solve([list(w) for w in images], diff, 0) is None:
                            bad.append(("square", s, t, alpha, beta))
    return bad


def strip_bound_defect(SP):
    """Strip count against (r + 1)^n."""
    r, n = len(SP.labels), SP.Q.n
    return [] if SP.strip_count <= (r + 1) ** n else [(SP.strip_count, (r + 1) ** n)]


def local_cohomology_with_complex(M, gens, i, transitions=True, resolution=None):
    """(partition, phi, psi) for H^i_I(M), from one injective resolution."""
    R = resolution or injective_resolution(M, i + 1)
    SP = local_cohomology(M, gens, i, transitions=transitions, resolution=R)
    _, _, maps = gamma_I(R, gens)
    a, b, c = SP.parts
    phi = maps[i - 1] if 0 <= i - 1 < len(maps) else [[0] * a for _ in range(b)]
    psi = maps[i] if i < len(maps) else [[0] * b for _ in range(c)]
    return SP, phi, psi


def all_partition_defects(SP, degrees, dim_at):
    return {
        "partition": partition_defects(SP, degrees),
        "index": index_defects(SP, degrees),
        "constancy": constancy_defects(SP, degrees, dim_at),
        "poset": poset_defects(SP),
        "transitions": transition_defects(SP),
        "squares": commuting_square_defects(SP, degrees),
        "strips": strip_bound_defect(SP),
    }


def zonotope_generates(Q, alpha, radius=6) -> bool:
    """Lattice points of alpha + cone in a window are lattice points of alpha + zonotope plus elements of Q."""
    Z = zonotope(Q).polyhedron.translate(alpha)
    gens = lattice_points(Z)
    cone = RationalPolyhedron(Q.rank, tuple(Constraint(t, sum(Fraction(x) * y for x, y in zip(t, alpha)), GE) for t in Q.facet_functionals))
    window = RationalPolyhedron.box([-radius] * Q.rank, [radius] * Q.rank)
    for p in lattice_points(cone, window):
        if not any(Q.contains(tuple(x - y for x, y in zip(p, g))) for g in gens):
            return False
    return True


def strip_partition_defects(Q, labels, radius=6):
    """Window lattice points not lying in exactly one strip of the tau table of labels."""
    _, rows = tau_table(Q, labels)
    regions = []
    for ell in itertools.product(*[range(len(row) - 1) for row in rows]):
        P = strip(Q, rows, ell)
        if any(row[l] == INF for row, l in zip(rows, ell)):
            if not polyhedron_is_empty(P):
                return [("double infinity strip is not empty", ell)]
            continue
        regions.append(P)
    window = RationalPolyhedron.box([-radius] * Q.rank, [radius] * Q.rank)
    bad = []
    for p in lattice_points(window):
        hits = sum(1 for P in regions if P.contains(p))
        if hits != 1:
            bad.append((p, hits))
    return bad


def exactness_defects(M, stages, maps, degrees, finished):
    """Degrees where the evaluated complex fails to resolve M."""
    Q = M.Q
    bad = []
    for alpha in degrees:
        dims = [sum(1 for s in st if Q.in_translate(s.face, tuple(x - y for x, y in zip(s.degree, alpha)))) for st in stages]
        ranks = []
        for m in maps:
            rows, cols, A = evaluate_matrix_at_degree(m, alpha)
            ranks.append(rank(A, len(cols)) if rows and cols else 0)
        ranks.append(0)
        if dims[0] - ranks[0] != M.dim(alpha):
            bad.append((alpha, 0))
        last = len(stages) if finished else len(stages) - 1
        for j in range(1, last):
            if dims[j] - ranks[j] != ranks[j - 1]:
                bad.append((alpha, j))
    return bad


def ideal_is_exact(Q, F, a, gens) -> bool:
    """Brute force: gens generate exactly Q minus (a + F - Q) on the verification box, minimally."""
    for b in box_points(Q, 0, verification_bound(Q, a)):
        if not Q.contains(b):
            continue
        if generated(Q, gens, b) != outside_translate(Q, F, a, b):
            return False
    return len(minimalize(Q, gens)) == len(gens)
