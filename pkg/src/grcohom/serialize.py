"""JSON encoding of problems and results.

Rationals are written as "p/q" strings and degree vectors as integer
arrays in the caller's original coordinates.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import IndexOutOfRange, SchemaError
from .field import QQ, Field
from .matrices import MonomialMatrix, Summand
from .modules import GradedModule
from .polyhedra import RationalPolyhedron
from .semigroup import AffineSemigroup, build_semigroup

SCHEMA_VERSION = 1


def rational(x, field: Field = QQ) -> str:
    q = field.to_fraction(x)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s) -> Fraction:
    try:
        return Fraction(s)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"not a rational: {s!r}") from exc


def parse_field(data) -> Field:
    if data in (None, "q", "Q", "QQ"):
        return QQ
    if isinstance(data, str) and data.startswith("p:"):
        try:
            return Field(int(data[2:]))
        except ValueError as exc:
            raise SchemaError(str(exc)) from exc
    raise SchemaError(f"unknown field {data!r}; use q or p:<prime>")


# ---------------------------------------------------------------------------
# inputs


def _vector(v, dim, what):
    if not isinstance(v, list) or len(v) != dim or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise SchemaError(f"{what} must be a list of {dim} integers, got {v!r}")
    return tuple(v)


def parse_semigroup(data) -> AffineSemigroup:
    if not isinstance(data, dict) or "generators" not in data:
        raise SchemaError("semigroup needs a generators list")
    gens = data["generators"]
    if not isinstance(gens, list) or not gens:
        raise SchemaError("semigroup generators must be a nonempty list")
    dim = data.get("dim", len(gens[0]) if isinstance(gens[0], list) else None)
    if not isinstance(dim, int):
        raise SchemaError("semigroup dim must be an integer")
    return build_semigroup([_vector(g, dim, "generator") for g in gens])


def internal(Q: AffineSemigroup, v, what="degree"):
    v = _vector(v, Q.dim, what)
    try:
        x = Q.to_internal(v)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc
    return x


def internal_lattice(Q: AffineSemigroup, v, what="degree"):
    x = internal(Q, v, what)
    if not all(isinstance(c, int) for c in x):
        raise SchemaError(f"{what} {list(v)} is not in the group generated by the semigroup")
    return x


def parse_module(Q: AffineSemigroup, data, field: Field = QQ) -> GradedModule:
    if not isinstance(data, dict):
        raise SchemaError("module must be an object")
    if data.get("ring"):
        return GradedModule.ring(Q, field)
    if data.get("residue_field"):
        return GradedModule.residue_field(Q, field)
    if "monomials" in data:
        mons = [internal_lattice(Q, m, "monomial") for m in data["monomials"]]
        return GradedModule.monomial_quotient(Q, mons, field)
    gens = data.get("generators")
    if not isinstance(gens, list) or not gens:
        raise SchemaError("module needs generators, monomials, ring or residue_field")
    degrees = []
    for g in gens:
        if not isinstance(g, dict) or "degree" not in g:
            raise SchemaError("each module generator is an object with a degree")
        degrees.append(internal_lattice(Q, g["degree"], "generator degree"))
    rows = []
    for row in data.get("relations", []):
        if not isinstance(row, list):
            raise SchemaError("each relation is a list of terms")
        terms = []
        for term in row:
            try:
                c, j, mon = term["c"], term["gen"], term["mon"]
            except (TypeError, KeyError) as exc:
                raise SchemaError("relation terms need c, gen and mon") from exc
            if not isinstance(j, int) or not 0 <= j < len(degrees):
                raise SchemaError(f"relation refers to generator {j!r} out of range")
            terms.append((parse_rational(c), j, internal_lattice(Q, mon, "monomial")))
        rows.append(terms)
    try:
        return GradedModule.from_terms(Q, degrees, rows, field)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def parse_ideal(Q: AffineSemigroup, data):
    if data == "maximal" or (isinstance(data, dict) and data.get("maximal")):
        return list(Q.internal_generators)
    if not isinstance(data, dict) or "monomials" not in data:
        raise SchemaError('ideal must be "maximal" or {"monomials": [...]}')
    mons = [internal_lattice(Q, m, "ideal monomial") for m in data["monomials"]]
    if not mons:
        raise SchemaError("the ideal needs at least one monomial")
    return mons


def parse_face(Q: AffineSemigroup, data):
    if not isinstance(data, list) or not all(isinstance(i, int) for i in data):
        raise SchemaError("face must be a list of facet indices")
    if any(not 0 <= i < Q.n for i in data):
        raise SchemaError(f"facet index out of range 0..{Q.n - 1}")
    try:
        return Q.face_of_facets(frozenset(data))
    except IndexOutOfRange as exc:
        raise SchemaError(str(exc)) from exc


def parse_summands(Q: AffineSemigroup, data):
    if not isinstance(data, list) or not data:
        raise SchemaError("summands must be a nonempty list")
    out = []
    for s in data:
        if not isinstance(s, dict) or "degree" not in s:
            raise SchemaError("each summand needs a face and a degree")
        if "face_generators" in s:
            gens = {internal_lattice(Q, g, "face generator") for g in s["face_generators"]}
            matches = [F for F in Q.faces if {Q.internal_generators[i] for i in F.generator_indices} == gens]
            if not matches:
                raise SchemaError(f"no face is generated by {s['face_generators']}")
            F = matches[0]
        else:
            F = parse_face(Q, s.get("face"))
        out.append(Summand(F, internal(Q, s["degree"], "summand degree")))
    return out


# ---------------------------------------------------------------------------
# outputs


def degree_out(Q: AffineSemigroup, x):
    y = Q.to_original(x)
    return [int(v) if Fraction(v).denominator == 1 else rational(v) for v in y]


def face_out(F):
    return sorted(F.facet_indices)


def summand_out(Q, s: Summand):
    return {"face": face_out(s.face), "degree": degree_out(Q, s.degree)}


def polyhedron_out(Q: AffineSemigroup, P: RationalPolyhedron):
    """Constraints rewritten on original coordinates."""
    cons = []
    for c in P.constraints:
        f = [Fraction(x) for x in c.functional]
        if Q.relatticed:
            f = [sum((f[i] * Q._inv[i][k] for i in range(Q.rank)), Fraction(0)) for k in range(Q.dim)]
        b = Fraction(c.bound)
        scale = 1
        for x in f + [b]:
            scale = scale * x.denominator // math.gcd(scale, x.denominator)
        ints = [int(x * scale) for x in f]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        g = g or 1
        cons.append({"functional": [v // g for v in ints], "bound": rational(b * scale / g), "sense": c.sense})
    return {"constraints": cons}


def matrix_out(Q, m: MonomialMatrix, field: Field = QQ):
    return {
        "rows": [summand_out(Q, s) for s in m.row_labels],
        "cols": [summand_out(Q, s) for s in m.col_labels],
        "entries": [[rational(x, field) for x in row] for row in m.entries],
    }


def hull_out(Q, hull, field: Field = QQ):
    return {
        "summands": [summand_out(Q, s) for s in hull.summands],
        "vectors": [{"degree": degree_out(Q, v.degree), "entries": [rational(x, field) for x in v.entries]} for v in hull.vectors],
    }


def irreducible_resolution_out(Q, R, field: Field = QQ):
    return {
        "stages": [[summand_out(Q, s) for s in st] for st in R.stages],
        "maps": [matrix_out(Q, m, field) for m in R.maps],
    }


def injective_resolution_out(Q, R, field: Field = QQ):
    out = irreducible_resolution_out(Q, R, field)
    out["shift"] = degree_out(Q, R.shift)
    return out


def bass_out(Q, table):
    return [{"j": j, "degree": degree_out(Q, a), "multiplicity": m} for (j, a), m in sorted(table.entries.items(), key=lambda kv: (kv[0][0], Q.order_key(kv[0][1])))]


def partition_out(SP, field: Field = QQ):
    Q = SP.Q
    sectors = []
    for sec in SP.sectors:
        entry = {
            "index": list(sec.index) if not SP.parts else [list(p) for p in SP.split(sec.index)],
            "regions": [polyhedron_out(Q, P) for P in sec.regions],
            "dim": sec.space_dim,
            "basis": [[rational(x, field) for x in v] for v in sec.basis],
        }
        sectors.append(entry)
    transitions = [{"from": s, "to": t, "matrix": [[rational(x, field) for x in row] for row in m]} for (s, t), m in sorted(SP.transitions.items())]
    return {
        "labels": [summand_out(Q, s) for s in SP.labels],
        "sectors": sectors,
        "transitions": transitions,
        "strip_count": SP.strip_count,
    }


def hilbert_out(SP):
    return [{"sector": k, "regions": [polyhedron_out(SP.Q, P) for P in sec.regions], "dim": sec.space_dim} for k, sec in enumerate(SP.sectors)]


def oracle_out(Q, result):
    return {"dims": {str(degree_out(Q, a)).replace(" ", ""): d for a, d in sorted(result.dims.items(), key=lambda kv: Q.order_key(kv[0]))}}
