"""Exact computations with graded modules over affine semigroup rings.

The package builds affine semigroups and their polyhedral data, works with
finitely generated graded modules degree by degree, computes irreducible
hulls and resolutions, Bass numbers and injective resolutions, and turns
complexes of injectives into sector partitions, which gives local
cohomology with supports in a monomial ideal.
"""

__version__ = "0.1.0"

from .errors import (
    BoxTooSmall,
    EngineError,
    NotComplex,
    NotInColon,
    NotQGraded,
    NotSaturated,
    NotStabilized,
    SchemaError,
    VerificationFailed,
)
from .field import QQ, Field
from .semigroup import AffineSemigroup, Face, build_semigroup, membership, saturate, zonotope
from .modules import DegreeBox, Element, GradedMap, GradedModule
from .irreducible import irreducible_hull, irreducible_ideal_generators, irreducible_resolution
from .injective import bass_numbers, choose_shift, injective_resolution
from .sectors import local_cohomology, sector_partition_injective, sector_set
from .oracle import cech_oracle

__all__ = [
    "AffineSemigroup",
    "BoxTooSmall",
    "DegreeBox",
    "Element",
    "EngineError",
    "Face",
    "Field",
    "GradedMap",
    "GradedModule",
    "NotComplex",
    "NotInColon",
    "NotQGraded",
    "NotSaturated",
    "NotStabilized",
    "QQ",
    "SchemaError",
    "VerificationFailed",
    "bass_numbers",
    "build_semigroup",
    "cech_oracle",
    "choose_shift",
    "injective_resolution",
    "irreducible_hull",
    "irreducible_ideal_generators",
    "irreducible_resolution",
    "local_cohomology",
    "membership",
    "saturate",
    "sector_partition_injective",
    "sector_set",
    "zonotope",
]
