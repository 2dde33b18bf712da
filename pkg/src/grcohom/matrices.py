"""Monomial matrices: scalar matrices whose rows and columns carry (face, degree) labels.

A label (F, alpha) stands for the indecomposable k{alpha + F - Q} (or its
Q-graded part).  Evaluating at a degree keeps the labels whose support
contains that degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .errors import ShapeMismatch
from .semigroup import AffineSemigroup, Face


class Summand(NamedTuple):
    face: Face
    degree: tuple


def in_support(Q: AffineSemigroup, label: Summand, alpha) -> bool:
    """alpha in label.degree + F - Q."""
    return Q.in_translate(label.face, tuple(a - b for a, b in zip(label.degree, alpha)))


def same_summand(Q: AffineSemigroup, s: Summand, t: Summand) -> bool:
    """Equal faces and degrees congruent modulo ZF."""
    return s.face.id == t.face.id and Q.in_face_lattice(s.face, tuple(a - b for a, b in zip(s.degree, t.degree)))


@dataclass
class MonomialMatrix:
    Q: AffineSemigroup
    row_labels: list
    col_labels: list
    entries: list  # entries[q][p]

    @property
    def shape(self):
        return len(self.row_labels), len(self.col_labels)

    def support_violations(self):
        """(q, p) positions with a nonzero scalar that the label condition forbids.

        A map from the column summand (F, a) to the row summand (G, b) can be
        nonzero only when G is a face of F and b lies in a + F - Q.
        """
        Q = self.Q
        bad = []
        for q, r in enumerate(self.row_labels):
            for p, c in enumerate(self.col_labels):
                if self.entries[q][p] == 0:
                    continue
                if not (Q.face_contains(c.face, r.face) and in_support(Q, c, r.degree)):
                    bad.append((q, p))
        return bad

    def compose(self, other: "MonomialMatrix") -> "MonomialMatrix":
        """self after other (other's rows are self's columns)."""
        if len(other.row_labels) != len(self.col_labels):
            raise ShapeMismatch("inner dimensions differ")
        zero = 0
        ent = [[sum((self.entries[q][k] * other.entries[k][p] for k in range(len(self.col_labels))), zero) for p in range(len(other.col_labels))] for q in range(len(self.row_labels))]
        return MonomialMatrix(self.Q, self.row_labels, other.col_labels, ent)


def evaluate_matrix_at_degree(phi: MonomialMatrix, alpha):
    """(kept row indices, kept column indices, scalar matrix) of the degree-alpha component."""
    Q = phi.Q
    rows = [q for q, lab in enumerate(phi.row_labels) if in_support(Q, lab, alpha)]
    cols = [p for p, lab in enumerate(phi.col_labels) if in_support(Q, lab, alpha)]
    return rows, cols, [[phi.entries[q][p] for p in cols] for q in rows]


def matrix_equal(phi: MonomialMatrix, psi: MonomialMatrix) -> bool:
    if phi.shape != psi.shape:
        raise ShapeMismatch(f"shapes {phi.shape} and {psi.shape}")
    Q = phi.Q
    if not all(same_summand(Q, a, b) for a, b in zip(phi.row_labels, psi.row_labels)):
        return False
    if not all(same_summand(Q, a, b) for a, b in zip(phi.col_labels, psi.col_labels)):
        return False
    return all(x == y for r, s in zip(phi.entries, psi.entries) for x, y in zip(r, s))
