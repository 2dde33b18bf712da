"""Exact scalar fields and dense row reduction.

Two fields are supported: the rationals (backed by ``fractions.Fraction``)
and prime fields F_p.  Matrices are plain lists of rows.
"""

from __future__ import annotations

from fractions import Fraction


class Mod:
    """An element of the prime field F_p."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.p = p
        self.v = v % p

    def _coerce(self, other):
        if isinstance(other, Mod):
            return other.v
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return int(other)

    def __add__(self, other):
        return Mod(self.v + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return Mod(self.v - self._coerce(other), self.p)

    def __rsub__(self, other):
        return Mod(self._coerce(other) - self.v, self.p)

    def __mul__(self, other):
        return Mod(self.v * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Mod(self.v * pow(self._coerce(other), -1, self.p), self.p)

    def __rtruediv__(self, other):
        return Mod(self._coerce(other) * pow(self.v, -1, self.p), self.p)

    def __neg__(self):
        return Mod(-self.v, self.p)

    def __eq__(self, other):
        return (self.v - self._coerce(other)) % self.p == 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"{self.v} mod {self.p}"


class Field:
    """Factory for scalars of one exact field."""

    def __init__(self, prime: int | None = None):
        if prime is not None and (prime < 2 or any(prime % q == 0 for q in range(2, int(prime ** 0.5) + 1))):
            raise ValueError(f"{prime} is not prime")
        self.prime = prime

    def __call__(self, x):
        if self.prime is None:
            return Fraction(x)
        if isinstance(x, Mod):
            return Mod(x.v, self.prime)
        x = Fraction(x)
        return Mod(x.numerator * pow(x.denominator, -1, self.prime), self.prime)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def to_fraction(self, x) -> Fraction:
        """Canonical rational representative (for F_p: the residue in [0, p))."""
        if isinstance(x, Mod):
            return Fraction(x.v)
        return Fraction(x)

    def __eq__(self, other):
        return isinstance(other, Field) and other.prime == self.prime

    def __hash__(self):
        return hash(self.prime)

    def __repr__(self):
        return "QQ" if self.prime is None else f"GF({self.prime})"


QQ = Field()


def rref(rows, ncols):
    """Reduced row echelon form.

    Pivots sit on the first nonzero column of each row.  Returns
    ``(reduced_rows, pivot_columns)``; zero rows are dropped.
    """
    mat = [list(r) for r in rows]
    pivots = []
    rank = 0
    for col in range(ncols):
        sel = None
        for i in range(rank, len(mat)):
            if mat[i][col] != 0:
                sel = i
                break
        if sel is None:
            continue
        mat[rank], mat[sel] = mat[sel], mat[rank]
        piv = mat[rank]
        inv = 1 / piv[col]
        mat[rank] = piv = [x * inv for x in piv]
        for i in range(len(mat)):
            if i != rank and mat[i][col] != 0:
                c = mat[i][col]
                row = mat[i]
                mat[i] = [a - c * b for a, b in zip(row, piv)]
        pivots.append(col)
        rank += 1
        if rank == len(mat):
            break
    return mat[:rank], pivots


def rank(rows, ncols) -> int:
    if not rows or ncols == 0:
        return 0
    return len(rref(rows, ncols)[1])


def nullspace(rows, ncols, zero):
    """Basis of {v : rows * v = 0}, one vector per free column, in column order."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = zero + 1
        for r, p in zip(red, pivots):
            v[p] = -r[f]
        basis.append(v)
    return basis


def solve(columns, target, zero):
    """Coefficients c with sum c_i * columns[i] == target, or None."""
    n = len(columns)
    m = len(target)
    if n == 0:
        return [] if all(t == 0 for t in target) else None
    aug = [[columns[j][i] for j in range(n)] + [target[i]] for i in range(m)]
    red, pivots = rref(aug, n + 1)
    if n in pivots:
        return None
    sol = [zero] * n
    for r, p in zip(red, pivots):
        sol[p] = r[n]
    return sol


class Reducer:
    """Normal forms modulo the row space of a fixed set of vectors.

    ``add`` returns True when the vector enlarged the span.  The basis is
    kept fully reduced, so a normal form is a single pass over the pivots.
    """

    def __init__(self, ncols: int, zero):
        self.ncols = ncols
        self.zero = zero
        self.rows: dict[int, list] = {}

    def reduce(self, v):
        v = list(v)
        for p, row in self.rows.items():
            c = v[p]
            if c != 0:
                v = [a - c * b for a, b in zip(v, row)]
        return v

    def add(self, v) -> bool:
        v = self.reduce(v)
        for p in range(self.ncols):
            if v[p] != 0:
                inv = 1 / v[p]
                v = [x * inv for x in v]
                for q, row in self.rows.items():
                    c = row[p]
                    if c != 0:
                        self.rows[q] = [a - c * b for a, b in zip(row, v)]
                self.rows[p] = v
                return True
        return False

    def __len__(self):
        return len(self.rows)

    def pivots(self):
        return sorted(self.rows)
