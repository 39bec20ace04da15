"""Exact graded linear algebra.

Vectors are sparse dicts {coordinate index: nonzero scalar}; matrices are lists of
such rows.  Everything is over the rationals, and every subspace is kept in the
canonical reduced row-echelon form (pivot columns ordered by basis index), so two
equal subspaces always compare equal coefficientwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .scalars import Scalar, normalize

Vec = dict[int, Scalar]


class DimensionMismatchError(ValueError):
    pass


class NotHomogeneousError(ValueError):
    pass


# ---------------------------------------------------------------------------
# sparse vector helpers
# ---------------------------------------------------------------------------

def vec_add_scaled(acc: Vec, v: Vec, c: Scalar) -> None:
    """acc += c*v in place, dropping zeros."""
    if c == 0:
        return
    for i, x in v.items():
        y = acc.get(i, 0) + c * x
        if y == 0:
            acc.pop(i, None)
        else:
            acc[i] = y


def vec_scale(v: Vec, c: Scalar) -> Vec:
    if c == 0:
        return {}
    return {i: normalize(c * x) for i, x in v.items()}


def vec_sub(a: Vec, b: Vec) -> Vec:
    out = dict(a)
    vec_add_scaled(out, b, -1)
    return out


def vec_equal(a: Vec, b: Vec) -> bool:
    return vec_sub(a, b) == {}


def vec_from_list(xs) -> Vec:
    return {i: normalize(x) for i, x in enumerate(xs) if x != 0}


def unit_vec(i: int) -> Vec:
    return {i: 1}


# ---------------------------------------------------------------------------
# reduced row echelon form and friends
# ---------------------------------------------------------------------------

def rref(rows: list[Vec]) -> list[Vec]:
    """Canonical reduced row echelon basis of the row space.

    Rows come out with pivot 1, pivots strictly increasing, pivot columns cleared
    in all other rows.  The result depends only on the row space.
    """
    pivots: dict[int, Vec] = {}  # pivot column -> row
    for raw in rows:
        row = {i: x for i, x in raw.items() if x != 0}
        while row:
            lead = min(row)
            piv = pivots.get(lead)
            if piv is None:
                inv = Fraction(1) / Fraction(row[lead])
                row = {i: normalize(inv * x) for i, x in row.items()}
                # clear existing pivot columns from the new row, and the new
                # pivot column from the existing rows
                for col in [c for c in row if c != lead and c in pivots]:
                    vec_add_scaled(row, pivots[col], -row[col])
                for col, other in pivots.items():
                    c = other.get(lead)
                    if c is not None:
                        vec_add_scaled(other, row, -c)
                pivots[lead] = row
                break
            vec_add_scaled(row, piv, -row[lead])
    return [pivots[c] for c in sorted(pivots)]


def rank(rows: list[Vec]) -> int:
    return len(rref(rows))


def reduce_mod(v: Vec, echelon: list[Vec]) -> Vec:
    """Canonical representative of v modulo the row space of an RREF basis."""
    out = dict(v)
    for row in echelon:
        lead = min(row)
        c = out.get(lead)
        if c is not None:
            vec_add_scaled(out, row, -c)
    return out


def kernel_basis(rows: list[Vec], ncols: int) -> list[Vec]:
    """Canonical RREF basis of {x : row . x = 0 for every row}."""
    ech = rref(rows)
    pivot_cols = [min(r) for r in ech]
    pivot_set = set(pivot_cols)
    basis: list[Vec] = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v: Vec = {free: 1}
        for col, row in zip(pivot_cols, ech):
            c = row.get(free)
            if c is not None and c != 0:
                v[col] = normalize(-c)
        basis.append(v)
    return rref(basis)


def solve(rows: list[Vec], rhs: list[Scalar]):
    """One exact solution x of the stacked system rows[k] . x = rhs[k], or None.

    The solution is the canonical one with every free variable set to 0.
    """
    # Row-reduce the augmented system; the RHS is carried in a virtual column.
    AUG = -1
    aug: list[Vec] = []
    for row, b in zip(rows, rhs):
        r = {i: x for i, x in row.items() if x != 0}
        if b != 0:
            r[AUG] = normalize(b)
        aug.append(r)
    pivots: dict[int, Vec] = {}
    for raw in aug:
        row = dict(raw)
        while True:
            cols = [i for i in row if i != AUG]
            if not cols:
                if AUG in row:
                    return None  # inconsistent
                break
            lead = min(cols)
            piv = pivots.get(lead)
            if piv is None:
                inv = Fraction(1) / Fraction(row[lead])
                row = {i: normalize(inv * x) for i, x in row.items()}
                for col in [c for c in row if c not in (lead, AUG)
                            and c in pivots]:
                    vec_add_scaled(row, pivots[col], -row[col])
                for _, other in pivots.items():
                    c = other.get(lead)
                    if c is not None:
                        vec_add_scaled(other, row, -c)
                pivots[lead] = row
                break
            vec_add_scaled(row, piv, -row[lead])
    # free variables are 0, so each pivot coordinate reads off the reduced RHS
    x: Vec = {}
    for col, row in pivots.items():
        b = row.get(AUG)
        if b is not None:
            x[col] = b
    return x


# ---------------------------------------------------------------------------
# graded spaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GradedVectorSpace:
    """Ordered basis with Z2 parities; names are unique."""

    names: tuple[str, ...]
    parities: tuple[int, ...]

    def __post_init__(self):
        if len(self.names) != len(self.parities):
            raise ValueError("names and parities must have equal length")
        if len(set(self.names)) != len(self.names):
            raise ValueError("basis names must be unique")
        if any(p not in (0, 1) for p in self.parities):
            raise ValueError("parities must be 0 or 1")

    @property
    def dim(self) -> int:
        return len(self.names)

    @property
    def dim_even(self) -> int:
        return sum(1 for p in self.parities if p == 0)

    @property
    def dim_odd(self) -> int:
        return sum(1 for p in self.parities if p == 1)

    def parity(self, i: int) -> int:
        return self.parities[i]

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no basis vector named {name!r}") from None

    def dual(self) -> "GradedVectorSpace":
        """Dual space; dual basis names carry a trailing '*'."""
        return GradedVectorSpace(
            tuple(n + "*" for n in self.names), self.parities)

    def vector_parity(self, v: Vec) -> int | None:
        """Parity of a homogeneous vector, None for 0 or mixed."""
        ps = {self.parities[i] for i in v}
        if len(ps) == 1:
            return ps.pop()
        return None


def parity_split(space: GradedVectorSpace, v: Vec) -> list[Vec]:
    """Nonzero parity components of v, even part first."""
    even = {i: x for i, x in v.items() if space.parities[i] == 0}
    odd = {i: x for i, x in v.items() if space.parities[i] == 1}
    return [p for p in (even, odd) if p]


class GradedSubspace:
    """Subspace of a graded space, stored as a canonical RREF row basis.

    Every echelon row must be parity homogeneous; pass split_by_parity=True to
    replace the generators by their parity components first (the graded hull).
    """

    def __init__(self, ambient: GradedVectorSpace, rows: list[Vec], *,
                 split_by_parity: bool = False, _trusted: bool = False):
        self.ambient = ambient
        gens = list(rows)
        if split_by_parity:
            gens = [part for v in gens for part in parity_split(ambient, v)]
        ech = gens if _trusted else rref(gens)
        for r in ech:
            if ambient.vector_parity(r) is None:
                raise NotHomogeneousError(
                    "subspace is not graded; pass split_by_parity=True to take "
                    "the graded hull")
        self.rows: list[Vec] = ech

    @classmethod
    def zero(cls, ambient: GradedVectorSpace) -> "GradedSubspace":
        return cls(ambient, [])

    @classmethod
    def full(cls, ambient: GradedVectorSpace) -> "GradedSubspace":
        return cls(ambient, [unit_vec(i) for i in range(ambient.dim)])

    @property
    def dim(self) -> int:
        return len(self.rows)

    def pivot_columns(self) -> list[int]:
        return [min(r) for r in self.rows]

    def contains_vector(self, v: Vec) -> bool:
        return not reduce_mod(v, self.rows)

    def contains(self, other: "GradedSubspace") -> bool:
        return all(self.contains_vector(r) for r in other.rows)

    def __eq__(self, other) -> bool:
        return (isinstance(other, GradedSubspace)
                and self.ambient == other.ambient
                and self.rows == other.rows)

    def __repr__(self) -> str:
        return f"GradedSubspace(dim={self.dim} of {self.ambient.dim})"

    def sum(self, other: "GradedSubspace") -> "GradedSubspace":
        self._check_ambient(other)
        return GradedSubspace(self.ambient, self.rows + other.rows)

    def complement_indices(self) -> list[int]:
        """Standard basis indices spanning a complement (the non-pivot columns)."""
        piv = set(self.pivot_columns())
        return [i for i in range(self.ambient.dim) if i not in piv]

    def _check_ambient(self, other: "GradedSubspace") -> None:
        if self.ambient != other.ambient:
            raise DimensionMismatchError("subspaces live in different spaces")


def intersect(a: GradedSubspace, b: GradedSubspace) -> GradedSubspace:
    """A cap B via the left kernel of the stacked bases."""
    a._check_ambient(b)
    # (u, v) with u.A - v.B = 0  <->  columns of [A^T | -B^T]
    stacked = a.rows + [vec_scale(r, -1) for r in b.rows]
    cols = a.ambient.dim
    # transpose: rows indexed by ambient coordinate, columns by generator index
    transposed: list[Vec] = [{} for _ in range(cols)]
    for j, row in enumerate(stacked):
        for i, x in row.items():
            transposed[i][j] = x
    coeffs = kernel_basis(transposed, len(stacked))
    vectors: list[Vec] = []
    na = len(a.rows)
    for cv in coeffs:
        v: Vec = {}
        for j, c in cv.items():
            if j < na:
                vec_add_scaled(v, a.rows[j], c)
        vectors.append(v)
    return GradedSubspace(a.ambient, vectors)


def orthogonal_complement(gram: list[list[Scalar]], w: GradedSubspace) -> GradedSubspace:
    """{x : B(x, v) = 0 for all v in W} for the bilinear form with this Gram matrix."""
    n = w.ambient.dim
    if len(gram) != n or any(len(r) != n for r in gram):
        raise DimensionMismatchError("Gram matrix does not match the ambient space")
    # condition rows: for each basis row v of W, sum_i x_i * B(e_i, v) = 0
    cond: list[Vec] = []
    for v in w.rows:
        row: Vec = {}
        for i in range(n):
            gi = gram[i]
            s: Scalar = 0
            for j, c in v.items():
                s += gi[j] * c
            if s != 0:
                row[i] = normalize(s)
        cond.append(row)
    return GradedSubspace(w.ambient, kernel_basis(cond, n))
