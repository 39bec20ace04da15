"""First-class n-Lie superalgebras as canonical structure constants.

The bracket is stored only on canonical words (sorted index tuples, no repeated
even index); every other value is derived through the super-skew signs, so
inconsistent duplicates cannot exist by construction.  Axiom checking is a
report, not a constructor gate: deliberately broken algebras (mutation tests)
must be constructible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import (GradedSubspace, GradedVectorSpace, Vec, kernel_basis,
                     reduce_mod, rref, solve, unit_vec, vec_add_scaled,
                     vec_equal, vec_scale)
from .scalars import Scalar
from .wedge import WedgeBasis, Word, canonicalize_word, word_parity


class NotAnIdealError(ValueError):
    pass


class ArityMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class AxiomFailure:
    axiom: str                  # "grading" | "super-skew" | "filippov"
    witness: tuple[str, ...]    # basis names of the first violating tuple
    detail: str


@dataclass(frozen=True)
class AxiomReport:
    ok: bool
    failures: tuple[AxiomFailure, ...]

    def failed_axioms(self) -> tuple[str, ...]:
        return tuple(f.axiom for f in self.failures)


class NLieSuperalgebra:
    """n-ary graded bracket on an ordered homogeneous basis."""

    def __init__(self, space: GradedVectorSpace, n: int,
                 brackets: dict[Word, Vec], name: str = ""):
        if n < 2:
            raise ValueError("arity must be at least 2")
        self.space = space
        self.n = n
        self.name = name
        par = space.parities
        constants: dict[Word, Vec] = {}
        for args, value in brackets.items():
            if len(args) != n:
                raise ValueError(f"bracket key {args} does not have {n} slots")
            value = {i: c for i, c in value.items() if c != 0}
            cz = canonicalize_word(tuple(args), par)
            if cz is None:
                if value:
                    raise ValueError(
                        f"bracket on {args} repeats an even slot and must vanish")
                continue
            sign, key = cz
            v = vec_scale(value, sign)
            if key in constants:
                if not vec_equal(constants[key], v):
                    raise ValueError(f"inconsistent duplicate bracket for {key}")
            elif v:
                constants[key] = v
        self.constants = constants
        self._bracket_cache: dict[Word, Vec] = {}
        self._zero: Vec = {}

    @property
    def dim(self) -> int:
        return self.space.dim

    def __repr__(self) -> str:
        label = self.name or "n-Lie superalgebra"
        return (f"<{label}: n={self.n}, dim=({self.space.dim_even}"
                f"|{self.space.dim_odd})>")

    # -- bracket ------------------------------------------------------------

    def bracket_indices(self, args: Word) -> Vec:
        """Bracket of basis vectors; treat the result as read-only."""
        cached = self._bracket_cache.get(args)
        if cached is not None:
            return cached
        cz = canonicalize_word(args, self.space.parities)
        if cz is None:
            out = self._zero
        else:
            sign, key = cz
            stored = self.constants.get(key)
            if stored is None:
                out = self._zero
            elif sign == 1:
                out = stored
            else:
                out = vec_scale(stored, -1)
        self._bracket_cache[args] = out
        return out

    def bracket(self, *vectors: Vec) -> Vec:
        """Multilinear extension of the bracket to arbitrary vectors."""
        if len(vectors) != self.n:
            raise ValueError(f"bracket takes {self.n} arguments")
        out: Vec = {}
        idxs: list[int] = []

        def rec(slot: int, coeff: Scalar) -> None:
            if slot == self.n:
                vec_add_scaled(out, self.bracket_indices(tuple(idxs)), coeff)
                return
            for j, c in vectors[slot].items():
                idxs.append(j)
                rec(slot + 1, coeff * c)
                idxs.pop()

        rec(0, 1)
        return out

    # -- axioms ---------------------------------------------------------------

    def check_axioms(self) -> AxiomReport:
        """Grading, super-skew-symmetry, and the graded Filippov identity.

        Exact on every homogeneous basis tuple; for the Filippov identity both
        sides are multilinear and super-alternating in the two argument blocks,
        so canonical wedge words are an exhaustive set of test tuples.
        """
        failures: list[AxiomFailure] = []
        names = self.space.names
        par = self.space.parities

        for key, value in self.constants.items():
            want = word_parity(key, par)
            bad = [t for t in value if par[t] != want]
            if bad:
                failures.append(AxiomFailure(
                    "grading", tuple(names[i] for i in key),
                    f"bracket has a component on {names[bad[0]]} of parity "
                    f"{par[bad[0]]}, expected {want}"))
                break

        skew = self._check_super_skew()
        if skew is not None:
            failures.append(skew)

        fil = self._check_filippov()
        if fil is not None:
            failures.append(fil)

        return AxiomReport(not failures, tuple(failures))

    def _check_super_skew(self) -> AxiomFailure | None:
        par = self.space.parities
        names = self.space.names
        for key in self.constants:
            for i in range(self.n - 1):
                swapped = key[:i] + (key[i + 1], key[i]) + key[i + 2:]
                sign = 1 if (par[key[i]] and par[key[i + 1]]) else -1
                lhs = self.bracket_indices(swapped)
                rhs = vec_scale(self.bracket_indices(key), sign)
                if not vec_equal(lhs, rhs):
                    return AxiomFailure(
                        "super-skew", tuple(names[j] for j in swapped),
                        f"swapping slots {i} and {i+1} violates the sign rule")
        return None

    def _check_filippov(self) -> AxiomFailure | None:
        par = self.space.parities
        names = self.space.names
        xw = WedgeBasis(self.space, self.n - 1)
        yw = WedgeBasis(self.space, self.n)
        for x in xw.words:
            xpar = word_parity(x, par)
            for y in yw.words:
                lhs: Vec = {}
                inner = self.bracket_indices(y)
                for t, c in inner.items():
                    vec_add_scaled(lhs, self.bracket_indices(x + (t,)), c)
                rhs: Vec = {}
                prefix = 0
                for i in range(self.n):
                    hit = self.bracket_indices(x + (y[i],))
                    if hit:
                        sgn = -1 if (xpar and prefix) else 1
                        for t, c in hit.items():
                            vec_add_scaled(
                                rhs,
                                self.bracket_indices(y[:i] + (t,) + y[i + 1:]),
                                sgn * c)
                    prefix ^= par[y[i]]
                if not vec_equal(lhs, rhs):
                    witness = tuple(names[i] for i in x + y)
                    return AxiomFailure(
                        "filippov", witness,
                        "nested bracket does not match the derivation expansion")
        return None

    # -- derived constructions -------------------------------------------------

    def subspace(self, rows: list[Vec], **kw) -> GradedSubspace:
        return GradedSubspace(self.space, rows, **kw)

    def full_subspace(self) -> GradedSubspace:
        return GradedSubspace.full(self.space)

    def zero_subspace(self) -> GradedSubspace:
        return GradedSubspace.zero(self.space)


# ---------------------------------------------------------------------------
# subspace products, ideals, centralizers
# ---------------------------------------------------------------------------

def bracket_span(g: NLieSuperalgebra, slots: list[GradedSubspace]
                 ) -> GradedSubspace:
    """Span of all brackets with one argument from each slot subspace."""
    if len(slots) != g.n:
        raise ValueError(f"need {g.n} slot subspaces")
    vectors: list[Vec] = []

    def rec(i: int, chosen: list[Vec]) -> None:
        if i == g.n:
            v = g.bracket(*chosen)
            if v:
                vectors.append(v)
            return
        for row in slots[i].rows:
            chosen.append(row)
            rec(i + 1, chosen)
            chosen.pop()

    rec(0, [])
    return GradedSubspace(g.space, vectors)


def is_graded_ideal(g: NLieSuperalgebra, ideal: GradedSubspace) -> bool:
    """[I, g, ..., g] contained in I, on spanning basis tuples."""
    words = WedgeBasis(g.space, g.n - 1).words
    for a in ideal.rows:
        for w in words:
            v: Vec = {}
            for j, c in a.items():
                vec_add_scaled(v, g.bracket_indices((j,) + w), c)
            if reduce_mod(v, ideal.rows):
                return False
    return True


def is_abelian_ideal(g: NLieSuperalgebra, ideal: GradedSubspace) -> bool:
    """Graded ideal with [I, I, g, ..., g] = 0."""
    if not is_graded_ideal(g, ideal):
        return False
    return brackets_with_two_slots_vanish(g, ideal, ideal)


def brackets_with_two_slots_vanish(g: NLieSuperalgebra, a: GradedSubspace,
                                   b: GradedSubspace) -> bool:
    """[A, B, g, ..., g] = 0 exactly, over spanning tuples."""
    words = WedgeBasis(g.space, g.n - 2).words
    units = [unit_vec(i) for i in range(g.dim)]
    for ra in a.rows:
        for rb in b.rows:
            for w in words:
                rest = [units[i] for i in w]
                if g.bracket(ra, rb, *rest):
                    return False
    return True


def centralizer(g: NLieSuperalgebra, v: GradedSubspace) -> GradedSubspace:
    """C(V) = {x : [x, g, ..., g] lies in V}, as an exact kernel."""
    words = WedgeBasis(g.space, g.n - 1).words
    rows: dict[tuple, Vec] = {}
    for wi, w in enumerate(words):
        for i in range(g.dim):
            img = reduce_mod(g.bracket_indices((i,) + w), v.rows)
            for c, x in img.items():
                rows.setdefault((wi, c), {})[i] = x
    return GradedSubspace(g.space, kernel_basis(list(rows.values()), g.dim))


def ideal_centralizer(g: NLieSuperalgebra, ideal: GradedSubspace
                      ) -> GradedSubspace:
    """Z(I) = {x : [x, I, g, ..., g] = 0}."""
    words = WedgeBasis(g.space, g.n - 2).words
    rows: dict[tuple, Vec] = {}
    for ai, a in enumerate(ideal.rows):
        for wi, w in enumerate(words):
            for i in range(g.dim):
                img: Vec = {}
                for j, c in a.items():
                    vec_add_scaled(img, g.bracket_indices((i, j) + w), c)
                for c, x in img.items():
                    rows.setdefault((ai, wi, c), {})[i] = x
    return GradedSubspace(g.space, kernel_basis(list(rows.values()), g.dim))


# ---------------------------------------------------------------------------
# series
# ---------------------------------------------------------------------------

@dataclass
class SeriesReport:
    derived: list[GradedSubspace]
    lower_central: list[GradedSubspace]
    centralizer_series: list[GradedSubspace]
    solvable_length: int | None
    nilpotent_length: int | None

    @property
    def is_solvable(self) -> bool:
        return self.solvable_length is not None

    @property
    def is_nilpotent(self) -> bool:
        return self.nilpotent_length is not None


def series(g: NLieSuperalgebra) -> SeriesReport:
    """Derived and lower-central series with their lengths, plus C_i(g).

    Lengths are the smallest k with the k-th term zero; descending chains in
    finite dimension stabilize, so iteration is capped at dim+1 steps and a
    stable nonzero tail means "not solvable/nilpotent" (None).
    """
    full = g.full_subspace()
    cap = g.dim + 1

    derived = [full]
    while derived[-1].dim and len(derived) <= cap:
        nxt = bracket_span(g, [derived[-1]] * g.n)
        if nxt.rows == derived[-1].rows:
            break
        derived.append(nxt)

    lower = [full]
    while lower[-1].dim and len(lower) <= cap:
        nxt = bracket_span(g, [lower[-1]] + [full] * (g.n - 1))
        if nxt.rows == lower[-1].rows:
            break
        lower.append(nxt)

    cents = [g.zero_subspace()]
    while len(cents) <= cap:
        nxt = centralizer(g, cents[-1])
        if nxt.rows == cents[-1].rows:
            break
        cents.append(nxt)

    solv = len(derived) - 1 if derived[-1].dim == 0 else None
    nilp = len(lower) - 1 if lower[-1].dim == 0 else None
    return SeriesReport(derived, lower, cents, solv, nilp)


# ---------------------------------------------------------------------------
# quotients and direct sums
# ---------------------------------------------------------------------------

class QuotientMap:
    """Linear projection of the ambient algebra onto quotient coordinates."""

    def __init__(self, rows: list[Vec]):
        self.rows = rows  # one row per quotient coordinate, over ambient coords

    def __call__(self, v: Vec) -> Vec:
        out: Vec = {}
        for k, row in enumerate(self.rows):
            s: Scalar = 0
            for i, c in v.items():
                x = row.get(i)
                if x is not None:
                    s += x * c
            if s != 0:
                out[k] = s
        return out


def _coordinate_rows(space_dim: int, basis_rows: list[Vec]) -> list[list[Vec]]:
    """For a full basis given as rows, the coordinate functionals as rows.

    Returns a list of rows P with P[k] . v = coefficient of basis_rows[k] in v.
    """
    m = len(basis_rows)
    coords: list[Vec] = []
    for i in range(space_dim):
        eqs: list[Vec] = []
        for j in range(space_dim):
            eqs.append({k: basis_rows[k].get(j, 0)
                        for k in range(m) if basis_rows[k].get(j, 0) != 0})
        sol = solve(eqs, [1 if j == i else 0 for j in range(space_dim)])
        if sol is None:
            raise ValueError("rows do not form a basis")
        coords.append(sol)
    rows: list[Vec] = [{} for _ in range(m)]
    for i, cv in enumerate(coords):
        for k, c in cv.items():
            rows[k][i] = c
    return rows


def quotient(g: NLieSuperalgebra, ideal: GradedSubspace,
             complement_rows: list[Vec] | None = None
             ) -> tuple[NLieSuperalgebra, QuotientMap]:
    """Quotient algebra on coset representatives, plus the projection map.

    The default complement is spanned by the standard basis vectors at the
    non-pivot columns of the ideal's echelon form (deterministic, graded).
    """
    if not is_graded_ideal(g, ideal):
        raise NotAnIdealError("subspace is not a graded ideal")
    if complement_rows is None:
        complement_rows = [unit_vec(i) for i in ideal.complement_indices()]
    reps = complement_rows
    r = len(reps)
    if r + ideal.dim != g.dim or len(rref(reps + ideal.rows)) != g.dim:
        raise ValueError("complement does not complement the ideal")

    names = []
    parities = []
    for k, row in enumerate(reps):
        par = g.space.vector_parity(row)
        if par is None:
            raise ValueError("complement representatives must be homogeneous")
        parities.append(par)
        if len(row) == 1 and next(iter(row.values())) == 1:
            names.append(g.space.names[next(iter(row))])
        else:
            names.append(f"q{k + 1}")
    qspace = GradedVectorSpace(tuple(names), tuple(parities))

    proj_rows = _coordinate_rows(g.dim, reps + ideal.rows)[:r]
    proj = QuotientMap(proj_rows)

    wb = WedgeBasis(qspace, g.n)
    brackets: dict[Word, Vec] = {}
    for key in wb.words:
        v = g.bracket(*[reps[i] for i in key])
        img = proj(v)
        if img:
            brackets[key] = img
    qname = f"{g.name}/I" if g.name else "quotient"
    return NLieSuperalgebra(qspace, g.n, brackets, name=qname), proj


def direct_sum(g1: NLieSuperalgebra, g2: NLieSuperalgebra) -> NLieSuperalgebra:
    """Direct sum: mixed brackets vanish, both summands embed as graded ideals."""
    if g1.n != g2.n:
        raise ArityMismatchError("direct summands must share the arity")
    clash = set(g1.space.names) & set(g2.space.names)
    if clash:
        raise ValueError(f"basis name collision in direct sum: {sorted(clash)}")
    names = g1.space.names + g2.space.names
    parities = g1.space.parities + g2.space.parities
    space = GradedVectorSpace(names, parities)
    shift = g1.dim
    brackets: dict[Word, Vec] = dict(g1.constants)
    for key, val in g2.constants.items():
        brackets[tuple(i + shift for i in key)] = {
            i + shift: c for i, c in val.items()}
    name = " + ".join(x for x in (g1.name, g2.name) if x)
    return NLieSuperalgebra(space, g1.n, brackets, name=name)


def embedded_summand(g_sum: NLieSuperalgebra, offset: int, dim: int
                     ) -> GradedSubspace:
    """The subspace of a direct sum spanned by a contiguous coordinate block."""
    return GradedSubspace(
        g_sum.space, [unit_vec(offset + i) for i in range(dim)])
