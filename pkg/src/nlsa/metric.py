"""Invariant bilinear forms, T*-extensions, and the reconstruction pipeline.

The T*-extension of an algebra by a cyclic degree-1 cocycle theta is the
semidirect sum with the coadjoint module, with theta added to the pure-algebra
brackets and the hyperbolic pairing <x+f, y+h> = f(y) + (-1)^(|x||y|) h(x).
The reconstruction direction turns a nilpotent metric algebra into such an
extension through a maximal isotropic stable subspace grown Engel-style.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import (NLieSuperalgebra, QuotientMap, bracket_span,
                      brackets_with_two_slots_vanish, centralizer,
                      is_graded_ideal, quotient, series)
from .cohomology import (Cochain, Key, basis_cochain, coboundary,
                         cochain_from_nword_values, cochain_keys,
                         is_wedge_compatible)
from .linalg import (GradedSubspace, GradedVectorSpace, Vec, kernel_basis,
                     reduce_mod, rref, solve, unit_vec, vec_add_scaled,
                     vec_scale)
from .representation import cached_adjoint, cached_coadjoint, semidirect
from .scalars import QQ, Scalar, normalize
from .wedge import WedgeBasis, Word, canonicalize_word


class NotACocycleError(ValueError):
    pass


class NotCyclicError(ValueError):
    pass


class WrongParityError(ValueError):
    pass


class NonSquareScalarError(ValueError):
    pass


class NotNilpotentError(ValueError):
    pass


class WrongDimensionError(ValueError):
    pass


class NotIsotropicError(ValueError):
    pass


class NotIsotropicIdealError(ValueError):
    pass


class OddDimensionError(ValueError):
    pass


class EvenDimensionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# bilinear forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BilinearForm:
    space: GradedVectorSpace
    gram: tuple[tuple[Scalar, ...], ...]

    def __post_init__(self):
        n = self.space.dim
        if len(self.gram) != n or any(len(r) != n for r in self.gram):
            raise ValueError("Gram matrix does not match the space dimension")

    def evaluate(self, x: Vec, y: Vec) -> Scalar:
        s: Scalar = 0
        for i, a in x.items():
            row = self.gram[i]
            for j, b in y.items():
                s += a * row[j] * b
        return normalize(s)

    def rank(self) -> int:
        rows = [{j: c for j, c in enumerate(r) if c != 0} for r in self.gram]
        return len(rref(rows))

    def orthogonal(self, w: GradedSubspace) -> GradedSubspace:
        from .linalg import orthogonal_complement

        return orthogonal_complement([list(r) for r in self.gram], w)

    def is_isotropic(self, w: GradedSubspace) -> bool:
        rows = w.rows
        return all(self.evaluate(a, b) == 0 for a in rows for b in rows)


@dataclass(frozen=True)
class FormProperties:
    nondegenerate: bool
    invariant: bool
    supersymmetric: bool
    consistent: bool

    @property
    def all_ok(self) -> bool:
        return (self.nondegenerate and self.invariant
                and self.supersymmetric and self.consistent)


def form_properties(g: NLieSuperalgebra, form: BilinearForm) -> FormProperties:
    """Decide the four metric properties exactly.

    Invariance is the identity <[x_1..x_{n-1}, y], z> =
    -(-1)^(|x..||y|) <y, [x_1..x_{n-1}, z]> over canonical wedge words and all
    basis pairs (both sides are alternating multilinear in the wedge block).
    """
    if form.space != g.space:
        raise ValueError("form and algebra live on different spaces")
    par = g.space.parities
    d = g.dim
    gram = form.gram

    consistent = all(gram[i][j] == 0
                     for i in range(d) for j in range(d) if par[i] != par[j])
    supersymmetric = all(
        gram[j][i] == (gram[i][j] if not (par[i] and par[j]) else -gram[i][j])
        for i in range(d) for j in range(d))
    nondegenerate = form.rank() == d

    invariant = True
    words = WedgeBasis(g.space, g.n - 1)
    for wi, w in enumerate(words.words):
        wpar = words.parities[wi]
        for y in range(d):
            left = g.bracket_indices(w + (y,))
            sgn = -1 if (wpar and par[y]) else 1
            for z in range(d):
                lhs: Scalar = 0
                for i, c in left.items():
                    lhs += c * gram[i][z]
                rhs: Scalar = 0
                for i, c in g.bracket_indices(w + (z,)).items():
                    rhs += gram[y][i] * c
                if lhs != -sgn * rhs:
                    invariant = False
                    break
            if not invariant:
                break
        if not invariant:
            break
    return FormProperties(nondegenerate, invariant, supersymmetric, consistent)


@dataclass
class MetricAlgebra:
    """Algebra together with a nondegenerate invariant supersymmetric form."""

    algebra: NLieSuperalgebra
    form: BilinearForm

    def __post_init__(self):
        if self.form.space != self.algebra.space:
            raise ValueError("form is not on the algebra's space")

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def check(self) -> FormProperties:
        return form_properties(self.algebra, self.form)


# ---------------------------------------------------------------------------
# cyclic cocycles and the T*-extension
# ---------------------------------------------------------------------------

def is_cyclic(g: NLieSuperalgebra, theta: Cochain) -> bool:
    """theta(X, y)(z) + (-1)^(|y||z|) theta(X, z)(y) = 0 on all basis tuples."""
    if theta.m != 1:
        raise ValueError("cyclicity applies to degree-1 cochains")
    par = g.space.parities
    nw = len(WedgeBasis(g.space, g.n - 1).words)
    d = g.dim
    for wi in range(nw):
        for y in range(d):
            for z in range(d):
                a = theta.coeffs.get((wi, y, z), 0)
                b = theta.coeffs.get((wi, z, y), 0)
                sgn = -1 if (par[y] and par[z]) else 1
                if a + sgn * b != 0:
                    return False
    return True


def zero_cocycle(g: NLieSuperalgebra) -> Cochain:
    return Cochain(g, cached_coadjoint(g), 1, 0, {})


def cyclic_cochain_from_form(g: NLieSuperalgebra,
                             omega: dict[Word, Scalar]) -> Cochain:
    """Degree-1 dual-valued cochain from an alternating (n+1)-form.

    theta(x_1..x_n)(z) := omega(x_1 ^ ... ^ x_n ^ z); cyclicity and wedge
    compatibility hold by construction, the cocycle condition does not.
    """
    rho = cached_coadjoint(g)
    par = g.space.parities
    coeffs: dict[Key, Scalar] = {}
    wedge = WedgeBasis(g.space, g.n - 1)
    for big, c in omega.items():
        if c == 0:
            continue
        cz = canonicalize_word(big, par)
        if cz is None:
            raise ValueError(f"{big} is not a valid (n+1)-word")
        if cz[1] != tuple(big):
            raise ValueError(f"{big} is not canonical")
        k = len(big)
        for kb in range(k):
            for kt in range(k):
                if kt == kb:
                    continue
                rest = tuple(x for pos, x in enumerate(big)
                             if pos not in (kb, kt))
                cw = canonicalize_word(rest + (big[kb], big[kt]), par)
                assert cw is not None and cw[1] == tuple(big)
                coeffs[(wedge.index(rest), big[kb], big[kt])] = cw[0] * c
    return Cochain(g, rho, 1, 0, coeffs)


def cyclic_cocycle_basis(g: NLieSuperalgebra) -> list[Cochain]:
    """Canonical basis of the cyclic wedge-compatible degree-1 cocycle space.

    Cyclic wedge-compatible dual-valued cochains of parity 0 are exactly the
    super-alternating (n+1)-forms; the cocycle condition cuts out a kernel.
    """
    big = WedgeBasis(g.space, g.n + 1)
    params = [w for wi, w in enumerate(big.words) if big.parities[wi] == 0]
    gens = [cyclic_cochain_from_form(g, {w: 1}) for w in params]
    cols = [coboundary(f).coeffs for f in gens]
    transposed: dict[Key, Vec] = {}
    for j, col in enumerate(cols):
        for key, c in col.items():
            transposed.setdefault(key, {})[j] = c
    out = []
    for combo in kernel_basis(list(transposed.values()), len(gens)):
        f = zero_cocycle(g)
        for j, c in combo.items():
            f = f + gens[j].scale(c)
        out.append(f)
    return out


@dataclass
class TStarExtension:
    base: NLieSuperalgebra
    theta: Cochain
    total: MetricAlgebra

    @property
    def dim_base(self) -> int:
        return self.base.dim

    def dual_subspace(self) -> GradedSubspace:
        d = self.base.dim
        return GradedSubspace(self.total.algebra.space,
                              [unit_vec(d + i) for i in range(d)])

    def base_subspace(self) -> GradedSubspace:
        d = self.base.dim
        return GradedSubspace(self.total.algebra.space,
                              [unit_vec(i) for i in range(d)])


def hyperbolic_gram(space: GradedVectorSpace) -> tuple[tuple[Scalar, ...], ...]:
    """Gram of <x+f, y+h> = f(y) + (-1)^(|x||y|) h(x) on a doubled space."""
    d2 = space.dim
    d = d2 // 2
    par = space.parities
    gram = [[0] * d2 for _ in range(d2)]
    for i in range(d):
        gram[d + i][i] = 1
        gram[i][d + i] = -1 if par[i] else 1
    return tuple(tuple(r) for r in gram)


def tstar_extension(g: NLieSuperalgebra, theta: Cochain | None
                    ) -> TStarExtension:
    """The metric algebra on g + g* twisted by a cyclic degree-1 cocycle.

    Gates exactly the hypotheses under which the total bracket satisfies the
    algebra axioms: theta has parity 0, factors through the degree-n wedge, is
    closed, and is cyclic.
    """
    rho = cached_coadjoint(g)
    if theta is None:
        theta = zero_cocycle(g)
    if theta.m != 1 or theta.rho.target != g.space.dual():
        raise NotACocycleError("theta must be a degree-1 dual-valued cochain")
    if theta.parity != 0:
        raise WrongParityError("theta must have parity 0")
    if not is_wedge_compatible(theta):
        raise NotACocycleError(
            "theta does not factor through the degree-n super-exterior power")
    if not coboundary(theta).is_zero():
        raise NotACocycleError("theta is not closed (coboundary is nonzero)")
    if not is_cyclic(g, theta):
        raise NotCyclicError(
            "theta(X,y)(z) + (-1)^(|y||z|) theta(X,z)(y) != 0")

    total = semidirect(g, rho, check=True)
    d = g.dim
    if theta.coeffs:
        wedge = WedgeBasis(g.space, g.n - 1)
        constants = dict(total.constants)
        for nword in WedgeBasis(g.space, g.n).words:
            u = wedge.index(nword[:-1])
            b = nword[-1]
            add: Vec = {}
            for t in range(d):
                c = theta.coeffs.get((u, b, t))
                if c:
                    add[d + t] = c
            if add:
                base_val = dict(constants.get(nword, {}))
                vec_add_scaled(base_val, add, 1)
                if base_val:
                    constants[nword] = base_val
                else:
                    constants.pop(nword, None)
        total = NLieSuperalgebra(total.space, g.n, constants,
                                 name=f"T*{g.name}" if g.name else "T*")
    else:
        total = NLieSuperalgebra(total.space, g.n, dict(total.constants),
                                 name=f"T*{g.name}" if g.name else "T*")
    form = BilinearForm(total.space, hyperbolic_gram(total.space))
    return TStarExtension(g, theta, MetricAlgebra(total, form))


# ---------------------------------------------------------------------------
# length bounds and direct sums
# ---------------------------------------------------------------------------

@dataclass
class TStarLengthReport:
    base_solvable: int | None
    base_nilpotent: int | None
    total_solvable: int | None
    total_nilpotent: int | None
    solvable_bound_ok: bool
    nilpotent_bound_ok: bool
    trivial_theta_exact: bool | None
    summands_are_ideals: bool | None

    @property
    def ok(self) -> bool:
        checks = [self.solvable_bound_ok, self.nilpotent_bound_ok]
        if self.trivial_theta_exact is not None:
            checks.append(self.trivial_theta_exact)
        if self.summands_are_ideals is not None:
            checks.append(self.summands_are_ideals)
        return all(checks)


def tstar_length_report(g: NLieSuperalgebra, theta: Cochain | None,
                        summand_dims: tuple[int, int] | None = None
                        ) -> TStarLengthReport:
    """Solvable/nilpotent lengths of the extension against the base bounds."""
    ext = tstar_extension(g, theta)
    base = series(g)
    tot = series(ext.total.algebra)

    solv_ok = True
    if base.solvable_length is not None:
        solv_ok = tot.solvable_length in (base.solvable_length,
                                          base.solvable_length + 1)
    nilp_ok = True
    trivial_exact = None
    if base.nilpotent_length is not None:
        k = base.nilpotent_length
        nilp_ok = (tot.nilpotent_length is not None
                   and (k <= tot.nilpotent_length <= max(2 * k - 1, k)))
        if theta is None or ext.theta.is_zero():
            trivial_exact = tot.nilpotent_length == k

    summands_ok = None
    if summand_dims is not None:
        d1, d2 = summand_dims
        d = g.dim
        if d1 + d2 != d:
            raise ValueError("summand dimensions must add up to dim g")
        space = ext.total.algebra.space
        first = GradedSubspace(space, [unit_vec(i) for i in range(d1)]
                               + [unit_vec(d + i) for i in range(d1)])
        second = GradedSubspace(space, [unit_vec(d1 + i) for i in range(d2)]
                                + [unit_vec(d + d1 + i) for i in range(d2)])
        summands_ok = (is_graded_ideal(ext.total.algebra, first)
                       and is_graded_ideal(ext.total.algebra, second)
                       and first.sum(second).dim == 2 * d)
    return TStarLengthReport(base.solvable_length, base.nilpotent_length,
                             tot.solvable_length, tot.nilpotent_length,
                             solv_ok, nilp_ok, trivial_exact, summands_ok)


# ---------------------------------------------------------------------------
# equivalence of T*-extensions
# ---------------------------------------------------------------------------

@dataclass
class EquivalenceResult:
    equivalent: bool
    theta_prime: Cochain | None
    induced_gram: tuple[tuple[Scalar, ...], ...] | None
    isometric: bool
    isometric_theta_prime: Cochain | None


def induced_form_gram(g: NLieSuperalgebra, theta_prime: Cochain
                      ) -> tuple[tuple[Scalar, ...], ...]:
    """(x, y) -> (theta'(x)(y) + (-1)^(|x||y|) theta'(y)(x)) / 2."""
    d = g.dim
    par = g.space.parities
    half = Fraction(1, 2)
    gram = [[0] * d for _ in range(d)]
    for i in range(d):
        for j in range(d):
            a = theta_prime.coeffs.get((i, j), 0)
            b = theta_prime.coeffs.get((j, i), 0)
            sgn = -1 if (par[i] and par[j]) else 1
            v = half * (a + sgn * b)
            gram[i][j] = normalize(v) if v else 0
    return tuple(tuple(r) for r in gram)


def tstar_equivalence(g: NLieSuperalgebra, theta1: Cochain, theta2: Cochain
                      ) -> EquivalenceResult:
    """Solve the degree-0 coboundary equation between the two cocycles.

    Equivalent iff theta1 - theta2 is a degree-0 coboundary; the returned
    solution is the canonical echelon one (free variables zero).  Isometric
    iff some solution over the affine set also has vanishing induced form.
    """
    rho = cached_coadjoint(g)
    diff = (theta1 - theta2).coeffs
    keys0 = cochain_keys(rho, 0, 0)
    cols = [coboundary(basis_cochain(rho, 0, 0, k)).coeffs for k in keys0]

    row_keys: set[Key] = set(diff)
    for col in cols:
        row_keys.update(col)
    ordered_rows = sorted(row_keys)
    rows = [{j: cols[j][rk] for j in range(len(cols)) if rk in cols[j]}
            for rk in ordered_rows]
    rhs = [diff.get(rk, 0) for rk in ordered_rows]
    sol = solve(rows, rhs)
    if sol is None:
        return EquivalenceResult(False, None, None, False, None)

    theta_prime = Cochain(g, rho, 0, 0,
                          {keys0[j]: c for j, c in sol.items()})
    gram = induced_form_gram(g, theta_prime)

    # search the affine solution set for a vanishing induced form
    d = g.dim
    par = g.space.parities
    key_pos = {k: j for j, k in enumerate(keys0)}
    sym_rows: list[Vec] = []
    sym_rhs: list[Scalar] = []
    for i in range(d):
        for j in range(i, d):
            row: Vec = {}
            pos = key_pos.get((i, j))
            if pos is not None:
                row[pos] = row.get(pos, 0) + 1
            pos = key_pos.get((j, i))
            if pos is not None:
                sgn = -1 if (par[i] and par[j]) else 1
                row[pos] = row.get(pos, 0) + sgn
            if row:
                sym_rows.append(row)
                sym_rhs.append(0)
    sol2 = solve(rows + sym_rows, rhs + sym_rhs)
    iso_theta = None
    if sol2 is not None:
        iso_theta = Cochain(g, rho, 0, 0,
                            {keys0[j]: c for j, c in sol2.items()})
    return EquivalenceResult(True, theta_prime, gram, sol2 is not None,
                             iso_theta)


def equivalence_isomorphism_columns(g: NLieSuperalgebra, theta_prime: Cochain
                                    ) -> list[Vec]:
    """Columns of phi(x+f) = x + theta'(x) + f on the doubled space."""
    d = g.dim
    cols = []
    for i in range(d):
        col: Vec = {i: 1}
        for t in range(d):
            c = theta_prime.coeffs.get((i, t), 0)
            if c:
                col[d + t] = c
        cols.append(col)
    for t in range(d):
        cols.append({d + t: 1})
    return cols


# ---------------------------------------------------------------------------
# isotropic ideals and complements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LagrangianIdealReport:
    is_ideal: bool
    is_abelian: bool
    equivalence_holds: bool
    self_perpendicular: bool


def isotropic_ideal_abelian_check(m: MetricAlgebra, ideal: GradedSubspace
                                  ) -> LagrangianIdealReport:
    """Half-dimensional isotropic subspaces: graded ideal iff abelian."""
    dim = m.dim
    if dim % 2:
        raise WrongDimensionError("the ambient dimension must be even")
    if ideal.dim != dim // 2:
        raise WrongDimensionError("the subspace must have half dimension")
    if not m.form.is_isotropic(ideal):
        raise NotIsotropicError("the subspace is not isotropic")
    is_ideal = is_graded_ideal(m.algebra, ideal)
    is_abelian = brackets_with_two_slots_vanish(m.algebra, ideal, ideal)
    perp = m.form.orthogonal(ideal)
    return LagrangianIdealReport(is_ideal, is_abelian,
                                 is_ideal == is_abelian, perp == ideal)


def isotropic_complement(m: MetricAlgebra, ideal: GradedSubspace) -> list[Vec]:
    """Homogeneous rows spanning a complement C of the ideal with <C, C> = 0.

    Deterministic sweep over the standard echelon complement: each candidate is
    corrected by an ideal vector clearing its pairings with the previous output
    rows and (char != 2) half its self-pairing.
    """
    form = m.form
    space = m.algebra.space
    if not form.is_isotropic(ideal):
        raise NotIsotropicError("the ideal is not isotropic")
    done: list[Vec] = []
    for idx in ideal.complement_indices():
        c: Vec = {idx: 1}
        cpar = space.parities[idx]
        same_par = [r for r in ideal.rows
                    if space.vector_parity(r) == cpar]
        conds: list[Vec] = []
        rhs: list[Scalar] = []
        for prev in done:
            if space.vector_parity(prev) != cpar:
                continue
            conds.append({k: form.evaluate(row, prev)
                          for k, row in enumerate(same_par)
                          if form.evaluate(row, prev) != 0})
            rhs.append(form.evaluate(c, prev))
        if cpar == 0:
            # even vectors must also clear their own pairing (odd ones are
            # automatically isotropic in characteristic != 2)
            conds.append({k: form.evaluate(row, c)
                          for k, row in enumerate(same_par)
                          if form.evaluate(row, c) != 0})
            rhs.append(normalize(Fraction(form.evaluate(c, c)) / 2))
        coeffs = solve(conds, rhs)
        if coeffs is None:
            raise NotIsotropicIdealError(
                "no isotropic complement: the pairing with the ideal is "
                "degenerate")
        z: Vec = {}
        for k, u in coeffs.items():
            vec_add_scaled(z, same_par[k], u)
        out = dict(c)
        vec_add_scaled(out, z, -1)
        done.append(out)
    return done


# ---------------------------------------------------------------------------
# reconstruction as a T*-extension
# ---------------------------------------------------------------------------

@dataclass
class Reconstruction:
    quotient: NLieSuperalgebra
    projection: QuotientMap
    theta: Cochain
    extension: TStarExtension
    phi_columns: list[Vec]   # images of the metric algebra's basis vectors

    def phi(self, v: Vec) -> Vec:
        out: Vec = {}
        for i, c in v.items():
            vec_add_scaled(out, self.phi_columns[i], c)
        return out


def reconstruct_tstar(m: MetricAlgebra, ideal: GradedSubspace
                      ) -> Reconstruction:
    """Exhibit a metric algebra as a T*-extension of its quotient by the ideal.

    Needs even dimension and an isotropic graded ideal of half dimension; the
    cocycle is the dual-transported ideal component of brackets of isotropic
    complement representatives.
    """
    g = m.algebra
    dim = g.dim
    if dim % 2:
        raise OddDimensionError("reconstruction needs an even dimension")
    if ideal.dim != dim // 2 or not m.form.is_isotropic(ideal):
        raise NotIsotropicIdealError(
            "need an isotropic graded ideal of half dimension")
    if not is_graded_ideal(g, ideal):
        raise NotIsotropicIdealError("the subspace is not a graded ideal")

    comp = isotropic_complement(m, ideal)
    g1, proj = quotient(g, ideal, complement_rows=comp)
    r = len(comp)

    # coordinates in the basis (complement rows, ideal rows)
    from .algebra import _coordinate_rows

    coord_rows = _coordinate_rows(dim, comp + ideal.rows)
    comp_coords = coord_rows[:r]
    ideal_coords = coord_rows[r:]

    # dual transport of ideal vectors: value on pi(comp_k) is the pairing
    dual_rows: list[Vec] = []
    for z in ideal.rows:
        dual_rows.append({k: m.form.evaluate(z, ck)
                          for k, ck in enumerate(comp)
                          if m.form.evaluate(z, ck) != 0})

    rho1 = cached_coadjoint(g1)
    values: dict[Word, Vec] = {}
    for nword in WedgeBasis(g1.space, g1.n).words:
        v = g.bracket(*[comp[i] for i in nword])
        val: Vec = {}
        for rr, crow in enumerate(ideal_coords):
            s: Scalar = 0
            for i, c in v.items():
                x = crow.get(i)
                if x is not None:
                    s += x * c
            if s != 0:
                vec_add_scaled(val, dual_rows[rr], s)
        if val:
            values[nword] = val
    theta = cochain_from_nword_values(rho1, values)
    ext = tstar_extension(g1, theta)

    phi_cols: list[Vec] = []
    for i in range(dim):
        col: Vec = {}
        for k in range(r):
            c = comp_coords[k].get(i)
            if c:
                col[k] = c
        for rr in range(len(ideal.rows)):
            c = ideal_coords[rr].get(i)
            if c:
                for t, x in dual_rows[rr].items():
                    cur = col.get(r + t, 0) + c * x
                    if cur == 0:
                        col.pop(r + t, None)
                    else:
                        col[r + t] = cur
        phi_cols.append(col)
    return Reconstruction(g1, proj, theta, ext, phi_cols)


def verify_isometric_isomorphism(m: MetricAlgebra, target: MetricAlgebra,
                                 phi_columns: list[Vec]) -> bool:
    """phi is a homogeneous bijection, bracket-preserving, and an isometry."""
    g = m.algebra
    h = target.algebra
    dim = g.dim
    if len(phi_columns) != dim or dim != h.dim:
        return False
    if len(rref(list(phi_columns))) != dim:
        return False
    for i in range(dim):
        pv = h.space.vector_parity(phi_columns[i])
        if pv is not None and pv != g.space.parities[i]:
            return False
    for i in range(dim):
        for j in range(dim):
            lhs = m.form.gram[i][j]
            rhs = target.form.evaluate(phi_columns[i], phi_columns[j])
            if lhs != rhs:
                return False

    def phi(v: Vec) -> Vec:
        out: Vec = {}
        for i, c in v.items():
            vec_add_scaled(out, phi_columns[i], c)
        return out

    for key in WedgeBasis(g.space, g.n).words:
        lhs = phi(g.bracket_indices(key))
        rhs = h.bracket(*[phi_columns[i] for i in key])
        if lhs != rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# maximal isotropic stable subspaces (Engel-style growth)
# ---------------------------------------------------------------------------

def _colmat_is_nilpotent(mat: dict[int, Vec], dim: int) -> bool:
    cur = mat
    for _ in range(dim):
        if all(not col for col in cur.values()):
            return True
        nxt: dict[int, Vec] = {}
        for t, col in cur.items():
            v: Vec = {}
            for s, c in col.items():
                src = mat.get(s)
                if src:
                    vec_add_scaled(v, src, c)
            if v:
                nxt[t] = v
        cur = nxt
    return all(not col for col in cur.values())


def _expand_in_basis(v: Vec, basis_rows: list[Vec]) -> Vec | None:
    """Coefficients of v in the given row basis, or None if outside the span."""
    eqs: list[Vec] = []
    coords = set()
    for row in basis_rows:
        coords.update(row)
    coords.update(v)
    ordered = sorted(coords)
    for i in ordered:
        eqs.append({k: basis_rows[k][i] for k in range(len(basis_rows))
                    if i in basis_rows[k]})
    sol = solve(eqs, [v.get(i, 0) for i in ordered])
    if sol is None:
        return None
    # solve() ignores surplus equations only when consistent; verify exactly
    check: Vec = {}
    for k, c in sol.items():
        vec_add_scaled(check, basis_rows[k], c)
    vec_add_scaled(check, v, -1)
    return sol if not check else None


def _isotropic_vector(rows: list[Vec], parities: list[int],
                      pair) -> Vec | None:
    """First isotropic vector in the span, odd rows first, then even solves.

    ``pair(a, b)`` evaluates the form.  Raises NonSquareScalarError when an
    isotropic vector exists only over a quadratic extension.
    """
    for k, row in enumerate(rows):
        if parities[k] == 1:
            return dict(row)
    for k, row in enumerate(rows):
        if pair(row, row) == 0:
            return dict(row)
    for i in range(len(rows)):
        a = pair(rows[i], rows[i])
        for j in range(i + 1, len(rows)):
            b = pair(rows[i], rows[j])
            c = pair(rows[j], rows[j])
            if c == 0:
                if b != 0:
                    lam = normalize(Fraction(-a, 1) / (2 * Fraction(b)))
                    out = dict(rows[i])
                    vec_add_scaled(out, rows[j], lam)
                    return out
                continue
            disc = normalize(b * b - a * c)
            root = QQ.sqrt(disc)
            if root is not None:
                lam = normalize((Fraction(-b) + Fraction(root)) / Fraction(c))
                out = dict(rows[i])
                vec_add_scaled(out, rows[j], lam)
                return out
    if rows:
        raise NonSquareScalarError(
            "finding an isotropic stable vector needs a square root that "
            "does not exist in the rationals (the construction assumes an "
            "algebraically closed field)")
    return None


def maximal_isotropic_stable(m: MetricAlgebra, start: GradedSubspace
                             ) -> GradedSubspace:
    """Grow an isotropic ad-stable subspace to dimension floor(dim/2).

    Every step passes to W-perp modulo W, intersects the kernels of the
    induced bracket operators (a spanning family of the stable-endomorphism
    space), and adjoins the first isotropic vector found there: odd vectors
    are isotropic outright, even ones may need one square root.
    """
    g = m.algebra
    dim = g.dim
    ad = cached_adjoint(g)
    ops = [mat for _, mat in sorted(ad.matrices.items())]
    for mat in ops:
        if not _colmat_is_nilpotent(mat, dim):
            raise NotNilpotentError(
                "a bracket operator is not nilpotent; the growth step needs "
                "a nilpotent algebra")
    if not m.form.is_isotropic(start):
        raise NotIsotropicError("the seed subspace is not isotropic")
    if not is_graded_ideal(g, start):
        raise NotIsotropicIdealError("the seed subspace is not stable (not an "
                                     "ideal)")
    target = dim // 2
    w = start
    while w.dim < target:
        wperp = m.form.orthogonal(w)
        reduced = [r for row in wperp.rows
                   if (r := reduce_mod(row, w.rows))]
        q_rows = rref(reduced)
        q_par = [g.space.vector_parity(r) for r in q_rows]
        basis = q_rows + w.rows

        induced: list[list[Vec]] = []
        for mat in ops:
            cols: list[Vec] = []
            for qk in q_rows:
                img: Vec = {}
                for i, c in qk.items():
                    col = mat.get(i)
                    if col:
                        vec_add_scaled(img, col, c)
                coeffs = _expand_in_basis(img, basis)
                if coeffs is None:
                    raise NotIsotropicIdealError(
                        "the orthogonal complement is not stable; the form "
                        "is not invariant")
                cols.append({k: c for k, c in coeffs.items()
                             if k < len(q_rows)})
            induced.append(cols)

        constraint_rows: dict[tuple[int, int], Vec] = {}
        for oi, cols in enumerate(induced):
            for k, img in enumerate(cols):
                for c, x in img.items():
                    constraint_rows.setdefault((oi, c), {})[k] = x
        kern = kernel_basis(list(constraint_rows.values()), len(q_rows))
        if not kern:
            raise NotNilpotentError(
                "empty common kernel; inconsistent with nilpotency")
        kern_par = []
        for row in kern:
            ps = {q_par[k] for k in row}
            kern_par.append(ps.pop() if len(ps) == 1 else 0)

        def pair(x: Vec, y: Vec) -> Scalar:
            s: Scalar = 0
            for kx, cx in x.items():
                for ky, cy in y.items():
                    s += cx * m.form.evaluate(q_rows[kx], q_rows[ky]) * cy
            return normalize(s)

        vq = _isotropic_vector(kern, kern_par, pair)
        if vq is None:
            raise NotNilpotentError("no stable vector available")
        pulled: Vec = {}
        for k, c in vq.items():
            vec_add_scaled(pulled, q_rows[k], c)
        w = GradedSubspace(g.space, w.rows + [pulled])

    assert m.form.is_isotropic(w)
    assert is_graded_ideal(g, w)
    assert w.dim == target
    if dim % 2:
        wperp = m.form.orthogonal(w)
        img = bracket_span(
            g, [GradedSubspace.full(g.space)] * (g.n - 1) + [wperp])
        assert w.contains(img), "odd-dimension stability postcondition failed"
    return w


# ---------------------------------------------------------------------------
# odd dimension: extension by an anisotropic line
# ---------------------------------------------------------------------------

@dataclass
class LineExtension:
    metric: MetricAlgebra
    ideal: GradedSubspace          # the enlarged isotropic ideal
    alpha_index: int
    z: Vec                         # the norm -1 partner inside the old space
    phi_to_quotient: list[Vec]     # columns of Phi: extension -> g/I
    quotient: NLieSuperalgebra
    projection: QuotientMap


def extend_by_line(m: MetricAlgebra, ideal: GradedSubspace) -> LineExtension:
    """Append an even norm-1 line to reach even dimension.

    Needs z in the ideal's orthogonal with <z,z> = -1 (one square root); beta
    = alpha + z extends the ideal, the old algebra is a nondegenerate graded
    ideal of codimension 1, and x + t*alpha -> x - t*z + I descends to the
    quotient by the old ideal.
    """
    g = m.algebra
    dim = g.dim
    if dim % 2 == 0:
        raise EvenDimensionError("the line extension applies to odd dimension")
    if not m.form.is_isotropic(ideal) or not is_graded_ideal(g, ideal):
        raise NotIsotropicIdealError("need an isotropic graded ideal")
    if ideal.dim != dim // 2:
        raise WrongDimensionError("the ideal must be maximal, floor(dim/2)")

    perp = m.form.orthogonal(ideal)
    reduced = rref([r for row in perp.rows
                    if (r := reduce_mod(row, ideal.rows))])
    if len(reduced) != 1:
        raise WrongDimensionError("expected a line above the maximal ideal")
    u = reduced[0]
    upar = g.space.vector_parity(u)
    if upar != 0:
        raise NonSquareScalarError(
            "the residual line is odd, so the form degenerates; cannot "
            "normalize")
    cnorm = m.form.evaluate(u, u)
    if cnorm == 0:
        raise NotIsotropicIdealError("the residual line is isotropic; the "
                                     "ideal was not maximal")
    t = QQ.sqrt(normalize(Fraction(-1) / Fraction(cnorm)))
    if t is None:
        raise NonSquareScalarError(
            f"no rational t with t^2 = -1/{cnorm} (the construction assumes "
            "an algebraically closed field)")
    z = vec_scale(u, t)

    alpha_name = "alpha"
    while alpha_name in g.space.names:
        alpha_name += "'"
    space = GradedVectorSpace(g.space.names + (alpha_name,),
                              g.space.parities + (0,))
    bigger = NLieSuperalgebra(space, g.n, dict(g.constants),
                              name=(g.name + "+line") if g.name else "g+line")
    gram = [list(row) + [0] for row in m.form.gram]
    gram.append([0] * dim + [1])
    metric2 = MetricAlgebra(bigger,
                            BilinearForm(space, tuple(tuple(r) for r in gram)))

    beta = dict(z)
    beta[dim] = 1
    ideal2 = GradedSubspace(space, [dict(r) for r in ideal.rows] + [beta])

    g_over_i, proj = quotient(g, ideal)
    phi_cols: list[Vec] = [proj(unit_vec(i)) for i in range(dim)]
    phi_cols.append(proj(vec_scale(z, -1)))
    return LineExtension(metric2, ideal2, dim, z, phi_cols, g_over_i, proj)


# ---------------------------------------------------------------------------
# centralizer duality and the pipeline
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CentralizerDualityReport:
    centralizer_identity: bool     # C(V) = [g,..,g,V-perp]-perp on samples
    series_duality: bool           # lower central terms equal C_m(g)-perp
    inclusion_bound: bool          # g^i inside C_{k-i}(g) for nilpotent g

    @property
    def ok(self) -> bool:
        return (self.centralizer_identity and self.series_duality
                and self.inclusion_bound)


def centralizer_duality(m: MetricAlgebra) -> CentralizerDualityReport:
    g = m.algebra
    full = GradedSubspace.full(g.space)
    zero = GradedSubspace.zero(g.space)
    samples = [zero, full, centralizer(g, zero)]
    if g.dim:
        samples.append(GradedSubspace(g.space, [unit_vec(0)]))

    item1 = True
    for v in samples:
        lhs = centralizer(g, v)
        image = bracket_span(g, [full] * (g.n - 1) + [m.form.orthogonal(v)])
        if lhs != m.form.orthogonal(image):
            item1 = False
            break

    sr = series(g)
    cents = list(sr.centralizer_series)
    lower = list(sr.lower_central)
    while len(cents) < len(lower):
        cents.append(centralizer(g, cents[-1]))
    item2 = all(lower[i] == m.form.orthogonal(cents[i])
                for i in range(len(lower)))

    item3 = True
    if sr.nilpotent_length is not None:
        k = sr.nilpotent_length
        for i in range(k + 1):
            gi = lower[i] if i < len(lower) else zero
            ci = cents[k - i] if k - i < len(cents) else cents[-1]
            if not ci.contains(gi):
                item3 = False
                break
    return CentralizerDualityReport(item1, item2, item3)


@dataclass
class PipelineResult:
    nilpotent_length: int
    canonical_ideal: GradedSubspace        # J = sum of g^i cap C_i(g)
    maximal_ideal: GradedSubspace          # I, the grown maximal isotropic one
    used_line_extension: bool
    reconstruction: Reconstruction
    quotient_length: int
    bound: int
    isometry_verified: bool

    @property
    def bound_ok(self) -> bool:
        return self.quotient_length <= self.bound


def nilpotent_pipeline(m: MetricAlgebra) -> PipelineResult:
    """Full reconstruction of a nilpotent metric algebra as a T*-extension.

    Seeds the growth with J = sum of (lower central term i) cap C_i(g), which
    is an isotropic graded ideal containing the [(k+1)/2]-th lower central
    term; the quotient by the grown ideal has nilpotent length at most that
    bound.
    """
    g = m.algebra
    sr = series(g)
    if sr.nilpotent_length is None:
        raise NotNilpotentError("the algebra is not nilpotent")
    k = sr.nilpotent_length
    zero = GradedSubspace.zero(g.space)

    from .linalg import intersect

    cents = list(sr.centralizer_series)
    lower = list(sr.lower_central)
    steps = max(len(cents), len(lower))
    j = zero
    for i in range(steps):
        gi = lower[i] if i < len(lower) else zero
        ci = cents[i] if i < len(cents) else cents[-1]
        j = j.sum(intersect(gi, ci))
    if not m.form.is_isotropic(j):
        raise NotIsotropicError("the canonical ideal is not isotropic")
    if not is_graded_ideal(g, j):
        raise NotIsotropicIdealError("the canonical ideal is not an ideal")
    bound = (k + 1) // 2
    half_term = lower[bound] if bound < len(lower) else zero
    if not j.contains(half_term):
        raise NotIsotropicIdealError(
            "the canonical ideal misses the half-length central term")

    ideal = maximal_isotropic_stable(m, j)
    if g.dim % 2 == 0:
        rec = reconstruct_tstar(m, ideal)
        used_line = False
        verified = verify_isometric_isomorphism(
            m, rec.extension.total, rec.phi_columns)
    else:
        line = extend_by_line(m, ideal)
        rec = reconstruct_tstar(line.metric, line.ideal)
        used_line = True
        verified = verify_isometric_isomorphism(
            line.metric, rec.extension.total, rec.phi_columns)
    qlen = series(rec.quotient).nilpotent_length
    if qlen is None:
        raise NotNilpotentError("quotient of a nilpotent algebra must be "
                                "nilpotent")
    return PipelineResult(k, j, ideal, used_line, rec, qlen, bound, verified)
