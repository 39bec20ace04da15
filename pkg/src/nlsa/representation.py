"""Graded representations of fundamental objects, and the semidirect sum.

A representation is a matrix per canonical wedge word of degree n-1 (dense
storage per word, sparse per matrix); values on non-canonical tuples follow
from the wedge signs.  Matrices are column-major: mat[col][row] = entry.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import NLieSuperalgebra
from .linalg import GradedVectorSpace, Vec, vec_add_scaled
from .scalars import Scalar
from .wedge import WedgeBasis, Word, canonicalize_word, word_parity

ColMat = dict[int, Vec]


class InvalidRepresentationError(ValueError):
    pass


@dataclass(frozen=True)
class RepresentationFailure:
    axiom: str                 # "grading" | "commutator" | "bracket-compat"
    witness: tuple[str, ...]
    detail: str


@dataclass(frozen=True)
class RepresentationReport:
    ok: bool
    failures: tuple[RepresentationFailure, ...]


class Representation:
    """Linear action of the (n-1)-st super-exterior power on a graded space."""

    def __init__(self, algebra: NLieSuperalgebra, target: GradedVectorSpace,
                 matrices: dict[int, ColMat], kind: str = "custom"):
        self.algebra = algebra
        self.target = target
        self.basis = WedgeBasis(algebra.space, algebra.n - 1)
        self.matrices = {w: m for w, m in matrices.items() if m}
        self.kind = kind
        self._empty: ColMat = {}

    def colmat(self, word_index: int) -> ColMat:
        return self.matrices.get(word_index, self._empty)

    def apply_word(self, word_index: int, v: Vec) -> Vec:
        mat = self.matrices.get(word_index)
        out: Vec = {}
        if mat:
            for t, c in v.items():
                col = mat.get(t)
                if col:
                    vec_add_scaled(out, col, c)
        return out

    def apply_letters(self, letters: Word, v: Vec) -> Vec:
        """Action of a raw (possibly unsorted) letter tuple, with wedge signs."""
        cz = canonicalize_word(letters, self.algebra.space.parities)
        if cz is None:
            return {}
        sign, w = cz
        out = self.apply_word(self.basis.index(w), v)
        if sign == -1:
            out = {i: -c for i, c in out.items()}
        return out

    def word_matrix_combo(self, letters: Word) -> list[tuple[Scalar, int]]:
        cz = canonicalize_word(letters, self.algebra.space.parities)
        if cz is None:
            return []
        sign, w = cz
        return [(sign, self.basis.index(w))]


def adjoint(g: NLieSuperalgebra) -> Representation:
    """Action of wedge words on the algebra itself by the bracket."""
    basis = WedgeBasis(g.space, g.n - 1)
    mats: dict[int, ColMat] = {}
    for wi, w in enumerate(basis.words):
        col: ColMat = {}
        for z in range(g.dim):
            v = g.bracket_indices(w + (z,))
            if v:
                col[z] = dict(v)
        if col:
            mats[wi] = col
    return Representation(g, g.space, mats, kind="adjoint")


def coadjoint(g: NLieSuperalgebra) -> Representation:
    """Dual action: the signed negative super-transpose of the adjoint one."""
    ad = adjoint(g)
    dual = g.space.dual()
    par = g.space.parities
    mats: dict[int, ColMat] = {}
    for wi, admat in ad.matrices.items():
        wpar = ad.basis.parities[wi]
        col: ColMat = {}
        for s, column in admat.items():
            for t, c in column.items():
                # value on the dual vector t*: coefficient of s* is
                # -(-1)^(|word||t|) * (adjoint matrix)[t][s]
                sgn = -1 if not (wpar and par[t]) else 1
                col.setdefault(t, {})[s] = sgn * c
        if col:
            mats[wi] = col
    return Representation(g, dual, mats, kind="coadjoint")


def trivial(g: NLieSuperalgebra) -> Representation:
    """The ground field as a one-dimensional even module with zero action."""
    target = GradedVectorSpace(("1",), (0,))
    return Representation(g, target, {}, kind="trivial")


def cached_adjoint(g: NLieSuperalgebra) -> Representation:
    """One adjoint representation per algebra object (tables cache on it)."""
    cache = getattr(g, "_rep_cache", None)
    if cache is None:
        cache = g._rep_cache = {}
    if "adjoint" not in cache:
        cache["adjoint"] = adjoint(g)
    return cache["adjoint"]


def cached_coadjoint(g: NLieSuperalgebra) -> Representation:
    cache = getattr(g, "_rep_cache", None)
    if cache is None:
        cache = g._rep_cache = {}
    if "coadjoint" not in cache:
        cache["coadjoint"] = coadjoint(g)
    return cache["coadjoint"]


def cached_trivial(g: NLieSuperalgebra) -> Representation:
    cache = getattr(g, "_rep_cache", None)
    if cache is None:
        cache = g._rep_cache = {}
    if "trivial" not in cache:
        cache["trivial"] = trivial(g)
    return cache["trivial"]


# ---------------------------------------------------------------------------
# axioms
# ---------------------------------------------------------------------------

def _mat_apply(mat: ColMat, v: Vec) -> Vec:
    out: Vec = {}
    for t, c in v.items():
        col = mat.get(t)
        if col:
            vec_add_scaled(out, col, c)
    return out


def _mat_compose(a: ColMat, b: ColMat) -> ColMat:
    out: ColMat = {}
    for t, col in b.items():
        v = _mat_apply(a, col)
        if v:
            out[t] = v
    return out


def _mat_addto(acc: ColMat, mat: ColMat, coeff: Scalar) -> None:
    for t, col in mat.items():
        tgt = acc.setdefault(t, {})
        vec_add_scaled(tgt, col, coeff)
        if not tgt:
            del acc[t]


def _mat_is_zero(mat: ColMat) -> bool:
    return all(not col for col in mat.values())


def check_representation(rho: Representation) -> RepresentationReport:
    """Grading, the supercommutator identity, and compatibility with brackets.

    All three are checked exactly; the argument blocks of the bracket identity
    run over canonical wedge words (both sides are super-alternating there).
    """
    g = rho.algebra
    par = g.space.parities
    tpar = rho.target.parities
    basis = rho.basis
    failures: list[RepresentationFailure] = []

    for wi, mat in rho.matrices.items():
        wpar = basis.parities[wi]
        bad = None
        for t, col in mat.items():
            for s, c in col.items():
                if c != 0 and tpar[s] != (tpar[t] ^ wpar):
                    bad = (t, s)
                    break
            if bad:
                break
        if bad:
            failures.append(RepresentationFailure(
                "grading", (basis.word_name(wi),),
                f"matrix maps parity {tpar[bad[0]]} to parity "
                f"{tpar[bad[1]]} under a parity-{wpar} word"))
            break

    fail = _check_commutator(rho)
    if fail is not None:
        failures.append(fail)

    fail = _check_bracket_compat(rho)
    if fail is not None:
        failures.append(fail)

    return RepresentationReport(not failures, tuple(failures))


def _check_commutator(rho: Representation) -> RepresentationFailure | None:
    from .wedge import compose_words

    g = rho.algebra
    basis = rho.basis
    for ai in range(len(basis.words)):
        for bi in range(len(basis.words)):
            asgn = basis.parities[ai] and basis.parities[bi]
            lhs = _mat_compose(rho.colmat(ai), rho.colmat(bi))
            rev = _mat_compose(rho.colmat(bi), rho.colmat(ai))
            _mat_addto(lhs, rev, 1 if asgn else -1)
            rhs: ColMat = {}
            for w, c in compose_words(g, basis.words[ai],
                                      basis.words[bi]).items():
                _mat_addto(rhs, rho.colmat(basis.index(w)), c)
            _mat_addto(lhs, rhs, -1)
            if not _mat_is_zero(lhs):
                return RepresentationFailure(
                    "commutator",
                    (basis.word_name(ai), basis.word_name(bi)),
                    "rho(x)rho(y) - (-1)^(|x||y|) rho(y)rho(x) != rho(x o y)")
    return None


def _check_bracket_compat(rho: Representation) -> RepresentationFailure | None:
    g = rho.algebra
    n = g.n
    par = g.space.parities
    names = g.space.names
    xw = WedgeBasis(g.space, n - 2)
    yw = WedgeBasis(g.space, n)
    for x in xw.words:
        xpar = word_parity(x, par)
        for y in yw.words:
            ysum = word_parity(y, par)
            lhs: ColMat = {}
            for t, c in g.bracket_indices(y).items():
                for s1, wi in rho.word_matrix_combo(x + (t,)):
                    _mat_addto(lhs, rho.colmat(wi), s1 * c)
            rhs: ColMat = {}
            suffix = 0
            for i in range(n - 1, -1, -1):
                # built backwards so "suffix" is the parity sum of y[i+1:]
                sgn: Scalar = -1 if (n - 1 - i) % 2 else 1
                if xpar and (ysum ^ par[y[i]]):
                    sgn = -sgn
                if par[y[i]] and suffix:
                    sgn = -sgn
                outer = rho.word_matrix_combo(y[:i] + y[i + 1:])
                inner = rho.word_matrix_combo(x + (y[i],))
                for s1, wa in outer:
                    for s2, wb in inner:
                        prod = _mat_compose(rho.colmat(wa), rho.colmat(wb))
                        _mat_addto(rhs, prod, sgn * s1 * s2)
                suffix ^= par[y[i]]
            _mat_addto(lhs, rhs, -1)
            if not _mat_is_zero(lhs):
                return RepresentationFailure(
                    "bracket-compat",
                    tuple(names[i] for i in x + y),
                    "action on a bracket does not match the sum of composed "
                    "actions")
    return None


# ---------------------------------------------------------------------------
# semidirect sum
# ---------------------------------------------------------------------------

def semidirect(g: NLieSuperalgebra, rho: Representation,
               check: bool = True) -> NLieSuperalgebra:
    """The algebra on g + V with module brackets and [.., v, v'] = 0.

    The module embeds as an abelian graded ideal.  Mixed brackets with one
    module entry are the action with super-skew signs moving that entry last.
    """
    if rho.algebra is not g:
        raise ValueError("representation does not act for this algebra")
    if check and not getattr(rho, "_verified", False):
        report = check_representation(rho)
        if not report.ok:
            raise InvalidRepresentationError(
                f"representation fails: {report.failures[0].axiom} at "
                f"{report.failures[0].witness}")
        rho._verified = True
    taken = set(g.space.names)
    module_names = []
    for nm in rho.target.names:
        # module copies of algebra basis names get primes, deterministically
        while nm in taken:
            nm = nm + "'"
        taken.add(nm)
        module_names.append(nm)
    names = g.space.names + tuple(module_names)
    parities = g.space.parities + rho.target.parities
    space = GradedVectorSpace(names, parities)
    d = g.dim
    brackets: dict[Word, Vec] = dict(g.constants)
    for wi, mat in rho.matrices.items():
        word = rho.basis.words[wi]
        for v, col in mat.items():
            key = word + (d + v,)
            brackets[key] = {d + s: c for s, c in col.items()}
    name = f"{g.name}:+:{rho.kind}" if g.name else "semidirect"
    return NLieSuperalgebra(space, g.n, brackets, name=name)
