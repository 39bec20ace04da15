"""Supercochains and the degree-raising coboundary operator.

An m-cochain assigns a module value to m wedge slots of degree n-1 plus one
algebra slot; coefficients are a sparse dict keyed by

    (word_1, ..., word_m, z, t)

with ``word_i`` indices into the canonical wedge basis, ``z`` an algebra basis
index and ``t`` a module basis index.  The coboundary has four term groups:

  1. composition terms: drop slot i, compose it into a later slot j;
  2. action terms: drop slot i, let it act on the algebra slot;
  3. module terms: the dropped slot acts on the cochain value;
  4. the closing term: the value inserted into the last wedge slot's letters,
     bracketed with the algebra slot inside the semidirect sum.

The operator preserves the cochain parity and squares to zero; the test suite
checks the square on full coefficient bases and the m=0 and m=1 special cases
against independently coded formulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .algebra import NLieSuperalgebra
from .linalg import Vec, kernel_basis, rref
from .representation import Representation
from .scalars import Scalar
from .wedge import WedgeBasis, Word, canonicalize_word, compose_words

Key = tuple[int, ...]


class DegreeMismatchError(ValueError):
    pass


@dataclass
class Cochain:
    """Parity-homogeneous multilinear map into a graded module."""

    algebra: NLieSuperalgebra
    rho: Representation
    m: int
    parity: int
    coeffs: dict[Key, Scalar]

    def __post_init__(self):
        self.coeffs = {k: c for k, c in self.coeffs.items() if c != 0}

    def is_zero(self) -> bool:
        return not self.coeffs

    def copy(self) -> "Cochain":
        return Cochain(self.algebra, self.rho, self.m, self.parity,
                       dict(self.coeffs))

    def _compat(self, other: "Cochain") -> None:
        # structural compatibility: independently built but equal contexts mix
        if (self.algebra.space != other.algebra.space
                or self.rho.target != other.rho.target
                or self.m != other.m or self.parity != other.parity):
            raise DegreeMismatchError("cochains are not comparable")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._compat(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            v = out.get(k, 0) + c
            if v == 0:
                out.pop(k, None)
            else:
                out[k] = v
        return Cochain(self.algebra, self.rho, self.m, self.parity, out)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + other.scale(-1)

    def scale(self, c: Scalar) -> "Cochain":
        if c == 0:
            return Cochain(self.algebra, self.rho, self.m, self.parity, {})
        return Cochain(self.algebra, self.rho, self.m, self.parity,
                       {k: c * v for k, v in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        return (isinstance(other, Cochain) and self.m == other.m
                and self.parity == other.parity and self.coeffs == other.coeffs)

    def evaluate(self, words: tuple[Word, ...], z: int) -> Vec:
        """Value on canonical wedge-word arguments and a basis algebra slot."""
        if len(words) != self.m:
            raise DegreeMismatchError(f"expected {self.m} wedge arguments")
        ctx = _context(self.rho)
        idx = tuple(ctx.wedge.index(w) for w in words)
        out: Vec = {}
        for t in range(len(self.rho.target.names)):
            c = self.coeffs.get(idx + (z, t))
            if c:
                out[t] = c
        return out


# ---------------------------------------------------------------------------
# per-(algebra, module) tables
# ---------------------------------------------------------------------------

class _CoboundaryContext:
    def __init__(self, rho: Representation):
        g = rho.algebra
        self.g = g
        self.rho = rho
        self.n = g.n
        self.d = g.dim
        self.par = g.space.parities
        self.tpar = rho.target.parities
        self.wedge = WedgeBasis(g.space, g.n - 1)
        self.wpar = self.wedge.parities
        self._inv_act: dict[int, list[tuple[int, int, Scalar]]] | None = None
        self._inv_comp: dict[int, list[tuple[int, int, Scalar]]] | None = None
        self._rho_words: list[tuple[int, dict]] | None = None
        self._occ: dict[int, list[tuple[int, int]]] | None = None
        self._mixed: dict[tuple[int, int, int],
                          tuple[int, int, tuple[tuple[int, int], ...]]] = {}

    @property
    def inv_act(self):
        """b -> [(word, z, coeff)] with coeff the e_b component of word . e_z."""
        if self._inv_act is None:
            table: dict[int, list[tuple[int, int, Scalar]]] = {}
            for wi, w in enumerate(self.wedge.words):
                for z in range(self.d):
                    for b, c in self.g.bracket_indices(w + (z,)).items():
                        table.setdefault(b, []).append((wi, z, c))
            self._inv_act = table
        return self._inv_act

    @property
    def inv_comp(self):
        """c -> [(a, b, coeff)] with coeff the word-c component of a o b."""
        if self._inv_comp is None:
            table: dict[int, list[tuple[int, int, Scalar]]] = {}
            words = self.wedge.words
            active = [ai for ai, _ in enumerate(words)
                      if any(self.g.bracket_indices(words[ai] + (z,))
                             for z in range(self.d))]
            for ai in active:
                for bi, b in enumerate(words):
                    for w, c in compose_words(self.g, words[ai], b).items():
                        table.setdefault(self.wedge.index(w), []).append(
                            (ai, bi, c))
            self._inv_comp = table
        return self._inv_comp

    @property
    def rho_words(self):
        if self._rho_words is None:
            self._rho_words = sorted(self.rho.matrices.items())
        return self._rho_words

    @property
    def occurrences(self):
        """p -> [(word, position)] over canonical words containing letter p."""
        if self._occ is None:
            table: dict[int, list[tuple[int, int]]] = {}
            for wi, w in enumerate(self.wedge.words):
                for pos, p in enumerate(w):
                    table.setdefault(p, []).append((wi, pos))
            self._occ = table
        return self._occ

    def mixed(self, wi: int, pos: int, z: int):
        """The operator v -> [u_1, .., v at pos, .., u_{n-1}, e_z] in g + V.

        Returns (base sign, parity exponent, ((word, sign), ...)): apply as
        base * (-1)^(|v| * exponent) * sum sign * rho(word) . v.
        """
        key = (wi, pos, z)
        hit = self._mixed.get(key)
        if hit is None:
            w = self.wedge.words[wi]
            rest = w[:pos] + w[pos + 1:] + (z,)
            moves = len(w) - pos  # slots the value passes over, z included
            base = -1 if moves % 2 else 1
            pexp = 0
            for i in w[pos + 1:]:
                pexp ^= self.par[i]
            pexp ^= self.par[z]
            cz = canonicalize_word(rest, self.par)
            combo: tuple[tuple[int, int], ...] = ()
            if cz is not None:
                s, word = cz
                combo = ((self.wedge.index(word), s),)
            hit = (base, pexp, combo)
            self._mixed[key] = hit
        return hit


def _context(rho: Representation) -> _CoboundaryContext:
    ctx = getattr(rho, "_coboundary_context", None)
    if ctx is None:
        ctx = _CoboundaryContext(rho)
        rho._coboundary_context = ctx
    return ctx


# ---------------------------------------------------------------------------
# the coboundary operator
# ---------------------------------------------------------------------------

def coboundary(f: Cochain) -> Cochain:
    """Degree-raising operator; parity-preserving; squares to zero."""
    ctx = _context(f.rho)
    m = f.m
    wpar = ctx.wpar
    tpar = ctx.tpar
    fpar = f.parity
    out: dict[Key, Scalar] = {}

    def add(key: Key, val: Scalar) -> None:
        cur = out.get(key, 0) + val
        if cur == 0:
            out.pop(key, None)
        else:
            out[key] = cur

    inv_comp = ctx.inv_comp
    inv_act = ctx.inv_act
    rho_words = ctx.rho_words
    occ = ctx.occurrences

    for key, val in f.coeffs.items():
        ws = key[:m]
        b = key[m]
        t = key[m + 1]
        ws_par = [wpar[w] for w in ws]

        # 1. composition terms: slot k of f holds a o (old slot), a inserted at i
        for k in range(m):
            for (ai, bi, c) in inv_comp.get(ws[k], ()):
                apar = wpar[ai]
                # i is the 1-based insertion position; psum covers the slots
                # strictly between the two composition arguments
                psum = 0
                for i in range(k + 1, 0, -1):
                    sgn = -1 if i % 2 else 1
                    if apar and psum:
                        sgn = -sgn
                    yw = ws[:i - 1] + (ai,) + ws[i - 1:k] + (bi,) + ws[k + 1:]
                    add(yw + (b, t), sgn * c * val)
                    if i > 1:
                        psum ^= ws_par[i - 2]

        # 2. action terms: inserted slot acts on the algebra slot
        for (ai, z, c) in inv_act.get(b, ()):
            apar = wpar[ai]
            psum = 0
            for i in range(m + 1, 0, -1):
                sgn = -1 if i % 2 else 1
                if apar and psum:
                    sgn = -sgn
                yw = ws[:i - 1] + (ai,) + ws[i - 1:]
                add(yw + (z, t), sgn * c * val)
                if i > 1:
                    psum ^= ws_par[i - 2]

        # 3. module terms: inserted slot acts on the value
        for ai, mat in rho_words:
            col = mat.get(t)
            if not col:
                continue
            apar = wpar[ai]
            psum = fpar
            for i in range(1, m + 2):
                sgn = 1 if i % 2 else -1
                if apar and psum:
                    sgn = -sgn
                yw = ws[:i - 1] + (ai,) + ws[i - 1:]
                for s, c in col.items():
                    add(yw + (b, s), sgn * c * val)
                if i <= m:
                    psum ^= ws_par[i - 1]

        # 4. closing term: f's algebra slot becomes a letter of the last wedge
        base4 = -1 if m % 2 else 1
        head = fpar
        for p in ws_par:
            head ^= p
        for (ui, pos) in occ.get(b, ()):
            uword = ctx.wedge.words[ui]
            prefix = 0
            for i in uword[:pos]:
                prefix ^= ctx.par[i]
            sgn_main = base4 if not (head and prefix) else -base4
            for z in range(ctx.d):
                sb, pexp, combo = ctx.mixed(ui, pos, z)
                if not combo:
                    continue
                sgn = sgn_main * sb
                if tpar[t] and pexp:
                    sgn = -sgn
                for (word, s2) in combo:
                    col = ctx.rho.colmat(word).get(t)
                    if not col:
                        continue
                    for s, c in col.items():
                        add(ws + (ui, z, s), sgn * s2 * c * val)

    return Cochain(f.algebra, f.rho, m + 1, fpar, out)


# ---------------------------------------------------------------------------
# coefficient bases and matrices
# ---------------------------------------------------------------------------

def cochain_keys(rho: Representation, m: int, parity: int) -> list[Key]:
    """Deterministic (lexicographic) coefficient basis of the parity block."""
    ctx = _context(rho)
    keys: list[Key] = []
    nw = len(ctx.wedge.words)
    for ws in product(range(nw), repeat=m):
        p = parity
        for w in ws:
            p ^= ctx.wpar[w]
        for z in range(ctx.d):
            want = p ^ ctx.par[z]
            for t in range(len(ctx.tpar)):
                if ctx.tpar[t] == want:
                    keys.append(ws + (z, t))
    return keys


def basis_cochain(rho: Representation, m: int, parity: int, key: Key) -> Cochain:
    return Cochain(rho.algebra, rho, m, parity, {key: 1})


@dataclass
class CoboundaryMatrix:
    """Exact matrix of the coboundary on one parity block, stored by columns."""

    rho: Representation
    m: int
    parity: int
    domain_keys: list[Key]
    columns: list[dict[Key, Scalar]]

    def rank(self) -> int:
        return len(rref([dict(c) for c in self.columns]))

    def kernel(self) -> list[Vec]:
        """Kernel in domain coordinates (canonical echelon basis)."""
        transposed: dict[Key, Vec] = {}
        for j, col in enumerate(self.columns):
            for key, c in col.items():
                transposed.setdefault(key, {})[j] = c
        return kernel_basis(list(transposed.values()), len(self.columns))

    def apply(self, coeffs_in_domain: Vec) -> dict[Key, Scalar]:
        out: dict[Key, Scalar] = {}
        for j, c in coeffs_in_domain.items():
            for key, x in self.columns[j].items():
                v = out.get(key, 0) + c * x
                if v == 0:
                    out.pop(key, None)
                else:
                    out[key] = v
        return out


def coboundary_matrix(rho: Representation, m: int, parity: int
                      ) -> CoboundaryMatrix:
    keys = cochain_keys(rho, m, parity)
    cols = [coboundary(basis_cochain(rho, m, parity, k)).coeffs for k in keys]
    return CoboundaryMatrix(rho, m, parity, keys, cols)


# ---------------------------------------------------------------------------
# wedge compatibility (the trailing "wedge with the algebra slot" condition)
# ---------------------------------------------------------------------------

def _full_wedge(rho: Representation) -> WedgeBasis:
    return WedgeBasis(rho.algebra.space, rho.algebra.n)


def _unwedge_positions(ctx: _CoboundaryContext, nword: Word
                       ) -> list[tuple[int, int, int]]:
    """Per letter position: (wedge word without it, that letter, resort sign)."""
    out = []
    for k in range(len(nword)):
        letters = nword[:k] + nword[k + 1:]
        cz = canonicalize_word(letters + (nword[k],), ctx.par)
        assert cz is not None and cz[1] == nword
        out.append((ctx.wedge.index(letters), nword[k], cz[0]))
    return out


def _unwedge_pairs(ctx: _CoboundaryContext, nword: Word
                   ) -> dict[tuple[int, int], int]:
    """Distinct (wedge word, algebra slot) decompositions with their signs."""
    return {(wi, b): sgn for wi, b, sgn in _unwedge_positions(ctx, nword)}


def project_wedge(f: Cochain) -> Cochain:
    """Super-antisymmetrization of the last wedge slot against the algebra slot.

    Idempotent; fixed points are exactly the cochains that factor through the
    full degree-n super-exterior power in their trailing block.
    """
    if f.m == 0:
        return f.copy()
    ctx = _context(f.rho)
    n = ctx.n
    m = f.m
    # omega(v) = (1/n) sum_k sign_k f(prefix, v minus letter k, letter k)
    omega: dict[tuple, Scalar] = {}
    candidates: set[tuple] = set()
    for key in f.coeffs:
        ws, u, b, t = key[:m - 1], key[m - 1], key[m], key[m + 1]
        cz = canonicalize_word(ctx.wedge.words[u] + (b,), ctx.par)
        if cz is not None:
            candidates.add((ws, cz[1], t))
    inv_n = Fraction(1, n)
    out: dict[Key, Scalar] = {}
    for (ws, v, t) in candidates:
        # averaged value: positions count with multiplicity (repeated odd letters)
        total: Scalar = 0
        for wi, b, sgn in _unwedge_positions(ctx, v):
            c = f.coeffs.get(ws + (wi, b, t))
            if c:
                total += sgn * c
        if total == 0:
            continue
        val = inv_n * total
        for (wi, b), sgn in _unwedge_pairs(ctx, v).items():
            key = ws + (wi, b, t)
            cur = out.get(key, 0) + sgn * val
            if cur == 0:
                out.pop(key, None)
            else:
                out[key] = cur
    return Cochain(f.algebra, f.rho, m, f.parity, out)


def is_wedge_compatible(f: Cochain) -> bool:
    return project_wedge(f) == f


def wedge_parameter_keys(rho: Representation, m: int, parity: int) -> list[Key]:
    """Coefficient basis (prefix words, degree-n word, target) of the subcomplex."""
    if m < 1:
        raise ValueError("the wedge-compatible parameterization needs m >= 1")
    ctx = _context(rho)
    full = _full_wedge(rho)
    keys: list[Key] = []
    nw = len(ctx.wedge.words)
    for ws in product(range(nw), repeat=m - 1):
        p = parity
        for w in ws:
            p ^= ctx.wpar[w]
        for vi, v in enumerate(full.words):
            want = p ^ full.parities[vi]
            for t in range(len(ctx.tpar)):
                if ctx.tpar[t] == want:
                    keys.append(ws + (vi, t))
    return keys


def wedge_basis_cochain(rho: Representation, m: int, parity: int, key: Key
                        ) -> Cochain:
    """The wedge-compatible cochain with a single degree-n coefficient."""
    ctx = _context(rho)
    full = _full_wedge(rho)
    ws, vi, t = key[:m - 1], key[m - 1], key[m]
    coeffs: dict[Key, Scalar] = {}
    for (wi, b), sgn in _unwedge_pairs(ctx, full.words[vi]).items():
        coeffs[ws + (wi, b, t)] = sgn
    return Cochain(rho.algebra, rho, m, parity, coeffs)


def cochain_from_nword_values(rho: Representation, values: dict[Word, Vec],
                              parity: int = 0) -> Cochain:
    """Wedge-compatible degree-1 cochain from values on canonical n-words."""
    ctx = _context(rho)
    coeffs: dict[Key, Scalar] = {}
    for nword, val in values.items():
        for (wi, b), sgn in _unwedge_pairs(ctx, nword).items():
            for t, c in val.items():
                if c != 0:
                    coeffs[(wi, b, t)] = sgn * c
    return Cochain(rho.algebra, rho, 1, parity, coeffs)


def nword_values(f: Cochain) -> dict[Word, Vec]:
    """Values of a wedge-compatible degree-1 cochain on canonical n-words."""
    if f.m != 1:
        raise DegreeMismatchError("n-word values apply to degree-1 cochains")
    ctx = _context(f.rho)
    out: dict[Word, Vec] = {}
    for (wi, b, t), c in f.coeffs.items():
        cz = canonicalize_word(ctx.wedge.words[wi] + (b,), ctx.par)
        if cz is None:
            continue
        sgn, nword = cz
        out.setdefault(nword, {})[t] = sgn * c
    return out


# ---------------------------------------------------------------------------
# dimensions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CohomologyDims:
    m: int
    parity: int
    wedge_compatible: bool
    dim_cochains: int
    dim_cocycles: int
    dim_coboundaries: int

    @property
    def dim_cohomology(self) -> int:
        return self.dim_cocycles - self.dim_coboundaries


def cohomology_dims(rho: Representation, m: int, parity: int,
                    wedge_compatible: bool = False) -> CohomologyDims:
    """Exact dimensions of cochains, cocycles, coboundaries and their quotient.

    With wedge_compatible=True the complex is restricted to cochains whose
    trailing block factors through the degree-n super-exterior power (degree 0
    is unrestricted); the default is the full tensor complex.
    """
    if m < 0:
        raise ValueError("degree must be nonnegative")
    if not wedge_compatible or m == 0:
        keys = cochain_keys(rho, m, parity)
        dim_c = len(keys)
        rank_m = len(rref(
            [coboundary(basis_cochain(rho, m, parity, k)).coeffs for k in keys]))
        dim_z = dim_c - rank_m
        dim_b = 0
        if m >= 1:
            prev = cochain_keys(rho, m - 1, parity)
            dim_b = len(rref(
                [coboundary(basis_cochain(rho, m - 1, parity, k)).coeffs
                 for k in prev]))
        return CohomologyDims(m, parity, wedge_compatible, dim_c, dim_z, dim_b)

    keys = wedge_parameter_keys(rho, m, parity)
    dim_c = len(keys)
    rank_m = len(rref(
        [coboundary(wedge_basis_cochain(rho, m, parity, k)).coeffs
         for k in keys]))
    dim_z = dim_c - rank_m
    if m == 1:
        prev = cochain_keys(rho, 0, parity)
        dim_b = len(rref(
            [coboundary(basis_cochain(rho, 0, parity, k)).coeffs
             for k in prev]))
    else:
        prev = wedge_parameter_keys(rho, m - 1, parity)
        dim_b = len(rref(
            [coboundary(wedge_basis_cochain(rho, m - 1, parity, k)).coeffs
             for k in prev]))
    return CohomologyDims(m, parity, wedge_compatible, dim_c, dim_z, dim_b)


def wedge_cocycle_basis(rho: Representation, parity: int = 0) -> list[Cochain]:
    """Canonical basis of the wedge-compatible degree-1 cocycle space."""
    keys = wedge_parameter_keys(rho, 1, parity)
    gens = [wedge_basis_cochain(rho, 1, parity, k) for k in keys]
    cols = [coboundary(f).coeffs for f in gens]
    transposed: dict[Key, Vec] = {}
    for j, col in enumerate(cols):
        for key, c in col.items():
            transposed.setdefault(key, {})[j] = c
    out = []
    for combo in kernel_basis(list(transposed.values()), len(gens)):
        f = Cochain(rho.algebra, rho, 1, parity, {})
        for j, c in combo.items():
            f = f + gens[j].scale(c)
        out.append(f)
    return out
