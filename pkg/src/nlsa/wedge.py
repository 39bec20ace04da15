"""Super-exterior powers: canonical wedge words, bases, and fundamental objects.

Sign convention: swapping adjacent homogeneous factors x, y multiplies by
-(-1)^(|x||y|), so even factors square to zero while odd factors may repeat
(the super wedge of V is the exterior algebra on the even part tensored with
the symmetric algebra on the odd part).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from math import comb

from .linalg import GradedVectorSpace, Vec, vec_add_scaled
from .scalars import Scalar

Word = tuple[int, ...]


def canonicalize_word(indices, parities) -> tuple[int, Word] | None:
    """Sort a raw index tuple into the canonical word, tracking the super sign.

    Returns (sign, sorted tuple), or None when the word vanishes because an
    even index repeats.  Stable insertion sort: the sign is the product of
    -(-1)^(|a||b|) over the adjacent transpositions performed, which makes it
    independent of the sorting algorithm.
    """
    idx = list(indices)
    sign = 1
    for k in range(1, len(idx)):
        j = k
        while j > 0 and idx[j - 1] > idx[j]:
            if not (parities[idx[j - 1]] and parities[idx[j]]):
                sign = -sign
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            j -= 1
    for a, b in zip(idx, idx[1:]):
        if a == b and parities[a] == 0:
            return None
    return sign, tuple(idx)


def word_parity(word: Word, parities) -> int:
    p = 0
    for i in word:
        p ^= parities[i]
    return p


def expected_word_count(dim_even: int, dim_odd: int, k: int) -> int:
    """Closed form: sum_j C(even, j) * C(odd + (k-j) - 1, k-j)."""
    total = 0
    for j in range(k + 1):
        r = k - j
        if r == 0:
            multisets = 1
        elif dim_odd == 0:
            multisets = 0
        else:
            multisets = comb(dim_odd + r - 1, r)
        total += comb(dim_even, j) * multisets
    return total


@dataclass(frozen=True)
class WedgeBasis:
    """Canonical basis of the k-th super-exterior power, in lexicographic order."""

    space: GradedVectorSpace
    k: int
    words: tuple[Word, ...] = field(init=False)
    parities: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("wedge degree must be nonnegative")
        par = self.space.parities
        words = []
        for w in combinations_with_replacement(range(self.space.dim), self.k):
            ok = True
            for a, b in zip(w, w[1:]):
                if a == b and par[a] == 0:
                    ok = False
                    break
            if ok:
                words.append(w)
        object.__setattr__(self, "words", tuple(words))
        object.__setattr__(
            self, "parities", tuple(word_parity(w, par) for w in words))

    def __len__(self) -> int:
        return len(self.words)

    def index(self, word: Word) -> int:
        try:
            return self._index_map[word]
        except AttributeError:
            object.__setattr__(
                self, "_index_map", {w: i for i, w in enumerate(self.words)})
            return self._index_map[word]

    def word_name(self, i: int) -> str:
        names = self.space.names
        return "^".join(names[j] for j in self.words[i]) if self.words[i] else "1"


@dataclass
class FundamentalObject:
    """Element of the (n-1)-st super-exterior power, acting on the algebra."""

    basis: WedgeBasis
    coeffs: dict[int, Scalar]

    @classmethod
    def from_word(cls, basis: WedgeBasis, word: Word, coeff: Scalar = 1
                  ) -> "FundamentalObject":
        cz = canonicalize_word(word, basis.space.parities)
        if cz is None or coeff == 0:
            return cls(basis, {})
        sign, w = cz
        return cls(basis, {basis.index(w): sign * coeff})

    def parity(self) -> int | None:
        ps = {self.basis.parities[i] for i in self.coeffs}
        if len(ps) == 1:
            return ps.pop()
        return None

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        return (isinstance(other, FundamentalObject)
                and self.basis == other.basis and self.coeffs == other.coeffs)


def act(algebra, x: FundamentalObject, z: Vec) -> Vec:
    """The inner derivation: x1^...^x_{n-1} acting on z as the bracket with z last."""
    if x.basis.k != algebra.n - 1:
        raise ValueError("fundamental objects have wedge degree n-1")
    out: Vec = {}
    for wi, c in x.coeffs.items():
        word = x.basis.words[wi]
        for zi, zc in z.items():
            vec_add_scaled(out, algebra.bracket_indices(word + (zi,)), c * zc)
    return out


def compose_words(algebra, a: Word, b: Word) -> dict[Word, Scalar]:
    """Composition of two canonical words, as canonical words with coefficients.

    a o b = sum_i (-1)^(|a|(|b_1|+...+|b_{i-1}|)) b_1 ^ ... ^ (a.b_i) ^ ... .
    Treat the returned dict as read-only: results are cached on the algebra.
    """
    cache = getattr(algebra, "_compose_cache", None)
    if cache is None:
        cache = algebra._compose_cache = {}
    hit = cache.get((a, b))
    if hit is not None:
        return hit
    par = algebra.space.parities
    apar = word_parity(a, par)
    out: dict[Word, Scalar] = {}
    prefix = 0
    for i, bi in enumerate(b):
        acts = algebra.bracket_indices(a + (bi,))
        if acts:
            sgn_pref = -1 if (apar and prefix) else 1
            for t, c in acts.items():
                cz = canonicalize_word(b[:i] + (t,) + b[i + 1:], par)
                if cz is None:
                    continue
                s, w = cz
                val = out.get(w, 0) + sgn_pref * s * c
                if val == 0:
                    out.pop(w, None)
                else:
                    out[w] = val
        prefix ^= par[bi]
    cache[(a, b)] = out
    return out


def compose(algebra, x: FundamentalObject, y: FundamentalObject
            ) -> FundamentalObject:
    """Bilinear extension of the word composition; output is canonicalized."""
    if x.basis is not y.basis and x.basis != y.basis:
        raise ValueError("fundamental objects over different wedge bases")
    basis = x.basis
    coeffs: dict[int, Scalar] = {}
    for ai, ac in x.coeffs.items():
        for bi, bc in y.coeffs.items():
            for w, c in compose_words(algebra, basis.words[ai],
                                      basis.words[bi]).items():
                k = basis.index(w)
                val = coeffs.get(k, 0) + ac * bc * c
                if val == 0:
                    coeffs.pop(k, None)
                else:
                    coeffs[k] = val
    return FundamentalObject(basis, coeffs)
