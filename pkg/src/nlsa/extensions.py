"""Abelian extensions from degree-1 cocycles, and cocycle extraction.

An extension datum is a base algebra, an abelian fiber carried as a module,
and a closed wedge-compatible degree-1 cochain of parity 0 valued in the
fiber.  Building produces the algebra on base + fiber whose bracket is the
semidirect one plus the cocycle on pure-base slots; extracting recovers the
cocycle from a chosen homogeneous section of the projection.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import NLieSuperalgebra, is_abelian_ideal, quotient
from .cohomology import (Cochain, coboundary, cochain_from_nword_values,
                         is_wedge_compatible)
from .linalg import GradedSubspace, Vec, unit_vec, vec_add_scaled
from .representation import (InvalidRepresentationError, Representation,
                             check_representation, semidirect)
from .scalars import Scalar
from .wedge import WedgeBasis


class NotACocycleError(ValueError):
    pass


class WrongParityError(ValueError):
    pass


class NotAbelianIdealError(ValueError):
    pass


class NotASectionError(ValueError):
    pass


@dataclass
class ExtensionData:
    base: NLieSuperalgebra
    action: Representation          # of the base on the fiber space
    cocycle: Cochain                # m=1, parity 0, wedge-compatible, closed

    def __post_init__(self):
        if self.action.algebra is not self.base:
            raise ValueError("action must represent the base algebra")
        f = self.cocycle
        if (f.m != 1 or f.algebra.space != self.base.space
                or f.rho.target != self.action.target):
            raise ValueError("cocycle must be a degree-1 cochain over the "
                             "given action")


def build_extension(data: ExtensionData) -> NLieSuperalgebra:
    """Algebra on base + fiber; the fiber embeds as an abelian graded ideal.

    Verifies the gates exactly: parity 0, wedge compatibility, closedness,
    and a valid action (the construction is only an algebra under those).
    """
    f = data.cocycle
    if f.parity != 0:
        raise WrongParityError("the cocycle must have parity 0")
    if not is_wedge_compatible(f):
        raise NotACocycleError(
            "the cocycle does not factor through the degree-n wedge")
    if not coboundary(f).is_zero():
        raise NotACocycleError("the cochain is not closed")
    report = check_representation(data.action)
    if not report.ok:
        raise InvalidRepresentationError(
            f"action fails {report.failures[0].axiom} at "
            f"{report.failures[0].witness}")

    g = semidirect(data.base, data.action, check=False)
    d = data.base.dim
    dv = len(data.action.target.names)
    constants = dict(g.constants)
    wedge = WedgeBasis(data.base.space, data.base.n - 1)
    for nword in WedgeBasis(data.base.space, data.base.n).words:
        u = wedge.index(nword[:-1])
        b = nword[-1]
        add: Vec = {}
        for t in range(dv):
            c = f.coeffs.get((u, b, t))
            if c:
                add[d + t] = c
        if add:
            val = dict(constants.get(nword, {}))
            vec_add_scaled(val, add, 1)
            if val:
                constants[nword] = val
            else:
                constants.pop(nword, None)
    name = f"{data.base.name}.{data.action.kind}-ext" if data.base.name else ""
    return NLieSuperalgebra(g.space, g.n, constants, name=name)


def fiber_subspace(data: ExtensionData, total: NLieSuperalgebra
                   ) -> GradedSubspace:
    d = data.base.dim
    dv = len(data.action.target.names)
    return GradedSubspace(total.space, [unit_vec(d + i) for i in range(dv)])


def inclusion_columns(data: ExtensionData) -> list[Vec]:
    """Images of the fiber basis inside the built extension (the tail block)."""
    d = data.base.dim
    return [unit_vec(d + i) for i in range(len(data.action.target.names))]


def projection_rows(data: ExtensionData) -> list[Vec]:
    """Coordinate functionals of the projection onto the base (head block)."""
    return [unit_vec(i) for i in range(data.base.dim)]


def canonical_section(g: NLieSuperalgebra, ideal: GradedSubspace
                      ) -> list[Vec]:
    """The coordinate section: standard vectors at the ideal's non-pivots."""
    return [unit_vec(i) for i in ideal.complement_indices()]


def extract_cocycle(g: NLieSuperalgebra, ideal: GradedSubspace,
                    section: list[Vec] | None = None
                    ) -> tuple[NLieSuperalgebra, Representation, Cochain]:
    """Cocycle of an extension with respect to a section of the projection.

    Returns (quotient algebra, induced action on the ideal, cochain); the
    cochain measures the failure of the section to be a homomorphism:
    value(words, b) = bracket of lifted arguments minus the lift of the
    quotient bracket.
    """
    if not is_abelian_ideal(g, ideal):
        raise NotAbelianIdealError("the fiber must be an abelian graded ideal")
    base, proj = quotient(g, ideal)
    if section is None:
        section = canonical_section(g, ideal)
    if len(section) != base.dim:
        raise NotASectionError("section must lift every quotient basis vector")
    for k, v in enumerate(section):
        img = proj(v)
        if img != {k: 1}:
            raise NotASectionError(
                f"section of quotient vector {k} does not project back")
        if g.space.vector_parity(v) != base.space.parities[k]:
            raise NotASectionError("section must be homogeneous of degree 0")

    # ideal coordinates: the echelon rows are the module basis; rows that are
    # plain basis vectors keep their ambient names (round trips compare equal)
    fiber_rows = ideal.rows
    fiber_names = []
    for k, row in enumerate(fiber_rows):
        if len(row) == 1 and next(iter(row.values())) == 1:
            fiber_names.append(g.space.names[next(iter(row))])
        else:
            fiber_names.append(f"m{k+1}")
    fiber_par = tuple(g.space.vector_parity(r) for r in fiber_rows)
    from .linalg import GradedVectorSpace

    target = GradedVectorSpace(tuple(fiber_names), fiber_par)

    from .algebra import _coordinate_rows

    coords = _coordinate_rows(g.dim, section + list(fiber_rows))
    fiber_coords = coords[base.dim:]

    def to_fiber(v: Vec) -> Vec:
        out: Vec = {}
        for r, crow in enumerate(fiber_coords):
            s: Scalar = 0
            for i, c in v.items():
                x = crow.get(i)
                if x is not None:
                    s += x * c
            if s != 0:
                out[r] = s
        return out

    # induced action of base wedge words on the fiber
    wedge = WedgeBasis(base.space, base.n - 1)
    mats: dict[int, dict[int, Vec]] = {}
    for wi, w in enumerate(wedge.words):
        lifted = [section[i] for i in w]
        col: dict[int, Vec] = {}
        for r, fv in enumerate(fiber_rows):
            img = g.bracket(*lifted, fv)
            tf = to_fiber(img)
            if tf:
                col[r] = tf
        if col:
            mats[wi] = col
    action = Representation(base, target, mats, kind="section-induced")

    values: dict[tuple[int, ...], Vec] = {}
    for nword in WedgeBasis(base.space, base.n).words:
        lifted = [section[i] for i in nword]
        value = g.bracket(*lifted)
        qb = base.bracket_indices(nword)
        lift_qb: Vec = {}
        for i, c in qb.items():
            vec_add_scaled(lift_qb, section[i], c)
        vec_add_scaled(value, lift_qb, -1)
        tf = to_fiber(value)
        if tf:
            values[nword] = tf
    cocycle = cochain_from_nword_values(action, values)

    if not coboundary(cocycle).is_zero():
        raise NotACocycleError(
            "extraction produced a non-closed cochain; the input is not an "
            "extension by this abelian ideal")
    report = check_representation(action)
    if not report.ok:
        raise InvalidRepresentationError(
            f"induced action fails {report.failures[0].axiom}")
    return base, action, cocycle
