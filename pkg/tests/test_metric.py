import random
from fractions import Fraction

import pytest

from nlsa.algebra import (NLieSuperalgebra, direct_sum, is_graded_ideal,
                          series)
from nlsa.cohomology import coboundary
from nlsa.fixtures import abelian, l1
from nlsa.linalg import (GradedSubspace, GradedVectorSpace, unit_vec,
                         vec_add_scaled)
from nlsa.metric import (BilinearForm, MetricAlgebra,
                         NonSquareScalarError, NotACocycleError,
                         NotCyclicError, centralizer_duality,
                         cyclic_cochain_from_form, cyclic_cocycle_basis,
                         equivalence_isomorphism_columns, extend_by_line,
                         form_properties, induced_form_gram,
                         is_cyclic, isotropic_complement,
                         isotropic_ideal_abelian_check,
                         maximal_isotropic_stable, nilpotent_pipeline,
                         reconstruct_tstar, tstar_equivalence, tstar_extension,
                         tstar_length_report, verify_isometric_isomorphism,
                         zero_cocycle)
from nlsa.representation import cached_coadjoint
from nlsa.wedge import WedgeBasis


def _sampled_cyclic(g, count, seed):
    """Deterministic nonzero integer combinations of the cyclic cocycle basis."""
    basis = cyclic_cocycle_basis(g)
    rng = random.Random(seed)
    out = []
    guard = 0
    while len(out) < count and basis and guard < 200:
        guard += 1
        f = zero_cocycle(g)
        for b in basis:
            c = rng.randint(-2, 2)
            if c:
                f = f + b.scale(c)
        if not f.is_zero():
            out.append(f)
    return out


# -- form diagnostics --------------------------------------------------------

def test_form_properties_tstar_hyperbolic(M1):
    assert M1.total.check().all_ok


def test_zero_form_properties(L1):
    zero = BilinearForm(L1.space, tuple((0,) * 4 for _ in range(4)))
    props = form_properties(L1, zero)
    assert props.supersymmetric and props.invariant and props.consistent
    assert not props.nondegenerate


def test_identity_gram_on_mixed_space():
    g = abelian(1, 1, 2)
    ident = BilinearForm(g.space, ((1, 0), (0, 1)))
    props = form_properties(g, ident)
    # mixed block zero: consistent; odd-odd symmetric nonzero: not supersym.
    assert props.consistent
    assert not props.supersymmetric

    off = BilinearForm(g.space, ((1, 1), (1, 1)))
    assert not form_properties(g, off).consistent


# -- cyclicity ---------------------------------------------------------------

def test_cyclic_zero(L1):
    assert is_cyclic(L1, zero_cocycle(L1))


def test_cyclic_counterexample(L1):
    rho = cached_coadjoint(L1)
    w = WedgeBasis(L1.space, 2)
    from nlsa.cohomology import Cochain

    theta = Cochain(L1, rho, 1, 0, {(w.index((0, 1)), 2, 2): 1})
    assert not is_cyclic(L1, theta)  # fails against y = z = e3


def test_symmetrized_form_is_cyclic(zoo):
    rng = random.Random(23)
    for g in zoo.values():
        big = WedgeBasis(g.space, g.n + 1)
        words = [w for i, w in enumerate(big.words) if big.parities[i] == 0]
        if not words:
            continue
        omega = {w: rng.randint(-3, 3) for w in words}
        theta = cyclic_cochain_from_form(g, omega)
        assert is_cyclic(g, theta)
        from nlsa.cohomology import is_wedge_compatible

        assert is_wedge_compatible(theta)


# -- T*-extension construction ------------------------------------------------

def test_tstar_trivial_of_l1(M1):
    g = M1.total.algebra
    assert g.dim == 8
    sr = series(g)
    assert sr.nilpotent_length == 2
    assert M1.theta.is_zero()


def test_tstar_of_abelian_is_abelian_metric():
    for (p, q) in ((1, 0), (2, 1)):
        ext = tstar_extension(abelian(p, q, 3), None)
        assert ext.total.algebra.constants == {}
        assert ext.total.check().all_ok


def test_tstar_of_l2(M2):
    g = M2.total.algebra
    assert (g.space.dim_even, g.space.dim_odd) == (4, 4)
    assert g.check_axioms().ok


def test_tstar_gates(L1):
    rho = cached_coadjoint(L1)
    from nlsa.cohomology import Cochain

    w = WedgeBasis(L1.space, 2)
    ragged = Cochain(L1, rho, 1, 0, {(w.index((0, 1)), 2, 2): 1})
    with pytest.raises((NotACocycleError, NotCyclicError)):
        tstar_extension(L1, ragged)


def test_tstar_metric_for_sampled_cyclic_cocycles(zoo):
    for name, g in zoo.items():
        for theta in _sampled_cyclic(g, 2, seed=5):
            ext = tstar_extension(g, theta)
            assert ext.total.check().all_ok, name


def test_dual_block_is_lagrangian_abelian_ideal(M1, M2):
    for ext in (M1, M2):
        dual = ext.dual_subspace()
        rep = isotropic_ideal_abelian_check(ext.total, dual)
        assert rep.is_ideal and rep.is_abelian and rep.self_perpendicular


# -- length bounds -------------------------------------------------------------

def test_length_report_trivial_theta(L1, L2):
    for g, k in ((L1, 2), (L2, 2)):
        rep = tstar_length_report(g, None)
        assert rep.base_nilpotent == k
        assert rep.total_nilpotent == k
        assert rep.trivial_theta_exact
        assert rep.ok


def test_length_report_sampled_thetas(L1):
    for theta in _sampled_cyclic(L1, 3, seed=9):
        rep = tstar_length_report(L1, theta)
        assert rep.solvable_bound_ok and rep.nilpotent_bound_ok
        assert rep.total_solvable in (2, 3)


def test_tstar_direct_sum_decomposition(L1):
    g = direct_sum(L1, abelian(1, 0, 3))
    rep = tstar_length_report(g, None, summand_dims=(4, 1))
    assert rep.summands_are_ideals
    assert rep.ok


# -- equivalence ---------------------------------------------------------------

def test_equivalence_reflexive(L1):
    theta = _sampled_cyclic(L1, 1, seed=1)[0]
    res = tstar_equivalence(L1, theta, theta)
    assert res.equivalent and res.isometric
    assert res.theta_prime.is_zero()
    assert all(c == 0 for row in res.induced_gram for c in row)


def test_equivalence_shifted_and_isomorphism(L1):
    from nlsa.cohomology import Cochain, cochain_keys

    rho = cached_coadjoint(L1)
    theta1 = _sampled_cyclic(L1, 1, seed=2)[0]
    keys0 = cochain_keys(rho, 0, 0)
    tp = Cochain(L1, rho, 0, 0, {keys0[1]: 2, keys0[6]: -1})
    dtp = coboundary(tp)
    theta2_coeffs = dict(theta1.coeffs)
    for k, c in dtp.coeffs.items():
        theta2_coeffs[k] = theta2_coeffs.get(k, 0) + c
    theta2 = Cochain(L1, rho, 1, 0, theta2_coeffs)

    res = tstar_equivalence(L1, theta2, theta1)
    assert res.equivalent
    assert coboundary(res.theta_prime).coeffs == dtp.coeffs

    gram = induced_form_gram(L1, res.theta_prime)
    form = BilinearForm(L1.space, gram)
    props = form_properties(L1, form)
    assert props.supersymmetric and props.invariant and props.consistent

    # the shift map x + f -> x + theta'(x) + f intertwines the brackets when
    # both twists define algebras; verify when theta2 is cyclic as well
    if is_cyclic(L1, theta2):
        ext1 = tstar_extension(L1, theta2)
        ext2 = tstar_extension(L1, theta1)
        cols = equivalence_isomorphism_columns(L1, res.theta_prime)
        h1, h2 = ext1.total.algebra, ext2.total.algebra

        def phi(v):
            out = {}
            for i, c in v.items():
                vec_add_scaled(out, cols[i], c)
            return out

        for key in WedgeBasis(h1.space, 3).words:
            lhs = phi(h1.bracket_indices(key))
            rhs = h2.bracket(*[cols[i] for i in key])
            assert lhs == rhs


def test_inequivalent_certificate(L1):
    # the cyclic cocycle space of L1 is 1-dimensional and not a coboundary
    theta = cyclic_cocycle_basis(L1)[0]
    res = tstar_equivalence(L1, theta, zero_cocycle(L1))
    assert not res.equivalent
    assert res.theta_prime is None and not res.isometric


# -- Lagrangian lemma -----------------------------------------------------------

def test_lagrangian_lemma_on_m1(M1):
    rep = isotropic_ideal_abelian_check(M1.total, M1.dual_subspace())
    assert rep.equivalence_holds and rep.is_ideal and rep.is_abelian

    # a non-ideal isotropic half-dimensional subspace: both sides false
    # ([e1,e2,e3] = e4 escapes span{e1,e2,e3,e4*})
    g = M1.total.algebra
    rows = [unit_vec(0), unit_vec(1), unit_vec(2), unit_vec(7)]
    sub = GradedSubspace(g.space, rows)
    rep2 = isotropic_ideal_abelian_check(M1.total, sub)
    assert not rep2.is_ideal and not rep2.is_abelian
    assert rep2.equivalence_holds


def test_lagrangian_lemma_abelian_case():
    ext = tstar_extension(abelian(2, 0, 3), None)
    lag = GradedSubspace(ext.total.algebra.space, [unit_vec(0), unit_vec(1)])
    rep = isotropic_ideal_abelian_check(ext.total, lag)
    assert rep.is_ideal and rep.is_abelian and rep.equivalence_holds


# -- isotropic complements -------------------------------------------------------

def test_isotropic_complement_of_dual_block(M1):
    comp = isotropic_complement(M1.total, M1.dual_subspace())
    assert comp == [unit_vec(i) for i in range(4)]


def test_isotropic_complement_hyperbolic_plane_formula():
    space = GradedVectorSpace(("e1", "e2"), (0, 0))
    g = NLieSuperalgebra(space, 2, {}, name="plane")
    gram = ((0, 1), (1, Fraction(3)))  # <e1,e2> = 1, <e2,e2> = 3
    m = MetricAlgebra(g, BilinearForm(space, gram))
    ideal = GradedSubspace(space, [unit_vec(0)])
    comp = isotropic_complement(m, ideal)
    # e2 - (<e2,e2> / (2<e2,e1>)) e1
    assert comp == [{1: 1, 0: Fraction(-3, 2)}]
    assert m.form.evaluate(comp[0], comp[0]) == 0


def test_isotropic_complement_is_self_perpendicular(M1, M2):
    for ext in (M1, M2):
        comp = isotropic_complement(ext.total, ext.dual_subspace())
        sub = GradedSubspace(ext.total.algebra.space, comp)
        assert ext.total.form.orthogonal(sub) == sub


# -- reconstruction ---------------------------------------------------------------

def test_reconstruct_round_trip_trivial(M1, M2):
    for ext in (M1, M2):
        rec = reconstruct_tstar(ext.total, ext.dual_subspace())
        assert rec.theta.is_zero()
        assert rec.quotient.constants == ext.base.constants
        assert verify_isometric_isomorphism(
            ext.total, rec.extension.total, rec.phi_columns)


def test_reconstruct_round_trip_sampled_thetas(zoo):
    for name, g in zoo.items():
        if g.dim > 4:
            continue
        for theta in _sampled_cyclic(g, 2, seed=13):
            ext = tstar_extension(g, theta)
            rec = reconstruct_tstar(ext.total, ext.dual_subspace())
            assert rec.quotient.constants == g.constants, name
            assert rec.theta.coeffs == theta.coeffs, name
            assert verify_isometric_isomorphism(
                ext.total, rec.extension.total, rec.phi_columns)


def test_reconstruct_with_other_ideal(M1):
    g = M1.total.algebra
    ideal = GradedSubspace(
        g.space, [unit_vec(3), unit_vec(4), unit_vec(5), unit_vec(6)])
    rec = reconstruct_tstar(M1.total, ideal)
    assert not rec.theta.is_zero()
    assert verify_isometric_isomorphism(
        M1.total, rec.extension.total, rec.phi_columns)


# -- maximal isotropic stable subspaces --------------------------------------------

def test_maximal_isotropic_from_zero(M1, M2):
    for ext, dim in ((M1, 4), (M2, 4)):
        g = ext.total.algebra
        w = maximal_isotropic_stable(ext.total, GradedSubspace.zero(g.space))
        assert w.dim == dim
        assert ext.total.form.is_isotropic(w)
        assert is_graded_ideal(g, w)


def test_maximal_isotropic_hyperbolic_abelian_tiebreak():
    space = GradedVectorSpace(("e1", "e2"), (0, 0))
    g = NLieSuperalgebra(space, 2, {}, name="hyp")
    m = MetricAlgebra(g, BilinearForm(space, ((0, 1), (1, 0))))
    w = maximal_isotropic_stable(m, GradedSubspace.zero(space))
    assert w.rows == [unit_vec(0)]  # first kernel vector wins the tie-break


def test_maximal_isotropic_keeps_maximal_seed(M1):
    g = M1.total.algebra
    seed = GradedSubspace(
        g.space, [unit_vec(3), unit_vec(4), unit_vec(5), unit_vec(6)])
    w = maximal_isotropic_stable(M1.total, seed)
    assert w == seed


def test_maximal_isotropic_requires_square_root():
    space = GradedVectorSpace(("e1", "e2"), (0, 0))
    g = NLieSuperalgebra(space, 2, {}, name="aniso")
    m = MetricAlgebra(g, BilinearForm(space, ((1, 0), (0, 1))))
    with pytest.raises(NonSquareScalarError):
        maximal_isotropic_stable(m, GradedSubspace.zero(space))


def test_maximal_isotropic_case2_with_rational_root():
    # diag(1, -1): the pair solve needs sqrt(b^2 - ac) = sqrt(1), rational
    space = GradedVectorSpace(("e1", "e2"), (0, 0))
    g = NLieSuperalgebra(space, 2, {}, name="split")
    m = MetricAlgebra(g, BilinearForm(space, ((1, 0), (0, -1))))
    w = maximal_isotropic_stable(m, GradedSubspace.zero(space))
    assert w.dim == 1
    assert m.form.is_isotropic(w)


# -- odd dimension -----------------------------------------------------------------

def _m1_plus_anisotropic_line(M1):
    base = M1.total.algebra
    space = GradedVectorSpace(base.space.names + ("u",),
                              base.space.parities + (0,))
    g9 = NLieSuperalgebra(space, 3, dict(base.constants), name="M1+line")
    gram = [list(r) + [0] for r in M1.total.form.gram]
    gram.append([0] * 8 + [-1])
    return MetricAlgebra(g9, BilinearForm(space, tuple(tuple(r) for r in gram)))


def test_extend_by_line(M1):
    m9 = _m1_plus_anisotropic_line(M1)
    assert m9.check().all_ok
    w = maximal_isotropic_stable(m9, GradedSubspace.zero(m9.algebra.space))
    assert w.dim == 4
    # odd-dimension postcondition: brackets push the perp into the subspace
    line = extend_by_line(m9, w)
    assert line.metric.dim == 10
    assert line.ideal.dim == 5
    assert line.metric.form.is_isotropic(line.ideal)
    assert is_graded_ideal(line.metric.algebra, line.ideal)

    # the old algebra is a nondegenerate codimension-1 ideal
    old = GradedSubspace(line.metric.algebra.space,
                         [unit_vec(i) for i in range(9)])
    assert is_graded_ideal(line.metric.algebra, old)

    # I-perp over I is abelian: brackets with two I-perp slots vanish
    from nlsa.algebra import brackets_with_two_slots_vanish

    perp = m9.form.orthogonal(w)
    assert brackets_with_two_slots_vanish(m9.algebra, perp, perp)

    # Phi: x + t*alpha -> x - t*z + I is a homomorphism onto g/I with
    # kernel the enlarged ideal
    gq = line.quotient
    cols = line.phi_to_quotient
    gbig = line.metric.algebra

    def phi(v):
        out = {}
        for i, c in v.items():
            vec_add_scaled(out, cols[i], c)
        return out

    for key in WedgeBasis(gbig.space, 3).words:
        lhs = phi(gbig.bracket_indices(key))
        rhs = gq.bracket(*[cols[i] for i in key])
        assert lhs == rhs
    for row in line.ideal.rows:
        assert phi(row) == {}

    rec = reconstruct_tstar(line.metric, line.ideal)
    assert verify_isometric_isomorphism(
        line.metric, rec.extension.total, rec.phi_columns)


# -- duality and pipeline -------------------------------------------------------------

def test_centralizer_duality(M1, M2):
    for ext in (M1, M2):
        rep = centralizer_duality(ext.total)
        assert rep.ok


def test_pipeline_m1(M1):
    res = nilpotent_pipeline(M1.total)
    assert res.nilpotent_length == 2
    assert res.bound == 1
    assert res.quotient_length == 1
    assert res.bound_ok and res.isometry_verified
    assert series(res.reconstruction.quotient).nilpotent_length == 1


def test_pipeline_m2(M2):
    res = nilpotent_pipeline(M2.total)
    assert res.quotient_length <= res.bound == 1
    assert res.isometry_verified
    q = res.reconstruction.quotient
    assert (q.space.dim_even, q.space.dim_odd) == (2, 2)


def test_pipeline_abelian_hyperbolic():
    ext = tstar_extension(abelian(1, 1, 2), None)
    res = nilpotent_pipeline(ext.total)
    assert res.nilpotent_length == 1
    assert res.canonical_ideal.dim == 0
    assert res.quotient_length <= res.bound == 1
    assert res.isometry_verified


def test_pipeline_odd_dimension(M1):
    m9 = _m1_plus_anisotropic_line(M1)
    res = nilpotent_pipeline(m9)
    assert res.used_line_extension
    assert res.isometry_verified
    assert res.quotient_length <= res.bound


def test_pipeline_on_twisted_extension():
    g = l1()
    theta = _sampled_cyclic(g, 1, seed=31)[0]
    ext = tstar_extension(g, theta)
    res = nilpotent_pipeline(ext.total)
    assert res.isometry_verified
    assert res.quotient_length <= res.bound


def _sl2():
    # a classical simple Lie algebra over the rationals, with its invariant
    # trace-like form: metric but not nilpotent
    space = GradedVectorSpace(("h", "e", "f"), (0, 0, 0))
    g = NLieSuperalgebra(space, 2, {
        (0, 1): {1: 2},     # [h,e] = 2e
        (0, 2): {2: -2},    # [h,f] = -2f
        (1, 2): {0: 1},     # [e,f] = h
    }, name="sl2")
    form = BilinearForm(space, ((2, 0, 0), (0, 0, 1), (0, 1, 0)))
    return MetricAlgebra(g, form)


def test_simple_algebra_is_metric_but_not_nilpotent():
    m = _sl2()
    assert m.algebra.check_axioms().ok
    assert m.check().all_ok
    sr = series(m.algebra)
    assert sr.nilpotent_length is None and sr.solvable_length is None
    with pytest.raises(Exception):
        nilpotent_pipeline(m)
    with pytest.raises(Exception):
        maximal_isotropic_stable(
            m, GradedSubspace.zero(m.algebra.space))


def test_extend_by_line_rejects_even_dimension(M1):
    from nlsa.metric import EvenDimensionError

    with pytest.raises(EvenDimensionError):
        extend_by_line(M1.total, M1.dual_subspace())


def test_pipeline_is_deterministic(M1, M2):
    # canonical echelon tie-breaking everywhere: bytes of the result repeat
    for ext in (M1, M2):
        a = nilpotent_pipeline(ext.total)
        b = nilpotent_pipeline(ext.total)
        assert a.maximal_ideal.rows == b.maximal_ideal.rows
        assert a.canonical_ideal.rows == b.canonical_ideal.rows
        assert a.reconstruction.theta.coeffs == b.reconstruction.theta.coeffs
        assert a.reconstruction.phi_columns == b.reconstruction.phi_columns


def test_double_orthogonal_on_fixture_forms(M1, M2):
    rng = random.Random(41)
    for ext in (M1, M2):
        m = ext.total
        space = m.algebra.space
        gram = [list(r) for r in m.form.gram]
        from nlsa.linalg import orthogonal_complement

        for _ in range(15):
            par = rng.choice([0, 1])
            idxs = [i for i in range(space.dim) if space.parities[i] == par]
            rows = []
            for _ in range(rng.randint(0, 4)):
                row = {i: rng.randint(-2, 2) for i in idxs
                       if rng.random() < 0.6}
                rows.append(row)
            w = GradedSubspace(space, rows, split_by_parity=True)
            perp = orthogonal_complement(gram, w)
            assert w.dim + perp.dim == space.dim
            assert orthogonal_complement(gram, perp) == w
