"""The fixture zoo used throughout the tests and shipped as JSON files.

Every fixture is validated by check_axioms at build time; that check is the
oracle behind all derived expectations in the test suite.
"""

from __future__ import annotations

from .algebra import NLieSuperalgebra
from .linalg import GradedVectorSpace


def abelian(p: int, q: int, n: int, even_prefix: str = "a",
            odd_prefix: str = "b") -> NLieSuperalgebra:
    """Zero bracket on p even and q odd basis vectors."""
    names = tuple(f"{even_prefix}{i+1}" for i in range(p)) + tuple(
        f"{odd_prefix}{i+1}" for i in range(q))
    parities = (0,) * p + (1,) * q
    return NLieSuperalgebra(GradedVectorSpace(names, parities), n, {},
                            name=f"Ab({p}|{q};n={n})")


def l1() -> NLieSuperalgebra:
    """n=3, four even vectors, [e1,e2,e3] = e4."""
    space = GradedVectorSpace(("e1", "e2", "e3", "e4"), (0, 0, 0, 0))
    return NLieSuperalgebra(space, 3, {(0, 1, 2): {3: 1}}, name="L1")


def s1() -> NLieSuperalgebra:
    """n=2, one even and one odd vector, [f,f] = e."""
    space = GradedVectorSpace(("e", "f"), (0, 1))
    return NLieSuperalgebra(space, 2, {(1, 1): {0: 1}}, name="S1")


def l2() -> NLieSuperalgebra:
    """n=3, dimension (2|2), [e1,e2,f1] = f2."""
    space = GradedVectorSpace(("e1", "e2", "f1", "f2"), (0, 0, 1, 1))
    return NLieSuperalgebra(space, 3, {(0, 1, 2): {3: 1}}, name="L2")


def m1():
    """Trivial T*-extension of L1 (dimension 8, even)."""
    from .metric import tstar_extension

    return tstar_extension(l1(), None)


def m2():
    """Trivial T*-extension of L2 (dimension (4|4))."""
    from .metric import tstar_extension

    return tstar_extension(l2(), None)


def zoo() -> dict[str, NLieSuperalgebra]:
    """The six named fixtures; metric ones are the underlying algebras."""
    return {
        "Ab": abelian(2, 2, 3),
        "L1": l1(),
        "S1": s1(),
        "L2": l2(),
        "M1": m1().total.algebra,
        "M2": m2().total.algebra,
    }


def metric_zoo():
    """M1 and M2 as metric algebras (algebra + invariant form)."""
    return {"M1": m1().total, "M2": m2().total}
