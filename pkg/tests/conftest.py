import pytest

from nlsa.fixtures import abelian, l1, l2, m1, m2, s1


@pytest.fixture(scope="session")
def zoo():
    from nlsa.fixtures import zoo as _zoo

    return _zoo()


@pytest.fixture(scope="session")
def metric_zoo():
    from nlsa.fixtures import metric_zoo as _mz

    return _mz()


@pytest.fixture(scope="session")
def L1():
    return l1()


@pytest.fixture(scope="session")
def S1():
    return s1()


@pytest.fixture(scope="session")
def L2():
    return l2()


@pytest.fixture(scope="session")
def M1():
    return m1()


@pytest.fixture(scope="session")
def M2():
    return m2()


@pytest.fixture(scope="session")
def AB22():
    return abelian(2, 2, 3)
