import pytest

from coverkit import QuotientSpec, generate, make_quotient

pytest.register_assert_rewrite("tests.oracles")


@pytest.fixture(scope="session")
def patch44_r6():
    return generate(4, 4, 6)


@pytest.fixture(scope="session")
def patch44_r10():
    return generate(4, 4, 10)


@pytest.fixture(scope="session")
def patch63_r10():
    return generate(6, 3, 10)


@pytest.fixture(scope="session")
def patch45_r5():
    return generate(4, 5, 5)


@pytest.fixture(scope="session")
def torus57():
    return make_quotient(QuotientSpec("torus", 5, 7))


@pytest.fixture(scope="session")
def torus67():
    return make_quotient(QuotientSpec("torus", 6, 7))


@pytest.fixture(scope="session")
def klein66():
    return make_quotient(QuotientSpec("klein", 6, 6))


@pytest.fixture(scope="session")
def hex55():
    return make_quotient(QuotientSpec("hex_torus", 5, 5))
