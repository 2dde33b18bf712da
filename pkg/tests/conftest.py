import pytest

from grcohom.semigroup import build_semigroup


def face_with(Q, gens):
    """The face whose generators (original coordinates) are exactly ``gens``."""
    want = {tuple(g) for g in gens}
    for F in Q.faces:
        if {Q.generators[i] for i in F.generator_indices} == want:
            return F
    raise LookupError(gens)


@pytest.fixture(scope="session")
def plane():
    return build_semigroup([(1, 0), (0, 1)])


@pytest.fixture(scope="session")
def cone3():
    return build_semigroup([(1, 0), (1, 1), (1, 2)])


@pytest.fixture(scope="session")
def even():
    return build_semigroup([(2, 0), (1, 1), (0, 2)])


@pytest.fixture(scope="session")
def numerical():
    return build_semigroup([(2,), (3,)])
