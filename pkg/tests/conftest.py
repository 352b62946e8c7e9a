import pytest

from isotopy import groups
from isotopy.construction import build_example


BUILTIN_SMALL = {
    "C1": lambda: groups.cyclic(1),
    "C2": lambda: groups.cyclic(2),
    "C3": lambda: groups.cyclic(3),
    "C4": lambda: groups.cyclic(4),
    "C6": lambda: groups.cyclic(6),
    "C12": lambda: groups.cyclic(12),
    "D1": lambda: groups.dihedral(1),
    "D2": lambda: groups.dihedral(2),
    "D3": lambda: groups.dihedral(3),
    "D4": lambda: groups.dihedral(4),
    "D5": lambda: groups.dihedral(5),
    "D6": lambda: groups.dihedral(6),
    "S1": lambda: groups.symmetric(1),
    "S2": lambda: groups.symmetric(2),
    "S3": lambda: groups.symmetric(3),
    "A3": lambda: groups.alternating(3),
    "A4": lambda: groups.alternating(4),
    "Q8": groups.quaternion,
}


@pytest.fixture(scope="session")
def s3():
    return groups.symmetric(3)


@pytest.fixture(scope="session")
def q8():
    return groups.quaternion()


@pytest.fixture(scope="session")
def a5():
    return groups.alternating(5)


@pytest.fixture(scope="session")
def s3_bundle(s3):
    return build_example(s3)


@pytest.fixture(scope="session")
def a5_bundle(a5):
    return build_example(a5)
