import pytest

from clonelab.finite_core import Universe, operation_from_callable, projection


@pytest.fixture(scope="session")
def u2():
    return Universe(2)


@pytest.fixture(scope="session")
def u3():
    return Universe(3)


@pytest.fixture(scope="session")
def gates(u2):
    """The standard Boolean operations used across the suite."""
    return {
        "and": operation_from_callable(u2, 2, lambda a, b: a & b),
        "or": operation_from_callable(u2, 2, lambda a, b: a | b),
        "xor": operation_from_callable(u2, 2, lambda a, b: a ^ b),
        "nand": operation_from_callable(u2, 2, lambda a, b: 1 - (a & b)),
        "not": operation_from_callable(u2, 1, lambda a: 1 - a),
        "id": projection(u2, 1, 0),
        "p1": projection(u2, 2, 0),
        "p2": projection(u2, 2, 1),
        "maj": operation_from_callable(
            u2, 3, lambda a, b, c: (a & b) | (a & c) | (b & c)
        ),
        "const0": operation_from_callable(u2, 1, lambda a: 0),
        "const1": operation_from_callable(u2, 1, lambda a: 1),
    }


@pytest.fixture(scope="session")
def dual_discriminator(u3):
    """q(x,y,z) = x if x = y else z, on a three-element universe."""
    return operation_from_callable(u3, 3, lambda x, y, z: x if x == y else z)
