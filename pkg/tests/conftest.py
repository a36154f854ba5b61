import numpy as np
import pytest

from centroid_lab.bodies import cross_polytope, cube, regular_polygon


@pytest.fixture(scope="session")
def square():
    return cube(2)


@pytest.fixture(scope="session")
def cube3():
    return cube(3)


@pytest.fixture(scope="session")
def hexagon():
    return regular_polygon(6)


@pytest.fixture(scope="session")
def cross2():
    return cross_polytope(2)


@pytest.fixture(scope="session")
def octahedron():
    return cross_polytope(3)

