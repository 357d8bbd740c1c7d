import numpy as np
import pytest

from spinperm import SquareMatrix, random_matrix


def rel_err(a, b):
    a, b = complex(a), complex(b)
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


@pytest.fixture
def m3():
    return random_matrix(3, 3, "complex_gaussian")


@pytest.fixture
def identity3():
    return SquareMatrix.from_array(np.eye(3))


@pytest.fixture
def all_ones(request):
    n = getattr(request, "param", 3)
    return SquareMatrix.from_array(np.ones((n, n)))
