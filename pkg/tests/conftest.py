import random

import pytest

from exactalg import det, int_matrix
from mmatrix import check_m_matrix
from pairing import make_pairing

RUNNING_L = [[2, -1, 1], [-1, 2, -1], [1, -1, 2]]
RUNNING_M = [[3, -1, -1], [-1, 3, -1], [-1, -1, 3]]

RUNNING_CRITICALS = {(4, -1, 4), (4, 0, 4), (5, 0, 5), (5, -1, 5)}
RUNNING_SUPERSTABLES = {(1, 0, 1), (1, 1, 1), (0, 0, 0), (2, 1, 2)}
RUNNING_PARALLELEPIPED = {(0, 0, 0), (0, 1, 0), (1, 0, 1), (2, -1, 2)}

# superstable -> critical of the same class
RUNNING_CLASS_PAIRS = {
    (0, 0, 0): (4, 0, 4),
    (1, 0, 1): (5, 0, 5),
    (1, 1, 1): (4, -1, 4),
    (2, 1, 2): (5, -1, 5),
}

K4_REDUCED = [[3, -1, -1], [-1, 3, -1], [-1, -1, 3]]
CYCLE3_REDUCED = [[2, -1], [-1, 2]]

IDENTITY_3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


@pytest.fixture(scope="session")
def running():
    return make_pairing(RUNNING_L, RUNNING_M)


@pytest.fixture(scope="session")
def running_identity():
    return make_pairing(RUNNING_L, IDENTITY_3)


@pytest.fixture(scope="session")
def k4_classical():
    return make_pairing(K4_REDUCED, K4_REDUCED)


@pytest.fixture(scope="session")
def cycle3_classical():
    return make_pairing(CYCLE3_REDUCED, CYCLE3_REDUCED)


def random_m_matrix(rng: random.Random, n: int):
    """Row diagonally dominant with off-diagonals in [-1, 0]"""
    rows = []
    for i in range(n):
        off = [0 if i == j else -rng.randint(0, 1) for j in range(n)]
        off[i] = -sum(off) + rng.randint(1, 2)
        rows.append(off)
    assert check_m_matrix(rows).is_m_matrix
    return rows


def random_l(rng: random.Random, n: int, max_det: int = 30):
    while True:
        L = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
        if 1 <= abs(det(int_matrix(L))) <= max_det:
            return L


def random_pairing(rng: random.Random):
    n = rng.randint(1, 3)
    return make_pairing(random_l(rng, n), random_m_matrix(rng, n))


@pytest.fixture(scope="session")
def random_pairings():
    rng = random.Random(20240611)
    return [random_pairing(rng) for _ in range(100)]
