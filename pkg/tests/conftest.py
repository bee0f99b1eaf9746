import numpy as np
import pytest

# Four points: three at mutual distance 2, the fourth at distance 1 from each.
FOUR_POINT_D = np.array(
    [[0, 2, 2, 1],
     [2, 0, 2, 1],
     [2, 2, 0, 1],
     [1, 1, 1, 0]], dtype=float)

# The same matrix with its third row misprinted as (0, 2, 2, 1); the widely
# quoted centered matrix and spectrum for this example come from this version.
FOUR_POINT_D_PRINTED = np.array(
    [[0, 2, 2, 1],
     [2, 0, 2, 1],
     [0, 2, 2, 1],
     [1, 1, 1, 0]], dtype=float)

PRINTED_B = np.array(
    [[13, -15, 5, -3],
     [-15, 21, -7, 1],
     [5, -7, -3, 5],
     [-3, 1, 5, -3]], dtype=float) / 16.0

PRINTED_EIGENVALUES = (2.159, 0.192, 0.0, -0.602)

CIRCLE7_D_INT = np.array(
    [[0, 1, 2, 3, 3, 2, 1],
     [1, 0, 1, 2, 3, 3, 2],
     [2, 1, 0, 1, 2, 3, 3],
     [3, 2, 1, 0, 1, 2, 3],
     [3, 3, 2, 1, 0, 1, 2],
     [2, 3, 3, 2, 1, 0, 1],
     [1, 2, 3, 3, 2, 1, 0]], dtype=float)

CIRCLE7_B_INT = np.array(
    [[4, 3, 0, -5, -5, 0, 3],
     [3, 4, 3, 0, -5, -5, 0],
     [0, 3, 4, 3, 0, -5, -5],
     [-5, 0, 3, 4, 3, 0, -5],
     [-5, -5, 0, 3, 4, 3, 0],
     [0, -5, -5, 0, 3, 4, 3],
     [3, 0, -5, -5, 0, 3, 4]], dtype=float)


def printed_A_symmetric_part():
    a = -0.5 * FOUR_POINT_D_PRINTED ** 2
    return 0.5 * (a + a.T)


def random_dissimilarity(rng, n):
    d = rng.uniform(0.1, 3.0, size=(n, n))
    d = np.triu(d, 1)
    return d + d.T


@pytest.fixture
def rng():
    return np.random.default_rng(20240101)
