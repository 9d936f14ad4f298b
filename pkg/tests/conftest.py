import math

import numpy as np
import pytest

from chshkit.states import BipartiteState

SQRT1_2 = 1.0 / math.sqrt(2.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def bell_state():
    """(|+-> + |-+>)/sqrt(2)."""
    return BipartiteState(np.array([[0.0, SQRT1_2], [SQRT1_2, 0.0]]))


@pytest.fixture
def product_state():
    return BipartiteState(np.array([[0.0, 1.0], [0.0, 0.0]]))
