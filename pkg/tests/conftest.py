import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from diraclab import Lattice

MASTER_SEED = 20260809


@pytest.fixture
def rng():
    return np.random.default_rng(MASTER_SEED)


@pytest.fixture(scope="session")
def lat8():
    return Lattice(8, 8.0)


@pytest.fixture(scope="session")
def lat16():
    return Lattice(16, 16.0)
