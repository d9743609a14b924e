from pathlib import Path

import numpy as np
import pytest

from tensorginv.problems import random_tensor, reference_fixture
from tensorginv.tensor_core import TensorShape

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="session")
def bundle():
    """Worked example with the printed inverse blocks"""
    return reference_fixture()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def fixture_path():
    return DATA_DIR / "reference_fixture.json"


@pytest.fixture
def square_tensor():
    """Index-2 tensor over (2,2)x(2,2)"""
    return random_tensor(TensorShape.square((2, 2)), seed=7, kind="indexed", index=2)
