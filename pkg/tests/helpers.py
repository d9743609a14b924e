"""Shared draws for the seeded property suites"""
from tensorginv.problems import random_tensor
from tensorginv.tensor_core import TensorShape

# matricized sizes 4, 6 and 8
PROPERTY_SHAPES = [TensorShape.square((2, 2)), TensorShape.square((2, 3)), TensorShape.square((2, 4))]

PROPERTY_TOL = 1e-8


def indexed_tensor(seed: int):
    """Shape and index (1 or 2) rotate with the seed"""
    shape = PROPERTY_SHAPES[seed % len(PROPERTY_SHAPES)]
    index = 1 + seed % 2
    return random_tensor(shape, seed=seed, kind="indexed", index=index)
