"""Shared fixtures: seeded generators and random problem instances."""

import numpy as np
import pytest

from cval_lab import (
    XiModel,
    haar_basis,
    haar_state_min_overlap,
    random_hermitian,
    random_operator,
)


@pytest.fixture
def rng():
    return np.random.default_rng(20250817)


@pytest.fixture
def model():
    return XiModel.binary()


@pytest.fixture
def instance(rng):
    """Factory for (operator, state, basis) triples with no masked entries."""

    def make(dim, hermitian=False):
        op = random_hermitian(dim, rng) if hermitian else random_operator(dim, rng)
        basis = haar_basis(dim, rng)
        psi = haar_state_min_overlap(dim, basis, rng)
        return op, psi, basis

    return make
