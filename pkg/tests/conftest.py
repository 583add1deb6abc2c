"""Shared models and (session-cached) sweeps."""
import numpy as np
import pytest

from anholonomy.analytics.spectral_flow import sweep
from anholonomy.floquet.family import FloquetFamily, KickedModel, Rank1Perturbation
from anholonomy.floquet.presets import (
    random_broken, random_cyclic, twolevel_pi, twolevel_tilted
)
from anholonomy.numerics import HermitianOperator, UnitaryOperator


@pytest.fixture(scope="session")
def pi_model():
    return twolevel_pi()


@pytest.fixture(scope="session")
def tilted_model():
    return twolevel_tilted()


@pytest.fixture(scope="session")
def cyclic_model():
    return random_cyclic(dim=5, seed=7)


@pytest.fixture(scope="session")
def broken_model():
    return random_broken(dim=5, seed=7, active=3)


@pytest.fixture(scope="session")
def clock_model():
    """Equally spaced H0 with a uniform v; the levels stay 2pi/5 apart for every lam."""
    dim = 5
    return KickedModel(
        h0=HermitianOperator.diagonal(2 * np.pi * np.arange(dim) / dim),
        perturbation=Rank1Perturbation.from_vector(np.ones(dim) / np.sqrt(dim)),
        name="clock",
    )


@pytest.fixture(scope="session")
def frozen_family():
    """Family with V = 0 and a declared 2pi period."""
    u0 = UnitaryOperator(matrix=np.diag(np.exp(-1j * np.array([0.3, 1.7, 4.0]))))
    return FloquetFamily(
        u0=u0,
        perturbation=HermitianOperator(matrix=np.zeros((3, 3), dtype=complex)),
        period_lambda=2.0 * np.pi,
        name="frozen",
    )


@pytest.fixture(scope="session")
def pi_flow_two_cycles(pi_model):
    return sweep(pi_model.family(), steps=2048, cycles=2)


@pytest.fixture(scope="session")
def tilted_flow(tilted_model):
    return sweep(tilted_model.family(), steps=2048)


@pytest.fixture(scope="session")
def cyclic_flow(cyclic_model):
    return sweep(cyclic_model.family(), steps=2048)


@pytest.fixture(scope="session")
def broken_flow(broken_model):
    return sweep(broken_model.family(), steps=2048)


@pytest.fixture(scope="session")
def frozen_flow(frozen_family):
    return sweep(frozen_family, steps=256)
