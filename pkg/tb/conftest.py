import pytest

from fptriplet.measures import ExponentialMeasure
from fptriplet.model import SubordinatorSpec
from fptriplet.rng import RngStream

SEED = 20240917


@pytest.fixture
def rng():
    return RngStream(SEED)


@pytest.fixture
def stable_spec():
    """Pure stable subordinator, alpha = 1/2, vartheta = 1."""
    return SubordinatorSpec.build(0.5, 1.0, 0.0)


@pytest.fixture
def mixed_spec():
    """Tempered stable plus Exp(1) jumps of unit mass, r = 2 alpha / q."""
    return SubordinatorSpec.build(0.5, 2.0, 10.0, base=ExponentialMeasure(1.0))
