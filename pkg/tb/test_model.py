import math

import pytest

from fptriplet.boundary import ConstantBoundary, LinearBoundary
from fptriplet.errors import PreconditionError
from fptriplet.measures import ExponentialMeasure, NullMeasure, band_mass
from fptriplet.model import (
    CrossingTriplet,
    EngineConfig,
    SubordinatorSpec,
    drift_adjust,
    resolve_truncation,
)


def test_auto_truncation():
    """Test r = min(r0, 2 alpha / q) and r = r0 without tempering"""
    assert resolve_truncation(0.5, 10.0, math.inf) == pytest.approx(0.1)
    assert resolve_truncation(0.5, 10.0, 0.05) == 0.05
    assert resolve_truncation(0.5, 0.0, math.inf) == math.inf
    assert resolve_truncation(0.5, 0.0, math.inf, "2.5") == 2.5


def test_explicit_truncation_out_of_range():
    """Test an explicit r above r0 is rejected"""
    with pytest.raises(PreconditionError):
        resolve_truncation(0.5, 1.0, 1.0, 2.0)


def test_theta_and_beta(stable_spec):
    """Test theta = vartheta Gamma(1 - alpha) / alpha and beta = alpha / (1 - alpha)"""
    assert stable_spec.theta == pytest.approx(2.0 * math.sqrt(math.pi))
    assert stable_spec.beta == pytest.approx(1.0)


def test_build_adds_tempered_band(mixed_spec):
    """Test lambda_r is lambda_r0 plus the tempered band on (r, r0]"""
    assert mixed_spec.r == pytest.approx(0.1)
    expected = 1.0 + band_mass(0.5, 2.0, 10.0, 0.1, math.inf)
    assert mixed_spec.finite_part.mass == pytest.approx(expected)
    assert mixed_spec.base_part.mass == 1.0


def test_build_without_band():
    """Test r = r0 keeps the base measure as lambda_r"""
    base = ExponentialMeasure(1.0)
    spec = SubordinatorSpec.build(0.3, 1.0, 0.0, base=base)
    assert spec.finite_part is base
    assert SubordinatorSpec.build(0.3, 1.0).finite_part.mass == 0.0


@pytest.mark.parametrize("kwargs", [
    {"alpha": 0.0, "vartheta": 1.0},
    {"alpha": 1.0, "vartheta": 1.0},
    {"alpha": 0.5, "vartheta": 0.0},
    {"alpha": 0.5, "vartheta": 1.0, "q": -1.0},
])
def test_invalid_spec(kwargs):
    """Test parameter preconditions of the subordinator"""
    with pytest.raises(PreconditionError):
        SubordinatorSpec.build(**kwargs)


def test_spec_as_dict(mixed_spec):
    """Test the spec summary carries the derived quantities"""
    data = mixed_spec.as_dict()
    assert data["lambda_r0"] == "exp(1)"
    assert data["Lambda_r0"] == 1.0
    assert data["theta"] == pytest.approx(mixed_spec.theta)


def test_engine_config_checks():
    """Test rho must lie in (0, 1) and the undershoot method must be known"""
    with pytest.raises(PreconditionError):
        EngineConfig(rho=1.0)
    with pytest.raises(PreconditionError):
        EngineConfig(undershoot="other")
    assert EngineConfig().rho == 0.5


def test_triplet_crosses():
    """Test the crossing predicate on constant and linear boundaries"""
    c = ConstantBoundary(1.0)
    assert CrossingTriplet(0.3, 0.8, 1.4).crosses(c)
    assert not CrossingTriplet(0.3, 1.2, 1.4).crosses(c)
    assert not CrossingTriplet(0.3, 0.8, 0.9).crosses(c)
    assert not CrossingTriplet(math.inf, 0.8, 1.4).crosses(c)
    assert CrossingTriplet(2.0, 0.5, 1.1).crosses(LinearBoundary(3.0, 1.0))


def test_triplet_counters_and_equality():
    """Test counters read from diagnostics, which do not affect equality"""
    trip = CrossingTriplet(1.0, 0.5, 2.0, diagnostics={"loops": 3, "cpp_jumps": 1})
    assert trip.loop_count == 3 and trip.cpp_jump_count == 1
    assert trip == CrossingTriplet(1.0, 0.5, 2.0)


def test_drift_adjust():
    """Test the drift shifts undershoot and overshoot by mu T"""
    trip = CrossingTriplet(2.0, 0.5, 1.0)
    moved = drift_adjust(trip, 0.25)
    assert (moved.T, moved.U, moved.V) == (2.0, 1.0, 1.5)
    assert drift_adjust(trip, 0.0) is trip
