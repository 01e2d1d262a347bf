import math

import numpy as np
import pytest

from fptriplet.boundary import (
    Boundary,
    ConstantBoundary,
    DriftAdjustedBoundary,
    LinearBoundary,
    boundary_update,
)
from fptriplet.errors import PreconditionError


def test_constant_boundary():
    """Test a constant boundary and its closed-form shift"""
    c = ConstantBoundary(2.0)
    assert c.is_constant
    assert c(10.0) == 2.0
    moved = c.shifted(1.0, 0.5, cap=1.0)
    assert isinstance(moved, ConstantBoundary)
    assert moved.level == 1.0
    assert np.array_equal(c.eval_many([0.0, 1.0]), [2.0, 2.0])


def test_linear_boundary_clamps_at_zero():
    """Test c(t) = max(c0 - slope t, 0) and its inverse hint"""
    c = LinearBoundary(3.0, 1.0)
    assert c(1.0) == 2.0
    assert c(5.0) == 0.0
    assert np.allclose(c.eval_many([0.0, 1.0, 4.0]), [3.0, 2.0, 0.0])
    assert c.inverse_hint(1.0) == 2.0
    with pytest.raises(PreconditionError):
        LinearBoundary(1.0, -1.0)


def test_updated_boundary_composition():
    """Test repeated shifts compose into one update of the base boundary"""
    base = LinearBoundary(3.0, 1.0)
    b = boundary_update(base, 0.5, 1.0, 1.2)
    assert b.c0 == pytest.approx(1.2)
    assert b(1.0) == pytest.approx(0.5)
    b2 = b.shifted(0.5, 0.2)
    assert b2.base is base
    assert b2.c0 == pytest.approx(min(b(0.5) - 0.2, math.inf))
    assert np.allclose(b2.eval_many([0.0, 0.3]), [b2(0.0), b2(0.3)])


def test_update_identity():
    """Test a zero update returns the boundary itself"""
    c = LinearBoundary(1.0, 0.5)
    assert boundary_update(c, 0.0, 0.0, math.inf) is c


def test_validate_rejects_bad_boundaries():
    """Test validation of the starting level and monotonicity"""
    with pytest.raises(PreconditionError):
        ConstantBoundary(0.0).validate()
    with pytest.raises(PreconditionError):
        Boundary(lambda t: 1.0 + t).validate()
    assert Boundary(lambda t: math.exp(-t)).validate().c0 == 1.0


def test_drift_adjusted_boundary():
    """Test c(t) - mu t may go negative and rejects negative drift"""
    c = DriftAdjustedBoundary(ConstantBoundary(1.0), 0.5)
    assert c(2.0) == 0.0
    assert c(4.0) == -1.0
    assert np.allclose(c.eval_many([0.0, 1.0]), [1.0, 0.5])
    with pytest.raises(PreconditionError):
        DriftAdjustedBoundary(ConstantBoundary(1.0), -0.1)
