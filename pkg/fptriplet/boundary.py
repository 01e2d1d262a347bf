"""Non-increasing crossing boundaries and the capped/shifted updates of the main loop."""
import math

import numpy as np

from .errors import PreconditionError


class Boundary:
    """A non-increasing, absolutely continuous boundary t -> c(t).

    ``func`` must accept a float. ``inverse_hint`` is an optional callable
    returning, for a target level y, a time t with c(t) <= y; root finding
    uses it to bracket crossings.
    """

    def __init__(self, func, *, inverse_hint=None, name="callable"):
        self._func = func
        self.inverse_hint = inverse_hint
        self.name = name
        self.c0 = float(func(0.0))

    def __repr__(self):
        return f"{type(self).__name__}({self.name}, c0={self.c0:.6g})"

    def __call__(self, t):
        return float(self._func(t))

    def eval_many(self, ts):
        return np.array([self(t) for t in np.asarray(ts, dtype=float)])

    @property
    def is_constant(self):
        return False

    def validate(self, horizon=None, points=257):
        """Check c(0) > 0 and spot-check monotonicity on a grid."""
        if not self.c0 > 0.0:
            raise PreconditionError(f"boundary {self.name} has c(0) = {self.c0}, must be > 0")
        if horizon is None:
            horizon = 10.0
        ts = np.concatenate(([0.0], np.geomspace(1e-9, horizon, points - 1)))
        values = self.eval_many(ts)
        rises = np.flatnonzero(np.diff(values) > 1e-12 * np.maximum(1.0, np.abs(values[:-1])))
        if rises.size:
            t = ts[rises[0] + 1]
            raise PreconditionError(f"boundary {self.name} increases near t = {t:.6g}")
        return self

    def shifted(self, t_shift, v_shift, cap=math.inf):
        """Return t -> min(c(t + t_shift) - v_shift, cap)."""
        return UpdatedBoundary(self, t_shift, v_shift, cap)


class ConstantBoundary(Boundary):
    def __init__(self, level):
        self.level = float(level)
        super().__init__(lambda t: self.level, name=f"const({self.level:g})")

    def __call__(self, t):
        return self.level

    def eval_many(self, ts):
        return np.full(np.shape(ts), self.level)

    @property
    def is_constant(self):
        return True

    def shifted(self, t_shift, v_shift, cap=math.inf):
        return ConstantBoundary(min(self.level - v_shift, cap))


class LinearBoundary(Boundary):
    """c(t) = max(c0 - slope t, 0)."""

    def __init__(self, c0, slope):
        if slope < 0.0:
            raise PreconditionError(f"linear boundary slope must be >= 0, got {slope}")
        self.start = float(c0)
        self.slope = float(slope)
        super().__init__(self._value, name=f"linear({c0:g},{slope:g})",
                         inverse_hint=self._inverse)

    def _value(self, t):
        return max(self.start - self.slope * t, 0.0)

    def _inverse(self, y):
        if self.slope == 0.0:
            return math.inf if y < self.start else 0.0
        return max((self.start - y) / self.slope, 0.0)

    def __call__(self, t):
        return max(self.start - self.slope * t, 0.0)

    def eval_many(self, ts):
        return np.maximum(self.start - self.slope * np.asarray(ts, dtype=float), 0.0)


class UpdatedBoundary(Boundary):
    """t -> min(base(t + t_shift) - v_shift, cap) over an unshifted base boundary."""

    def __init__(self, base, t_shift, v_shift, cap):
        self.base = base
        self.t_shift = float(t_shift)
        self.v_shift = float(v_shift)
        self.cap = float(cap)
        super().__init__(self._value, name=f"update({base.name})")

    def _value(self, t):
        return min(self.base(t + self.t_shift) - self.v_shift, self.cap)

    def __call__(self, t):
        return min(self.base(t + self.t_shift) - self.v_shift, self.cap)

    def eval_many(self, ts):
        ts = np.asarray(ts, dtype=float)
        return np.minimum(self.base.eval_many(ts + self.t_shift) - self.v_shift, self.cap)

    def shifted(self, t_shift, v_shift, cap=math.inf):
        return UpdatedBoundary(self.base, self.t_shift + t_shift, self.v_shift + v_shift,
                               min(self.cap - v_shift, cap))


class DriftAdjustedBoundary(Boundary):
    """t -> c(t) - mu t, the boundary seen by the driftless part of Z."""

    def __init__(self, base, mu):
        if mu < 0.0:
            raise PreconditionError(f"drift must be >= 0, got {mu}")
        self.base = base
        self.mu = float(mu)
        super().__init__(self._value, name=f"{base.name}-{mu:g}t")

    def _value(self, t):
        return self.base(t) - self.mu * t

    def __call__(self, t):
        return self.base(t) - self.mu * t

    def eval_many(self, ts):
        ts = np.asarray(ts, dtype=float)
        return self.base.eval_many(ts) - self.mu * ts


def boundary_update(c, t_shift, v_shift, cap):
    """The boundary seen from (t_shift, v_shift), capped: t -> min(c(t + t_shift) - v_shift, cap)."""
    if t_shift == 0.0 and v_shift == 0.0 and math.isinf(cap):
        return c
    return c.shifted(t_shift, v_shift, cap)
