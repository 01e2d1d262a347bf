"""Finite jump measures (the lambda_r component of the Levy measure)."""
import math

import numpy as np

from .errors import PreconditionError
from .quadrature import integrate_log


class FiniteMeasure:
    """A finite measure on (0, inf) given by its mass, a sampler and its transform.

    ``sampler(rng)`` draws from the normalised measure and
    ``mean_transform(u)`` returns the integral of 1 - exp(-u x).
    """

    def __init__(self, mass, sampler=None, mean_transform=None, name="custom"):
        if not mass >= 0.0 or math.isinf(mass):
            raise PreconditionError(f"finite measure mass must be finite and >= 0, got {mass}")
        self.mass = float(mass)
        self._sampler = sampler
        self._mean_transform = mean_transform
        self.name = name

    def __repr__(self):
        return f"{type(self).__name__}({self.name}, mass={self.mass:.6g})"

    def sample(self, rng):
        if self.mass == 0.0:
            raise PreconditionError("cannot sample from a measure of zero mass")
        x = self._draw(rng)
        assert x > 0.0, f"jump sampler of {self.name} returned {x}"
        return x

    def sample_many(self, rng, n):
        return np.array([self.sample(rng) for _ in range(n)])

    def _draw(self, rng):
        if self._sampler is None:
            raise PreconditionError(f"measure {self.name} has no sampler")
        return self._sampler(rng)

    def mean_transform(self, u):
        if self.mass == 0.0:
            return 0.0
        if self._mean_transform is None:
            raise PreconditionError(f"measure {self.name} has no mean transform")
        return self._mean_transform(u)

    def laplace(self, u):
        """E[exp(-u J)] for J drawn from the normalised measure."""
        if self.mass == 0.0:
            return 1.0
        return 1.0 - self.mean_transform(u) / self.mass


class NullMeasure(FiniteMeasure):
    def __init__(self):
        super().__init__(0.0, name="none")


class ExponentialMeasure(FiniteMeasure):
    """mass * Exp(rate)."""

    def __init__(self, rate, mass=1.0):
        if rate <= 0.0:
            raise PreconditionError(f"exp rate must be positive, got {rate}")
        name = f"exp({rate:g})" if mass == 1.0 else f"exp({rate:g},{mass:g})"
        super().__init__(mass, name=name)
        self.rate = float(rate)

    def _draw(self, rng):
        return rng.exponential(self.rate)

    def sample_many(self, rng, n):
        return rng.exponentials(n, self.rate)

    def mean_transform(self, u):
        return self.mass * u / (u + self.rate)


class ParetoMeasure(FiniteMeasure):
    """The measure 1{x >= cut} x^(-exponent) dx, exponent > 1."""

    def __init__(self, exponent, cut):
        if exponent <= 1.0 or cut <= 0.0:
            raise PreconditionError(f"pareto needs exponent > 1 and cut > 0, got ({exponent}, {cut})")
        self.exponent = float(exponent)
        self.cut = float(cut)
        mass = cut ** (1.0 - exponent) / (exponent - 1.0)
        super().__init__(mass, name=f"pareto({exponent:g},{cut:g})")

    def _draw(self, rng):
        return rng.pareto(self.exponent - 1.0, self.cut)

    def density(self, x):
        return x ** (-self.exponent) if x >= self.cut else 0.0

    def mean_transform(self, u):
        p = self.exponent
        return integrate_log(lambda x: -math.expm1(-u * x) * x ** (-p), self.cut, math.inf)


class PointMeasure(FiniteMeasure):
    """mass * Dirac(size)."""

    def __init__(self, size, mass=1.0):
        if size <= 0.0:
            raise PreconditionError(f"point size must be positive, got {size}")
        self.size = float(size)
        name = f"point({size:g})" if mass == 1.0 else f"point({size:g},{mass:g})"
        super().__init__(mass, name=name)

    def _draw(self, rng):
        return self.size

    def mean_transform(self, u):
        return -self.mass * math.expm1(-u * self.size)


class TemperedBand(FiniteMeasure):
    """vartheta e^(-q x) x^(-alpha-1) dx restricted to (lo, hi], lo > 0."""

    def __init__(self, alpha, vartheta, q, lo, hi):
        if not 0.0 < lo <= hi:
            raise PreconditionError(f"tempered band needs 0 < lo <= hi, got ({lo}, {hi})")
        self.alpha = alpha
        self.vartheta = vartheta
        self.q = q
        self.lo = lo
        self.hi = hi
        mass = band_mass(alpha, vartheta, q, lo, hi)
        super().__init__(mass, name=f"band({lo:g},{hi:g})")

    def _draw(self, rng):
        a, q, lo, hi = self.alpha, self.q, self.lo, self.hi
        if q == 0.0 or q * lo < 1.0:
            while True:
                x = rng.pareto(a, lo, hi)
                if q == 0.0 or rng.uniform() <= math.exp(-q * (x - lo)):
                    return x
        while True:
            x = lo + rng.truncated_exponential(q, hi - lo)
            if rng.uniform() <= (x / lo) ** (-a - 1.0):
                return x

    def mean_transform(self, u):
        a, q, th = self.alpha, self.q, self.vartheta
        return integrate_log(lambda x: th * -math.expm1(-u * x) * math.exp(-q * x) * x ** (-a - 1.0),
                             self.lo, self.hi)


class MixtureMeasure(FiniteMeasure):
    """Sum of finite measures."""

    def __init__(self, parts):
        self.parts = [p for p in parts if p.mass > 0.0]
        mass = sum(p.mass for p in self.parts)
        super().__init__(mass, name=" + ".join(p.name for p in self.parts) or "none")

    def _draw(self, rng):
        pick = rng.uniform() * self.mass
        for part in self.parts[:-1]:
            if pick < part.mass:
                return part.sample(rng)
            pick -= part.mass
        return self.parts[-1].sample(rng)

    def mean_transform(self, u):
        return sum(p.mean_transform(u) for p in self.parts)


def band_mass(alpha, vartheta, q, lo, hi):
    """Integral of vartheta e^(-q x) x^(-alpha-1) over (lo, hi]."""
    if lo >= hi:
        return 0.0
    if q == 0.0:
        upper = 0.0 if math.isinf(hi) else hi ** (-alpha)
        return vartheta * (lo ** (-alpha) - upper) / alpha
    return integrate_log(lambda x: vartheta * math.exp(-q * x) * x ** (-alpha - 1.0), lo, hi)
