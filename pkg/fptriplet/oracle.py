"""Approximate brute-force reference: the subordinator with jumps below epsilon removed.

Z^eps is compound Poisson, so its first-passage triplet can be simulated
jump by jump. With ``compensate`` the removed small jumps are replaced by
their mean as a linear drift, which leaves an error of the order of their
standard deviation instead of their mean. Crossings may then creep, as they
also may when a decreasing boundary falls onto Z^eps between two jumps.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats
from scipy.integrate import cumulative_trapezoid, dblquad
from scipy.optimize import brentq
from scipy.special import gamma, gammainc

from .errors import PreconditionError
from .measures import band_mass
from .model import CrossingTriplet

logger = logging.getLogger(__name__)

# e^{-q x} below e^{-40} is dropped from the tempered band
TEMPER_CUTOFF = 40.0


@dataclass(frozen=True)
class OracleConfig:
    epsilon: float = 1e-4
    n: int = 10_000
    grid_points: int = 4096
    block: int = 1024
    compensate: bool = False

    def __post_init__(self):
        if not self.epsilon > 0.0:
            raise PreconditionError(f"oracle epsilon must be positive, got {self.epsilon}")
        if self.grid_points < 16:
            raise PreconditionError(f"oracle grid needs at least 16 points, got {self.grid_points}")


@dataclass
class OracleResult:
    T: np.ndarray
    U: np.ndarray
    V: np.ndarray
    creeping: int
    epsilon: float
    bias_proxy: float
    residual_proxy: float

    def as_dict(self):
        return {
            "n": int(self.T.size),
            "epsilon": self.epsilon,
            "creeping": self.creeping,
            "bias_proxy": self.bias_proxy,
            "residual_proxy": self.residual_proxy,
            "mean_T": float(self.T.mean()),
        }


def _lower_moment(vartheta, q, s, eps):
    """vartheta * integral over (0, eps) of x^(s-1) e^{-qx} dx."""
    if q == 0.0:
        return vartheta * eps ** s / s
    return vartheta * q ** (-s) * gamma(s) * gammainc(s, q * eps)


def bias_proxy(spec, epsilon):
    """Mean of the removed small jumps per unit time."""
    return _lower_moment(spec.vartheta, spec.q, 1.0 - spec.alpha, epsilon)


def residual_proxy(spec, epsilon):
    """Standard deviation of the removed small jumps per unit time."""
    return math.sqrt(_lower_moment(spec.vartheta, spec.q, 2.0 - spec.alpha, epsilon))


class JumpTable:
    """Jump sizes of Z^eps: the tempered band on (eps, r] mixed with lambda_r."""

    def __init__(self, spec, ocfg):
        eps = ocfg.epsilon
        if not eps < spec.r:
            raise PreconditionError(f"oracle epsilon = {eps} must be below r = {spec.r}")
        self.spec = spec
        self.epsilon = eps
        self.hi = spec.r if spec.q == 0.0 else min(spec.r, max(TEMPER_CUTOFF / spec.q, 2.0 * eps))
        self.band = band_mass(spec.alpha, spec.vartheta, spec.q, eps, self.hi)
        self.finite = spec.finite_part.mass
        self.total = self.band + self.finite
        if not self.total > 0.0:
            raise PreconditionError(f"Z^eps has no jumps for epsilon = {eps}")
        self.p_finite = self.finite / self.total
        self.drift = bias_proxy(spec, eps) if ocfg.compensate else 0.0
        if spec.q > 0.0:
            log_x = np.linspace(math.log(eps), math.log(self.hi), ocfg.grid_points)
            x = np.exp(log_x)
            weights = np.exp(-spec.q * x) * x ** (-spec.alpha)
            cdf = cumulative_trapezoid(weights, log_x, initial=0.0)
            self._log_x = log_x
            self._cdf = cdf / cdf[-1]
        else:
            self._tail = (eps / self.hi) ** spec.alpha

    def band_sizes(self, u):
        if self.spec.q > 0.0:
            return np.exp(np.interp(u, self._cdf, self._log_x))
        # truncated Pareto by inversion
        return self.epsilon * (1.0 - u * (1.0 - self._tail)) ** (-1.0 / self.spec.alpha)

    def sizes(self, rng, n):
        out = self.band_sizes(rng.uniforms(n))
        if self.finite > 0.0:
            picks = np.flatnonzero(rng.uniforms(n) < self.p_finite)
            if picks.size:
                out[picks] = self.spec.finite_part.sample_many(rng, picks.size)
        return out


def _draw(table, c, rng, block):
    mu = table.drift
    t0 = 0.0
    jumps0 = 0.0
    while True:
        times = t0 + np.cumsum(rng.exponentials(block, table.total))
        sizes = table.sizes(rng, block)
        cum = jumps0 + np.cumsum(sizes)
        before = np.concatenate(([jumps0], cum[:-1]))
        pre = before + mu * times
        post = pre + sizes
        levels = c.eval_many(times)
        crossed = post > levels
        # a falling boundary or the drift can meet Z^eps between jumps
        creep = pre >= levels
        hits = np.flatnonzero(crossed | creep)
        if hits.size:
            k = hits[0]
            if creep[k]:
                t_prev = times[k - 1] if k > 0 else t0
                j = before[k]
                t = brentq(lambda s: j + mu * s - c(s), t_prev, times[k], rtol=1e-12)
                value = j + mu * t
                return t, value, value, True
            return times[k], pre[k], post[k], False
        t0 = times[-1]
        jumps0 = cum[-1]


def oracle_triplet(spec, c, ocfg, rng):
    """One triplet of Z^eps; ``diagnostics['creeping']`` flags a continuous crossing."""
    table = JumpTable(spec, ocfg)
    t, u, v, creeping = _draw(table, c, rng, ocfg.block)
    return CrossingTriplet(t, u, v, diagnostics={"creeping": int(creeping)})


def oracle_sample(spec, c, ocfg, rng):
    """ocfg.n oracle triplets as arrays, with the bias proxies of the chosen epsilon."""
    table = JumpTable(spec, ocfg)
    T = np.empty(ocfg.n)
    U = np.empty(ocfg.n)
    V = np.empty(ocfg.n)
    creeping = 0
    for i in range(ocfg.n):
        T[i], U[i], V[i], crept = _draw(table, c, rng, ocfg.block)
        creeping += crept
    result = OracleResult(T, U, V, creeping, ocfg.epsilon,
                          bias_proxy(spec, ocfg.epsilon), residual_proxy(spec, ocfg.epsilon))
    logger.info(f"oracle eps={ocfg.epsilon:g} compensate={ocfg.compensate}: mean T {T.mean():.6g}, "
                f"bias proxy {result.bias_proxy:.3g}, residual proxy {result.residual_proxy:.3g}")
    return result


def stable_undershoot_law(alpha, level):
    """Undershoot of a stable subordinator at a constant level: level * Beta(alpha, 1 - alpha)."""
    return stats.beta(alpha, 1.0 - alpha, scale=level)


def stable_undershoot_cdf(alpha, level, u):
    return stable_undershoot_law(alpha, level).cdf(u)


def undershoot_cdf_quadrature(alpha, vartheta, level, u, density):
    """P[undershoot <= u] by integrating density(t, x) * nu((level - x, inf)) over t > 0, 0 < x < u.

    ``density(t, x)`` is the density of the stable subordinator at time t.
    """
    def tail(y):
        return vartheta * y ** (-alpha) / alpha

    value, _ = dblquad(lambda t, x: density(t, x) * tail(level - x), 0.0, u, 0.0, math.inf,
                       epsabs=1e-10, epsrel=1e-8)
    return value
