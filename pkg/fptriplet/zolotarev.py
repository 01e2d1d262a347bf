"""Zolotarev machinery for one-sided stable laws.

sigma(u) = [sin(a pi u)^a sin((1-a) pi u)^(1-a) / sin(pi u)]^(beta+1) with
beta = a / (1 - a). Everything is evaluated in log space relative to the
limit sigma(0+) = (1 - a) a^beta, so that psi = lambda (sigma - sigma_min)
stays exact for lambda as large as 1e300.
"""
import functools
import logging
import math

import numpy as np

from .diagnostics import hit
from .errors import EnvelopeError, PreconditionError
from .quadrature import integrate

logger = logging.getLogger(__name__)

LOG_MAX = 709.0
# Edge search stops once psi lands in [EDGE_LOW, EDGE_HIGH]
EDGE_LOW = 0.5
EDGE_HIGH = 2.0
TERNARY_TOL = 1e-12
SNAP_TOL = 1e-9


def _log_sinc(x):
    """log(sin(x) / x) for 0 <= x < pi."""
    if x < 1e-3:
        x2 = x * x
        return -x2 / 6.0 - x2 * x2 / 180.0 - x2 * x2 * x2 / 2835.0
    return math.log(math.sin(x) / x)


def _log_sinc_pi(u):
    """log(sin(pi u) / (pi u)) for 0 <= u < 1, accurate near u = 1."""
    if u <= 0.5:
        return _log_sinc(math.pi * u)
    return math.log(math.sin(math.pi * (1.0 - u))) - math.log(math.pi * u)


def _log_sinc_many(x):
    small = x < 1e-3
    x2 = x * x
    series = -x2 / 6.0 - x2 * x2 / 180.0 - x2 * x2 * x2 / 2835.0
    safe = np.where(small, 1.0, x)
    return np.where(small, series, np.log(np.sin(safe) / safe))


def _exp(v):
    if v > LOG_MAX:
        return math.inf
    return math.exp(v)


def _logaddexp(a, b):
    if a < b:
        a, b = b, a
    if b == -math.inf:
        return a
    return a + math.log1p(math.exp(b - a))


def _log_expm1(d):
    if d > 30.0:
        return d + math.log1p(-math.exp(-d))
    return math.log(math.expm1(d))


class ZolotarevContext:
    """Cached constants of sigma_alpha for one stability index."""

    def __init__(self, alpha):
        if not 0.0 < alpha < 1.0:
            raise PreconditionError(f"alpha must lie in (0, 1), got {alpha}")
        self.alpha = float(alpha)
        self.beta = alpha / (1.0 - alpha)
        self.log_sigma_at_zero = math.log1p(-alpha) + self.beta * math.log(alpha)
        self.sigma_at_zero = math.exp(self.log_sigma_at_zero)
        self.minimizer = self._locate_minimizer()
        self.log_sigma_min = self.log_sigma_at(self.minimizer)
        self.sigma_min = math.exp(self.log_sigma_min)
        self._excess_at_min = self.log_sigma_excess(self.minimizer)

    def __repr__(self):
        return f"ZolotarevContext(alpha={self.alpha})"

    def _locate_minimizer(self):
        lo, hi = 0.0, 0.999
        while hi - lo > TERNARY_TOL:
            m1 = lo + (hi - lo) / 3.0
            m2 = hi - (hi - lo) / 3.0
            if self.log_sigma_excess(m1) <= self.log_sigma_excess(m2):
                hi = m2
            else:
                lo = m1
        u = (lo + hi) / 2.0
        if u < SNAP_TOL:
            # sigma increases on (0, 1); its infimum is the limit at 0
            return 0.0
        logger.debug(f"sigma minimizer for alpha = {self.alpha} found at interior point {u}")
        return u

    def log_sigma_excess(self, u):
        """log sigma(u) - log sigma(0+), for 0 <= u < 1."""
        if u == 0.0:
            return 0.0
        a = self.alpha
        bracket = a * _log_sinc(a * math.pi * u) + (1.0 - a) * _log_sinc((1.0 - a) * math.pi * u)
        return (self.beta + 1.0) * (bracket - _log_sinc_pi(u))

    def log_sigma_excess_many(self, u):
        u = np.asarray(u, dtype=float)
        a = self.alpha
        bracket = a * _log_sinc_many(a * np.pi * u) + (1.0 - a) * _log_sinc_many((1.0 - a) * np.pi * u)
        near_one = u > 0.5
        tail = np.log(np.sin(np.pi * np.where(near_one, 1.0 - u, 0.5))) - np.log(np.pi * u)
        log_sinc_pi = np.where(near_one, tail, _log_sinc_many(np.pi * np.where(near_one, 0.5, u)))
        return (self.beta + 1.0) * (bracket - log_sinc_pi)

    def log_sigma_at(self, u):
        """log sigma on [0, 1), with the limit value at 0."""
        return self.log_sigma_at_zero + self.log_sigma_excess(u)

    def log_sigma(self, u):
        if not 0.0 < u < 1.0:
            raise PreconditionError(f"sigma_alpha is defined on (0, 1), got u = {u}")
        return self.log_sigma_at(u)

    def sigma(self, u):
        return _exp(self.log_sigma(u))

    def recentred_psi(self, log_lam):
        """u -> lambda (sigma(u) - sigma_min), computed without forming lambda sigma."""
        log_scale = log_lam + self.log_sigma_min
        base = self._excess_at_min

        def psi(u):
            d = self.log_sigma_excess(u) - base
            if d <= 0.0:
                return 0.0
            return _exp(log_scale + _log_expm1(d))

        return psi


@functools.lru_cache(maxsize=64)
def zolotarev_context(alpha):
    return ZolotarevContext(alpha)


def sigma_alpha(ctx, u):
    return ctx.sigma(u)


def log_sigma_alpha(ctx, u):
    return ctx.log_sigma(u)


def zolotarev_kernel(ctx, x, u):
    """h(x, u) = sigma(u) x^(-beta-1) exp(-sigma(u) x^(-beta))."""
    return math.exp(_log_kernel(ctx, math.log(x), u))


def _log_kernel(ctx, log_x, u):
    ls = ctx.log_sigma_at(u)
    return ls - (ctx.beta + 1.0) * log_x - _exp(ls - ctx.beta * log_x)


def undershoot_bound(alpha):
    """M_alpha, the supremum of the Zolotarev kernel h over x > 0 and u."""
    return math.exp(log_undershoot_bound(alpha))


def log_undershoot_bound(alpha):
    return ((1.0 - 1.0 / alpha) * math.log1p(-alpha) - (1.0 + 1.0 / alpha) * math.log(alpha)
            - 1.0 / alpha)


def phi_density(ctx, x):
    """Density of the standard one-sided stable law (Laplace transform e^(-s^alpha))."""
    if not x > 0.0:
        raise PreconditionError(f"phi_density needs x > 0, got {x}")
    log_x = math.log(x)
    log_beta = math.log(ctx.beta)
    return integrate(lambda u: math.exp(log_beta + _log_kernel(ctx, log_x, u)), 0.0, 1.0)


def stable_cdf(ctx, x):
    """P[S <= x] for the standard one-sided stable law."""
    if x <= 0.0:
        return 0.0
    log_scale = -ctx.beta * math.log(x)
    return integrate(lambda u: math.exp(-_exp(ctx.log_sigma_at(u) + log_scale)), 0.0, 1.0)


def log_stable_sample(ctx, theta, t, rng):
    """log of one draw of S_t, the stable subordinator with Laplace exponent theta s^alpha."""
    u = rng.uniform()
    e = rng.exponential()
    return math.log(theta * t) / ctx.alpha + (ctx.log_sigma(u) - math.log(e)) / ctx.beta


def stable_sample(ctx, theta, t, rng):
    if not (theta > 0.0 and t > 0.0):
        raise PreconditionError(f"stable_sample needs theta, t > 0, got ({theta}, {t})")
    return _exp(log_stable_sample(ctx, theta, t, rng))


def stable_samples(ctx, theta, t, rng, n):
    """n independent draws of S_t, vectorised."""
    u = rng.uniforms(n)
    e = rng.exponentials(n)
    log_s = (math.log(theta * t) / ctx.alpha
             + (ctx.log_sigma_at_zero + ctx.log_sigma_excess_many(u) - np.log(e)) / ctx.beta)
    with np.errstate(over="ignore"):
        return np.exp(log_s)


class LogConcaveSampler:
    """Rejection sampler for the density proportional to exp(-psi(u)) on (0, 1).

    psi must be convex with psi(mode) = 0. The envelope is flat on
    [left, right], where psi is near 1 at both ends, with exponential tails
    through (mode, 0) and each end point.
    """

    def __init__(self, psi, mode=0.0):
        self.psi = psi
        self.mode = mode
        self.right, self.psi_right = self._edge(1.0)
        self.left, self.psi_left = self._edge(0.0)
        self.degenerate = self.right == mode and self.left == mode
        self.rate_right = self._rate(self.right, self.psi_right)
        self.rate_left = self._rate(self.left, self.psi_left)
        self.len_right = 1.0 - self.right
        self.len_left = self.left
        self.mass_mid = self.right - self.left
        self.mass_right = self._tail_mass(self.psi_right, self.rate_right, self.len_right)
        self.mass_left = self._tail_mass(self.psi_left, self.rate_left, self.len_left)
        self.total = self.mass_mid + self.mass_right + self.mass_left

    def _edge(self, end):
        m = self.mode
        if end == m:
            return m, 0.0
        far = math.nextafter(end, m)
        if far == m:
            return m, 0.0
        p_far = self.psi(far)
        if p_far <= EDGE_HIGH:
            return end, 0.0
        sign = 1.0 if end > m else -1.0
        hi = math.log(abs(far - m))
        lo = math.log(max(abs(m), 1e-300) * 1e-16) if m != 0.0 else math.log(1e-300)
        u_lo = m + sign * math.exp(lo)
        if u_lo == m or self.psi(u_lo) >= EDGE_LOW:
            return m, 0.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            u = m + sign * math.exp(mid)
            p = self.psi(u)
            if p < EDGE_LOW:
                lo = mid
            elif p > EDGE_HIGH:
                hi = mid
            else:
                return u, p
        u = m + sign * math.exp(hi)
        return u, self.psi(u)

    def _rate(self, edge, p):
        if p == 0.0 or edge == self.mode:
            return math.inf
        return p / abs(edge - self.mode)

    @staticmethod
    def _tail_mass(p, rate, length):
        if length <= 0.0 or math.isinf(rate) or p == 0.0:
            return 0.0
        return math.exp(-p) * -math.expm1(-rate * length) / rate

    def draw(self, rng, tally=None):
        if self.degenerate:
            return self.mode
        while True:
            hit(tally, "envelope_proposals")
            pick = rng.uniform() * self.total
            if pick < self.mass_mid:
                u = self.left + rng.uniform() * self.mass_mid
                log_env = 0.0
            elif pick < self.mass_mid + self.mass_right:
                x = rng.truncated_exponential(self.rate_right, self.len_right)
                u = self.right + x
                log_env = -self.psi_right - self.rate_right * x
            else:
                x = rng.truncated_exponential(self.rate_left, self.len_left)
                u = self.left - x
                log_env = -self.psi_left - self.rate_left * x
            if 0.0 < u < 1.0:
                p = self.psi(u)
                if -p > log_env + 1e-9:
                    raise EnvelopeError(f"envelope below target at u = {u!r}: psi = {p}, "
                                        f"log envelope = {log_env}; psi is not convex")
                if math.log(rng.uniform()) <= -p - log_env:
                    return u
            hit(tally, "envelope_rejections")


def logconcave_unit_sample(psi, rng, *, mode=0.0, tally=None):
    """One exact draw from the density proportional to exp(-psi) on (0, 1)."""
    return LogConcaveSampler(psi, mode).draw(rng, tally)


class SmallStableSampler:
    """S_t conditioned on {S_t < s}; the envelope is built once per (t, s)."""

    def __init__(self, ctx, theta, t, s):
        if not (theta > 0.0 and t > 0.0 and s > 0.0):
            raise PreconditionError(f"small stable sampler needs theta, t, s > 0, got ({theta}, {t}, {s})")
        self.ctx = ctx
        b = ctx.beta
        self.log_theta_t = math.log(theta * t)
        self.neg_beta_log_s = -b * math.log(s)
        log_lam = (b + 1.0) * self.log_theta_t + self.neg_beta_log_s
        self.unit = LogConcaveSampler(ctx.recentred_psi(log_lam), ctx.minimizer)

    def draw(self, rng, tally=None):
        ctx = self.ctx
        u = self.unit.draw(rng, tally)
        e = rng.exponential()
        second = -(ctx.beta + 1.0) * self.log_theta_t + math.log(e) - ctx.log_sigma_at(u)
        return _exp(-_logaddexp(self.neg_beta_log_s, second) / ctx.beta)


def small_stable_sample(ctx, theta, t, s, rng, tally=None):
    hit(tally, "small_stable_calls")
    return SmallStableSampler(ctx, theta, t, s).draw(rng, tally)


def small_tempered_stable_sample(ctx, theta, q, t, s, rng, tally=None):
    """Tempered S_t conditioned on {S_t < s}: tilt the stable draws by e^(-q W)."""
    sampler = SmallStableSampler(ctx, theta, t, s)
    hit(tally, "small_stable_calls")
    if q == 0.0:
        return sampler.draw(rng, tally)
    while True:
        w = sampler.draw(rng, tally)
        if rng.exponential() > q * w:
            return w
        hit(tally, "tempered_rejections")


def stable_laplace(alpha, theta, q, t, u):
    """E exp(-u S_t) for the tempered stable law."""
    return math.exp((q ** alpha - (u + q) ** alpha) * theta * t)
