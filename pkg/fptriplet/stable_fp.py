"""First-passage triplets of stable and tempered stable subordinators."""
import logging
import math
from typing import Protocol

import numpy as np
from scipy.optimize import brentq
from scipy.special import expit, gammaln

from .diagnostics import hit
from .errors import BracketError, PreconditionError
from .model import UNDERSHOOT_METHODS, CrossingTriplet
from .zolotarev import (
    LogConcaveSampler,
    _exp,
    _log_kernel,
    _logaddexp,
    log_stable_sample,
    log_undershoot_bound,
    small_stable_sample,
)

logger = logging.getLogger(__name__)

ROOT_RTOL = 1e-12
MAX_DOUBLINGS = 1000
WINDOW_LOG_BOUND = 1.0


class FptsSampler(Protocol):
    """(boundary, rng, tally) -> exact CrossingTriplet of the tempered stable subordinator."""

    def __call__(self, boundary, rng, tally=None) -> CrossingTriplet:
        ...


def invert_crossing(g, log_zeta, alpha, *, closed_form=None):
    """Solve tau^(-1/alpha) g(tau) = zeta for tau, given log zeta."""
    if closed_form is None:
        closed_form = g.is_constant
    g0 = g.c0
    if not g0 > 0.0:
        raise PreconditionError(f"crossing time needs g(0) > 0, got {g0}")
    log_hi = alpha * (math.log(g0) - log_zeta)
    if closed_form:
        return math.exp(log_hi)
    zeta = math.exp(log_zeta)
    hi = math.exp(log_hi)

    def excess(t):
        return g(t) - zeta * t ** (1.0 / alpha)

    if excess(hi) >= 0.0:
        return hi
    lo = hi
    for _ in range(MAX_DOUBLINGS):
        lo *= 0.5
        if excess(lo) > 0.0:
            return brentq(excess, lo, hi, rtol=ROOT_RTOL, xtol=1e-300)
        hi = lo
    raise BracketError(f"no crossing bracket for {g!r} after {MAX_DOUBLINGS} halvings")


def stable_crossing_time(ctx, theta, g, rng):
    """tau_g of the stable subordinator via {tau > t} = {zeta_1 < t^(-1/alpha) g(t)}."""
    log_zeta = log_stable_sample(ctx, theta, 1.0, rng)
    tau = invert_crossing(g, log_zeta, ctx.alpha)
    return tau, g(tau)


def _undershoot_joint(ctx, log_lam, rng, tally):
    """log y, where undershoot = level (1 + y)^(-1/beta), drawn jointly with the Zolotarev variable."""
    a_log = log_lam + ctx.log_sigma_min
    alpha, beta = ctx.alpha, ctx.beta
    log_g = float(gammaln(1.0 - alpha))
    # sup over d >= 0 of e^(-d/2) (1 + Gamma(1 - alpha) (a + d)^alpha)
    if a_log >= math.log(2.0 * alpha):
        log_m, gap = a_log, 0.0
    else:
        log_m, gap = math.log(2.0 * alpha), 2.0 * alpha - math.exp(a_log)
    log_peak = np.logaddexp(0.0, log_g + alpha * log_m - 0.5 * gap)
    log_c = -alpha * math.log(-math.expm1(-math.log(2.0) / beta))
    psi = ctx.recentred_psi(log_lam)
    proposal = LogConcaveSampler(ctx.recentred_psi(log_lam - math.log(2.0)), ctx.minimizer)
    while True:
        hit(tally, "undershoot_iterations")
        u = proposal.draw(rng, tally)
        d = psi(u)
        if math.isinf(d):
            continue
        log_k = a_log if d == 0.0 else _logaddexp(a_log, math.log(d))
        log_tilt = np.logaddexp(0.0, log_g + alpha * log_k)
        if math.log(rng.uniform()) > -0.5 * d + log_tilt - log_peak:
            continue
        if rng.uniform() < expit(log_g + alpha * log_k):
            # Gamma(1 - alpha) in logs: G(2 - alpha) U^(1 / (1 - alpha))
            log_y = (math.log(rng.gamma(2.0 - alpha)) + math.log(rng.uniform()) / (1.0 - alpha)
                     - log_k)
        else:
            log_y = math.log(rng.exponential()) - log_k
        if log_y < -40.0:
            log_gap = log_y - math.log(beta)
        else:
            log_gap = math.log(-math.expm1(-math.log1p(math.exp(log_y)) / beta))
        log_env = log_c + np.logaddexp(-alpha * log_y, 0.0)
        if math.log(rng.uniform()) <= -alpha * log_gap - log_env:
            return log_y


def _undershoot_beta(ctx, theta, tau, level, rng, tally):
    alpha = ctx.alpha
    log_scale = -math.log(theta * tau) / alpha
    log_bound = log_undershoot_bound(alpha)
    while True:
        hit(tally, "undershoot_iterations")
        u = rng.beta_one(1.0 - alpha) * level
        if not u > 0.0:
            continue
        log_h = _log_kernel(ctx, math.log(u) + log_scale, rng.uniform())
        if math.log(rng.uniform()) <= log_h - log_bound:
            return u


def stable_undershoot(ctx, theta, tau, level, rng, *, method="joint", tally=None):
    """Undershoot of the stable subordinator given crossing at tau from below level."""
    if not (tau > 0.0 and level > 0.0):
        raise PreconditionError(f"undershoot needs tau, level > 0, got ({tau}, {level})")
    if method == "beta":
        return _undershoot_beta(ctx, theta, tau, level, rng, tally)
    if method != "joint":
        raise PreconditionError(f"undershoot method must be one of {UNDERSHOOT_METHODS}, got {method!r}")
    log_lam = (ctx.beta + 1.0) * math.log(theta * tau) - ctx.beta * math.log(level)
    log_y = _undershoot_joint(ctx, log_lam, rng, tally)
    return level * math.exp(-math.log1p(math.exp(log_y)) / ctx.beta)


def stable_overshoot(ctx, u, level, rng):
    """Jump from u conditioned to exceed level, under the tail x^(-alpha)."""
    if not 0.0 <= u <= level:
        raise PreconditionError(f"overshoot needs 0 <= u <= level, got u = {u}, level = {level}")
    w = rng.uniform()
    return u + (level - u) * _exp(-math.log(w) / ctx.alpha)


def stable_triplet(ctx, theta, g, rng, *, undershoot="joint", tally=None):
    tau, level = stable_crossing_time(ctx, theta, g, rng)
    u = stable_undershoot(ctx, theta, tau, level, rng, method=undershoot, tally=tally)
    v = stable_overshoot(ctx, u, level, rng)
    return CrossingTriplet(tau, u, v)


def fpts_default(ctx, theta, q, f, rng, *, undershoot="joint", tally=None):
    """Tempered stable triplet by tilting stable windows of length 1/(theta q^alpha)."""
    if q == 0.0:
        return stable_triplet(ctx, theta, f, rng, undershoot=undershoot, tally=tally)
    rate = theta * q ** ctx.alpha
    t_star = 1.0 / rate
    t_acc = 0.0
    v_acc = 0.0
    g = f
    while True:
        hit(tally, "window_proposals")
        tau, level = stable_crossing_time(ctx, theta, g, rng)
        if tau <= t_star:
            u = stable_undershoot(ctx, theta, tau, level, rng, method=undershoot, tally=tally)
            v = stable_overshoot(ctx, u, level, rng)
            log_w = rate * tau - q * v
            assert log_w <= WINDOW_LOG_BOUND + 1e-12, f"window weight e^{log_w} exceeds e"
            if math.log(rng.uniform()) <= log_w - WINDOW_LOG_BOUND:
                return CrossingTriplet(t_acc + tau, v_acc + u, v_acc + v)
        else:
            w = small_stable_sample(ctx, theta, t_star, g(t_star), rng, tally)
            if math.log(rng.uniform()) <= -q * w:
                hit(tally, "windows_advanced")
                t_acc += t_star
                v_acc += w
                g = g.shifted(t_star, w)
                continue
        hit(tally, "window_rejections")


class DefaultFpts:
    """fpts_default bound to one tempered stable law."""

    def __init__(self, ctx, theta, q, undershoot="joint"):
        self.ctx = ctx
        self.theta = theta
        self.q = q
        self.undershoot = undershoot

    def __repr__(self):
        return f"DefaultFpts(alpha={self.ctx.alpha}, theta={self.theta:.6g}, q={self.q}, undershoot={self.undershoot})"

    def __call__(self, boundary, rng, tally=None):
        return fpts_default(self.ctx, self.theta, self.q, boundary, rng,
                            undershoot=self.undershoot, tally=tally)


CAP_CHECK_TIMES = np.concatenate(([0.0], np.geomspace(1e-9, 1e6, 64)))


def _check_capped(b, r, ts=CAP_CHECK_TIMES):
    ts = np.asarray(ts, dtype=float)
    values = b.eval_many(ts)
    over = np.flatnonzero(values > r * (1.0 + 1e-12))
    if over.size:
        t = ts[over[0]]
        raise PreconditionError(f"boundary exceeds truncation level r = {r} at t = {t:.3g}")


def truncated_triplet(ctx, theta, q, r, b, fpts, rng, *, tally=None):
    """Triplet of the r-truncated process: redraw until the crossing jump is at most r."""
    if math.isinf(r):
        hit(tally, "fpts_calls")
        return fpts(b, rng, tally)
    _check_capped(b, r)
    while True:
        hit(tally, "fpts_calls")
        trip = fpts(b, rng, tally)
        _check_capped(b, r, (trip.T,))
        if trip.V - trip.U <= r:
            return trip
        hit(tally, "truncation_rejections")
