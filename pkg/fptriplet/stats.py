"""Statistical checks used by the tests and the acceptance suite."""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .boundary import ConstantBoundary
from .bounds import hitting_time_bound, walk_steps_bound
from .engine import sample_many
from .errors import PreconditionError
from .zolotarev import stable_laplace

logger = logging.getLogger(__name__)

MIN_KS_SIZE = 100


def _clean(samples, name):
    x = np.asarray(samples, dtype=float)
    if np.isnan(x).any():
        raise PreconditionError(f"{name} contains NaN")
    if x.size < MIN_KS_SIZE:
        raise PreconditionError(f"{name} has {x.size} values, need at least {MIN_KS_SIZE}")
    return x


def ks_two_sample(a, b):
    """Two-sample Kolmogorov-Smirnov statistic with its asymptotic p-value."""
    result = stats.ks_2samp(_clean(a, "first sample"), _clean(b, "second sample"), method="asymp")
    return float(result.statistic), float(result.pvalue)


def ks_one_sample(samples, cdf):
    result = stats.kstest(_clean(samples, "sample"), cdf)
    return float(result.statistic), float(result.pvalue)


def mean_with_se(x):
    x = np.asarray(x, dtype=float)
    return float(x.mean()), float(x.std(ddof=1) / math.sqrt(x.size))


def laplace_check(samples, u, theta, q, t, alpha):
    """Compare the mean of e^{-u S} with exp((q^alpha - (u + q)^alpha) theta t)."""
    if not u > 0.0:
        raise PreconditionError(f"laplace check needs u > 0, got {u}")
    estimate, se = mean_with_se(np.exp(-u * np.asarray(samples, dtype=float)))
    reference = stable_laplace(alpha, theta, q, t, u)
    z = (estimate - reference) / se if se > 0.0 else (0.0 if estimate == reference else math.inf)
    return estimate, reference, z


@dataclass(frozen=True)
class HittingReport:
    mean_tau: float
    se_tau: float
    tau_bound: float
    mean_steps: float
    se_steps: float
    steps_bound: float

    @property
    def passed(self):
        tau_ok = self.mean_tau <= self.tau_bound + 3.0 * self.se_tau
        steps_ok = math.isnan(self.mean_steps) or self.mean_steps <= self.steps_bound + 3.0 * self.se_steps
        return tau_ok and steps_ok


def walk_steps(measure, c0, rng, n):
    """Steps the jump chain of the normalised measure needs to exceed c0, n times."""
    out = np.empty(n)
    for i in range(n):
        level = 0.0
        steps = 0
        while level <= c0:
            level += measure.sample(rng)
            steps += 1
        out[i] = steps
    return out


def hitting_bound_check(spec, c0, n, rng, cfg=None):
    """Estimate E[tau_c0] and the jump-chain step count against their exponential-moment bounds."""
    if n < 1000:
        raise PreconditionError(f"hitting bound check needs n >= 1000, got {n}")
    taus = [t.T for t in sample_many(spec, ConstantBoundary(c0), n, cfg, rng=rng.substream(0))]
    mean_tau, se_tau = mean_with_se(taus)
    measure = spec.finite_part
    if measure.mass > 0.0:
        steps = walk_steps(measure, c0, rng.substream(1), n)
        mean_steps, se_steps = mean_with_se(steps)
        steps_bound = walk_steps_bound(measure, c0)
    else:
        mean_steps = se_steps = steps_bound = math.nan
    report = HittingReport(mean_tau, se_tau, hitting_time_bound(spec, c0), mean_steps, se_steps, steps_bound)
    logger.info(f"hitting times c0={c0}: E[tau] {mean_tau:.4g} <= {report.tau_bound:.4g}, "
                f"E[steps] {mean_steps:.4g} <= {steps_bound:.4g}")
    return report
