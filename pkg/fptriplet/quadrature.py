"""Adaptive quadrature wrappers with the package's tolerance and error policy."""
import logging
import math
import warnings

from scipy.integrate import IntegrationWarning, quad

from .errors import EvaluationError

logger = logging.getLogger(__name__)

REL_TOL = 1e-10
LIMIT = 500


def integrate(f, a, b, *, rel_tol=REL_TOL, points=None):
    """Integrate f over (a, b) with QUADPACK; raise on a non-finite result."""
    if a == b:
        return 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        kwargs = {"epsabs": 0.0, "epsrel": rel_tol, "limit": LIMIT}
        if points is not None and math.isfinite(a) and math.isfinite(b):
            kwargs["points"] = points
        value, abserr = quad(f, a, b, **kwargs)
    if not math.isfinite(value):
        raise EvaluationError(f"quadrature over ({a}, {b}) returned {value}")
    if abserr > 1e-6 * max(abs(value), 1e-300):
        logger.debug(f"quadrature over ({a}, {b}): value {value:.6e} with error estimate {abserr:.2e}")
    return value


def integrate_log(f, a, b, *, rel_tol=REL_TOL):
    """Integrate f over (a, b), 0 <= a < b <= inf, after substituting x = e^y."""
    if a == b:
        return 0.0
    lo = -math.inf if a == 0.0 else math.log(a)
    hi = math.inf if math.isinf(b) else math.log(b)

    def integrand(y):
        if y > 709.0 or y < -745.0:
            return 0.0
        x = math.exp(y)
        return f(x) * x

    return integrate(integrand, lo, hi, rel_tol=rel_tol)
