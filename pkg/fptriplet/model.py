"""Model parameters, engine configuration and the first-passage triplet type."""
import dataclasses
import math
from dataclasses import dataclass, field

from scipy.special import gamma

from .errors import PreconditionError
from .measures import MixtureMeasure, NullMeasure, TemperedBand
from .rng import DEFAULT_SEED

UNDERSHOOT_METHODS = ("joint", "beta")


def resolve_truncation(alpha, q, r0, policy="auto"):
    """Truncation level r: an explicit value, or min(r0, 2 alpha / q) under "auto"."""
    if policy == "auto" or policy is None:
        return r0 if q == 0.0 else min(r0, 2.0 * alpha / q)
    r = float(policy)
    if not 0.0 < r <= r0:
        raise PreconditionError(f"truncation level r = {r} must lie in (0, r0 = {r0}]")
    return r


@dataclass(frozen=True)
class SubordinatorSpec:
    """Driftless subordinator with Levy measure nu_{r,q} + lambda_r.

    ``finite_part`` is lambda_r. ``base_part`` is the user-supplied lambda_{r0}.
    They differ by the tempered band on (r, r0].
    """

    alpha: float
    vartheta: float
    q: float
    r: float
    r0: float
    finite_part: object
    base_part: object = None

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise PreconditionError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not self.vartheta > 0.0:
            raise PreconditionError(f"vartheta must be positive, got {self.vartheta}")
        if not self.q >= 0.0:
            raise PreconditionError(f"q must be >= 0, got {self.q}")
        if not 0.0 < self.r <= self.r0:
            raise PreconditionError(f"need 0 < r <= r0, got r = {self.r}, r0 = {self.r0}")
        if self.base_part is None:
            object.__setattr__(self, "base_part", self.finite_part)

    @classmethod
    def build(cls, alpha, vartheta, q=0.0, *, r0=math.inf, base=None, r="auto"):
        """Assemble lambda_r from lambda_{r0} and the tempered band on (r, r0]."""
        base = base if base is not None else NullMeasure()
        r = resolve_truncation(alpha, q, r0, r)
        parts = [base]
        if r < r0:
            parts.append(TemperedBand(alpha, vartheta, q, r, r0))
        finite = parts[0] if len(parts) == 1 else MixtureMeasure(parts)
        return cls(alpha, vartheta, q, r, r0, finite, base)

    @property
    def theta(self):
        return self.vartheta * gamma(1.0 - self.alpha) / self.alpha

    @property
    def beta(self):
        return self.alpha / (1.0 - self.alpha)

    def as_dict(self):
        return {
            "alpha": self.alpha,
            "vartheta": self.vartheta,
            "q": self.q,
            "r": self.r,
            "r0": self.r0,
            "theta": self.theta,
            "lambda_r0": self.base_part.name,
            "Lambda_r0": self.base_part.mass,
            "Lambda_r": self.finite_part.mass,
        }


@dataclass(frozen=True)
class EngineConfig:
    rho: float = 0.5
    precision_bits: int = 53
    seed: int = DEFAULT_SEED
    r_policy: object = "auto"
    undershoot: str = "joint"

    def __post_init__(self):
        if not 0.0 < self.rho < 1.0:
            raise PreconditionError(f"rho must lie in (0, 1), got {self.rho}")
        if self.undershoot not in UNDERSHOOT_METHODS:
            raise PreconditionError(f"undershoot method must be one of {UNDERSHOOT_METHODS}")


@dataclass(frozen=True)
class CrossingTriplet:
    """(T, U, V): crossing time, undershoot and overshoot, with run counters."""

    T: float
    U: float
    V: float
    diagnostics: dict = field(default_factory=dict, compare=False)
    path: tuple = field(default=None, compare=False)

    @property
    def loop_count(self):
        return self.diagnostics.get("loops", 0)

    @property
    def cpp_jump_count(self):
        return self.diagnostics.get("cpp_jumps", 0)

    def crosses(self, c, rel_tol=1e-9):
        """True when 0 < T, U <= c(T) < V and V - U > 0."""
        level = c(self.T)
        slack = rel_tol * max(1.0, abs(level))
        return 0.0 < self.T < math.inf and self.U <= level + slack and level < self.V and self.V > self.U


def drift_adjust(triplet, mu):
    """Map a triplet for c(t) - mu t back to the process with drift mu."""
    if mu == 0.0:
        return triplet
    shift = mu * triplet.T
    return dataclasses.replace(triplet, U=triplet.U + shift, V=triplet.V + shift)
