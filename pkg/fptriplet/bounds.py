"""Closed-form bound evaluators and the density-decomposition helper."""
import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import CertificateError, PreconditionError
from .measures import band_mass
from .quadrature import integrate_log

logger = logging.getLogger(__name__)

# e^{-x} <= 1 - x/2 holds for x in [0, 1.5936]
TILT_RANGE = 1.5936
GRID_POINTS = 2048


def lambda_mass(spec, lambda_r0_mass):
    """Lambda_r = Lambda_{r0} + integral of vartheta e^{-qx} x^{-alpha-1} over (r, r0)."""
    if not 0.0 < spec.r <= spec.r0:
        raise PreconditionError(f"need 0 < r <= r0, got r = {spec.r}, r0 = {spec.r0}")
    return lambda_r0_mass + band_mass(spec.alpha, spec.vartheta, spec.q, spec.r, spec.r0)


def upsilon(u, r, q):
    """Lower bound for the truncated tempered-stable Laplace exponent at u."""
    if not (u > 0.0 and r > 0.0 and q >= 0.0):
        raise PreconditionError(f"upsilon needs u > 0, r > 0, q >= 0, got ({u}, {r}, {q})")
    m = min(r, 1.0)
    big_r = 1.0 / m
    if u + q < big_r:
        return u * m / 2.0
    if q < big_r:
        return (1.0 - m * q + math.log((u + q) * m)) / 2.0
    return math.log1p(u / q) / 2.0


def small_jump_exponent(alpha, q, r, u):
    """Integral over (0, r) of (1 - e^{-ux}) e^{-qx} x^{-alpha-1} dx."""
    return integrate_log(lambda x: -math.expm1(-u * x) * math.exp(-q * x) * x ** (-alpha - 1.0), 0.0, r)


def psi0(spec, c0):
    """Integral of 1 - e^{-x/(1+c0)} against lambda_{r0}."""
    return spec.base_part.mean_transform(1.0 / (1.0 + c0))


def loop_bound(cpp_jumps, c0, r, rho):
    """K + ceil(c0 / (r rho)): the maximal number of main-loop iterations."""
    if math.isinf(r):
        return cpp_jumps + 1
    return cpp_jumps + math.ceil(c0 / (r * rho))


def complexity_bracket(spec, c0, rho, T0, psi0_value):
    """Running-time bracket of the main loop, without its universal constant."""
    u = 1.0 / (1.0 + c0)
    denom = psi0_value + spec.vartheta * upsilon(u, spec.r0, spec.q)
    assert denom > 0.0, f"psi0 + vartheta*Upsilon vanished for c0 = {c0}"
    cap = spec.r * rho
    side = 0.0 if math.isinf(cap) else c0 / cap
    lead = T0 / (1.0 - rho ** spec.alpha) + math.exp(spec.q * min(c0, cap))
    return lead * (spec.finite_part.mass / denom + side)


def parameter_choice_bracket(spec, c0, precision_bits=53):
    """Bracket for rho = 1/2 and r = min(2 alpha / q, r0), without its constant."""
    a, q, th = spec.alpha, spec.q, spec.vartheta
    u = 1.0 / (1.0 + c0)
    lead = (1.0 - a) ** -3 + abs(math.log(a)) + math.log(precision_bits)
    band = th * q ** a if q > 0.0 and 2.0 * a / q < spec.r0 else 0.0
    denom = psi0(spec, c0) + th * upsilon(u, spec.r0, q)
    return lead * ((a * spec.base_part.mass + band) / denom + c0 * q) / a ** 3


@dataclass(frozen=True)
class JumpCountBounds:
    process: float
    walk: float
    combined: float
    proof: float


def jump_count_bounds(spec, c0):
    """Upper bounds on E[K], the number of compound-Poisson jumps used."""
    u = 1.0 / (1.0 + c0)
    lam = spec.finite_part.mass
    scale = math.exp(c0 * u) * lam
    p0 = psi0(spec, c0)
    inner = spec.vartheta * small_jump_exponent(spec.alpha, spec.q, spec.r, u)
    outer = 0.0
    if spec.r < spec.r0:
        outer = spec.vartheta * integrate_log(
            lambda x: -math.expm1(-u * x) * math.exp(-spec.q * x) * x ** (-spec.alpha - 1.0),
            spec.r, spec.r0)
    process = scale / inner if inner > 0.0 else math.inf
    walk = scale / (p0 + outer) if p0 + outer > 0.0 else math.inf
    combined = 2.0 * scale / (p0 + inner + outer)
    proof = 2.0 * math.e * lam / (p0 + spec.vartheta * upsilon(u, spec.r0, spec.q))
    return JumpCountBounds(process, walk, combined, proof)


def hitting_time_bound(spec, c0, u=None):
    """e^{u c0} / psi_X(u), psi_X the Laplace exponent of the whole subordinator."""
    u = 1.0 / (1.0 + c0) if u is None else u
    exponent = spec.vartheta * small_jump_exponent(spec.alpha, spec.q, spec.r, u)
    exponent += spec.finite_part.mean_transform(u)
    return math.exp(u * c0) / exponent


def walk_steps_bound(measure, c0, u=None):
    """e^{u c0} / (1 - psi_R(u)), psi_R(u) = E e^{-u J} for the jump-chain increments."""
    u = 1.0 / (1.0 + c0) if u is None else u
    return math.exp(u * c0) / (1.0 - measure.laplace(u))


@dataclass(frozen=True)
class DensityDecomposition:
    b_tilt: float
    r: float
    pi1: object
    pi2: object

    def tilted(self, t):
        return math.exp(-self.b_tilt * t) * self.pi1(t) if t <= self.r else 0.0

    def xi_bar(self, t):
        return max(self.pi2(t) - self.tilted(t), 0.0)


def _negative_point(pi1, pi2, b, r, grid):
    for t in grid:
        target = pi2(t)
        tilted = math.exp(-b * t) * pi1(t) if t <= r else 0.0
        if target - tilted < -1e-12 * max(abs(target), abs(tilted)):
            return t
    return None


def decompose_density(pi2, pi1, a1, a2, r_cert):
    """Split pi2 into a tilted, truncated copy of pi1 plus a non-negative remainder.

    The caller certifies (1 - a1 t) pi1 <= pi2 <= (1 + a2 t) pi1 on (0, r_cert].
    """
    if r_cert <= 0.0 or a1 < 0.0 or a2 < 0.0:
        raise PreconditionError(f"need r_cert > 0 and a1, a2 >= 0, got ({a1}, {a2}, {r_cert})")
    grid = np.geomspace(r_cert * 1e-9, r_cert * 1e3, GRID_POINTS)
    grid = np.union1d(grid, [r_cert])
    candidates = [(a1, r_cert)]
    if a1 > 0.0:
        candidates.append((2.0 * a1, min(r_cert, TILT_RANGE / (2.0 * a1))))
    bad = None
    for b, r in candidates:
        bad = _negative_point(pi1, pi2, b, r, grid)
        if bad is None:
            logger.debug(f"density decomposition accepted with b = {b}, r = {r}")
            return DensityDecomposition(b, r, pi1, pi2)
    raise CertificateError(f"remainder density negative at t = {bad:.6g}", bad)
