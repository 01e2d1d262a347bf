"""Acceptance suite: statistical and structural checks written to validate.json."""
import json
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc
from scipy.stats import norm

from .bench import GridPoint, alpha_sweep_grid, truncation_grid, run_bench
from .boundary import ConstantBoundary, LinearBoundary
from .bounds import jump_count_bounds, loop_bound
from .diagnostics import Tally
from .engine import sample_many
from .fpde import FpdeProblem, crossing_times, default_grid, fpde_estimate, rao_blackwell
from .measures import ExponentialMeasure, ParetoMeasure, PointMeasure
from .model import EngineConfig, SubordinatorSpec
from .oracle import OracleConfig, oracle_sample, residual_proxy, stable_undershoot_cdf
from .rng import RngStream
from .stable_fp import DefaultFpts, truncated_triplet
from .stats import hitting_bound_check, ks_one_sample, ks_two_sample, laplace_check, mean_with_se
from .zolotarev import SmallStableSampler, small_tempered_stable_sample, stable_samples, zolotarev_context

logger = logging.getLogger(__name__)

SUITES = ("quick", "full")
QUICK_FACTOR = 10


@dataclass
class CheckResult:
    name: str
    statistic: float
    p: float
    passed: bool

    def as_dict(self):
        p = None if self.p is None or math.isnan(self.p) else float(self.p)
        return {"statistic": float(self.statistic), "p": p, "pass": bool(self.passed)}


def _z_p(z):
    return float(2.0 * norm.sf(abs(z)))


def levy_cdf(x):
    """CDF of the one-sided stable law with alpha = 1/2 and Laplace transform e^{-sqrt(s)}."""
    x = np.asarray(x, dtype=float)
    return erfc(1.0 / (2.0 * np.sqrt(np.maximum(x, 1e-300))))


def check_laplace(n, rng):
    ctx = zolotarev_context(0.5)
    samples = stable_samples(ctx, 1.0, 1.0, rng, n)
    estimate, reference, z = laplace_check(samples, 1.0, 1.0, 0.0, 1.0, 0.5)
    return CheckResult("laplace_identity", z, _z_p(z), abs(z) < 4.0)


def check_levy_cdf(n, rng):
    ctx = zolotarev_context(0.5)
    stat, p = ks_one_sample(stable_samples(ctx, 1.0, 1.0, rng, n), levy_cdf)
    return CheckResult("stable_cdf_closed_form", stat, p, p > 0.01)


def check_small_stable(n, rng, s=0.5):
    ctx = zolotarev_context(0.5)
    tally = Tally()
    sampler = SmallStableSampler(ctx, 1.0, 1.0, s)
    draws = np.array([sampler.draw(rng, tally) for _ in range(n)])
    norm_s = levy_cdf(s)
    stat, p = ks_one_sample(draws, lambda x: np.minimum(levy_cdf(x) / norm_s, 1.0))
    acceptance = n / tally["envelope_proposals"]
    logger.info(f"log-concave envelope acceptance {acceptance:.3f}")
    return CheckResult("small_stable_conditional", stat, p, p > 0.01 and acceptance >= 0.2)


def check_tempered_tilt(n, rng, q=2.0, s=0.5):
    ctx = zolotarev_context(0.5)
    sampler = SmallStableSampler(ctx, 1.0, 1.0, s)
    stable = np.array([sampler.draw(rng) for _ in range(n)])
    tally = Tally()
    tempered = np.array([small_tempered_stable_sample(ctx, 1.0, q, 1.0, s, rng, tally) for _ in range(n)])
    weights = np.exp(-q * stable)
    worst = 0.0
    for power in (1, 2):
        f = stable ** power
        ratio = float((weights * f).sum() / weights.sum())
        # delta-method standard error of a self-normalised mean
        se_ratio = float(np.sqrt(np.mean((weights * (f - ratio)) ** 2) / n) / weights.mean())
        mean, se = mean_with_se(tempered ** power)
        worst = max(worst, abs(mean - ratio) / math.hypot(se, se_ratio))
    acceptance = n / (n + tally["tempered_rejections"])
    floor = math.exp(-q * s) * (1.0 - 3.0 / math.sqrt(n))
    return CheckResult("tempered_tilt_identity", worst, _z_p(worst), worst <= 3.0 and acceptance >= floor)


def check_truncation(n, rng, alpha=0.5, r=1.0, rho=0.5):
    spec = SubordinatorSpec.build(alpha, 1.0, 0.0)
    ctx = zolotarev_context(alpha)
    fpts = DefaultFpts(ctx, spec.theta, 0.0)
    tally = Tally()
    b = ConstantBoundary(r * rho)
    trips = [truncated_triplet(ctx, spec.theta, 0.0, r, b, fpts, rng, tally=tally) for _ in range(n)]
    calls = tally["fpts_calls"]
    acceptance = n / calls
    se = math.sqrt(acceptance * (1.0 - acceptance) / calls)
    floor = 1.0 - rho ** alpha
    within = all(t.V - t.U <= r for t in trips)
    z = (acceptance - floor) / se if se > 0.0 else math.inf
    return CheckResult("truncation_acceptance", acceptance, _z_p(z), acceptance >= floor - 3.0 * se and within)


def check_stable_first_passage(n, rng, alpha=0.5, level=1.0):
    spec = SubordinatorSpec.build(alpha, 1.0, 0.0)
    ctx = zolotarev_context(alpha)
    trips = sample_many(spec, ConstantBoundary(level), n, rng=rng.substream(0))
    zeta = stable_samples(ctx, spec.theta, 1.0, rng.substream(1), n)
    stat, p = ks_two_sample([t.T for t in trips], (level / zeta) ** alpha)
    sup_diff, _ = ks_one_sample([t.U for t in trips], lambda u: stable_undershoot_cdf(alpha, level, u))
    logger.info(f"stable undershoot sup-difference {sup_diff:.4f}")
    return CheckResult("stable_first_passage", stat, p, p > 0.01 and sup_diff <= 0.02)


def check_oracle_agreement(n, rng, alpha=0.75, epsilon=1e-4):
    point = GridPoint(alpha)
    spec = point.spec()
    c = ConstantBoundary(point.c0)
    trips = sample_many(spec, c, n, rng=rng.substream(0))
    oracle = oracle_sample(spec, c, OracleConfig(epsilon=epsilon, n=n, compensate=True), rng.substream(1))
    stat_t, p_t = ks_two_sample([t.T for t in trips], oracle.T)
    stat_v, p_v = ks_two_sample([t.V for t in trips], oracle.V)
    proxy = residual_proxy(spec, epsilon) * float(oracle.T.mean())
    logger.info(f"oracle residual proxy x E[tau] = {proxy:.3g} (bias proxy {oracle.bias_proxy:.3g})")
    passed = min(p_t, p_v) > 0.005 and proxy < 0.01 * point.c0
    return CheckResult("oracle_agreement", max(stat_t, stat_v), min(p_t, p_v), passed)


def structural_grid():
    exp1 = ExponentialMeasure(1.0)
    return [
        (SubordinatorSpec.build(0.3, 1.0, 0.0, base=exp1), ConstantBoundary(2.0)),
        (SubordinatorSpec.build(0.5, 1.0, 1.0, base=exp1), LinearBoundary(3.0, 1.0)),
        (SubordinatorSpec.build(0.5, 1.0, 10.0), ConstantBoundary(1.0)),
        (SubordinatorSpec.build(0.75, 2.0, 10.0, base=exp1), ConstantBoundary(5.0)),
        (SubordinatorSpec.build(0.9, 1.0, 2.0, base=PointMeasure(0.5, 2.0)), LinearBoundary(2.0, 0.5)),
        (SubordinatorSpec.build(0.2, 1.0, 5.0, base=ParetoMeasure(3.0, 1.0)), ConstantBoundary(1.0)),
    ]


def check_structural(n, rng, cfg=None):
    cfg = cfg if cfg is not None else EngineConfig()
    grid = structural_grid()
    per_point = max(1, n // len(grid))
    violations = 0
    for i, (spec, c) in enumerate(grid):
        for trip in sample_many(spec, c, per_point, cfg, rng=rng.substream(i)):
            bound = loop_bound(trip.cpp_jump_count, c.c0, spec.r, cfg.rho)
            if not trip.crosses(c) or trip.loop_count > bound:
                violations += 1
    return CheckResult("structural_invariants", float(violations), float("nan"), violations == 0)


def complexity_settings():
    return [(0.5, 1.0, 1.0), (0.5, 10.0, 5.0), (0.75, 10.0, 5.0), (0.3, 2.0, 2.0), (0.9, 5.0, 1.0)]


def check_complexity(n, rng):
    worst = -math.inf
    passed = True
    for i, (alpha, q, c0) in enumerate(complexity_settings()):
        spec = SubordinatorSpec.build(alpha, 2.0, q, base=ExponentialMeasure(1.0))
        trips = sample_many(spec, ConstantBoundary(c0), n, rng=rng.substream(i))
        mean_k, se_k = mean_with_se([t.cpp_jump_count for t in trips])
        bound = jump_count_bounds(spec, c0).proof
        logger.info(f"alpha={alpha} q={q} c0={c0}: E[K] {mean_k:.4g} +- {se_k:.2g}, bound {bound:.4g}")
        passed = passed and mean_k <= bound + 3.0 * se_k
        worst = max(worst, mean_k / bound)
    hitting_spec = SubordinatorSpec.build(0.5, 2.0, 1.0, base=ExponentialMeasure(1.0))
    report = hitting_bound_check(hitting_spec, 1.0, max(n, 1000), rng.substream(99))
    return CheckResult("complexity_bounds", worst, float("nan"), passed and report.passed)


def check_bench(n, rng, timeout=600.0):
    rows = run_bench(alpha_sweep_grid() + truncation_grid(), n, rng=rng, timeout=timeout)
    complete = sum(1 for row in rows if row.status == "complete" and math.isfinite(row.median_s))
    return CheckResult("bench_completion", float(complete), float("nan"), complete == len(rows))


def check_fpde(n, rng, horizon=5.0):
    grid = default_grid()
    exact = fpde_estimate(FpdeProblem(horizon=0.0), grid, 100, rng.substream(0))
    ok_exact = all(row.estimate == row.x1 + row.x2 ** 2 and row.ci_half_width == 0.0 for row in exact)
    ones = fpde_estimate(FpdeProblem(horizon=1.0, phi=lambda x1, x2: 1.0), grid[:1], 100, rng.substream(1))
    ok_ones = ones[0].estimate == 1.0 and ones[0].ci_half_width == 0.0
    problem = FpdeProblem(horizon=horizon)
    trips = crossing_times(problem, n, rng.substream(2))
    rows = fpde_estimate(problem, grid, n, rng.substream(3), trips=trips)
    times = [t.T for t in trips]
    worst = 0.0
    for row in rows:
        rb, rb_se = rao_blackwell((row.x1, row.x2), times)
        se = math.hypot(row.ci_half_width / 1.959963984540054, rb_se)
        worst = max(worst, abs(row.estimate - rb) / se)
    return CheckResult("fpde_rao_blackwell", worst, _z_p(worst), ok_exact and ok_ones and worst <= 3.0)


# name, check, full-suite sample size
CHECKS = (
    ("laplace_identity", check_laplace, 100_000),
    ("stable_cdf_closed_form", check_levy_cdf, 10_000),
    ("small_stable_conditional", check_small_stable, 10_000),
    ("tempered_tilt_identity", check_tempered_tilt, 100_000),
    ("truncation_acceptance", check_truncation, 10_000),
    ("stable_first_passage", check_stable_first_passage, 10_000),
    ("oracle_agreement", check_oracle_agreement, 10_000),
    ("structural_invariants", check_structural, 100_000),
    ("complexity_bounds", check_complexity, 10_000),
    ("bench_completion", check_bench, 100),
    ("fpde_rao_blackwell", check_fpde, 10_000),
)


def suite_size(full_n, suite):
    if suite not in SUITES:
        raise ValueError(f"suite must be one of {SUITES}, got {suite!r}")
    return full_n if suite == "full" else max(full_n // QUICK_FACTOR, 10)


def run_suite(suite="quick", seed=None, only=None):
    """Run the checks in order; ``only`` restricts to a set of check names."""
    root = RngStream(seed) if seed is not None else RngStream()
    results = {}
    for i, (name, check, full_n) in enumerate(CHECKS):
        if only is not None and name not in only:
            continue
        result = check(suite_size(full_n, suite), root.substream(i))
        status = "PASS" if result.passed else "FAIL"
        logger.info(f"{status} {name}: statistic {result.statistic:.6g}, p {result.p:.4g}")
        results[name] = result
    passed = sum(1 for r in results.values() if r.passed)
    if results:
        logger.info(f"Acceptance: {passed / len(results) * 100:.2f}% ({passed}/{len(results)} checks)")
    return results


def write_validate_json(results, path):
    with open(path, "w") as f:
        json.dump({name: r.as_dict() for name, r in results.items()}, f, indent=4)
