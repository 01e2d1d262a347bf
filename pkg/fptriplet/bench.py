"""Runtime benchmark over parameter grids; times are seconds per 10^4 samples."""
import csv
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .boundary import ConstantBoundary
from .bounds import loop_bound
from .diagnostics import Tally
from .engine import default_fpts, sample_crossing
from .measures import ExponentialMeasure
from .model import EngineConfig, SubordinatorSpec
from .rng import RngStream
from .stable_fp import stable_crossing_time, stable_undershoot
from .zolotarev import zolotarev_context

logger = logging.getLogger(__name__)

PER_SAMPLES = 1e4
BENCH_COLUMNS = ("alpha", "q", "vartheta", "c0", "r", "rho", "n",
                 "mean_s", "median_s", "p90_s", "mean_M", "mean_K", "status")
TRUNCATION_SETTINGS = ((0.25, 1.0), (0.95, 100.0), (0.98, 100.0))
TRUNCATION_MULTIPLIERS = (0.25, 0.5, 1.0, 2.0, 4.0)


@dataclass(frozen=True)
class GridPoint:
    alpha: float
    q: float = 10.0
    vartheta: float = 2.0
    c0: float = 5.0
    r: object = "auto"
    rho: float = 0.5

    def spec(self):
        return SubordinatorSpec.build(self.alpha, self.vartheta, self.q, base=ExponentialMeasure(1.0), r=self.r)


@dataclass
class BenchRow:
    alpha: float
    q: float
    vartheta: float
    c0: float
    r: float
    rho: float
    n: int
    mean_s: float
    median_s: float
    p90_s: float
    mean_M: float
    mean_K: float
    status: str


def alpha_sweep_grid():
    """alpha from 0.05 to 0.95, vartheta = 2, q = 10, c = 5, Exp(1) jumps, r = 2 alpha / q."""
    return [GridPoint(round(a, 2)) for a in np.arange(0.05, 0.951, 0.05)]


def truncation_grid(multipliers=TRUNCATION_MULTIPLIERS):
    """Runtime against r around 2 alpha / q for the three (alpha, q) settings."""
    return [GridPoint(a, q, r=m * 2.0 * a / q) for a, q in TRUNCATION_SETTINGS for m in multipliers]


GRIDS = {
    "alpha": alpha_sweep_grid,
    "truncation": truncation_grid,
    # aliases
    "fig2": alpha_sweep_grid,
    "fig3": truncation_grid,
}


def bench_point(point, n, rng, *, cfg=None, timeout=math.inf, tally=None):
    """Time n draws at one grid point; stop early and mark incomplete past ``timeout`` seconds."""
    spec = point.spec()
    cfg = cfg if cfg is not None else EngineConfig(rho=point.rho)
    c = ConstantBoundary(point.c0)
    fpts = default_fpts(spec, cfg)
    seconds = []
    loops = []
    jumps = []
    status = "complete"
    start = time.perf_counter()
    for i in range(n):
        t0 = time.perf_counter()
        trip = sample_crossing(spec, c, cfg, fpts, rng.substream(i), tally=tally)
        seconds.append(time.perf_counter() - t0)
        loops.append(trip.loop_count)
        jumps.append(trip.cpp_jump_count)
        bound = loop_bound(trip.cpp_jump_count, point.c0, spec.r, cfg.rho)
        assert trip.loop_count <= bound, f"loop count {trip.loop_count} exceeds {bound} at {point}"
        if time.perf_counter() - start > timeout:
            status = "incomplete"
            logger.warning(f"bench point {point} timed out after {i + 1} of {n} draws")
            break
    per = np.asarray(seconds) * PER_SAMPLES
    return BenchRow(point.alpha, point.q, point.vartheta, point.c0, spec.r, cfg.rho, len(seconds),
                    float(per.mean()), float(np.median(per)), float(np.quantile(per, 0.9)),
                    float(np.mean(loops)), float(np.mean(jumps)), status)


def run_bench(points, n, *, rng=None, seed=None, cfg=None, timeout=math.inf, threads=1, tally=None):
    """Bench every grid point; point i draws from substream i, rows come back in grid order."""
    if rng is not None:
        root = rng
    else:
        root = RngStream(seed) if seed is not None else RngStream()

    def one(indexed):
        i, point = indexed
        point_cfg = cfg if cfg is not None else EngineConfig(rho=point.rho)
        local = Tally()
        row = bench_point(point, n, root.substream(i), cfg=point_cfg, timeout=timeout, tally=local)
        logger.info(f"alpha={row.alpha:g} q={row.q:g} r={row.r:.4g}: median {row.median_s:.4g} s/1e4, "
                    f"mean M {row.mean_M:.3g}, mean K {row.mean_K:.3g} [{row.status}]")
        return row, local

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, enumerate(points)))
    else:
        results = [one(item) for item in enumerate(points)]
    if tally is not None:
        for _, local in results:
            tally.merge(local)
    return [row for row, _ in results]


def write_bench_csv(rows, path):
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=BENCH_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(asdict(row))


def undershoot_cost_profile(alpha, n, method="joint", *, level=1.0, theta=1.0, seed=None):
    """Quantiles of the per-call iteration count of the stable undershoot sampler."""
    ctx = zolotarev_context(alpha)
    rng = RngStream(seed) if seed is not None else RngStream()
    c = ConstantBoundary(level)
    counts = np.empty(n)
    for i in range(n):
        tally = Tally()
        tau, lvl = stable_crossing_time(ctx, theta, c, rng)
        stable_undershoot(ctx, theta, tau, lvl, rng, method=method, tally=tally)
        counts[i] = tally["undershoot_iterations"]
    profile = {
        "alpha": alpha,
        "method": method,
        "n": n,
        "mean": float(counts.mean()),
        "median": float(np.median(counts)),
        "p90": float(np.quantile(counts, 0.9)),
        "p99": float(np.quantile(counts, 0.99)),
        "max": float(counts.max()),
    }
    logger.info(f"undershoot cost alpha={alpha} method={method}: median {profile['median']:g}, "
                f"p99 {profile['p99']:g}, max {profile['max']:g}")
    return profile
