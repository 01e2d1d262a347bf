"""Main loop: interleave truncated tempered stable crossings with compound Poisson jumps."""
import functools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .boundary import boundary_update
from .bounds import loop_bound
from .diagnostics import Tally
from .errors import PreconditionError
from .model import CrossingTriplet, EngineConfig
from .rng import RngStream
from .stable_fp import DefaultFpts, truncated_triplet
from .zolotarev import small_tempered_stable_sample, zolotarev_context

logger = logging.getLogger(__name__)


@dataclass
class EngineState:
    """Accumulators of the main loop; ``b`` is the capped residual boundary."""

    T: float = 0.0
    U: float = 0.0
    V: float = 0.0
    D: float = math.inf
    b: object = None
    loops: int = 0
    cpp_jumps: int = 0
    path: list = field(default=None)

    def record(self):
        if self.path is not None:
            self.path.append((self.T, self.V))


def cpp_first_jump(fm, rng):
    """D ~ Exp(mass) and a deferred sampler for the jump size; D = inf when mass is 0."""
    if fm.mass == 0.0:
        return math.inf, None
    return rng.exponential(fm.mass), functools.partial(fm.sample, rng)


def default_fpts(spec, cfg):
    return DefaultFpts(zolotarev_context(spec.alpha), spec.theta, spec.q, cfg.undershoot)


def sample_crossing(spec, c, cfg=None, fpts=None, rng=None, *, record_path=False, tally=None):
    """One exact draw of (tau_c, Z_{tau-}, Z_tau) for Z = Y + Q."""
    cfg = cfg if cfg is not None else EngineConfig()
    if not c.c0 > 0.0:
        raise PreconditionError(f"boundary must start above 0, got c(0) = {c.c0}")
    ctx = zolotarev_context(spec.alpha)
    theta = spec.theta
    fpts = fpts if fpts is not None else default_fpts(spec, cfg)
    rng = rng if rng is not None else RngStream(cfg.seed)
    local = Tally()
    cap = spec.r * cfg.rho
    state = EngineState(b=boundary_update(c, 0.0, 0.0, cap), path=[] if record_path else None)
    state.D, jump = cpp_first_jump(spec.finite_part, rng)
    while True:
        state.loops += 1
        trip = truncated_triplet(ctx, theta, spec.q, spec.r, state.b, fpts, rng, tally=local)
        if state.D > trip.T:
            # Y crosses b before Q jumps
            state.U = state.V + trip.U
            state.V = state.V + trip.V
            state.T += trip.T
            state.D -= trip.T
        else:
            w = small_tempered_stable_sample(ctx, theta, spec.q, state.D, state.b(state.D), rng, local)
            state.U = state.V + w
            state.V = state.V + w + jump()
            state.T += state.D
            state.cpp_jumps += 1
            state.D, jump = cpp_first_jump(spec.finite_part, rng)
        state.record()
        state.b = boundary_update(c, state.T, state.V, cap)
        if state.b.c0 <= 0.0:
            break
    bound = loop_bound(state.cpp_jumps, c.c0, spec.r, cfg.rho)
    assert state.loops <= bound, f"loop count {state.loops} exceeds bound {bound}"
    local.hit("loops", state.loops)
    local.hit("cpp_jumps", state.cpp_jumps)
    if tally is not None:
        tally.merge(local)
    path = tuple(state.path) if record_path else None
    return CrossingTriplet(state.T, state.U, state.V, diagnostics=local.as_dict(), path=path)


def sample_many(spec, c, n, cfg=None, *, fpts=None, rng=None, threads=1, record_path=False, tally=None):
    """n draws; draw i uses substream i of the root stream, so output is scheduling-independent."""
    cfg = cfg if cfg is not None else EngineConfig()
    c.validate()
    root = rng if rng is not None else RngStream(cfg.seed)
    fpts = fpts if fpts is not None else default_fpts(spec, cfg)

    def draw(i):
        return sample_crossing(spec, c, cfg, fpts, root.substream(i), record_path=record_path)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            triplets = list(pool.map(draw, range(n)))
    else:
        triplets = [draw(i) for i in range(n)]
    if tally is not None:
        for trip in triplets:
            tally.merge(trip.diagnostics)
    logger.debug(f"sampled {n} crossings of {c!r} with {threads} thread(s)")
    return triplets
