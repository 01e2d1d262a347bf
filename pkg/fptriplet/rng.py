"""Seedable, splittable random streams.

Every random quantity in the package is a deterministic function of an
``RngStream``. Continuous draws are made by inversion of uniforms so that a
given seed reproduces a run bit for bit.
"""
import math

import numpy as np
from scipy.special import gammaincinv, ndtri

DEFAULT_SEED = 20240917
BLOCK_SIZE = 4096


class RngStream:
    """Buffered stream of uniforms on the open interval (0, 1)."""

    def __init__(self, seed=DEFAULT_SEED, *, seed_sequence=None, block_size=BLOCK_SIZE):
        if seed_sequence is None:
            seed_sequence = np.random.SeedSequence(seed)
        self.seed_sequence = seed_sequence
        self._generator = np.random.Generator(np.random.PCG64(seed_sequence))
        self._block_size = block_size
        self._buffer = []
        self._pos = 0

    def __repr__(self):
        return f"RngStream(entropy={self.seed_sequence.entropy}, key={self.seed_sequence.spawn_key})"

    def _refill(self):
        self._buffer = self._generator.random(self._block_size).tolist()
        self._pos = 0

    def substream(self, index):
        """Return the independent child stream number ``index``."""
        seq = np.random.SeedSequence(
            entropy=self.seed_sequence.entropy,
            spawn_key=tuple(self.seed_sequence.spawn_key) + (int(index),),
            pool_size=self.seed_sequence.pool_size,
        )
        return RngStream(seed_sequence=seq, block_size=self._block_size)

    def split(self, n):
        """Return the first ``n`` child streams."""
        return [self.substream(i) for i in range(n)]

    def uniform(self):
        while True:
            if self._pos >= len(self._buffer):
                self._refill()
            u = self._buffer[self._pos]
            self._pos += 1
            if u > 0.0:
                return u

    def uniforms(self, n):
        out = np.empty(n)
        filled = 0
        while filled < n:
            if self._pos >= len(self._buffer):
                self._refill()
            take = min(n - filled, len(self._buffer) - self._pos)
            out[filled:filled + take] = self._buffer[self._pos:self._pos + take]
            self._pos += take
            filled += take
        for i in np.flatnonzero(out == 0.0):
            out[i] = self.uniform()
        return out

    def exponential(self, rate=1.0):
        """Exp(rate) by inversion."""
        return -math.log1p(-self.uniform()) / rate

    def exponentials(self, n, rate=1.0):
        return -np.log1p(-self.uniforms(n)) / rate

    def truncated_exponential(self, rate, length):
        """Exp(rate) conditioned on being below ``length``."""
        if math.isinf(length):
            return self.exponential(rate)
        mass = -math.expm1(-rate * length)
        return -math.log1p(-self.uniform() * mass) / rate

    def pareto(self, shape, scale, upper=math.inf):
        """Density proportional to x^(-shape-1) on [scale, upper)."""
        u = self.uniform()
        if math.isinf(upper):
            return scale * u ** (-1.0 / shape)
        mass = -math.expm1(shape * math.log(scale / upper))
        return scale * (1.0 - u * mass) ** (-1.0 / shape)

    def beta_one(self, b):
        """Beta(1, b) by inversion."""
        return -math.expm1(math.log1p(-self.uniform()) / b)

    def gamma(self, shape, rate=1.0):
        """Gamma(shape, rate) by inversion of the regularised incomplete gamma function."""
        return float(gammaincinv(shape, self.uniform())) / rate

    def normal(self):
        return float(ndtri(self.uniform()))

    def normals(self, n):
        return ndtri(self.uniforms(n))
