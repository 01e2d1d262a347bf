import math

import numpy as np
import pytest
from scipy import stats
from scipy.special import gammaincinv

from fptriplet.rng import RngStream


def test_same_seed_reproduces():
    """Test two streams with one seed produce identical draws"""
    a = RngStream(7)
    b = RngStream(7)
    xs = [a.uniform() for _ in range(10)]
    ys = [b.uniform() for _ in range(10)]
    assert xs == ys, f"streams diverged: {xs} vs {ys}"


def test_substreams_are_stable_and_distinct():
    """Test substream i is a pure function of the root seed and the index"""
    root = RngStream(11)
    first = root.substream(3).uniforms(5)
    again = RngStream(11).substream(3).uniforms(5)
    other = root.substream(4).uniforms(5)
    assert np.array_equal(first, again)
    assert not np.array_equal(first, other)


def test_substream_ignores_parent_position():
    """Test drawing from the parent does not shift its children"""
    root = RngStream(5)
    before = root.substream(0).uniform()
    root.uniforms(100)
    after = root.substream(0).uniform()
    assert before == after


def test_split_matches_substreams():
    """Test split(n) returns substreams 0 to n-1"""
    root = RngStream(3)
    streams = root.split(3)
    for i, s in enumerate(streams):
        assert s.uniform() == root.substream(i).uniform()


def test_uniforms_open_interval(rng):
    """Test uniforms lie strictly inside (0, 1) across buffer refills"""
    x = rng.uniforms(10_000)
    assert x.min() > 0.0 and x.max() < 1.0


def test_scalar_and_block_draws_agree():
    """Test uniforms(n) consumes the stream exactly like n scalar draws"""
    a = RngStream(9, block_size=16)
    b = RngStream(9, block_size=16)
    block = a.uniforms(40)
    scalars = np.array([b.uniform() for _ in range(40)])
    assert np.array_equal(block, scalars)


def test_exponential_mean(rng):
    """Test Exp(2) draws have mean near 1/2"""
    x = rng.exponentials(20_000, 2.0)
    assert abs(x.mean() - 0.5) < 0.02, f"mean {x.mean()}"


def test_truncated_exponential_bounds(rng):
    """Test truncated exponentials stay below their length"""
    draws = [rng.truncated_exponential(3.0, 0.25) for _ in range(2000)]
    assert max(draws) < 0.25
    assert min(draws) >= 0.0
    assert rng.truncated_exponential(1.0, math.inf) >= 0.0


def test_pareto_support(rng):
    """Test truncated Pareto draws respect their support"""
    draws = [rng.pareto(0.5, 1.0, 4.0) for _ in range(2000)]
    assert min(draws) >= 1.0
    assert max(draws) < 4.0


def test_pareto_median(rng):
    """Test the untruncated Pareto median scale * 2^(1/shape)"""
    draws = np.array([rng.pareto(2.0, 1.0) for _ in range(20_000)])
    assert np.median(draws) == pytest.approx(math.sqrt(2.0), rel=0.03)


def test_beta_one_mean(rng):
    """Test Beta(1, b) has mean 1 / (1 + b)"""
    draws = np.array([rng.beta_one(3.0) for _ in range(20_000)])
    assert draws.mean() == pytest.approx(0.25, abs=0.01)


def test_normal_moments(rng):
    """Test standard normal draws have mean 0 and variance 1"""
    z = rng.normals(20_000)
    assert abs(z.mean()) < 0.05
    assert z.var() == pytest.approx(1.0, abs=0.05)


def test_gamma_uses_buffered_uniforms():
    """Test gamma draws come from the same uniform buffer as every other draw"""
    a = RngStream(11)
    b = RngStream(11)
    first = a.gamma(1.5, 2.0)
    assert first == pytest.approx(gammaincinv(1.5, b.uniform()) / 2.0, rel=1e-14)
    assert a.uniform() == b.uniform()


def test_gamma_law():
    """Test gamma draws against the Gamma(1.5) distribution"""
    stream = RngStream(12)
    draws = np.array([stream.gamma(1.5) for _ in range(5000)])
    result = stats.kstest(draws, stats.gamma(1.5).cdf)
    assert result.pvalue > 0.001, f"KS p-value {result.pvalue}"
