import math

import numpy as np
import pytest

from fptriplet.bounds import walk_steps_bound
from fptriplet.errors import PreconditionError
from fptriplet.measures import ExponentialMeasure, PointMeasure
from fptriplet.model import SubordinatorSpec
from fptriplet.stats import (
    HittingReport,
    hitting_bound_check,
    ks_one_sample,
    ks_two_sample,
    laplace_check,
    mean_with_se,
    walk_steps,
)
from fptriplet.zolotarev import stable_samples, zolotarev_context


def test_ks_two_sample(rng):
    """Test the two-sample statistic separates different laws"""
    a = rng.exponentials(2000)
    b = rng.exponentials(2000)
    c = rng.exponentials(2000, 2.0)
    assert ks_two_sample(a, b)[1] > 0.001
    assert ks_two_sample(a, c)[1] < 1e-6


def test_ks_one_sample(rng):
    """Test the one-sample statistic against the uniform CDF"""
    stat, p = ks_one_sample(rng.uniforms(2000), lambda x: np.clip(x, 0.0, 1.0))
    assert 0.0 < stat < 0.1 and p > 0.001


def test_ks_input_checks():
    """Test NaN and undersized samples are refused"""
    with pytest.raises(PreconditionError):
        ks_two_sample([math.nan] * 200, np.arange(200.0))
    with pytest.raises(PreconditionError):
        ks_one_sample(np.arange(10.0), lambda x: x)


def test_mean_with_se():
    """Test the sample mean and its standard error"""
    mean, se = mean_with_se([1.0, 2.0, 3.0])
    assert mean == 2.0
    assert se == pytest.approx(1.0 / math.sqrt(3.0))


def test_laplace_check(rng):
    """Test the Laplace identity on exact stable draws"""
    samples = stable_samples(zolotarev_context(0.5), 1.0, 2.0, rng, 20_000)
    estimate, reference, z = laplace_check(samples, 1.0, 1.0, 0.0, 2.0, 0.5)
    assert reference == pytest.approx(math.exp(-2.0))
    assert abs(z) < 4.0, f"z = {z}"
    with pytest.raises(PreconditionError):
        laplace_check(samples, 0.0, 1.0, 0.0, 2.0, 0.5)


def test_walk_steps(rng):
    """Test the jump chain of a point mass needs a fixed number of steps"""
    steps = walk_steps(PointMeasure(0.4), 1.0, rng, 20)
    assert np.all(steps == 3)


def test_hitting_report_passed():
    """Test the report passes within three standard errors and ignores a missing walk"""
    assert HittingReport(1.2, 0.1, 1.0, math.nan, math.nan, math.nan).passed
    assert not HittingReport(1.5, 0.1, 1.0, 1.0, 0.1, 2.0).passed
    assert not HittingReport(1.0, 0.1, 1.0, 3.0, 0.1, 2.0).passed


def test_hitting_check_needs_samples(rng, mixed_spec):
    """Test the hitting-time check refuses small runs"""
    with pytest.raises(PreconditionError):
        hitting_bound_check(mixed_spec, 1.0, 100, rng)


@pytest.mark.slow
def test_hitting_bound_check(rng):
    """Test mean hitting times and walk steps respect their exponential-moment bounds"""
    spec = SubordinatorSpec.build(0.5, 2.0, 1.0, base=ExponentialMeasure(1.0))
    report = hitting_bound_check(spec, 1.0, 1000, rng)
    assert report.passed, f"{report}"
    assert report.mean_tau > 0.0


def test_ks_examples(rng):
    """Test identical samples give statistic zero and shifted uniforms are detected"""
    a = rng.uniforms(10_000)
    assert ks_two_sample(a, a)[0] == 0.0
    assert ks_two_sample(a, rng.uniforms(10_000) + 0.2)[1] < 1e-6


def test_laplace_check_tempered_reference(rng):
    """Test the tempered reference exp(1 - sqrt 2) at alpha = 1/2, q = 1"""
    _, reference, _ = laplace_check(rng.uniforms(200), 1.0, 1.0, 1.0, 1.0, 0.5)
    assert reference == pytest.approx(math.exp(1.0 - math.sqrt(2.0)))


def test_point_mass_walk_against_bound(rng):
    """Test a unit point mass needs exactly three steps past 2.5, within its bound"""
    measure = PointMeasure(1.0)
    steps = walk_steps(measure, 2.5, rng, 10)
    assert np.all(steps == 3)
    assert 3.0 <= walk_steps_bound(measure, 2.5)
    assert ExponentialMeasure(1.0).laplace(0.5) == pytest.approx(1.0 / 1.5)
