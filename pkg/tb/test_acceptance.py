import json
import math

import numpy as np
import pytest

from fptriplet.acceptance import (
    CHECKS,
    CheckResult,
    check_laplace,
    check_levy_cdf,
    check_oracle_agreement,
    check_small_stable,
    check_stable_first_passage,
    check_structural,
    check_tempered_tilt,
    check_truncation,
    levy_cdf,
    run_suite,
    structural_grid,
    suite_size,
    write_validate_json,
)


def test_check_result_as_dict():
    """Test NaN p-values are written as null"""
    assert CheckResult("x", 1.0, float("nan"), True).as_dict() == {"statistic": 1.0, "p": None, "pass": True}
    assert CheckResult("x", 1.0, 0.25, False).as_dict()["p"] == 0.25


def test_suite_size():
    """Test the quick suite uses a tenth of the full size with a floor"""
    assert suite_size(10_000, "full") == 10_000
    assert suite_size(10_000, "quick") == 1000
    assert suite_size(50, "quick") == 10
    with pytest.raises(ValueError):
        suite_size(100, "medium")


def test_check_names_are_unique():
    """Test every registered check has its own name"""
    names = [name for name, _, _ in CHECKS]
    assert len(names) == len(set(names)) == 11


def test_levy_cdf():
    """Test the closed-form alpha = 1/2 CDF"""
    assert levy_cdf(1e-6) == pytest.approx(0.0, abs=1e-12)
    assert levy_cdf(1.0) == pytest.approx(math.erfc(0.5))


@pytest.mark.parametrize("check,n", [(check_laplace, 5000), (check_truncation, 1000)])
def test_quick_bound_checks(rng, check, n):
    """Test the identity and acceptance-floor checks pass at moderate sizes"""
    result = check(n, rng)
    assert result.passed, f"{result}"


@pytest.mark.parametrize("check,n", [
    (check_levy_cdf, 2000),
    (check_small_stable, 1000),
    (check_tempered_tilt, 2000),
])
def test_quick_distribution_checks(rng, check, n):
    """Test the distributional checks are not rejected at moderate sizes"""
    result = check(n, rng)
    assert result.p > 1e-3, f"{result}"
    assert math.isfinite(result.statistic)


def test_structural_check(rng):
    """Test crossing and loop-bound invariants over the structural grid"""
    assert len(structural_grid()) == 6
    result = check_structural(12, rng)
    assert result.passed and result.statistic == 0.0


def test_run_suite_subset(tmp_path):
    """Test a filtered suite run and its JSON output"""
    results = run_suite("quick", seed=3, only={"laplace_identity", "stable_cdf_closed_form"})
    assert set(results) == {"laplace_identity", "stable_cdf_closed_form"}
    path = tmp_path / "validate.json"
    write_validate_json(results, path)
    data = json.loads(path.read_text())
    assert set(data) == set(results)
    assert all(isinstance(entry["pass"], bool) for entry in data.values())


def test_run_suite_is_reproducible():
    """Test a seeded suite run repeats its statistics"""
    a = run_suite("quick", seed=4, only={"laplace_identity"})
    b = run_suite("quick", seed=4, only={"laplace_identity"})
    assert a["laplace_identity"].statistic == b["laplace_identity"].statistic


@pytest.mark.slow
def test_stable_first_passage_check(rng):
    """Test engine triplets of the stable process against their closed-form laws"""
    result = check_stable_first_passage(2000, rng)
    assert result.passed, f"{result}"


@pytest.mark.slow
def test_oracle_agreement_check(rng):
    """Test the exact sampler against the compensated small-jump oracle"""
    result = check_oracle_agreement(1000, rng)
    assert result.passed, f"{result}"


@pytest.mark.slow
def test_full_quick_suite():
    """Test every check of the quick suite passes"""
    results = run_suite("quick")
    failed = [name for name, result in results.items() if not result.passed]
    assert not failed, f"failed checks: {failed}"
    assert np.isfinite([r.statistic for r in results.values()]).all()
