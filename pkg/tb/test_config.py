import math

import pytest

from fptriplet.boundary import ConstantBoundary, DriftAdjustedBoundary, LinearBoundary
from fptriplet.config import DEFAULTS, ConfigLoader, parse_boundary, parse_measure, resolve
from fptriplet.errors import ConfigError
from fptriplet.measures import ExponentialMeasure, NullMeasure, ParetoMeasure, PointMeasure


def test_defaults():
    """Test the built-in configuration"""
    resolved = ConfigLoader().resolve()
    assert resolved.spec.alpha == 0.5 and resolved.spec.q == 0.0
    assert resolved.spec.r == math.inf
    assert isinstance(resolved.boundary, ConstantBoundary) and resolved.boundary.c0 == 1.0
    assert resolved.engine.seed == 20240917 and resolved.engine.rho == 0.5
    assert resolved.sampling_boundary is resolved.boundary


def test_file_and_overrides(tmp_path):
    """Test file values override defaults and flags override the file"""
    path = tmp_path / "run.cfg"
    path.write_text(
        "# tempered run\n"
        "alpha = 0.75\n"
        "q = 10   # tempering\n"
        "\n"
        "lambda = exp(1)\n"
        "r_policy = 0.1\n"
        "boundary = linear(5, 1)\n"
    )
    resolved = ConfigLoader(path).resolve({"alpha": "0.6", "seed": None, "drift": "0.5"})
    assert resolved.spec.alpha == 0.6
    assert resolved.spec.q == 10.0
    assert resolved.spec.r == 0.1
    assert resolved.spec.base_part.name == "exp(1)"
    assert isinstance(resolved.boundary, LinearBoundary)
    assert isinstance(resolved.sampling_boundary, DriftAdjustedBoundary)
    assert resolved.engine.seed == int(DEFAULTS["seed"])
    data = resolved.as_dict()
    assert data["boundary"] == "linear(5,1)" and data["drift"] == 0.5


def test_file_errors_name_the_line(tmp_path):
    """Test unknown keys and malformed lines report file and line"""
    path = tmp_path / "bad.cfg"
    path.write_text("alpha = 0.5\nmystery = 1\n")
    with pytest.raises(ConfigError, match="bad.cfg:2"):
        ConfigLoader(path).resolve()
    path.write_text("alpha 0.5\n")
    with pytest.raises(ConfigError, match="bad.cfg:1"):
        ConfigLoader(path).resolve()
    with pytest.raises(ConfigError, match="not found"):
        ConfigLoader(tmp_path / "missing.cfg").resolve()


def test_unknown_override():
    """Test an unknown override key is refused"""
    with pytest.raises(ConfigError):
        ConfigLoader().resolve({"gamma": "1"})


@pytest.mark.parametrize("text,kind", [
    ("exp(2)", ExponentialMeasure),
    ("exp(2, 3)", ExponentialMeasure),
    ("pareto(5,1)", ParetoMeasure),
    ("point(0.5)", PointMeasure),
    ("none", NullMeasure),
])
def test_parse_measure(text, kind):
    """Test every jump-measure preset"""
    assert isinstance(parse_measure(text), kind)


@pytest.mark.parametrize("text", ["gauss(1)", "exp()", "pareto(5)", "exp(-1)", "exp(a)", "exp(1", "none(1)"])
def test_parse_measure_errors(text):
    """Test unknown presets, wrong arity and invalid parameters"""
    with pytest.raises(ConfigError):
        parse_measure(text)


def test_parse_boundary():
    """Test boundary presets and their validation"""
    assert parse_boundary("const(2)").c0 == 2.0
    assert parse_boundary("linear(3,1)")(1.0) == 2.0
    for text in ("const(0)", "const(1,2)", "curve(1)", "linear(1,-1)"):
        with pytest.raises(ConfigError):
            parse_boundary(text)


@pytest.mark.parametrize("key,value", [
    ("alpha", "1.5"),
    ("alpha", "nan"),
    ("rho", "1"),
    ("drift", "-1"),
    ("undershoot", "fast"),
    ("seed", "1.5"),
    ("r", "2"),
])
def test_resolve_errors(key, value):
    """Test invalid values surface as configuration errors"""
    raw = dict(DEFAULTS)
    raw["r0"] = "1"
    raw[key] = value
    with pytest.raises(ConfigError):
        resolve(raw)
