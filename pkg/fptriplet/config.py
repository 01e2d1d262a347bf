"""Key-value run configuration with built-in defaults, a config file and flag overrides."""
import logging
import math
import re
from dataclasses import dataclass
from pathlib import Path

from .boundary import ConstantBoundary, DriftAdjustedBoundary, LinearBoundary
from .errors import ConfigError, PreconditionError
from .measures import ExponentialMeasure, NullMeasure, ParetoMeasure, PointMeasure
from .model import UNDERSHOOT_METHODS, EngineConfig, SubordinatorSpec

logger = logging.getLogger(__name__)

DEFAULTS = {
    "alpha": "0.5",
    "vartheta": "1",
    "q": "0",
    "r": "auto",
    "r0": "inf",
    "lambda": "none",
    "boundary": "const(1)",
    "rho": "0.5",
    "seed": "20240917",
    "drift": "0",
    "precision_bits": "53",
    "undershoot": "joint",
}
ALIASES = {"r_policy": "r"}
PRESET = re.compile(r"^\s*([a-z]+)\s*(?:\(([^()]*)\))?\s*$")


def _number(key, text):
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: expected a number, got {text!r}") from None
    if math.isnan(value):
        raise ConfigError(f"{key}: NaN is not allowed")
    return value


def _integer(key, text):
    try:
        return int(str(text))
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {text!r}") from None


def _preset(key, text):
    match = PRESET.match(str(text))
    if not match:
        raise ConfigError(f"{key}: malformed preset {text!r}")
    name, args = match.group(1), match.group(2)
    values = [] if args is None or not args.strip() else [_number(key, a) for a in args.split(",")]
    return name, values


def parse_measure(text):
    """lambda presets: exp(rate[,mass]), pareto(exponent,cut), point(size[,mass]), none."""
    name, args = _preset("lambda", text)
    arity = {"exp": (1, 2), "pareto": (2, 2), "point": (1, 2), "none": (0, 0)}
    if name not in arity:
        raise ConfigError(f"lambda: unknown preset {name!r}")
    lo, hi = arity[name]
    if not lo <= len(args) <= hi:
        raise ConfigError(f"lambda: {name} takes {lo} to {hi} arguments, got {len(args)}")
    try:
        if name == "exp":
            return ExponentialMeasure(*args)
        if name == "pareto":
            return ParetoMeasure(*args)
        if name == "point":
            return PointMeasure(*args)
        return NullMeasure()
    except PreconditionError as exc:
        raise ConfigError(f"lambda: {exc}") from exc


def parse_boundary(text):
    """boundary presets: const(c0), linear(c0,slope)."""
    name, args = _preset("boundary", text)
    try:
        if name == "const" and len(args) == 1:
            return ConstantBoundary(args[0]).validate()
        if name == "linear" and len(args) == 2:
            return LinearBoundary(*args).validate()
    except PreconditionError as exc:
        raise ConfigError(f"boundary: {exc}") from exc
    raise ConfigError(f"boundary: unknown preset {text!r}")


@dataclass(frozen=True)
class ResolvedConfig:
    spec: SubordinatorSpec
    boundary: object
    engine: EngineConfig
    drift: float
    raw: dict

    @property
    def sampling_boundary(self):
        """The boundary seen by the driftless part: c(t) - drift t."""
        if self.drift == 0.0:
            return self.boundary
        return DriftAdjustedBoundary(self.boundary, self.drift)

    def as_dict(self):
        data = dict(self.raw)
        data.update(self.spec.as_dict())
        data["boundary"] = self.boundary.name
        data["seed"] = self.engine.seed
        data["rho"] = self.engine.rho
        data["undershoot"] = self.engine.undershoot
        data["precision_bits"] = self.engine.precision_bits
        data["drift"] = self.drift
        return data


class ConfigLoader:
    """Reads ``key = value`` lines; ``#`` starts a comment."""

    def __init__(self, path=None):
        self.path = Path(path) if path is not None else None

    def load_file(self):
        if self.path is None:
            return {}
        if not self.path.is_file():
            raise ConfigError(f"config file {self.path} not found")
        values = {}
        with open(self.path, "r") as f:
            for lineno, line in enumerate(f, start=1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{self.path}:{lineno}: expected 'key = value', got {line!r}")
                key, value = (part.strip() for part in line.split("=", 1))
                values[self._key(key, f"{self.path}:{lineno}")] = value
        return values

    @staticmethod
    def _key(key, where):
        key = ALIASES.get(key, key)
        if key not in DEFAULTS:
            raise ConfigError(f"{where}: unknown key {key!r}")
        return key

    def resolve(self, overrides=None):
        """Merge defaults < file < overrides and build the model objects."""
        raw = dict(DEFAULTS)
        raw.update(self.load_file())
        for key, value in (overrides or {}).items():
            if value is not None:
                raw[self._key(key, "override")] = str(value)
        return resolve(raw)


def resolve(raw):
    alpha = _number("alpha", raw["alpha"])
    vartheta = _number("vartheta", raw["vartheta"])
    q = _number("q", raw["q"])
    r0 = _number("r0", raw["r0"])
    r = raw["r"] if raw["r"] == "auto" else _number("r", raw["r"])
    drift = _number("drift", raw["drift"])
    if drift < 0.0:
        raise ConfigError(f"drift must be >= 0, got {drift}")
    undershoot = raw["undershoot"]
    if undershoot not in UNDERSHOOT_METHODS:
        raise ConfigError(f"undershoot must be one of {UNDERSHOOT_METHODS}, got {undershoot!r}")
    base = parse_measure(raw["lambda"])
    boundary = parse_boundary(raw["boundary"])
    try:
        spec = SubordinatorSpec.build(alpha, vartheta, q, r0=r0, base=base, r=r)
        engine = EngineConfig(rho=_number("rho", raw["rho"]),
                              precision_bits=_integer("precision_bits", raw["precision_bits"]),
                              seed=_integer("seed", raw["seed"]), r_policy=raw["r"], undershoot=undershoot)
    except PreconditionError as exc:
        raise ConfigError(str(exc)) from exc
    logger.debug(f"resolved configuration: {raw}")
    return ResolvedConfig(spec, boundary, engine, drift, dict(raw))
