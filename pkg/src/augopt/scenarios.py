"""Scenario catalogue, the ``key = value`` config format, and per-run reports."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Optional, Tuple

from .direct import OptimizerConfig, solve_direct
from .exceptions import AugoptError, NotConvergedError, ParseError, ValidationError
from .fbsm import SweepConfig, solve_fbsm
from .model import ModelKind, ModelParams, ObjectiveParams, State, objective, simulate
from .result import SolveResult
from .validation import check_population

__all__ = [
    "ScenarioSpec",
    "RunReport",
    "BASELINE",
    "builtin_scenarios",
    "get_scenario",
    "resolve_scenario",
    "load_scenario",
    "dump_scenario",
    "no_control_objective",
    "percent_increase",
    "run_scenario",
]

MODEL_KEYS = tuple(f.name for f in fields(ModelParams))
OBJECTIVE_KEYS = tuple(f.name for f in fields(ObjectiveParams))
STATE_KEYS = ("u0", "v0", "w0")
ALL_KEYS = ("name",) + MODEL_KEYS + OBJECTIVE_KEYS + STATE_KEYS


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    params: ModelParams
    obj: ObjectiveParams
    x0: State
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.name or any(c.isspace() for c in self.name):
            raise ValidationError("name", f"must be a non-empty identifier, got {self.name!r}")
        x0 = State(*(check_population(k, v) for k, v in zip(STATE_KEYS, self.x0)))
        object.__setattr__(self, "x0", x0)
        if not self.label:
            object.__setattr__(self, "label", self.name)

    def with_overrides(self, name, label="", **overrides):
        """Copy with some parameters replaced; keys as in the config format."""
        mp = {k: v for k, v in overrides.items() if k in MODEL_KEYS}
        op = {k: v for k, v in overrides.items() if k in OBJECTIVE_KEYS}
        xs = {k: v for k, v in overrides.items() if k in STATE_KEYS}
        unknown = set(overrides) - set(mp) - set(op) - set(xs)
        if unknown:
            raise ValidationError(sorted(unknown)[0], "unknown parameter")
        x0 = State(*(xs.get(k, getattr(self.x0, k[0])) for k in STATE_KEYS))
        return ScenarioSpec(
            name, replace(self.params, **mp), replace(self.obj, **op), x0, label
        )


BASELINE = ScenarioSpec(
    "baseline",
    ModelParams(s=0.25, k_u=0.50, m=0.25, delta1=0.40, delta2=0.50, gamma=0.025, q=0.85, k_w=0.80, n=0.25),
    ObjectiveParams(T=6, N=0.50, M1=0.40, M2=0.15, A=0.70),
    State(0.20, 0.5, 0.70),
    label="Baseline",
)


def builtin_scenarios():
    """The baseline and the four parameter variations of the reference comparison."""
    return [
        BASELINE,
        BASELINE.with_overrides("m2-zero", "M2 = 0", M2=0.0),
        BASELINE.with_overrides("m2-zero-n-0.1", "M2 = 0, N = 0.1", M2=0.0, N=0.1),
        BASELINE.with_overrides("reserve-low", "q = 0.70, k_w = 0.60", q=0.70, k_w=0.60),
        BASELINE.with_overrides("gamma-0.10", "gamma = 0.10", gamma=0.10),
    ]


def get_scenario(name):
    for spec in builtin_scenarios():
        if spec.name == name:
            return spec
    raise KeyError(name)


def _parse_value(key, raw, lineno):
    if key == "name":
        return raw
    try:
        if key == "T":
            value = float(raw)
            if not value.is_integer():
                raise ValueError
            return int(value)
        value = float(raw)
    except ValueError:
        raise ParseError(f"line {lineno}: {key} expects a number, got {raw!r}") from None
    if not math.isfinite(value):
        raise ParseError(f"line {lineno}: {key} must be finite, got {raw!r}")
    return value


def load_scenario(text, default_name="custom"):
    """Parse a ``key = value`` document; missing keys inherit the baseline.

    Blank lines and ``#`` comments are ignored. Keys are ``name``, the model
    parameters (``s k_u m delta1 delta2 gamma q k_w n``), the objective
    parameters (``T N M1 M2 A``) and the initial state (``u0 v0 w0``).
    """
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, raw = line.partition("=")
        key, raw = key.strip(), raw.strip()
        if not sep or not key or not raw:
            raise ParseError(f"line {lineno}: expected 'key = value', got {line!r}")
        if key not in ALL_KEYS:
            raise ParseError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ParseError(f"line {lineno}: duplicate key {key!r}")
        values[key] = _parse_value(key, raw, lineno)
    name = values.pop("name", default_name)
    return BASELINE.with_overrides(name, **values)


def dump_scenario(spec):
    """Serialize a scenario so that :func:`load_scenario` reads it back exactly."""
    lines = [f"name = {spec.name}"]
    lines += [f"{k} = {getattr(spec.params, k)!r}" for k in MODEL_KEYS]
    lines += [f"{k} = {getattr(spec.obj, k)!r}" for k in OBJECTIVE_KEYS]
    lines += [f"{k} = {v!r}" for k, v in zip(STATE_KEYS, spec.x0)]
    return "\n".join(lines) + "\n"


def resolve_scenario(ref):
    """A built-in scenario by name, otherwise a config file path."""
    try:
        return get_scenario(ref)
    except KeyError:
        pass
    path = Path(ref)
    if not path.is_file():
        names = ", ".join(s.name for s in builtin_scenarios())
        raise ValidationError("scenario", f"{ref!r} is neither a built-in ({names}) nor a file")
    return load_scenario(path.read_text(encoding="utf-8"), default_name=path.stem)


# -- running ------------------------------------------------------------------

@dataclass(frozen=True)
class RunReport:
    scenario: str
    model: str
    j_no_control: float
    j_optimal: float
    percent_increase: int
    controls: Tuple[float, ...]
    converged: bool
    iterations: int
    result: Optional[SolveResult] = field(default=None, repr=False, compare=False)
    label: str = field(default="", compare=False)


def percent_increase(j_optimal, j_no_control):
    """Relative gain in whole percent, halves rounded up."""
    return math.floor(100 * (j_optimal / j_no_control - 1) + 0.5)


def no_control_objective(spec):
    traj = simulate(ModelKind.UNCONTROLLED, spec.x0, None, spec.params, spec.obj.T)
    return objective(traj, spec.obj)


def run_scenario(spec, model, sweep=None, optimizer=None, allow_unconverged=False):
    """Solve one scenario with Model A (sweep) or Model B (direct).

    Solver errors propagate with the scenario and model recorded on the
    exception; with ``allow_unconverged`` a non-converged solve is reported
    (``converged=False``) instead of raised.
    """
    kind = ModelKind.parse(model)
    if kind is ModelKind.UNCONTROLLED:
        raise ValidationError("model", "expected 'a' or 'b'")
    j0 = no_control_objective(spec)
    try:
        if kind is ModelKind.MODEL_A:
            res = solve_fbsm(spec.x0, spec.params, spec.obj, sweep or SweepConfig())
        else:
            res = solve_direct(spec.x0, spec.params, spec.obj, optimizer or OptimizerConfig())
    except NotConvergedError as exc:
        if not allow_unconverged:
            _tag(exc, spec, kind)
            raise
        res = exc.result
    except AugoptError as exc:
        _tag(exc, spec, kind)
        raise
    return RunReport(
        scenario=spec.name,
        model=kind.value.upper(),
        j_no_control=j0,
        j_optimal=res.objective_value,
        percent_increase=percent_increase(res.objective_value, j0),
        controls=res.controls,
        converged=res.converged,
        iterations=res.iterations,
        result=res,
        label=spec.label,
    )


def _tag(exc, spec, kind):
    exc.scenario = spec.name
    exc.model = kind.value.upper()
    if exc.args:
        exc.args = (f"[{spec.name}, model {exc.model}] {exc.args[0]}",) + exc.args[1:]
