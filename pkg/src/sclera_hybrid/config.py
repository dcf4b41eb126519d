"""Scenario files: YAML with an explicit schema version.

A scenario bundles network parameters, the initial hybrid state, solver
settings, output options and, for sweeps, a list of axes::

    schema_version: 1
    name: fig-s5
    params: {th1: 0.4, th2: 0.5, th3: 0.6, th4: 0.7, h: 0.01}
    initial: {x: [0.45, 0.45, 0.8], q: [1, 1, 0, 1]}
    solver: {t_max: 100.0, j_max: 10000}
    output: {sample_spacing: 0.01, plot: true}
    sweep:
      workers: 1
      axes: [{name: h, start: 0.0, stop: 0.05, num: 11}]

Parameter families may be given through the aliases ``k``, ``g`` and ``h``.
Echoed configs always spell out every field.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace
from importlib import resources
from pathlib import Path
from typing import Any, Optional

import yaml

from .analysis import Axis
from .core import (
    PARAM_ALIASES,
    PARAM_FIELDS,
    HybridState,
    Issue,
    NetworkParams,
    expand_param_aliases,
    validate_params,
)
from .solver import SolverConfig

SCHEMA_VERSION = 1
PRESETS = {"s1": "fig-s1", "s3": "fig-s3", "s5": "fig-s5", "s7": "fig-s7"}


class ConfigError(Exception):
    """The file cannot be read or does not follow the schema."""


class ValidationError(Exception):
    """The file parses but holds values that violate model constraints."""

    def __init__(self, issues: list[Issue]):
        self.issues = issues
        super().__init__("; ".join(str(i) for i in issues))


@dataclass(frozen=True)
class OutputOptions:
    sample_spacing: float = 0.01
    plot: bool = True
    plot_dims: int = 3

    def __post_init__(self):
        if not self.sample_spacing > 0:
            raise ValueError("sample_spacing must be positive")
        if self.plot_dims not in (2, 3):
            raise ValueError("plot_dims must be 2 or 3")


@dataclass(frozen=True)
class ScenarioConfig:
    params: NetworkParams
    initial: HybridState
    solver: SolverConfig = SolverConfig()
    output: OutputOptions = OutputOptions()
    name: str = "scenario"
    axes: tuple[Axis, ...] = ()
    workers: int = 1


_TOP_KEYS = {"schema_version", "name", "params", "initial", "solver", "output", "sweep"}
_SOLVER_KEYS = {f.name for f in fields(SolverConfig)}
_OUTPUT_KEYS = {f.name for f in fields(OutputOptions)}


def _section(data: dict, key: str, allowed: set[str]) -> dict:
    sec = data.get(key) or {}
    if not isinstance(sec, dict):
        raise ConfigError(f"{key!r} must be a mapping")
    unknown = set(sec) - allowed
    if unknown:
        issues = [Issue(f"{key}.{name}", "unknown field") for name in sorted(unknown)]
        raise ValidationError(issues)
    return sec


def parse_config(data: Any) -> ScenarioConfig:
    """Build a :class:`ScenarioConfig` from a decoded YAML document."""
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping")
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {version!r} (expected {SCHEMA_VERSION})")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown top-level keys: {', '.join(sorted(unknown))}")

    raw_params = _section(data, "params", set(PARAM_FIELDS) | set(PARAM_ALIASES))
    defaults = NetworkParams().as_dict()
    values = expand_param_aliases(defaults, raw_params)
    errors = [i for i in validate_params(values) if i.severity == "error"]
    if errors:
        raise ValidationError(errors)
    params = NetworkParams(**values)

    init = data.get("initial")
    if not isinstance(init, dict) or set(init) != {"x", "q"}:
        raise ConfigError("'initial' must be a mapping with keys 'x' and 'q'")
    x, q = init["x"], init["q"]
    if not (isinstance(x, list) and len(x) == 3 and isinstance(q, list) and len(q) == 4):
        raise ConfigError("'initial.x' needs 3 values and 'initial.q' needs 4")
    try:
        initial = HybridState.from_parts(x, q)
    except (TypeError, ValueError) as exc:
        raise ValidationError([Issue("initial", str(exc))]) from exc

    solver_kw = _section(data, "solver", _SOLVER_KEYS)
    output_kw = _section(data, "output", _OUTPUT_KEYS)
    try:
        solver = SolverConfig(**solver_kw)
    except (TypeError, ValueError) as exc:
        raise ValidationError([Issue("solver", str(exc))]) from exc
    try:
        output = OutputOptions(**output_kw)
    except (TypeError, ValueError) as exc:
        raise ValidationError([Issue("output", str(exc))]) from exc

    axes: tuple[Axis, ...] = ()
    workers = 1
    if "sweep" in data:
        sweep = _section(data, "sweep", {"axes", "workers"})
        workers = int(sweep.get("workers", 1))
        raw_axes = sweep.get("axes")
        if not isinstance(raw_axes, list) or not raw_axes:
            raise ConfigError("'sweep.axes' must be a nonempty list")
        parsed = []
        for n, ax in enumerate(raw_axes):
            if not isinstance(ax, dict) or set(ax) != {"name", "start", "stop", "num"}:
                raise ConfigError(f"sweep axis {n} needs exactly name, start, stop, num")
            try:
                parsed.append(Axis(str(ax["name"]), float(ax["start"]), float(ax["stop"]),
                                   int(ax["num"])))
            except (TypeError, ValueError) as exc:
                raise ValidationError([Issue(f"sweep.axes[{n}].{ax.get('name')}", str(exc))]) from exc
        axes = tuple(parsed)

    return ScenarioConfig(params, initial, solver, output, str(data.get("name", "scenario")),
                          axes, workers)


def config_to_dict(cfg: ScenarioConfig) -> dict:
    solver = asdict(cfg.solver)
    solver["policy"] = cfg.solver.policy.value
    out = {
        "schema_version": SCHEMA_VERSION,
        "name": cfg.name,
        "params": cfg.params.as_dict(),
        "initial": {"x": list(cfg.initial.x), "q": list(cfg.initial.q)},
        "solver": solver,
        "output": asdict(cfg.output),
    }
    if cfg.axes:
        out["sweep"] = {
            "workers": cfg.workers,
            "axes": [asdict(a) for a in cfg.axes],
        }
    return out


def dump_config(cfg: ScenarioConfig) -> str:
    return yaml.safe_dump(config_to_dict(cfg), sort_keys=False)


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: invalid YAML: {exc}") from exc
    return parse_config(data)


def preset_text(name: str) -> str:
    """Raw YAML of a bundled preset (``fig-s1``, ``fig-s3``, ...)."""
    stem = Path(name).stem if name.endswith(".yaml") else Path(name).name
    res = resources.files("sclera_hybrid") / "presets" / f"{stem}.yaml"
    if not res.is_file():
        raise ConfigError(f"no bundled preset named {stem!r}")
    return res.read_text()


def load_preset(name: str) -> ScenarioConfig:
    return parse_config(yaml.safe_load(preset_text(name)))


def preset_names() -> list[str]:
    folder = resources.files("sclera_hybrid") / "presets"
    return sorted(p.name[:-5] for p in folder.iterdir() if p.name.endswith(".yaml"))


def resolve_config(ref: str) -> ScenarioConfig:
    """Load ``ref`` from disk, falling back to a bundled preset of that name."""
    if Path(ref).is_file():
        return load_config(ref)
    return load_preset(ref)


def figure_config(figure: str) -> ScenarioConfig:
    key = figure.lower().removeprefix("fig-").removeprefix("fig")
    if key not in PRESETS:
        raise ConfigError(f"unknown figure id {figure!r}; choose from {', '.join(PRESETS)}")
    return load_preset(PRESETS[key])


def with_overrides(
    cfg: ScenarioConfig,
    seed: Optional[int] = None,
    t_max: Optional[float] = None,
    j_max: Optional[int] = None,
    sample_spacing: Optional[float] = None,
    plot: Optional[bool] = None,
    workers: Optional[int] = None,
) -> ScenarioConfig:
    solver_kw = {k: v for k, v in (("seed", seed), ("t_max", t_max), ("j_max", j_max))
                 if v is not None}
    out_kw = {k: v for k, v in (("sample_spacing", sample_spacing), ("plot", plot))
              if v is not None}
    try:
        solver = replace(cfg.solver, **solver_kw)
        output = replace(cfg.output, **out_kw)
    except ValueError as exc:
        raise ValidationError([Issue("overrides", str(exc))]) from exc
    return replace(cfg, solver=solver, output=output,
                   workers=cfg.workers if workers is None else workers)
