"""Flat-text run configuration.

Format: one `section.key = value` per line, `#` comments, blank lines
ignored. Every ledgered default in the stack is overridable; unknown keys
are rejected with the offending key named. Each run writes its fully
resolved configuration next to its outputs so results are reproducible
from artifacts alone.
"""

import dataclasses
from dataclasses import dataclass, field, replace
from typing import Dict

from padlander.baseline import PidController, PursuitConfig
from padlander.dynamics import DroneParams
from padlander.environment import EnvConfig
from padlander.reward import RewardConfig
from padlander.scenario import ScenarioKind, ScenarioSpec
from padlander.td3 import Td3Hyperparams


class ConfigError(ValueError):
    pass


@dataclass
class EvalSettings:
    trials_per_scenario: int = 10
    wind: bool = False
    workers: int = 1


@dataclass
class RunConfig:
    seed: int = 0
    outdir: str = "runs"
    scenario: str = "SPL"
    drone: DroneParams = field(default_factory=DroneParams)
    scenario_params: ScenarioSpec = field(default_factory=lambda: ScenarioSpec(ScenarioKind.SPL))
    reward: RewardConfig = field(default_factory=RewardConfig)
    env: EnvConfig = field(default_factory=EnvConfig)
    td3: Td3Hyperparams = field(default_factory=Td3Hyperparams)
    baseline: PursuitConfig = field(default_factory=PursuitConfig)
    pid: PidController = field(default_factory=PidController)
    evaluation: EvalSettings = field(default_factory=EvalSettings)

    def scenario_spec(self) -> ScenarioSpec:
        return replace(self.scenario_params, kind=ScenarioKind[self.scenario])


_SECTIONS = ("drone", "scenario_params", "reward", "env", "td3", "baseline", "pid", "evaluation")
_SCALARS = (int, float, bool, str)


def _configurable_fields(obj) -> Dict[str, type]:
    out = {}
    for f in dataclasses.fields(obj):
        if f.type in ("int", "float", "bool", "str") or isinstance(getattr(obj, f.name), _SCALARS):
            out[f.name] = type(getattr(obj, f.name))
    return out


def _parse_value(text: str, target_type: type):
    text = text.strip()
    if target_type is bool:
        low = text.lower()
        if low in ("true", "1", "yes", "on"):
            return True
        if low in ("false", "0", "no", "off"):
            return False
        raise ConfigError(f"expected boolean, got {text!r}")
    if target_type is int:
        return int(text)
    if target_type is float:
        return float(text)
    return text


def apply_item(cfg: RunConfig, key: str, value: str) -> RunConfig:
    """Apply one `section.key = value` item; unknown keys are errors."""
    key = key.strip()
    if key == "seed":
        return replace(cfg, seed=int(value))
    if key == "outdir":
        return replace(cfg, outdir=value.strip())
    if key == "scenario":
        name = value.strip().upper()
        if name not in ScenarioKind.__members__:
            raise ConfigError(f"scenario must be one of {list(ScenarioKind.__members__)}, got {value!r}")
        return replace(cfg, scenario=name)
    section, _, attr = key.partition(".")
    if section not in _SECTIONS or not attr:
        raise ConfigError(f"unknown configuration key {key!r}")
    target = getattr(cfg, section)
    fields = _configurable_fields(target)
    if attr == "kind" and section == "scenario_params":
        raise ConfigError("set the top-level 'scenario' key instead of scenario_params.kind")
    if attr not in fields:
        raise ConfigError(f"unknown key {key!r}; valid {section} keys: {sorted(fields)}")
    try:
        parsed = _parse_value(value, fields[attr])
    except (ValueError, ConfigError) as e:
        raise ConfigError(f"bad value for {key}: {e}") from None
    if dataclasses.fields(type(target)) and getattr(type(target), "__dataclass_params__").frozen:
        updated = replace(target, **{attr: parsed})
    else:
        updated = target
        setattr(updated, attr, parsed)
    return replace(cfg, **{section: updated})


def parse_config_text(text: str, base: RunConfig = None) -> RunConfig:
    cfg = base or RunConfig()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        try:
            cfg = apply_item(cfg, key, value)
        except ConfigError as e:
            raise ConfigError(f"line {lineno}: {e}") from None
    return cfg


def load_config(path: str, base: RunConfig = None) -> RunConfig:
    with open(path) as f:
        return parse_config_text(f.read(), base)


def dump_config(cfg: RunConfig) -> str:
    """Fully resolved flat-text form, round-trippable through parse_config_text."""
    lines = [f"seed = {cfg.seed}", f"outdir = {cfg.outdir}", f"scenario = {cfg.scenario}"]
    for section in _SECTIONS:
        target = getattr(cfg, section)
        for name, _ in sorted(_configurable_fields(target).items()):
            if section == "scenario_params" and name == "kind":
                continue
            value = getattr(target, name)
            if isinstance(value, bool):
                value = "true" if value else "false"
            elif isinstance(value, float):
                value = f"{value:.9g}"
            lines.append(f"{section}.{name} = {value}")
    return "\n".join(lines) + "\n"
