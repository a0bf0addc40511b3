"""Flat ``section.key = value`` configuration text.

Sections map onto :class:`ExperimentConfig` and its nested dataclasses::

    # lines starting with '#' are comments
    signal.s_sources = 10
    signal.shared_sources = false
    power.num_components = 3
    graph_s.k = 4
    gossip.k_s = 40
    experiment.algorithm = parallel

Keys not given keep their dataclass defaults.
"""
from dataclasses import fields, replace

from .errors import ParameterError
from .harness import ExperimentConfig

_NESTED = {"signal": "signal", "power": "power", "graph_s": "graph_s", "graph_r": "graph_r"}
_TOP = {
    "gossip.k_s": "gossip_k_s",
    "gossip.k_r": "gossip_k_r",
    "experiment.problem": "problem",
    "experiment.algorithm": "algorithm",
    "experiment.averaging": "averaging",
    "experiment.trials": "trials",
    "experiment.base_seed": "base_seed",
}


def _convert(raw, template, key):
    raw = raw.strip()
    try:
        if isinstance(template, bool):
            low = raw.lower()
            if low in ("true", "yes", "1", "on"):
                return True
            if low in ("false", "no", "0", "off"):
                return False
            raise ValueError(raw)
        if isinstance(template, int):
            return int(raw)
        if isinstance(template, float):
            return float(raw)
    except ValueError:
        raise ParameterError(f"bad value for {key}: {raw!r}") from None
    if template is None:
        return None if raw.lower() in ("none", "") else int(raw)
    return raw


def parse_pairs(text):
    pairs = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"line {lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        pairs.append((key.strip(), value.strip()))
    return pairs


def apply_overrides(cfg: ExperimentConfig, pairs) -> ExperimentConfig:
    top = {}
    nested = {name: {} for name in _NESTED.values()}
    for key, raw in pairs:
        if key in _TOP:
            attr = _TOP[key]
            top[attr] = _convert(raw, getattr(cfg, attr), key)
            continue
        section, _, name = key.partition(".")
        if section not in _NESTED or not name:
            raise ParameterError(f"unknown config key {key!r}")
        obj = getattr(cfg, _NESTED[section])
        if name not in {f.name for f in fields(obj)}:
            raise ParameterError(f"unknown config key {key!r}")
        nested[_NESTED[section]][name] = _convert(raw, getattr(obj, name), key)
    for attr, changes in nested.items():
        if changes:
            top[attr] = replace(getattr(cfg, attr), **changes)
    return replace(cfg, **top)


def load_config(text: str, base: ExperimentConfig = None) -> ExperimentConfig:
    return apply_overrides(base or ExperimentConfig(), parse_pairs(text))


def dump_config(cfg: ExperimentConfig) -> str:
    lines = []
    for section, attr in _NESTED.items():
        obj = getattr(cfg, attr)
        for f in fields(obj):
            val = getattr(obj, f.name)
            lines.append(f"{section}.{f.name} = {str(val).lower() if isinstance(val, bool) else val}")
    for key, attr in _TOP.items():
        val = getattr(cfg, attr)
        lines.append(f"{key} = {'none' if val is None else val}")
    return "\n".join(lines) + "\n"
