"""
Loading, validating and fingerprinting scenario configurations.

A config file is one YAML mapping of sections to mappings of keys; any key
left out keeps its benchmark default. Validation collects every problem
before failing, so a user sees all offending fields at once.
"""

import hashlib
import json
import logging
from dataclasses import asdict, fields, replace
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

import yaml

from ..exceptions import ScenarioError
from .scenario import SECTIONS, ScenarioConfig, field_unit

DEFAULT_CONFIG_RESOURCE = 'default_scenario.yaml'


def default_config_text() -> str:
    """The shipped YAML rendering of the benchmark defaults."""
    return resources.files(__package__).joinpath(DEFAULT_CONFIG_RESOURCE).read_text(encoding='utf-8')


def read_yaml(path: Union[str, Path]) -> Dict[str, Any]:
    path = Path(path)
    if not path.is_file():
        raise ScenarioError([f'config file {path} does not exist'])
    try:
        data = yaml.safe_load(path.read_text(encoding='utf-8'))
    except yaml.YAMLError as err:
        raise ScenarioError([f'config file {path} is not valid YAML: {err}']) from err
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ScenarioError([f'config file {path} must hold a mapping of sections'])
    return data


def build_config(data: Optional[Mapping[str, Any]] = None,
                 overrides: Optional[Mapping[str, Any]] = None) -> ScenarioConfig:
    """
    Resolve a config from raw section data plus ``section.key`` overrides.

    Args:
        data: parsed YAML, sections to mappings
        overrides: flat ``{'section.key': value}``; these win over ``data``.
            ``None`` values are ignored.

    Raises:
        ScenarioError: with one diagnostic per offending field
    """
    merged: Dict[str, Dict[str, Any]] = {name: {} for name in SECTIONS}
    diagnostics: List[str] = []

    for section, values in (data or {}).items():
        if section not in SECTIONS:
            diagnostics.append(f'unknown section {section!r}')
            continue
        if values is None:
            continue
        if not isinstance(values, dict):
            diagnostics.append(f'section {section!r} must be a mapping')
            continue
        merged[section].update(values)

    for dotted, value in (overrides or {}).items():
        if value is None:
            continue
        section, _, key = dotted.partition('.')
        if section not in SECTIONS:
            diagnostics.append(f'unknown section {section!r}')
            continue
        merged[section][key] = value

    sections = {}
    for name, cls in SECTIONS.items():
        known = set(cls.keys())
        unknown = sorted(set(merged[name]) - known)
        diagnostics.extend(f'unknown key {name}.{key}' for key in unknown)
        sections[name] = cls(**{k: v for k, v in merged[name].items() if k in known})
        diagnostics.extend(sections[name].diagnostics())

    if diagnostics:
        raise ScenarioError(diagnostics)
    cfg = ScenarioConfig(**sections)
    diagnostics = cfg.cross_checks()
    if diagnostics:
        raise ScenarioError(diagnostics)
    return cfg


def validate_models(cfg: ScenarioConfig) -> None:
    """Construct every model once so that their own invariants are checked."""
    diagnostics = []
    for build in (cfg.motion_model, cfg.birth_model, cfg.sensor_model, cfg.update_settings, cfg.ospa_params):
        try:
            build()
        except (TypeError, ValueError) as err:
            diagnostics.append(str(err))
    if diagnostics:
        raise ScenarioError(diagnostics)


def load_config(path: Optional[Union[str, Path]] = None,
                overrides: Optional[Mapping[str, Any]] = None) -> ScenarioConfig:
    data = read_yaml(path) if path is not None else {}
    cfg = build_config(data, overrides)
    validate_models(cfg)
    logging.info(__name__ + f' : loaded scenario config {config_hash(cfg)[:12]}'
                 + (f' from {path}' if path is not None else ' (defaults)'))
    return cfg


def to_dict(cfg: ScenarioConfig) -> Dict[str, Dict[str, Any]]:
    """Plain nested dict (lists instead of tuples), ready for JSON or YAML."""
    return json.loads(json.dumps(asdict(cfg)))


def config_hash(cfg: ScenarioConfig) -> str:
    """SHA-256 of the canonical JSON form; equal for semantically equal configs."""
    canonical = json.dumps(to_dict(cfg), sort_keys=True, separators=(',', ':'), allow_nan=False)
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()


def flatten(cfg: ScenarioConfig) -> Dict[str, Any]:
    return {f'{section}.{key}': value
            for section, values in to_dict(cfg).items()
            for key, value in values.items()}


def config_diff(cfg: ScenarioConfig, reference: Optional[ScenarioConfig] = None) -> List[Tuple[str, Any, Any]]:
    """(``section.key``, reference value, value) for every field that differs."""
    ref = flatten(reference or ScenarioConfig())
    return [(key, ref[key], value) for key, value in flatten(cfg).items() if ref[key] != value]


def format_diff(diff: List[Tuple[str, Any, Any]]) -> List[str]:
    lines = []
    for key, default, value in diff:
        unit = field_unit(*key.split('.', 1))
        lines.append(f'{key}: {default} -> {value}' + (f' {unit}' if unit else ''))
    return lines


def with_overrides(cfg: ScenarioConfig, **sections: Mapping[str, Any]) -> ScenarioConfig:
    """Copy of ``cfg`` with some fields replaced, e.g. ``with_overrides(cfg, sensor={'clutter_rate': 0})``."""
    changes = {}
    for name, values in sections.items():
        section = getattr(cfg, name)
        known = {f.name for f in fields(section)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ScenarioError([f'unknown key {name}.{key}' for key in unknown])
        changes[name] = replace(section, **values)
        problems = changes[name].diagnostics()
        if problems:
            raise ScenarioError(problems)
    out = replace(cfg, **changes)
    problems = out.cross_checks()
    if problems:
        raise ScenarioError(problems)
    return out
