"""
Scenario configuration.

One frozen dataclass per config section. Every field is declared together
with the ``qcodes`` validator that checks it, the way an instrument
declares its parameters; the defaults reproduce the two-group benchmark.
"""

from dataclasses import dataclass, field, fields
from typing import Dict, Optional, Tuple

import numpy as np
from qcodes import validators as vals

from ..filter.update import DEFAULT_HYPOTHESES, LOG_WEIGHT_FLOOR, UpdateSettings
from ..grouping import CENTER_WEIGHTINGS
from ..metrics import OspaParams
from ..models.birth import (BENCHMARK_BIRTH_EXISTENCE, BENCHMARK_BIRTH_MEANS,
                            BENCHMARK_BIRTH_STD, BirthModel)
from ..models.motion import MEMBER_COVARIANCES, MotionModel
from ..models.sensor import BENCHMARK_REGION, SensorModel
from ..rfs.mixture import MixtureReduction

MODES = ('augmented', 'baseline')

_probability = vals.Numbers(min_value=0.0, max_value=1.0)
_open_probability = vals.Numbers(min_value=np.nextafter(0.0, 1.0), max_value=np.nextafter(1.0, 0.0))
_positive = vals.Numbers(min_value=np.nextafter(0.0, 1.0))
_nonnegative = vals.Numbers(min_value=0.0)
_velocity = vals.Sequence(elt_validator=vals.Numbers(), length=2)


def _param(default, validator: vals.Validator, unit: str = ''):
    """A config field: default value plus its validator."""
    if isinstance(default, (list, tuple)):
        return field(default_factory=lambda: _freeze(default), metadata={'vals': validator, 'unit': unit})
    return field(default=default, metadata={'vals': validator, 'unit': unit})


def _freeze(value):
    if isinstance(value, (list, tuple)):
        return tuple(_freeze(v) for v in value)
    return value


class Section:
    """Common behavior of the config sections."""

    name = ''

    def __post_init__(self) -> None:
        for f in fields(self):
            object.__setattr__(self, f.name, _freeze(getattr(self, f.name)))

    @classmethod
    def keys(cls) -> Tuple[str, ...]:
        return tuple(f.name for f in fields(cls))

    def diagnostics(self) -> list:
        """Validation messages for every field that does not pass its validator."""
        out = []
        for f in fields(self):
            try:
                f.metadata['vals'].validate(getattr(self, f.name), f'{self.name}.{f.name}')
            except (TypeError, ValueError) as err:
                out.append(str(err))
        return out


@dataclass(frozen=True)
class ScenarioSection(Section):
    name = 'scenario'
    steps: int = _param(100, vals.Ints(min_value=1), 'steps')
    trials: int = _param(100, vals.Ints(min_value=1))
    base_seed: int = _param(0, vals.Ints(min_value=0))
    workers: int = _param(1, vals.Ints(min_value=1))
    modes: Tuple[str, ...] = _param(MODES, vals.Sequence(elt_validator=vals.Enum(*MODES)))


@dataclass(frozen=True)
class MotionSection(Section):
    name = 'motion'
    dt: float = _param(1.0, _positive, 's')
    varrho: float = _param(5.0, _nonnegative, 'm/s^2')
    survival_probability: float = _param(0.99, _probability)


@dataclass(frozen=True)
class BirthSection(Section):
    name = 'birth'
    existence: float = _param(BENCHMARK_BIRTH_EXISTENCE, _probability)
    std: float = _param(BENCHMARK_BIRTH_STD, _positive, 'm')
    means: Tuple[Tuple[float, ...], ...] = _param(
        BENCHMARK_BIRTH_MEANS, vals.Sequence(elt_validator=vals.Sequence(elt_validator=vals.Numbers(), length=4)))


@dataclass(frozen=True)
class SensorSection(Section):
    name = 'sensor'
    noise_std: float = _param(10.0, _positive, 'm')
    detection_probability: float = _param(0.98, _probability)
    clutter_rate: float = _param(30.0, _nonnegative, '1/scan')
    region: Tuple[float, ...] = _param(BENCHMARK_REGION,
                                       vals.Sequence(elt_validator=vals.Numbers(), length=4), 'm')


@dataclass(frozen=True)
class FilterSection(Section):
    name = 'filter'
    hypotheses: int = _param(DEFAULT_HYPOTHESES, vals.Ints(min_value=1))
    existence_threshold: float = _param(1e-4, _probability)
    gating: bool = _param(True, vals.Bool())
    gate_probability: float = _param(0.99999, _open_probability)
    prune_threshold: float = _param(1e-5, _probability)
    merge_distance: float = _param(4.0, _nonnegative)
    max_components: int = _param(100, vals.Ints(min_value=1))
    log_weight_floor: float = _param(LOG_WEIGHT_FLOOR, _positive)


@dataclass(frozen=True)
class GroupingSection(Section):
    name = 'grouping'
    group_threshold_m: float = _param(100.0, _nonnegative, 'm')
    center_weighting: str = _param('existence', vals.Enum(*CENTER_WEIGHTINGS))
    member_covariance: str = _param('propagated', vals.Enum(*MEMBER_COVARIANCES))


@dataclass(frozen=True)
class OspaSection(Section):
    name = 'ospa'
    order: float = _param(1.0, vals.Numbers(min_value=1.0))
    cutoff: float = _param(100.0, _positive, 'm')


@dataclass(frozen=True)
class TruthSection(Section):
    """
    True targets are numbered 1..n, ``n = len(birth_index)``. Target ``j``
    is born at birth mean ``birth_index[j-1]`` (1-based) at step
    ``birth_steps[j-1]`` and dies after ``death_steps[j-1]`` (0 for never).
    """
    name = 'truth'
    groups: Tuple[Tuple[int, ...], ...] = _param(
        ((1, 2, 3), (4, 5, 6)), vals.Sequence(elt_validator=vals.Sequence(elt_validator=vals.Ints(min_value=1))))
    birth_index: Tuple[int, ...] = _param((1, 5, 6, 2, 3, 4), vals.Sequence(elt_validator=vals.Ints(min_value=1)))
    group_velocities: Tuple[Tuple[float, ...], ...] = _param(
        ((12.0, -4.0), (10.0, 4.0)), vals.Sequence(elt_validator=_velocity), 'm/s')
    target_velocities: Tuple[Tuple[float, ...], ...] = _param(
        ((10.0, 0.0),) * 6, vals.Sequence(elt_validator=_velocity), 'm/s')
    formation_scale: float = _param(1.0, _positive)
    formation_radius: float = _param(100.0, _positive, 'm')
    process_noise: float = _param(0.0, _nonnegative, 'm/s^2')
    birth_steps: Tuple[int, ...] = _param((1,) * 6, vals.Sequence(elt_validator=vals.Ints(min_value=1)))
    death_steps: Tuple[int, ...] = _param((0,) * 6, vals.Sequence(elt_validator=vals.Ints(min_value=0)))

    @property
    def n_targets(self) -> int:
        return len(self.birth_index)

    def group_of(self) -> Dict[int, int]:
        """Target id -> 1-based true group id."""
        return {member: g for g, members in enumerate(self.groups, start=1) for member in members}


@dataclass(frozen=True)
class OutputSection(Section):
    name = 'output'
    dump_states: bool = _param(False, vals.Bool())
    settle_step: int = _param(20, vals.Ints(min_value=1), 'steps')


SECTIONS = {
    'scenario': ScenarioSection,
    'motion': MotionSection,
    'birth': BirthSection,
    'sensor': SensorSection,
    'filter': FilterSection,
    'grouping': GroupingSection,
    'ospa': OspaSection,
    'truth': TruthSection,
    'output': OutputSection,
}


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: ScenarioSection = field(default_factory=ScenarioSection)
    motion: MotionSection = field(default_factory=MotionSection)
    birth: BirthSection = field(default_factory=BirthSection)
    sensor: SensorSection = field(default_factory=SensorSection)
    filter: FilterSection = field(default_factory=FilterSection)
    grouping: GroupingSection = field(default_factory=GroupingSection)
    ospa: OspaSection = field(default_factory=OspaSection)
    truth: TruthSection = field(default_factory=TruthSection)
    output: OutputSection = field(default_factory=OutputSection)

    @property
    def steps(self) -> int:
        return self.scenario.steps

    @property
    def epsilon(self) -> float:
        return self.grouping.group_threshold_m

    def motion_model(self) -> MotionModel:
        return MotionModel(self.motion.dt, self.motion.varrho)

    def birth_model(self) -> BirthModel:
        return BirthModel.from_means(self.birth.means, self.birth.existence, self.birth.std)

    def sensor_model(self) -> SensorModel:
        return SensorModel(self.sensor.noise_std, self.sensor.detection_probability,
                           tuple(self.sensor.region), self.sensor.clutter_rate)

    def update_settings(self) -> UpdateSettings:
        f = self.filter
        return UpdateSettings(existence_threshold=f.existence_threshold,
                              gate_probability=f.gate_probability if f.gating else None,
                              reduction=MixtureReduction(f.prune_threshold, f.merge_distance, f.max_components),
                              log_weight_floor=f.log_weight_floor)

    def ospa_params(self) -> OspaParams:
        return OspaParams(self.ospa.order, self.ospa.cutoff)

    def cross_checks(self) -> list:
        """Constraints between fields that single-field validators cannot express."""
        out = []
        t = self.truth
        n = t.n_targets
        if any(len(grp) == 0 for grp in t.groups):
            out.append('truth.groups must not contain empty groups')
        members = [m for grp in t.groups for m in grp]
        if len(members) != len(set(members)):
            out.append(f'truth.groups must be disjoint, got {t.groups}')
        bad = sorted(m for m in set(members) if not 1 <= m <= n)
        if bad:
            out.append(f'truth.groups refers to unknown targets {bad} (targets are 1..{n})')
        if len(t.group_velocities) != len(t.groups):
            out.append(f'truth.group_velocities needs one entry per group, '
                       f'got {len(t.group_velocities)} for {len(t.groups)}')
        for key in ('target_velocities', 'birth_steps', 'death_steps'):
            if len(getattr(t, key)) != n:
                out.append(f'truth.{key} needs one entry per target ({n}), got {len(getattr(t, key))}')
        n_means = len(self.birth.means)
        bad = sorted(b for b in t.birth_index if not 1 <= b <= n_means)
        if bad:
            out.append(f'truth.birth_index refers to unknown birth means {bad} (1..{n_means})')
        steps = self.scenario.steps
        for j, (born, died) in enumerate(zip(t.birth_steps, t.death_steps), start=1):
            if not 1 <= born <= steps:
                out.append(f'truth.birth_steps: target {j} born at {born}, outside [1, {steps}]')
            if died and not born <= died <= steps:
                out.append(f'truth.death_steps: target {j} dies at {died}, outside [{born}, {steps}]')
        if self.output.settle_step > steps:
            out.append(f'output.settle_step {self.output.settle_step} beyond the horizon of {steps} steps')
        region = self.sensor.region
        if len(region) == 4 and not (region[0] < region[1] and region[2] < region[3]):
            out.append(f'sensor.region must be nonempty, got {tuple(region)}')
        return out


def field_unit(section: str, key: str) -> Optional[str]:
    for f in fields(SECTIONS[section]):
        if f.name == key:
            return f.metadata['unit'] or None
    return None
