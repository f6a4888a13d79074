"""
A simulated 2-D position radar as a QCoDeS instrument.

The radar exposes its detection probability, noise level and clutter rate
as instrument parameters and returns one scan (target detections plus
uniform clutter, in random order) per call to ``scan``.
"""

import itertools
import logging
from dataclasses import replace
from typing import Any, Dict, List, Optional

import numpy as np
from qcodes import (Instrument, validators as vals)

from .. import __version__
from ..models.sensor import SensorModel, sample_clutter
from .truth import GroundTruth

_instance = itertools.count(1)


class SimulatedRadar(Instrument):
    """
    Args:
        name: instrument name, must be unique among open instruments
        sensor: initial sensor model
    """

    def __init__(self, name: str, sensor: Optional[SensorModel] = None, **kwargs: Any) -> None:
        super().__init__(name, **kwargs)
        logging.info(__name__ + f' : Initializing simulated radar {name}')
        self._sensor = sensor if sensor is not None else SensorModel()

        self.add_parameter('detection_probability',
                           label='Detection Probability',
                           get_cmd=lambda: self._sensor.p_detect,
                           set_cmd=lambda x: self._reconfigure(p_detect=x),
                           vals=vals.Numbers(min_value=0, max_value=1))

        self.add_parameter('noise_std',
                           label='Measurement Noise Std',
                           unit='m',
                           get_cmd=lambda: self._sensor.sigma_r,
                           set_cmd=lambda x: self._reconfigure(sigma_r=x),
                           vals=vals.Numbers(min_value=np.nextafter(0.0, 1.0)))

        self.add_parameter('clutter_rate',
                           label='Mean Clutter Returns',
                           unit='1/scan',
                           get_cmd=lambda: self._sensor.clutter_rate,
                           set_cmd=lambda x: self._reconfigure(clutter_rate=x),
                           vals=vals.Numbers(min_value=0))

        self.add_parameter('region',
                           label='Surveillance Region',
                           unit='m',
                           get_cmd=lambda: self._sensor.region,
                           set_cmd=lambda x: self._reconfigure(region=tuple(x)),
                           vals=vals.Sequence(elt_validator=vals.Numbers(), length=4))

    def _reconfigure(self, **changes: Any) -> None:
        self._sensor = replace(self._sensor, **changes)

    @property
    def sensor(self) -> SensorModel:
        return self._sensor

    def scan(self, states: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """
        Args:
            states: ``(n, 4)`` states of the live targets
            rng: source of all randomness of the scan

        Returns:
            ``(m, 2)`` measurements, detections and clutter shuffled together
        """
        detections = self._sensor.detect(states, rng)
        clutter = sample_clutter(self._sensor, rng)
        Z = np.vstack([detections, clutter]) if len(clutter) else detections
        return Z[rng.permutation(len(Z))]

    def get_idn(self) -> Dict[str, Optional[str]]:
        return {'vendor': 'group_lmb',
                'model': 'SimulatedRadar',
                'serial': self.name,
                'firmware': __version__}


def generate_measurements(truth: GroundTruth, sm: SensorModel, rng: np.random.Generator) -> List[np.ndarray]:
    """One scan per step of the truth, step 1 first."""
    radar = SimulatedRadar(f'radar_{next(_instance)}', sm)
    try:
        return [radar.scan(truth.live_states(step), rng) for step in range(1, truth.steps + 1)]
    finally:
        radar.close()
