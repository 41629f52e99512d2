"""Crack-occurrence regression and wagon-bogie resonance analysis.

Two independent analyses of axle-box bogie cracking on rail vehicles:

* :mod:`axlebox.regression` fits crack percentage against route distance,
  number of stops and average speed by least squares.
* :mod:`axlebox.freq_response`, :mod:`axlebox.resonance` and
  :mod:`axlebox.timedomain` model the wagon and bogie as a two-mass
  spring-damper system excited by a periodic rail profile and locate the
  train speeds at which it resonates.
"""

__version__ = "0.1.0"

from axlebox.errors import AxleboxError
from axlebox.freq_response import VehicleParams, det_S, respond, transfer_magnitudes
from axlebox.kinematics import (
    GeometryParams,
    RailProfile,
    acceleration_scale,
    forcing_frequency,
    position,
    vertical_acceleration,
    wagon_offset,
)
from axlebox.regression import Observation, fit, predict, stopping_frequency
from axlebox.resonance import (
    asymptotic_high,
    asymptotic_low,
    critical_speed,
    resonance_report,
    speed_sweep,
    undamped_resonance_exact,
)
from axlebox.timedomain import SimConfig, simulate, steady_state_amplitude

__all__ = [
    "AxleboxError",
    "GeometryParams",
    "Observation",
    "RailProfile",
    "SimConfig",
    "VehicleParams",
    "acceleration_scale",
    "asymptotic_high",
    "asymptotic_low",
    "critical_speed",
    "det_S",
    "fit",
    "forcing_frequency",
    "position",
    "predict",
    "resonance_report",
    "respond",
    "simulate",
    "speed_sweep",
    "steady_state_amplitude",
    "stopping_frequency",
    "transfer_magnitudes",
    "undamped_resonance_exact",
    "vertical_acceleration",
    "wagon_offset",
]
