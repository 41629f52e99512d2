"""Steady-state response of the wagon-bogie system to harmonic rail forcing.

Wagon (mass ``M``) sits on the bogie (mass ``m``) through a spring ``K`` and
damper ``C``; the bogie rests on the rail through a spring ``N`` and damper
``D``. With rail displacement ``z = A exp(i w t)`` the complex amplitudes of
wagon ``x0`` and bogie ``y0`` solve

    [w^2 M - Kc      Kc           ] [x0]   [   0   ]
    [    Kc      w^2 m - Nc - Kc  ] [y0] = [ -Nc A ]

with ``Kc = K + i w C`` and ``Nc = N + i w D``. The 2x2 system is inverted
by its adjugate.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from axlebox.errors import ResonantSingularity

# |det S| below this fraction of K*N (its static value) counts as singular
SINGULAR_DET_RTOL = 1e-9


@dataclass(frozen=True)
class VehicleParams:
    """Masses in kg, stiffnesses in N/m, damping in N*s/m.

    Defaults are the NT-11 wagon/bogie figures: 11.2 t wagon, 1.01 t bogie,
    963 kN/m and 1540 kN/m springs, 50 kN*s/m secondary damper, no primary
    damper.
    """

    M: float = 11_200.0
    m: float = 1_010.0
    K: float = 963_000.0
    N: float = 1_540_000.0
    C: float = 50_000.0
    D: float = 0.0

    def __post_init__(self):
        for name in ("M", "m", "K", "N"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be positive and finite, got {value}")
        for name in ("C", "D"):
            value = getattr(self, name)
            if not (value >= 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be nonnegative and finite, got {value}")

    def undamped(self) -> VehicleParams:
        return dataclasses.replace(self, C=0.0, D=0.0)

    def replace(self, **changes) -> VehicleParams:
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class FrequencyResponse:
    omega: float
    x0: complex
    y0: complex
    detS: complex
    forcing_amplitude: float


class TransferMagnitudes(NamedTuple):
    mag_x: float
    mag_y: float
    phase_x: float
    phase_y: float


def _complex_stiffness(params: VehicleParams, omega: float) -> tuple[complex, complex]:
    return complex(params.K, omega * params.C), complex(params.N, omega * params.D)


def det_S(params: VehicleParams, omega: float) -> complex:
    if omega < 0:
        raise ValueError(f"omega must be nonnegative, got {omega}")
    Kc, Nc = _complex_stiffness(params, omega)
    w2 = omega * omega
    return (w2 * params.M - Kc) * (w2 * params.m - Nc - Kc) - Kc * Kc


def respond(params: VehicleParams, omega: float, A: float) -> FrequencyResponse:
    """Complex wagon and bogie amplitudes for rail amplitude ``A`` at ``omega``.

    Raises :class:`ResonantSingularity` when ``|det S| < 1e-9 K N``, which only
    happens for (nearly) undamped systems driven at a natural frequency.
    """
    det = det_S(params, omega)
    if abs(det) < SINGULAR_DET_RTOL * params.K * params.N:
        raise ResonantSingularity(
            f"det(S) = {abs(det):.3g} is singular at omega = {omega:.12g} rad/s"
        )
    Kc, Nc = _complex_stiffness(params, omega)
    rhs = -Nc * A
    x0 = -Kc * rhs / det
    y0 = (omega * omega * params.M - Kc) * rhs / det
    return FrequencyResponse(omega=omega, x0=complex(x0), y0=complex(y0), detS=det, forcing_amplitude=A)


def transfer_magnitudes(params: VehicleParams, omega: float) -> TransferMagnitudes:
    """Amplitude ratios ``|x0/A|, |y0/A|`` and their phases relative to the rail."""
    r = respond(params, omega, 1.0)
    return TransferMagnitudes(abs(r.x0), abs(r.y0), float(np.angle(r.x0)), float(np.angle(r.y0)))
