"""Motion of a point travelling at constant speed over a periodic rail profile.

A rail section of length ``L`` carries a vertical profile ``y = A*h(x/L)``
with ``h`` of unit period. A point moving at horizontal speed ``u`` has
``x = u*t`` and so sees vertical acceleration ``A*(u/L)**2 * h''(u*t/L)``:
forcing grows with the square of the train speed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Union

import numpy as np
from scipy.interpolate import CubicSpline

from axlebox.errors import NonDifferentiableShape, ZeroSectionLength

# spline second derivatives need at least this many knots
MIN_SAMPLES_FOR_DERIVATIVE = 4


class CosineShape:
    """One period of ``cos(2*pi*s)``."""

    name = "cosine"

    def value(self, s):
        return np.cos(2.0 * np.pi * s)

    def second_derivative(self, s):
        return -((2.0 * np.pi) ** 2) * np.cos(2.0 * np.pi * s)

    def __repr__(self):
        return "CosineShape()"


@dataclass(frozen=True, eq=False)
class TabulatedShape:
    """Profile sampled on ``s`` in [0, 1], repeated with unit period.

    Values between samples come from a cubic spline (periodic when the two
    end samples coincide, not-a-knot otherwise). With fewer than
    ``MIN_SAMPLES_FOR_DERIVATIVE`` samples the shape falls back to linear
    interpolation and has no second derivative.
    """

    s: np.ndarray
    h: np.ndarray
    _spline: CubicSpline | None = field(init=False, repr=False, default=None)

    name = "tabulated"

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        h = np.asarray(self.h, dtype=float)
        if s.ndim != 1 or s.shape != h.shape:
            raise ValueError("s and h must be 1-D arrays of equal length")
        if len(s) < 2:
            raise ValueError("a tabulated shape needs at least 2 samples")
        if np.any(np.diff(s) <= 0):
            raise ValueError("s must be strictly increasing")
        if s[0] < 0 or s[-1] > 1:
            raise ValueError("s must lie in [0, 1]")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "h", h)
        if len(s) >= MIN_SAMPLES_FOR_DERIVATIVE:
            periodic = s[0] == 0.0 and s[-1] == 1.0 and h[0] == h[-1]
            spline = CubicSpline(s, h, bc_type="periodic" if periodic else "not-a-knot")
            object.__setattr__(self, "_spline", spline)

    def _wrap(self, s):
        return np.mod(s, 1.0)

    def value(self, s):
        s = self._wrap(s)
        if self._spline is None:
            return np.interp(s, self.s, self.h)
        return self._spline(s)

    def second_derivative(self, s):
        if self._spline is None:
            raise NonDifferentiableShape(
                f"tabulated shape has {len(self.s)} samples; "
                f"at least {MIN_SAMPLES_FOR_DERIVATIVE} are needed for a second derivative"
            )
        return self._spline(self._wrap(s), 2)


Shape = Union[CosineShape, TabulatedShape]


@dataclass(frozen=True)
class RailProfile:
    """Vertical rail profile ``y(x) = amplitude * shape(x / section_length)``, metres."""

    amplitude: float
    section_length: float
    shape: Shape = field(default_factory=CosineShape)

    def __post_init__(self):
        if not self.section_length > 0:
            raise ZeroSectionLength(f"section length must be positive, got {self.section_length}")
        if self.amplitude < 0:
            raise ValueError(f"amplitude must be nonnegative, got {self.amplitude}")

    def height(self, x):
        return self.amplitude * self.shape.value(np.asarray(x) / self.section_length)


@dataclass(frozen=True)
class GeometryParams:
    """Wheel base ``B`` and wagon reference height ``H`` above the wheels, metres."""

    wheel_base: float
    wagon_height: float

    def __post_init__(self):
        if not self.wheel_base > 0:
            raise ValueError(f"wheel base must be positive, got {self.wheel_base}")
        if not self.wagon_height > 0:
            raise ValueError(f"wagon height must be positive, got {self.wagon_height}")


class AccelerationScale(NamedTuple):
    vertical: float
    offset: float


def _check_speed(u):
    if u < 0:
        raise ValueError(f"speed must be nonnegative, got {u}")


def position(profile: RailProfile, u: float, t):
    """Return ``(x, y)`` of the travelling point at time ``t``."""
    _check_speed(u)
    x = u * np.asarray(t, dtype=float)
    y = profile.height(x)
    if np.ndim(x) == 0:
        return float(x), float(y)
    return x, y


def vertical_acceleration(profile: RailProfile, u: float, t):
    """``A * (u/L)**2 * h''(u*t/L)`` in m/s**2."""
    _check_speed(u)
    s = u * np.asarray(t, dtype=float) / profile.section_length
    acc = profile.amplitude * (u / profile.section_length) ** 2 * profile.shape.second_derivative(s)
    return float(acc) if np.ndim(acc) == 0 else acc


def wagon_offset(geom: GeometryParams, profile: RailProfile, u: float, t):
    """Lateral shift of the wagon reference point caused by wheel tilt.

    With the rear wheel at track position ``u*t`` and the front wheel a wheel
    base ahead, ``tan(alpha) = (y2 - y1) / B`` and the offset is
    ``H * tan(alpha)``.
    """
    _check_speed(u)
    x1 = u * np.asarray(t, dtype=float)
    y1 = profile.height(x1)
    y2 = profile.height(x1 + geom.wheel_base)
    w = geom.wagon_height * (y2 - y1) / geom.wheel_base
    return float(w) if np.ndim(w) == 0 else w


def acceleration_scale(profile: RailProfile, geom: GeometryParams, u: float) -> AccelerationScale:
    """Order-of-magnitude envelopes ``A u^2/L^2`` and ``H A u^2 / (B L^2)``."""
    _check_speed(u)
    vertical = profile.amplitude * u**2 / profile.section_length**2
    return AccelerationScale(vertical, geom.wagon_height * vertical / geom.wheel_base)


def forcing_frequency(u: float, L: float) -> float:
    """Angular frequency (rad/s) at which a speed ``u`` crosses sections of length ``L``."""
    if L == 0:
        raise ZeroSectionLength("section length must be nonzero")
    if L < 0:
        raise ZeroSectionLength(f"section length must be positive, got {L}")
    return 2.0 * math.pi * u / L
