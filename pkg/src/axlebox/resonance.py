"""Resonance frequencies of the wagon-bogie system and the train speeds that excite them.

Without damping, det(S) = 0 reduces to a quadratic in w^2,

    M m w^4 - (M (N + K) + m K) w^2 + K N = 0,

whose two positive roots are the natural frequencies. With the mass ratio
``eps = m/M`` small they approach the closed forms

    low:  w^2 = N K / (M (N + K))   (wagon bouncing on both springs in series)
    high: w^2 = (N + K) / m         (bogie between two springs in parallel)

A train at speed ``u`` over rail sections of length ``L`` forces the system
at ``f = u / L``, so resonance frequency ``f`` is hit at ``u = f L``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np

from axlebox.errors import DegenerateParams, InvalidRange, ResonantSingularity
from axlebox.freq_response import VehicleParams, transfer_magnitudes
from axlebox.kinematics import forcing_frequency

DEFAULT_SECTION_LENGTH = 25.0  # m
KMH_PER_MPS = 3.6
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class NondimensionalForm:
    epsilon: float  # m / M
    Lambda: float  # (N + K) / K
    Omega2: float  # w^2 M / K

    def residual(self) -> float:
        """Left side of ``(Omega2 - 1)(eps Omega2 - Lambda) - 1 = 0``."""
        return (self.Omega2 - 1.0) * (self.epsilon * self.Omega2 - self.Lambda) - 1.0


class ResonancePair(NamedTuple):
    f_low: float
    f_high: float


class CriticalSpeed(NamedTuple):
    u_mps: float
    u_kmh: float


@dataclass(frozen=True)
class ResonanceReport:
    f_exact_low: float
    f_exact_high: float
    f_asymptotic_low: float
    f_asymptotic_high: float
    u_crit_low_kmh: float
    u_crit_high_kmh: float
    section_length_L: float
    # speeds excited by the exact roots, and the SI echo of the headline speeds
    u_exact_low_kmh: float
    u_exact_high_kmh: float
    u_crit_low_mps: float
    u_crit_high_mps: float

    def to_dict(self) -> dict:
        return asdict(self)


def _omega2_roots(params: VehicleParams) -> tuple[float, float]:
    a = params.M * params.m
    b = -(params.M * (params.N + params.K) + params.m * params.K)
    c = params.K * params.N
    disc = b * b - 4.0 * a * c
    if disc < 0:
        raise DegenerateParams(f"negative discriminant {disc:.3g}")
    # larger root first; the smaller from the product of roots, so no cancellation
    q = -0.5 * (b - math.sqrt(disc))  # b < 0
    hi = q / a
    lo = c / q
    if not (0 < lo <= hi):
        raise DegenerateParams(f"non-positive resonance roots {lo!r}, {hi!r}")
    if not math.isclose(lo * hi, c / a, rel_tol=1e-10) or not math.isclose(lo + hi, -b / a, rel_tol=1e-10):
        raise DegenerateParams("resonance roots fail the Vieta consistency check")
    return lo, hi


def natural_frequencies_rad(params: VehicleParams) -> tuple[float, float]:
    """Undamped natural angular frequencies (rad/s), ascending. Damping is ignored."""
    lo, hi = _omega2_roots(params)
    return math.sqrt(lo), math.sqrt(hi)


def undamped_resonance_exact(params: VehicleParams) -> ResonancePair:
    """Exact roots of det(S) = 0 with C = D = 0, in Hz.

    The damping fields of ``params`` are ignored.
    """
    w_lo, w_hi = natural_frequencies_rad(params)
    return ResonancePair(w_lo / TWO_PI, w_hi / TWO_PI)


def asymptotic_low(params: VehicleParams) -> float:
    series = params.N * params.K / (params.N + params.K)
    return math.sqrt(series / params.M) / TWO_PI


def asymptotic_high(params: VehicleParams) -> float:
    return math.sqrt((params.N + params.K) / params.m) / TWO_PI


def critical_speed(f: float, L: float) -> CriticalSpeed:
    if not L > 0:
        raise ValueError(f"section length must be positive, got {L}")
    if not f > 0:
        raise ValueError(f"frequency must be positive, got {f}")
    u = f * L
    return CriticalSpeed(u, u * KMH_PER_MPS)


def nondimensionalize(params: VehicleParams, omega: float) -> NondimensionalForm:
    return NondimensionalForm(
        epsilon=params.m / params.M,
        Lambda=(params.N + params.K) / params.K,
        Omega2=omega * omega * params.M / params.K,
    )


def resonance_report(params: VehicleParams, L: float = DEFAULT_SECTION_LENGTH) -> ResonanceReport:
    exact = undamped_resonance_exact(params)
    f_lo = asymptotic_low(params)
    f_hi = asymptotic_high(params)
    u_lo = critical_speed(f_lo, L)
    u_hi = critical_speed(f_hi, L)
    return ResonanceReport(
        f_exact_low=exact.f_low,
        f_exact_high=exact.f_high,
        f_asymptotic_low=f_lo,
        f_asymptotic_high=f_hi,
        u_crit_low_kmh=u_lo.u_kmh,
        u_crit_high_kmh=u_hi.u_kmh,
        section_length_L=L,
        u_exact_low_kmh=critical_speed(exact.f_low, L).u_kmh,
        u_exact_high_kmh=critical_speed(exact.f_high, L).u_kmh,
        u_crit_low_mps=u_lo.u_mps,
        u_crit_high_mps=u_hi.u_mps,
    )


class SweepRow(NamedTuple):
    u_kmh: float
    omega: float
    mag_x: float
    mag_y: float
    is_peak: bool
    singular: bool


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]
    section_length_L: float
    forcing_amplitude: float

    @property
    def peak(self) -> SweepRow | None:
        for row in self.rows:
            if row.is_peak:
                return row
        return None

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows], dtype=float)


def speed_sweep(
    params: VehicleParams,
    L: float = DEFAULT_SECTION_LENGTH,
    A: float = 0.005,
    u_from: float = 90.0,
    u_to: float = 110.0,
    steps: int = 201,
) -> SweepResult:
    """Transfer magnitudes on a uniform speed grid ``u_from..u_to`` (km/h).

    The largest finite ``|x0/A|`` is flagged as the peak only when it lies
    strictly inside the grid; a maximum at either endpoint means the sweep
    sits on one limb of the resonance curve. Ties go to the lowest speed.
    Rows that hit an undamped singularity carry infinite magnitudes and
    ``singular=True`` instead of stopping the sweep. ``A`` only labels the
    result; the ratios do not depend on it.
    """
    if not (math.isfinite(u_from) and math.isfinite(u_to)) or not u_from < u_to:
        raise InvalidRange(f"need u_from < u_to, got {u_from} .. {u_to}")
    if u_from < 0:
        raise InvalidRange(f"speeds must be nonnegative, got u_from = {u_from}")
    if int(steps) != steps or steps < 2:
        raise InvalidRange(f"steps must be an integer >= 2, got {steps}")

    speeds = np.linspace(u_from, u_to, int(steps))
    raw = []
    for u_kmh in speeds:
        omega = forcing_frequency(u_kmh / KMH_PER_MPS, L)
        try:
            tm = transfer_magnitudes(params, omega)
            raw.append((float(u_kmh), omega, tm.mag_x, tm.mag_y, False))
        except ResonantSingularity:
            raw.append((float(u_kmh), omega, math.inf, math.inf, True))

    finite = [i for i, r in enumerate(raw) if not r[4]]
    peak = None
    if finite:
        best = max(finite, key=lambda i: (raw[i][2], -i))
        if 0 < best < len(raw) - 1:
            peak = best
    rows = tuple(
        SweepRow(u, w, mx, my, i == peak, singular) for i, (u, w, mx, my, singular) in enumerate(raw)
    )
    return SweepResult(rows=rows, section_length_L=L, forcing_amplitude=A)
