"""Direct time integration of the wagon-bogie equations of motion.

    M x'' + K (x - y) + C (x' - y') = 0
    m y'' + N (y - z) + D (y' - z') - K (x - y) - C (x' - y') = 0

with rail input ``z(t) = A cos(w t)``. Used as an independent check on the
frequency-domain solution: after the start-up transient has decayed, the
single-frequency Fourier coefficient of ``x(t)`` should equal ``x0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.integrate import trapezoid
from scipy.interpolate import CubicHermiteSpline

from axlebox.errors import DegenerateProbe, NonFinite, StepTooLarge, TooShort
from axlebox.freq_response import VehicleParams
from axlebox.resonance import natural_frequencies_rad

TWO_PI = 2.0 * math.pi
MIN_STEPS_PER_PERIOD = 20
# transient amplitude reduction targeted by SimConfig.for_frequency
SETTLE_REDUCTION = 1e-12
_FINITE_CHECK_EVERY = 256


@dataclass(frozen=True)
class SimConfig:
    """Fixed-step integration settings.

    ``transient_periods`` forcing periods are discarded before the final
    ``measure_periods`` periods are used for amplitude extraction.
    """

    dt: float
    t_end: float
    transient_periods: int = 10
    measure_periods: int = 4

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not self.t_end > 0:
            raise ValueError(f"t_end must be positive, got {self.t_end}")
        if self.transient_periods < 1 or self.measure_periods < 1:
            raise ValueError("transient_periods and measure_periods must be >= 1")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))

    def check_step(self, params: VehicleParams, omega: float) -> None:
        """Require 20 steps per period of the fastest motion: forcing or the stiff bogie mode."""
        w_max = max(omega, natural_frequencies_rad(params)[1])
        limit = TWO_PI / w_max / MIN_STEPS_PER_PERIOD
        if self.dt > limit * (1 + 1e-12):
            raise StepTooLarge(
                f"dt = {self.dt:.6g} s exceeds {limit:.6g} s "
                f"({MIN_STEPS_PER_PERIOD} steps per period at {w_max:.6g} rad/s)"
            )

    @classmethod
    def for_frequency(
        cls,
        params: VehicleParams,
        omega: float,
        steps_per_period: int = MIN_STEPS_PER_PERIOD,
        transient_periods: int | None = None,
        measure_periods: int = 4,
    ) -> SimConfig:
        """Config whose step divides the forcing period exactly.

        The step resolves the fastest of the forcing and the highest natural
        frequency with ``steps_per_period`` steps. When ``transient_periods`` is
        None it is chosen so the slowest free mode decays by ``SETTLE_REDUCTION``
        (10 periods for an undamped system, whose transient never decays).
        """
        if not omega > 0:
            raise ValueError(f"omega must be positive, got {omega}")
        period = TWO_PI / omega
        w_fast = max(omega, natural_frequencies_rad(params)[1])
        n_per_period = max(steps_per_period, math.ceil(steps_per_period * w_fast / omega - 1e-9))
        if transient_periods is None:
            t_settle = settle_time(params)
            transient_periods = 10 if math.isinf(t_settle) else max(1, math.ceil(t_settle / period))
        total = transient_periods + measure_periods
        return cls(
            dt=period / n_per_period,
            t_end=total * period,
            transient_periods=transient_periods,
            measure_periods=measure_periods,
        )


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    x: np.ndarray
    xdot: np.ndarray
    y: np.ndarray
    ydot: np.ndarray
    z: np.ndarray

    def __len__(self):
        return len(self.times)

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])


class SteadyState(NamedTuple):
    amp_x: float
    amp_y: float
    phase_x: float
    phase_y: float


def state_matrix(params: VehicleParams) -> np.ndarray:
    """First-order system matrix for the state ``(x, x', y, y')``."""
    M, m, K, N, C, D = params.M, params.m, params.K, params.N, params.C, params.D
    return np.array(
        [
            [0.0, 1.0, 0.0, 0.0],
            [-K / M, -C / M, K / M, C / M],
            [0.0, 0.0, 0.0, 1.0],
            [K / m, C / m, -(K + N) / m, -(C + D) / m],
        ]
    )


def settle_time(params: VehicleParams, reduction: float = SETTLE_REDUCTION) -> float:
    """Time for the slowest-decaying free mode to shrink by ``reduction``; inf if undamped."""
    decay = -np.linalg.eigvals(state_matrix(params)).real.max()
    if decay <= 0:
        return math.inf
    return math.log(1.0 / reduction) / decay


def simulate(
    params: VehicleParams,
    A: float,
    omega: float,
    cfg: SimConfig,
    initial=(0.0, 0.0, 0.0, 0.0),
) -> Trajectory:
    """Integrate from ``initial = (x, x', y, y')`` over ``[0, cfg.t_end]`` with classical RK4."""
    cfg.check_step(params, omega)
    if A != 0 and omega > 0:
        needed = (cfg.transient_periods + cfg.measure_periods) * TWO_PI / omega
        if cfg.t_end < needed * (1 - 1e-12):
            raise TooShort(f"t_end = {cfg.t_end:.6g} s is shorter than the {needed:.6g} s the config asks for")

    Amat = state_matrix(params)
    force_scale = A / params.m
    N, D = params.N, params.D
    dt = cfg.dt
    n = cfg.n_steps

    def rhs(t, s):
        ds = Amat @ s
        ds[3] += force_scale * (N * math.cos(omega * t) - D * omega * math.sin(omega * t))
        return ds

    out = np.empty((n + 1, 4))
    s = np.array(initial, dtype=float)
    out[0] = s
    half = 0.5 * dt
    # overflow is reported as NonFinite below, not as a numpy warning
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(n):
            t = i * dt
            k1 = rhs(t, s)
            k2 = rhs(t + half, s + half * k1)
            k3 = rhs(t + half, s + half * k2)
            k4 = rhs(t + dt, s + dt * k3)
            s = s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            out[i + 1] = s
            if i % _FINITE_CHECK_EVERY == 0 and not np.all(np.isfinite(s)):
                raise NonFinite(f"state became non-finite at t = {t + dt:.6g} s")
    if not np.all(np.isfinite(out)):
        raise NonFinite("state became non-finite")

    times = np.arange(n + 1) * dt
    z = A * np.cos(omega * times)
    return Trajectory(times=times, x=out[:, 0], xdot=out[:, 1], y=out[:, 2], ydot=out[:, 3], z=z)


def _fourier_coefficient(times, values, derivs, omega, t_start, t_stop):
    """``(2/T) * integral of v(t) exp(-i w t)`` over exactly ``[t_start, t_stop]``.

    The window is resampled with a cubic Hermite interpolant (which uses the
    stored derivatives) so it spans whole periods even when the start does
    not fall on a grid point; on an aligned grid it returns the samples.
    """
    i0 = max(int(np.searchsorted(times, t_start, side="right")) - 2, 0)
    window = slice(i0, len(times))
    n_pts = max(int(round((t_stop - t_start) / (times[1] - times[0]))), 8)
    ts = np.linspace(t_start, t_stop, n_pts + 1)
    spline = CubicHermiteSpline(times[window], values[window], derivs[window])
    v = spline(ts)
    # periodic integrand over whole periods: trapezoid sum is spectrally accurate
    integral = trapezoid(v * np.exp(-1j * omega * ts), ts)
    return 2.0 * integral / (t_stop - t_start)


def steady_state_amplitude(traj: Trajectory, omega: float, cfg: SimConfig) -> SteadyState:
    """Amplitude and phase (relative to ``cos(w t)``) over the last ``measure_periods`` periods."""
    if not omega > 0:
        raise ValueError(f"omega must be positive, got {omega}")
    period = TWO_PI / omega
    t_stop = float(traj.times[-1])
    t_start = t_stop - cfg.measure_periods * period
    if len(traj) < 2 or t_start < cfg.transient_periods * period * (1 - 1e-9) - 1e-12:
        raise TooShort(
            f"trajectory of {t_stop:.6g} s cannot hold {cfg.transient_periods} transient "
            f"and {cfg.measure_periods} measured periods of {period:.6g} s"
        )
    cx = _fourier_coefficient(traj.times, traj.x, traj.xdot, omega, t_start, t_stop)
    cy = _fourier_coefficient(traj.times, traj.y, traj.ydot, omega, t_start, t_stop)
    return SteadyState(abs(cx), abs(cy), float(np.angle(cx)), float(np.angle(cy)))


def total_energy(params: VehicleParams, traj: Trajectory) -> np.ndarray:
    """Kinetic energy of both masses plus the energy stored in both springs (J)."""
    return 0.5 * (
        params.M * traj.xdot**2
        + params.m * traj.ydot**2
        + params.K * (traj.x - traj.y) ** 2
        + params.N * (traj.y - traj.z) ** 2
    )


def resonance_growth_probe(
    params: VehicleParams,
    A: float,
    omega_root: float,
    periods: int = 50,
    steps_per_period: int = MIN_STEPS_PER_PERIOD,
) -> float:
    """Peak ``|x|`` over the last forcing period divided by that over the first.

    Starting from rest, an undamped system driven at a natural frequency
    grows linearly in time, so the ratio comes out near ``periods``; off
    resonance the response beats and the ratio stays bounded.
    """
    if params.C != 0 or params.D != 0:
        raise ValueError("the growth probe applies to undamped params (C = D = 0)")
    if A == 0:
        raise DegenerateProbe("zero forcing amplitude: growth ratio is undefined")
    if periods < 2:
        raise ValueError("periods must be >= 2")
    cfg = SimConfig.for_frequency(
        params, omega_root, steps_per_period=steps_per_period, transient_periods=periods - 1, measure_periods=1
    )
    traj = simulate(params, A, omega_root, cfg)
    n_period = int(round(TWO_PI / omega_root / cfg.dt))
    first = np.max(np.abs(traj.x[: n_period + 1]))
    last = np.max(np.abs(traj.x[-(n_period + 1) :]))
    if first == 0:
        raise DegenerateProbe("no response over the first period")
    return float(last / first)
