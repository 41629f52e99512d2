"""Least-squares fit of crack fraction on route parameters.

The model is

    Y = b0 + b1*(distance - min_distance) + b2*(stops - min_stops)
           + b3*(speed - min_speed) + error

where the minima are taken over the fitted table. Centering on the column
minima makes ``b0`` the predicted crack fraction of the "mildest" route in
the data set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.linalg import solve_triangular

from axlebox.errors import EmptyTable, InsufficientRows, SingularDesign, ZeroDistance

N_PREDICTORS = 3
N_PARAMS = N_PREDICTORS + 1

# Coefficients and relative error as printed in the source study. The
# coefficient tuple does not reproduce from its own table (see README);
# kept for side-by-side reporting only.
PUBLISHED_BETA = (0.097, -0.049, 0.018, 0.0021)
PUBLISHED_RELATIVE_ERROR = 0.066


@dataclass(frozen=True)
class Observation:
    crack_fraction: float
    distance_km: float
    stops: int
    speed_kmh: float

    def __post_init__(self):
        if not 0.0 <= self.crack_fraction <= 1.0:
            raise ValueError(f"crack_fraction must lie in [0, 1], got {self.crack_fraction}")
        if not self.distance_km > 0:
            raise ValueError(f"distance_km must be positive, got {self.distance_km}")
        if not self.speed_kmh > 0:
            raise ValueError(f"speed_kmh must be positive, got {self.speed_kmh}")
        if self.stops < 0 or int(self.stops) != self.stops:
            raise ValueError(f"stops must be a nonnegative integer, got {self.stops}")


ObservationTable = Sequence[Observation]


@dataclass(frozen=True)
class Baselines:
    min_dist: float
    min_stops: int
    min_speed: float

    def as_array(self) -> np.ndarray:
        return np.array([self.min_dist, self.min_stops, self.min_speed], dtype=float)


@dataclass(frozen=True, eq=False)
class RegressionFit:
    """Result of :func:`fit`.

    ``beta`` is ordered (intercept, per-km, per-stop, per-km/h).
    ``relative_error`` is sum(residual**2) / sum(y**2).
    ``condition_estimate`` is the 2-norm condition number of X^T X.
    """

    beta: np.ndarray
    baselines: Baselines
    residuals: np.ndarray
    relative_error: float
    condition_estimate: float

    @property
    def n(self) -> int:
        return len(self.residuals)

    def to_dict(self) -> dict:
        return {
            "beta": [float(b) for b in self.beta],
            "baselines": {
                "min_dist": float(self.baselines.min_dist),
                "min_stops": int(self.baselines.min_stops),
                "min_speed": float(self.baselines.min_speed),
            },
            "relative_error": float(self.relative_error),
            "condition_estimate": float(self.condition_estimate),
            "residuals": [float(r) for r in self.residuals],
        }


class Prediction(NamedTuple):
    value: float
    # some predictor lies below the fitted table's minimum
    below_baseline: bool
    # value falls outside [0, 1]; returned unclamped
    out_of_range: bool


def build_design_matrix(table: ObservationTable) -> tuple[np.ndarray, np.ndarray, Baselines]:
    """Return ``(X, y, baselines)`` with predictors centered on their column minima."""
    if len(table) == 0:
        raise EmptyTable("observation table has no rows")
    raw = np.array([[r.distance_km, r.stops, r.speed_kmh] for r in table], dtype=float)
    y = np.array([r.crack_fraction for r in table], dtype=float)
    mins = raw.min(axis=0)
    baselines = Baselines(float(mins[0]), int(mins[1]), float(mins[2]))
    X = np.empty((len(table), N_PARAMS))
    X[:, 0] = 1.0
    X[:, 1:] = raw - mins
    return X, y, baselines


def fit(table: ObservationTable) -> RegressionFit:
    """Least-squares fit via a thin QR factorization of the design matrix.

    Raises
    ------
    EmptyTable
        No rows.
    InsufficientRows
        Fewer rows than model parameters.
    SingularDesign
        X^T X is singular to working precision (collinear predictors, or a
        predictor that is constant over the table).
    """
    X, y, baselines = build_design_matrix(table)
    n = X.shape[0]
    if n < N_PARAMS:
        raise InsufficientRows(f"need at least {N_PARAMS} observations, got {n}")

    Q, R = np.linalg.qr(X, mode="reduced")
    # cond(X^T X) == cond(R)**2 since X^T X = R^T R
    with np.errstate(divide="ignore"):
        cond_r = np.linalg.cond(R)
    condition = float(cond_r) ** 2
    if not np.isfinite(condition) or condition * np.finfo(float).eps >= 1.0:
        raise SingularDesign(f"X^T X is numerically singular (condition ~ {condition:.3g})")

    beta = solve_triangular(R, Q.T @ y)
    residuals = y - X @ beta
    relative_error = float(residuals @ residuals) / float(y @ y) if np.any(y) else 0.0
    return RegressionFit(
        beta=beta,
        baselines=baselines,
        residuals=residuals,
        relative_error=relative_error,
        condition_estimate=condition,
    )


def predict(fit: RegressionFit, distance_km: float, stops: float, speed_kmh: float) -> Prediction:
    raw = np.array([distance_km, stops, speed_kmh], dtype=float)
    centered = raw - fit.baselines.as_array()
    value = float(fit.beta[0] + fit.beta[1:] @ centered)
    return Prediction(
        value=value,
        below_baseline=bool(np.any(centered < 0)),
        out_of_range=not 0.0 <= value <= 1.0,
    )


def stopping_frequency(stops: float, distance_km: float) -> float:
    """Stops per kilometre."""
    if distance_km == 0:
        raise ZeroDistance("distance must be nonzero")
    if distance_km < 0:
        raise ValueError(f"distance must be positive, got {distance_km}")
    return stops / distance_km
