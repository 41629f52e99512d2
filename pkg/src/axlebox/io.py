"""File formats: observation and profile CSVs, vehicle parameter files, report writers.

All numeric output goes through :func:`fmt`, which rounds to 12 significant
digits, so identical runs produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
import math
import re
from importlib import resources
from pathlib import Path

import numpy as np

from axlebox.errors import ParseError
from axlebox.freq_response import VehicleParams
from axlebox.kinematics import TabulatedShape
from axlebox.regression import Observation

OBSERVATION_HEADER = ["crack_fraction", "distance_km", "stops", "speed_kmh"]
PROFILE_HEADER = ["s", "h"]
SWEEP_HEADER = ["u_kmh", "omega_rad_s", "mag_x", "mag_y", "is_peak"]
TRAJECTORY_HEADER = ["t", "x", "xdot", "y", "ydot", "z"]

PARAM_KEYS = {
    "M_kg": ("M", 1.0),
    "m_kg": ("m", 1.0),
    "K_N_per_m": ("K", 1.0),
    "N_N_per_m": ("N", 1.0),
    "C_Ns_per_m": ("C", 1.0),
    "D_Ns_per_m": ("D", 1.0),
    # metric tonnes
    "M_t": ("M", 1000.0),
    "m_t": ("m", 1000.0),
}

# plain decimal-point numbers; no thousands separators, underscores, or nan/inf
_NUMBER = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")

SIG_DIGITS = 12


def parse_number(text: str, line: int | None = None, path=None) -> float:
    token = text.strip()
    if not _NUMBER.fullmatch(token):
        raise ParseError(f"not a decimal number: {text!r}", line=line, path=path)
    return float(token)


def fmt(value) -> str:
    """Text form of a number at 12 significant digits (shortest form that round-trips)."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    out = f"{value:.{SIG_DIGITS}g}"
    return "0" if out == "-0" else out


def _round_floats(obj):
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if not math.isfinite(value):
            # JSON has no inf/nan literal
            return fmt(value)
        return float(fmt(value))
    return obj


def dumps_json(obj) -> str:
    return json.dumps(_round_floats(obj), indent=2) + "\n"


def write_json(path, obj) -> None:
    Path(path).write_text(dumps_json(obj), encoding="utf-8")


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) if not isinstance(v, str) else v for v in row])


def _read_rows(path, header):
    """Yield ``(line_number, fields)`` for each data row after checking the header."""
    try:
        fh = open(path, newline="", encoding="utf-8-sig")
    except OSError as exc:
        raise ParseError(f"cannot open: {exc.strerror}", path=path) from exc
    with fh:
        reader = csv.reader(fh)
        try:
            first = next(reader, None)
            if first is None:
                raise ParseError("file is empty (missing header)", line=1, path=path)
            if [c.strip() for c in first] != header:
                raise ParseError(f"expected header {','.join(header)!r}, got {','.join(first)!r}", line=1, path=path)
            for fields in reader:
                if not fields or all(not f.strip() for f in fields):
                    continue
                if len(fields) != len(header):
                    raise ParseError(
                        f"expected {len(header)} fields, got {len(fields)}", line=reader.line_num, path=path
                    )
                yield reader.line_num, fields
        except UnicodeDecodeError as exc:
            raise ParseError("file is not valid UTF-8", path=path) from exc
        except csv.Error as exc:
            raise ParseError(str(exc), line=reader.line_num, path=path) from exc


def read_observations(path) -> list[Observation]:
    rows = []
    for line, fields in _read_rows(path, OBSERVATION_HEADER):
        crack, dist, stops, speed = (parse_number(f, line, path) for f in fields)
        if stops != int(stops):
            raise ParseError(f"stops must be an integer, got {fields[2]!r}", line=line, path=path)
        try:
            rows.append(Observation(crack, dist, int(stops), speed))
        except ValueError as exc:
            raise ParseError(str(exc), line=line, path=path) from exc
    return rows


def bundled_table_path() -> Path:
    """Path of the shipped 15-route crack observation table."""
    return Path(str(resources.files("axlebox") / "data" / "table1.csv"))


def load_table1() -> list[Observation]:
    return read_observations(bundled_table_path())


def read_profile(path) -> TabulatedShape:
    s, h = [], []
    for line, fields in _read_rows(path, PROFILE_HEADER):
        s.append(parse_number(fields[0], line, path))
        h.append(parse_number(fields[1], line, path))
    try:
        return TabulatedShape(np.array(s), np.array(h))
    except ValueError as exc:
        raise ParseError(str(exc), path=path) from exc


def parse_params(text: str, path=None) -> VehicleParams:
    """Parse ``key = value`` lines (``#`` comments allowed); unset keys keep their defaults."""
    values = {}
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            key, sep, value = line.partition(":")
        if not sep:
            raise ParseError(f"expected 'key = value', got {raw.strip()!r}", line=lineno, path=path)
        key = key.strip()
        if key not in PARAM_KEYS:
            raise ParseError(f"unknown key {key!r}; expected one of {', '.join(PARAM_KEYS)}", line=lineno, path=path)
        field, scale = PARAM_KEYS[key]
        if field in seen:
            raise ParseError(f"{field} already set by {seen[field]!r}", line=lineno, path=path)
        seen[field] = key
        values[field] = parse_number(value, lineno, path) * scale
    try:
        return VehicleParams(**values)
    except ValueError as exc:
        raise ParseError(str(exc), path=path) from exc


def read_params(path) -> VehicleParams:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot open: {exc.strerror}", path=path) from exc
    except UnicodeDecodeError as exc:
        raise ParseError("file is not valid UTF-8", path=path) from exc
    return parse_params(text, path=path)
