import json

import numpy as np
import pytest

from axlebox import io
from axlebox.errors import ParseError
from axlebox.freq_response import VehicleParams
from tests import oracles


def write(tmp_path, name, text, newline="\n"):
    path = tmp_path / name
    path.write_bytes(text.replace("\n", newline).encode("utf-8"))
    return path


def test_bundled_table_matches_source_rows(table1):
    assert len(table1) == 15
    for row, (crack, dist, stops, speed) in zip(table1, oracles.TABLE1):
        assert (row.crack_fraction, row.distance_km, row.stops, row.speed_kmh) == (
            float(crack),
            float(dist),
            stops,
            speed,
        )


@pytest.mark.parametrize("newline", ["\n", "\r\n"])
def test_read_observations_line_endings(tmp_path, newline):
    path = write(tmp_path, "t.csv", "crack_fraction,distance_km,stops,speed_kmh\n0.1,50.5,3,90\n0.2,60,4,95\n", newline)
    rows = io.read_observations(path)
    assert [r.stops for r in rows] == [3, 4]
    assert rows[0].distance_km == 50.5


@pytest.mark.parametrize(
    "body, line",
    [
        ("0.1,50.5,3,90\n0.2,abc,4,95\n", 3),
        ('0.1,"1,050.5",3,90\n', 2),
        ("0.1,1_050,3,90\n", 2),
        ("0.1,50.5,3.5,90\n", 2),
        ("0.1,50.5,3\n", 2),
        ("1.5,50.5,3,90\n", 2),
        ("0.1,50,5,3,90\n", 2),
    ],
)
def test_read_observations_errors_carry_line(tmp_path, body, line):
    path = write(tmp_path, "t.csv", "crack_fraction,distance_km,stops,speed_kmh\n" + body)
    with pytest.raises(ParseError) as info:
        io.read_observations(path)
    assert info.value.line == line


def test_read_observations_bad_header(tmp_path):
    path = write(tmp_path, "t.csv", "y,d,s,v\n0.1,50,3,90\n")
    with pytest.raises(ParseError) as info:
        io.read_observations(path)
    assert info.value.line == 1


def test_read_observations_empty_file(tmp_path):
    path = write(tmp_path, "t.csv", "")
    with pytest.raises(ParseError):
        io.read_observations(path)


def test_read_observations_header_only(tmp_path):
    path = write(tmp_path, "t.csv", "crack_fraction,distance_km,stops,speed_kmh\n")
    assert io.read_observations(path) == []


def test_read_observations_missing_file(tmp_path):
    with pytest.raises(ParseError):
        io.read_observations(tmp_path / "nope.csv")


def test_read_profile(tmp_path):
    s = np.linspace(0, 1, 11)
    text = "s,h\n" + "".join(f"{float(a)!r},{float(np.cos(2 * np.pi * a))!r}\n" for a in s)
    shape = io.read_profile(write(tmp_path, "p.csv", text))
    assert shape.value(0.0) == pytest.approx(1.0)
    assert shape.value(0.5) == pytest.approx(-1.0)


def test_read_profile_rejects_non_monotone(tmp_path):
    with pytest.raises(ParseError):
        io.read_profile(write(tmp_path, "p.csv", "s,h\n0,1\n0.5,0\n0.4,0\n1,1\n"))


# ---------------------------------------------------------------- params


def test_params_defaults_when_empty():
    assert io.parse_params("") == VehicleParams()


def test_params_partial_override():
    p = io.parse_params("# softer secondary\nK_N_per_m = 5e5\nC_Ns_per_m: 0\n")
    assert p == VehicleParams(K=5e5, C=0.0)


def test_params_tonnes():
    p = io.parse_params("M_t = 11.2\nm_t = 1.01\n")
    assert p.M == pytest.approx(11200.0)
    assert p.m == pytest.approx(1010.0)


@pytest.mark.parametrize(
    "text, line",
    [
        ("M_kg = 1\nbogus = 3\n", 2),
        ("M_kg 1000\n", 1),
        ("M_kg = 1,000\n", 1),
        ("M_kg = 1000\nM_t = 1\n", 2),
    ],
)
def test_params_errors(text, line):
    with pytest.raises(ParseError) as info:
        io.parse_params(text)
    assert info.value.line == line


def test_params_invalid_value():
    with pytest.raises(ParseError):
        io.parse_params("K_N_per_m = -4\n")


def test_read_params_file(tmp_path):
    path = write(tmp_path, "v.cfg", "C_Ns_per_m = 0\nD_Ns_per_m = 0\n")
    assert io.read_params(path) == VehicleParams().undamped()


# ---------------------------------------------------------------- formatting


@pytest.mark.parametrize(
    "value, text",
    [
        (0.1 + 0.2, "0.3"),
        (104.18296399862218, "104.182963999"),
        (1e-20, "1e-20"),
        (-0.0, "0"),
        (3, "3"),
        (True, "true"),
        (float("inf"), "inf"),
    ],
)
def test_fmt(value, text):
    assert io.fmt(value) == text


def test_json_round_trip_is_stable():
    obj = {"a": [0.1 + 0.2, np.float64(2.0) / 3], "b": np.int64(4), "c": float("inf"), "d": np.bool_(True)}
    text = io.dumps_json(obj)
    assert json.loads(text) == {"a": [0.3, 0.666666666667], "b": 4, "c": "inf", "d": True}
    assert io.dumps_json(json.loads(text)) == text
