"""Command-line front end.

Subcommands: ``regress``, ``resonance``, ``sweep``, ``simulate``, ``accel-scale``.
Every run writes its report to ``--out`` plus a ``<out>.manifest.json``
naming inputs and outputs.

Exit codes
----------
0  success
1  unexpected internal error
2  bad input: unreadable/malformed file, empty table, invalid range or config
3  regression cannot be solved: too few rows or singular design
4  undamped resonance growth (singular frequency response or non-finite state)
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from axlebox import __version__
from axlebox import io
from axlebox.errors import (
    AxleboxError,
    EmptyTable,
    InsufficientRows,
    NonFinite,
    ParseError,
    ResonantSingularity,
    SingularDesign,
)
from axlebox.freq_response import VehicleParams, respond
from axlebox.kinematics import GeometryParams, RailProfile, acceleration_scale, forcing_frequency
from axlebox.regression import PUBLISHED_BETA, PUBLISHED_RELATIVE_ERROR, fit, stopping_frequency
from axlebox.resonance import (
    DEFAULT_SECTION_LENGTH,
    KMH_PER_MPS,
    natural_frequencies_rad,
    resonance_report,
    speed_sweep,
)
from axlebox.timedomain import SimConfig, simulate, steady_state_amplitude

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SOLVE = 3
EXIT_GROWTH = 4

DEFAULTS_SOURCE = "defaults(Fig.4)"


class _Run:
    """Collects the files a command touched, for the manifest."""

    def __init__(self, command, args):
        self.command = command
        self.args = args
        self.inputs = []
        self.outputs = []

    def load_params(self) -> VehicleParams:
        if self.args.params is None:
            return VehicleParams()
        self.inputs.append(str(self.args.params))
        return io.read_params(self.args.params)

    def out_path(self, default_ext) -> Path:
        if self.args.out is not None:
            return Path(self.args.out)
        return Path(f"{self.command}.{default_ext}")

    def write(self, path, fmt, json_obj=None, header=None, rows=None):
        if fmt == "json":
            io.write_json(path, json_obj)
        else:
            io.write_csv(path, header, rows)
        self.outputs.append(str(path))

    def write_manifest(self):
        if not self.outputs:
            return
        manifest = {
            "command": self.command,
            "inputs": self.inputs,
            "params_source": str(self.args.params) if self.args.params is not None else DEFAULTS_SOURCE,
            "outputs": self.outputs,
            "tool_version": __version__,
        }
        path = Path(self.outputs[0] + ".manifest.json")
        io.write_json(path, manifest)


def _omega_arg(text):
    if text in ("low", "high"):
        return text
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, 'low' or 'high', got {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError("omega must be positive")
    return value


# ---------------------------------------------------------------- regress


def cmd_regress(args, run: _Run) -> int:
    csv_path = Path(args.csv) if args.csv else io.bundled_table_path()
    run.inputs.append(str(csv_path))
    table = io.read_observations(csv_path)
    result = fit(table)
    fmt = args.format or "json"
    out = run.out_path(fmt)
    if fmt == "json":
        run.write(out, fmt, json_obj=result.to_dict())
    else:
        names = ["intercept", "distance_km", "stops", "speed_kmh"]
        base = [0, result.baselines.min_dist, result.baselines.min_stops, result.baselines.min_speed]
        rows = list(zip(names, result.beta, base))
        run.write(out, fmt, header=["term", "coefficient", "baseline"], rows=rows)

    b = result.beta
    print(f"observations: {result.n}")
    print("beta: " + ", ".join(io.fmt(round(v, 6)) for v in b))
    print(f"relative error: {100 * result.relative_error:.2f}%")
    print(
        "published for comparison: beta = "
        + ", ".join(io.fmt(v) for v in PUBLISHED_BETA)
        + f"; relative error ~ {100 * PUBLISHED_RELATIVE_ERROR:.1f}%"
    )
    mean_sf = sum(stopping_frequency(r.stops, r.distance_km) for r in table) / len(table)
    trend = "rises" if b[2] > 0 else "falls"
    print(
        f"stopping frequency: each extra stop changes crack fraction by {b[2]:+.4f}; "
        f"at fixed distance the crack fraction {trend} with stopping frequency "
        f"(table mean {mean_sf:.4f} stops/km)"
    )
    print(f"wrote {out}")
    return EXIT_OK


# ---------------------------------------------------------------- resonance


def cmd_resonance(args, run: _Run) -> int:
    params = run.load_params()
    if not args.length > 0:
        raise ParseError(f"section length must be positive, got {args.length}")
    report = resonance_report(params, args.length)
    fmt = args.format or "json"
    out = run.out_path(fmt)
    data = {"params": params.as_dict(), **report.to_dict()}
    if fmt == "json":
        run.write(out, fmt, json_obj=data)
    else:
        rows = [(k, v) for k, v in report.to_dict().items()]
        run.write(out, fmt, header=["quantity", "value"], rows=rows)
    print(f"low resonance:  f_L = {report.f_asymptotic_low:.3f} Hz (exact {report.f_exact_low:.4f} Hz)")
    print(
        f"  critical speed u = {report.u_crit_low_mps:.2f} m/s = {report.u_crit_low_kmh:.2f} km/h "
        f"at L = {io.fmt(args.length)} m"
    )
    print(f"high resonance: f_h = {report.f_asymptotic_high:.3f} Hz (exact {report.f_exact_high:.4f} Hz)")
    print(f"  critical speed u = {report.u_crit_high_mps:.2f} m/s = {report.u_crit_high_kmh:.2f} km/h")
    print(f"wrote {out}")
    return EXIT_OK


# ---------------------------------------------------------------- sweep


def cmd_sweep(args, run: _Run) -> int:
    params = run.load_params()
    result = speed_sweep(params, args.length, args.amplitude, args.u_from, args.u_to, args.steps)
    fmt = args.format or "csv"
    out = run.out_path(fmt)
    rows = [(r.u_kmh, r.omega, r.mag_x, r.mag_y, r.is_peak) for r in result.rows]
    if fmt == "json":
        data = {
            "report": resonance_report(params, args.length).to_dict(),
            "forcing_amplitude_m": args.amplitude,
            "rows": [dict(zip(io.SWEEP_HEADER, row)) for row in rows],
        }
        run.write(out, fmt, json_obj=data)
    else:
        run.write(out, fmt, header=io.SWEEP_HEADER, rows=rows)
    peak = result.peak
    if peak is None:
        print(f"no interior peak between {io.fmt(args.u_from)} and {io.fmt(args.u_to)} km/h")
    else:
        print(
            f"peak |x0/A| = {peak.mag_x:.4f} at {peak.u_kmh:.2f} km/h "
            f"({peak.u_kmh / KMH_PER_MPS:.3f} m/s, omega = {peak.omega:.4f} rad/s)"
        )
    n_singular = sum(r.singular for r in result.rows)
    if n_singular:
        print(f"{n_singular} row(s) hit an undamped resonance and were flagged")
    print(f"wrote {out}")
    return EXIT_OK


# ---------------------------------------------------------------- simulate


def cmd_simulate(args, run: _Run) -> int:
    params = run.load_params()
    omega = args.omega
    if omega in ("low", "high"):
        w_lo, w_hi = natural_frequencies_rad(params)
        omega = w_lo if omega == "low" else w_hi
    cfg = SimConfig.for_frequency(
        params,
        omega,
        steps_per_period=args.steps_per_period,
        transient_periods=args.transient_periods,
        measure_periods=args.measure_periods,
    )
    if args.dt is not None or args.t_end is not None:
        cfg = SimConfig(
            dt=args.dt if args.dt is not None else cfg.dt,
            t_end=args.t_end if args.t_end is not None else cfg.t_end,
            transient_periods=cfg.transient_periods,
            measure_periods=cfg.measure_periods,
        )
    if args.decimate < 1:
        raise ParseError("decimation factor must be >= 1")

    fmt = args.format or "csv"
    out = run.out_path(fmt)
    try:
        traj = simulate(params, args.amplitude, omega, cfg)
    except NonFinite as exc:
        print(f"undamped resonance growth detected: {exc}", file=sys.stderr)
        return EXIT_GROWTH
    steady = steady_state_amplitude(traj, omega, cfg)

    singular = None
    try:
        fd = respond(params, omega, args.amplitude)
    except ResonantSingularity as exc:
        singular = exc
        fd = None

    idx = range(0, len(traj), args.decimate)
    rows = [(traj.times[i], traj.x[i], traj.xdot[i], traj.y[i], traj.ydot[i], traj.z[i]) for i in idx]
    summary = {
        "omega_rad_s": omega,
        "forcing_amplitude_m": args.amplitude,
        "dt_s": cfg.dt,
        "t_end_s": float(traj.times[-1]),
        "time_domain": {"amp_x": steady.amp_x, "amp_y": steady.amp_y},
    }
    if fd is not None:
        fx, fy = abs(fd.x0), abs(fd.y0)
        summary["frequency_domain"] = {"amp_x": fx, "amp_y": fy}
        summary["relative_difference"] = {"x": _rel_diff(steady.amp_x, fx), "y": _rel_diff(steady.amp_y, fy)}
    if fmt == "json":
        summary["trajectory"] = [dict(zip(io.TRAJECTORY_HEADER, r)) for r in rows]
        run.write(out, fmt, json_obj=summary)
    else:
        run.write(out, fmt, header=io.TRAJECTORY_HEADER, rows=rows)

    print(f"omega = {omega:.6g} rad/s, dt = {cfg.dt:.4g} s, t_end = {traj.times[-1]:.4g} s")
    print(f"time domain:      |x| = {steady.amp_x:.6e} m, |y| = {steady.amp_y:.6e} m")
    if singular is not None:
        n = int(round(2 * math.pi / omega / cfg.dt))
        first = max(abs(v) for v in traj.x[: n + 1])
        last = max(abs(v) for v in traj.x[-(n + 1) :])
        ratio = last / first if first > 0 else math.inf
        print(
            f"undamped resonance growth detected: {singular}; "
            f"peak |x| grew {ratio:.1f}x from first to last period",
            file=sys.stderr,
        )
        print(f"wrote {out}")
        return EXIT_GROWTH
    print(f"frequency domain: |x| = {fx:.6e} m, |y| = {fy:.6e} m")
    rd = summary["relative_difference"]
    print(f"relative difference: x {100 * rd['x']:.4f}%, y {100 * rd['y']:.4f}%")
    print(f"wrote {out}")
    return EXIT_OK


def _rel_diff(measured, expected):
    if expected == 0:
        return 0.0 if measured == 0 else math.inf
    return abs(measured - expected) / expected


# ---------------------------------------------------------------- accel-scale


def cmd_accel_scale(args, run: _Run) -> int:
    u = args.speed / KMH_PER_MPS
    profile = RailProfile(args.amplitude, args.length)
    geom = GeometryParams(args.wheel_base, args.height)
    scale = acceleration_scale(profile, geom, u)
    omega = forcing_frequency(u, args.length)
    data = {
        "u_kmh": args.speed,
        "u_mps": u,
        "omega_rad_s": omega,
        "f_hz": omega / (2 * math.pi),
        "vertical_scale_m_s2": scale.vertical,
        "offset_scale_m_s2": scale.offset,
    }
    fmt = args.format or "json"
    out = run.out_path(fmt)
    if fmt == "json":
        run.write(out, fmt, json_obj=data)
    else:
        run.write(out, fmt, header=["quantity", "value"], rows=list(data.items()))
    print(f"u = {u:.4f} m/s: forcing {omega:.4f} rad/s ({omega / (2 * math.pi):.4f} Hz)")
    print(f"vertical acceleration ~ {scale.vertical:.6g} m/s^2, wagon offset acceleration ~ {scale.offset:.6g} m/s^2")
    print(f"wrote {out}")
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _add_global_flags(parser, suppress):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--params", default=default, help="vehicle parameter file (key = value lines)")
    parser.add_argument("--out", default=default, help="output file (default: <command>.<format>)")
    parser.add_argument("--format", choices=("json", "csv"), default=default, help="output format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="axlebox", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _add_global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("regress", help="fit crack fraction on distance, stops and speed")
    p.add_argument("csv", nargs="?", help="observation CSV (default: bundled 15-route table)")
    _add_global_flags(p, suppress=True)
    p.set_defaults(func=cmd_regress)

    p = sub.add_parser("resonance", help="resonance frequencies and critical speeds")
    p.add_argument("-L", "--length", type=float, default=DEFAULT_SECTION_LENGTH, help="rail section length, m")
    _add_global_flags(p, suppress=True)
    p.set_defaults(func=cmd_resonance)

    p = sub.add_parser("sweep", help="transfer magnitudes over a speed range")
    p.add_argument("-L", "--length", type=float, default=DEFAULT_SECTION_LENGTH, help="rail section length, m")
    p.add_argument("-A", "--amplitude", type=float, default=0.005, help="rail amplitude, m")
    p.add_argument("--from", dest="u_from", type=float, default=90.0, help="start speed, km/h")
    p.add_argument("--to", dest="u_to", type=float, default=110.0, help="end speed, km/h")
    p.add_argument("--steps", type=int, default=201, help="number of grid speeds (>= 2)")
    _add_global_flags(p, suppress=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("simulate", help="time-domain run compared against the frequency-domain solution")
    p.add_argument("-A", "--amplitude", type=float, default=0.005, help="rail amplitude, m")
    p.add_argument(
        "--omega", type=_omega_arg, required=True, help="forcing frequency in rad/s, or 'low'/'high' for an exact root"
    )
    p.add_argument("--dt", type=float, help="time step, s (default: fit the period, >= 20 steps per fastest period)")
    p.add_argument("--t-end", dest="t_end", type=float, help="end time, s")
    p.add_argument("--steps-per-period", type=int, default=20, help="steps per period of the fastest motion")
    p.add_argument("--transient-periods", type=int, help="discarded forcing periods (default: until settled)")
    p.add_argument("--measure-periods", type=int, default=4, help="forcing periods used for amplitude extraction")
    p.add_argument("--decimate", type=int, default=1, help="write every n-th sample")
    _add_global_flags(p, suppress=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("accel-scale", help="acceleration envelopes and forcing frequency at a speed")
    p.add_argument("--speed", type=float, required=True, help="train speed, km/h")
    p.add_argument("-A", "--amplitude", type=float, default=0.01, help="rail amplitude, m")
    p.add_argument("-L", "--length", type=float, default=DEFAULT_SECTION_LENGTH, help="rail section length, m")
    p.add_argument("-B", "--wheel-base", type=float, default=2.5, help="wheel base, m")
    p.add_argument("-H", "--height", type=float, default=1.0, help="wagon height above the wheels, m")
    _add_global_flags(p, suppress=True)
    p.set_defaults(func=cmd_accel_scale)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    run = _Run(args.command, args)
    try:
        code = args.func(args, run)
    except (InsufficientRows, SingularDesign) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_SOLVE
    except (ParseError, EmptyTable) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_INPUT
    except NonFinite as exc:
        print(f"undamped resonance growth detected: {exc}", file=sys.stderr)
        code = EXIT_GROWTH
    except (AxleboxError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_INPUT
    run.write_manifest()
    return code


if __name__ == "__main__":
    sys.exit(main())
