"""Command-line driver.

Subcommands::

    movingdecay decay      survival amplitude series for one preparation
    movingdecay oscillate  two-mass clock series
    movingdecay compare    moving preparation vs rest (JSON report)
    movingdecay scan       one report per value of p, v, gamma or t

Exit codes: 0 success, 2 configuration error, 3 quadrature did not
converge, 4 lifetime fit failed.  Output is written only after the whole
computation has succeeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import config as cfgmod
from . import twomass
from .amplitude import DefiniteMomentum, DefiniteVelocity, Rest, amplitude_series, survival
from .analysis import dilation_report
from .errors import ConfigError, ConvergenceError, DomainError, FitError, MovingDecayError
from .spectral import BreitWignerDensity, DiscreteDensity

EXIT_OK, EXIT_CONFIG, EXIT_CONVERGENCE, EXIT_FIT = 0, 2, 3, 4
CSV_COLUMNS = ("t", "re_A", "im_A", "prob")


def fmt(x) -> str:
    """Shortest round-trip decimal for a float."""
    return repr(float(x))


def _parse_lines(text):
    lines = []
    for item in text.split(","):
        try:
            mu, w = item.split(":")
            lines.append([float(mu), float(w)])
        except ValueError:
            raise ConfigError(f"--lines expects mu:w pairs separated by commas, got {item!r}") from None
    return lines


def overrides_from_args(args) -> dict:
    """Translate command-line flags into a partial config dict."""
    raw: dict = {}
    density: dict = {}
    if args.density:
        density["kind"] = args.density
    if args.m is not None:
        density["m"] = args.m
    if args.width is not None:
        density["gamma"] = args.width
    if args.tail_sigmas is not None:
        density["tail_sigmas"] = args.tail_sigmas
    if args.lines:
        density["lines"] = _parse_lines(args.lines)
        density.setdefault("kind", "discrete")
    if density:
        raw["density"] = density

    prep: dict = {}
    if args.prep:
        prep["kind"] = args.prep
    if args.v is not None:
        prep["v"] = args.v
        prep.setdefault("kind", "velocity")
    if args.p is not None:
        prep["p"] = args.p
        prep.setdefault("kind", "momentum")
    if prep:
        raw["preparation"] = prep

    grid: dict = {}
    for key, value in (("kind", args.grid), ("t_min", args.t_min), ("t_max", args.t_max), ("n", args.n)):
        if value is not None:
            grid[key] = value
    if grid:
        raw["grid"] = grid
    tol: dict = {}
    if args.tol is not None:
        tol["rel_tol"] = args.tol
    if args.abs_tol is not None:
        tol["abs_tol"] = args.abs_tol
    if tol:
        raw["tolerances"] = tol
    if args.format:
        raw["format"] = args.format
    if args.out:
        raw["out"] = args.out
    return raw


def load_config(args, path=None, extra=None):
    raw = cfgmod.load_file(path) if path else {}
    raw = cfgmod.merge(raw, overrides_from_args(args))
    if extra:
        raw = cfgmod.merge(raw, extra)
    return cfgmod.build(raw)


def write_csv(header, rows, meta=None) -> str:
    buf = io.StringIO()
    for key, value in (meta or {}).items():
        buf.write(f"# {key}={value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(x) if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()


def write_json(meta, header, rows) -> str:
    records = [dict(zip(header, (float(x) for x in row))) for row in rows]
    return json.dumps({"meta": meta, "rows": records}) + "\n"


def emit(text: str, out) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _prep_meta(prep):
    return prep.to_config()


def cmd_decay(args) -> int:
    run = load_config(args, args.config)
    d = run.density
    series = amplitude_series(d, run.preparation, run.times, run.tolerances)
    header = list(CSV_COLUMNS)
    cols = [series.times, series.amplitudes.real, series.amplitudes.imag, series.probabilities]
    if series.approx_probabilities is not None:
        header.append("approx_prob")
        cols.append(series.approx_probabilities)
    rows = list(zip(*cols))
    meta = {"density": json.dumps(d.to_config(), sort_keys=True),
            "preparation": json.dumps(_prep_meta(run.preparation), sort_keys=True)}
    if isinstance(run.preparation, DefiniteVelocity):
        meta["lorentz_gamma"] = fmt(run.preparation.gamma)
    text = write_csv(header, rows, meta) if run.format == "csv" else write_json(meta, header, rows)
    emit(text, run.out)
    return EXIT_OK


def _two_mass_from_args(args, run):
    if args.preset:
        return twomass.preset(args.preset)
    if args.m1 is not None or args.m2 is not None:
        if args.m1 is None or args.m2 is None:
            raise ConfigError("--m1 and --m2 must be given together")
        w1 = 0.5 if args.w1 is None else args.w1
        return twomass.TwoMassState(args.m1, args.m2, w1, 1.0 - w1)
    if isinstance(run.density, DiscreteDensity):
        return twomass.TwoMassState.from_density(run.density)
    return twomass.preset("clock")


def cmd_oscillate(args) -> int:
    run = load_config(args, args.config)
    s = _two_mass_from_args(args, run)
    prep = run.preparation
    want_closed = s.equal_weights if args.closed_form is None else args.closed_form
    if want_closed and not s.equal_weights:
        raise ConfigError("--closed-form needs equal weights w1 = w2 = 1/2")
    d = s.as_density()
    amps = np.array([survival(d, prep, float(t)).value for t in run.times])
    header = list(CSV_COLUMNS)
    cols = [run.times, amps.real, amps.imag, np.abs(amps) ** 2]
    if want_closed:
        header.append("closed_form")
        cols.append(np.atleast_1d(twomass.osc_probability_equal_weights(s, prep, run.times)))
    meta = {"density": json.dumps(d.to_config(), sort_keys=True),
            "preparation": json.dumps(_prep_meta(prep), sort_keys=True)}
    if s.equal_weights:
        meta["period"] = fmt(twomass.oscillation_period(s, prep))
    if isinstance(prep, DefiniteVelocity):
        meta["lorentz_gamma"] = fmt(prep.gamma)
    if isinstance(prep, DefiniteMomentum):
        meta["gamma_tilde"] = fmt(twomass.effective_gamma_tilde(prep.p, s.m1, s.m2))
    rows = list(zip(*cols))
    text = write_csv(header, rows, meta) if run.format == "csv" else write_json(meta, header, rows)
    emit(text, run.out)
    return EXIT_OK


def _report(d, prep, tol, window=None) -> dict:
    rep = dilation_report(d, prep, window=window, tol=tol).to_dict()
    rep["density"] = d.to_config()
    return rep


def cmd_compare(args) -> int:
    run = load_config(args, args.config)
    if args.moving_config:
        if not isinstance(run.preparation, Rest):
            raise ConfigError("with --moving-config the first config must describe the rest preparation")
        moving = load_config(args, args.moving_config)
        if moving.density != run.density:
            raise ConfigError("rest and moving configs describe different densities")
        run = moving
    if isinstance(run.preparation, Rest):
        raise ConfigError("compare needs a moving preparation (velocity or momentum)")
    rep = _report(run.density, run.preparation, run.tolerances,
                  tuple(args.window) if args.window else None)
    emit(json.dumps(rep) + "\n", run.out)
    return EXIT_OK


def _scan_values(args):
    if args.values:
        try:
            vals = [float(x) for x in args.values.split(",") if x.strip()]
        except ValueError:
            raise ConfigError(f"--values must be a comma separated list of numbers, got {args.values!r}") from None
    elif args.start is not None and args.stop is not None and args.steps:
        vals = np.linspace(args.start, args.stop, args.steps).tolist()
    else:
        vals = []
    if not vals:
        raise ConfigError("scan axis is empty; give --values or --start/--stop/--steps")
    return sorted(vals)


def _scan_point(job):
    axis, value, raw = job
    run = cfgmod.build(raw)
    d, prep = run.density, run.preparation
    if axis == "t":
        r = survival(d, prep, value, run.tolerances)
        row = {"t": value, "re_A": r.value.real, "im_A": r.value.imag, "prob": abs(r.value) ** 2,
               "error_estimate": r.error_estimate}
        return row
    return _report(d, prep, run.tolerances)


def _scan_raw(axis, value, raw):
    raw = cfgmod.merge(raw, {})
    if axis == "v":
        raw["preparation"] = {"kind": "velocity", "v": value}
    elif axis == "p":
        raw["preparation"] = {"kind": "momentum", "p": value}
    elif axis == "gamma":
        if raw["density"].get("kind") != "breit-wigner":
            raise ConfigError("a gamma scan needs a Breit-Wigner density")
        raw["density"] = dict(raw["density"], gamma=value)
    return raw


def cmd_scan(args) -> int:
    run = load_config(args, args.config)
    values = _scan_values(args)
    raw = cfgmod.merge(cfgmod.DEFAULTS, run.raw)
    jobs = [(args.axis, v, _scan_raw(args.axis, v, raw)) for v in values]
    for _, _, job_raw in jobs:
        cfgmod.build(job_raw)
    if args.axis != "t" and isinstance(cfgmod.build(jobs[0][2]).preparation, Rest):
        raise ConfigError("report scans need a moving preparation")
    workers = args.workers or 1
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_point, jobs))
    else:
        results = [_scan_point(job) for job in jobs]

    records = []
    for (_, value, _), rec in zip(jobs, results):
        records.append({"axis": args.axis, "value": value, **rec})
    if run.format == "json":
        text = "".join(json.dumps(r) + "\n" for r in records)
    else:
        flat = []
        for r in records:
            r = dict(r)
            r.pop("density", None)
            window = r.pop("window", None)
            if window is not None:
                r["window_lo"], r["window_hi"] = window
            flat.append(r)
        header = list(flat[0])
        text = write_csv(header, [[r[k] for k in header] for r in flat])
    emit(text, run.out)
    return EXIT_OK


def _common(p):
    p.add_argument("--config", help="JSON run configuration file")
    p.add_argument("--density", choices=["breit-wigner", "discrete", "uniform"])
    p.add_argument("--m", type=float, help="Breit-Wigner centre mass")
    p.add_argument("--width", type=float, help="Breit-Wigner width")
    p.add_argument("--tail-sigmas", type=float, help="upper cutoff in widths above m")
    p.add_argument("--lines", help="discrete lines as mu:w,mu:w,...")
    p.add_argument("--prep", choices=["rest", "velocity", "momentum"])
    p.add_argument("--v", type=float, help="velocity, 0 <= v < 1")
    p.add_argument("--p", type=float, help="momentum, p >= 0")
    p.add_argument("--t-min", type=float)
    p.add_argument("--t-max", type=float)
    p.add_argument("--n", type=int, help="number of grid points")
    p.add_argument("--grid", choices=["lin", "log"])
    p.add_argument("--tol", type=float, help="relative quadrature tolerance")
    p.add_argument("--abs-tol", type=float, help="absolute quadrature tolerance")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--out", default=os.environ.get("MOVINGDECAY_OUT"), help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="movingdecay",
                                     description="Decay laws of moving unstable states")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decay", help="survival amplitude series")
    _common(p)
    p.set_defaults(func=cmd_decay)

    p = sub.add_parser("oscillate", help="two-mass clock series")
    _common(p)
    p.add_argument("--preset", choices=sorted(twomass.PRESETS))
    p.add_argument("--m1", type=float)
    p.add_argument("--m2", type=float)
    p.add_argument("--w1", type=float, help="weight of the first line (w2 = 1 - w1)")
    p.add_argument("--closed-form", dest="closed_form", action="store_true", default=None,
                   help="require the cos^2 closed-form column")
    p.add_argument("--no-closed-form", dest="closed_form", action="store_false")
    p.set_defaults(func=cmd_oscillate)

    p = sub.add_parser("compare", help="moving preparation vs rest")
    _common(p)
    p.add_argument("--moving-config", help="config of the moving preparation; --config is then the rest one")
    p.add_argument("--window", type=float, nargs=2, metavar=("T_LO", "T_HI"),
                   help="fit window of the moving preparation")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("scan", help="parameter scan")
    _common(p)
    p.add_argument("--axis", choices=["p", "v", "gamma", "t"], required=True)
    p.add_argument("--values", help="comma separated scan values")
    p.add_argument("--start", type=float)
    p.add_argument("--stop", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_scan)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DomainError) as exc:
        print(f"movingdecay: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"movingdecay: quadrature did not converge: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except FitError as exc:
        print(f"movingdecay: lifetime fit failed: {exc}", file=sys.stderr)
        return EXIT_FIT
    except MovingDecayError as exc:
        print(f"movingdecay: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
