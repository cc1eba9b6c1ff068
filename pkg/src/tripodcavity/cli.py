"""Command-line interface.

Usage::

    tripodcavity {chi,transmit,peaks,ratio,steady} [--preset NAME] [--config PATH]
                 [--set section.key=value ...] [--out PATH] [--format csv|json]
                 [--plot PATH] [--oracle] [--single NAME]

Exit status is 0 on success, 1 for configuration/validation errors and 2 for
computation errors; failures print one JSON line on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from . import __version__
from .atom import DensityMatrix, evolve_to_steady_state, solve_steady_state
from .config import PRESETS, RunConfig, load_config
from .errors import ComputationError, ConfigError, TripodError
from .plotting import atomic_write, render_plot
from .spectra import COLUMNS, Peak, Spectrum, find_peaks, linewidth_report, sweep

SUBCOMMANDS = ("chi", "transmit", "peaks", "ratio", "steady")
PEAK_FIELDS = ("position", "height", "fwhm", "left_half", "right_half")


def _num(value) -> str:
    return "" if value is None else repr(float(value))


def _csv(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_num(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def spectrum_csv(s: Spectrum) -> str:
    return _csv(COLUMNS, s.rows())


def spectrum_json(s: Spectrum) -> str:
    records = [dict(zip(COLUMNS, map(float, row))) for row in s.rows()]
    return json.dumps(records, indent=1) + "\n"


def parse_spectrum_csv(text: str) -> Spectrum:
    lines = text.strip().splitlines()
    if tuple(lines[0].split(",")) != COLUMNS:
        raise ValueError(f"unexpected header {lines[0]!r}")
    return Spectrum.from_rows([float(v) for v in line.split(",")] for line in lines[1:])


def _peaks_out(peaks: list[Peak], fmt: str) -> str:
    records = [{name: getattr(pk, name) for name in PEAK_FIELDS} for pk in peaks]
    if fmt == "json":
        return json.dumps(records, indent=1) + "\n"
    return _csv(PEAK_FIELDS, ([r[name] for name in PEAK_FIELDS] for r in records))


def _record_out(record: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(record, indent=1) + "\n"
    return _csv(tuple(record), [tuple(record.values())])


def _density_out(rho: DensityMatrix, fmt: str, delta_p: float) -> str:
    if fmt == "json":
        doc = {
            "delta_p": delta_p,
            "rho_re": [[float(v) for v in row] for row in rho.rho.real],
            "rho_im": [[float(v) for v in row] for row in rho.rho.imag],
        }
        return json.dumps(doc, indent=1) + "\n"
    rows = ((j, k, rho[j, k].real, rho[j, k].imag) for j in range(4) for k in range(4))
    lines = ["j,k,re,im"] + [f"{j},{k},{_num(re)},{_num(im)}" for j, k, re, im in rows]
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tripodcavity",
        description="Tripod-atom susceptibility and ring-cavity transmission spectra.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--preset", choices=sorted(PRESETS), help="start from a figure preset")
    parser.add_argument("--config", metavar="PATH", help="JSON configuration file (or inline JSON text)")
    parser.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                        help="dotted override such as atom.delta2=3.0 (repeatable)")
    parser.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), help="output format")
    parser.add_argument("--plot", metavar="PATH", help="also write an SVG figure")
    parser.add_argument("--oracle", action="store_true",
                        help="steady: integrate in time instead of solving the linear system")
    parser.add_argument("--single", default="fig4d", choices=sorted(PRESETS),
                        help="ratio: preset providing the single-dark atom (default fig4d)")
    return parser


def _fail(kind: str, message: str, status: int) -> int:
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)
    return status


def execute(args: argparse.Namespace, cfg: RunConfig) -> tuple[str, Spectrum | None, list[Peak]]:
    """Run a subcommand; returns the serialized data plus what to plot."""
    fmt = cfg.output.format
    if args.subcommand in ("chi", "transmit", "peaks"):
        s = sweep(cfg.scan, cfg.atom, cfg.model, cfg.cavity)
        if args.subcommand == "peaks":
            peaks = find_peaks(s)
            return _peaks_out(peaks, fmt), s, peaks
        text = spectrum_json(s) if fmt == "json" else spectrum_csv(s)
        return text, s, []
    if args.subcommand == "ratio":
        single = load_config(preset=args.single).atom
        single = replace(cfg.atom, **{k: getattr(single, k) for k in ("omega1", "omega2", "delta1", "delta2")})
        report = linewidth_report(single, cfg.atom, cfg.model, cfg.cavity, cfg.scan)
        return _record_out(report.as_dict(), fmt), None, []
    if args.oracle:
        rho = evolve_to_steady_state(cfg.atom, DensityMatrix.pure(1))
    else:
        rho = solve_steady_state(cfg.atom)
    return _density_out(rho, fmt, cfg.atom.delta_p), None, []


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, preset=args.preset, overrides=args.overrides)
        output = cfg.output
        output = replace(
            output,
            format=args.format or output.format,
            path=args.out or output.path,
            plot_path=args.plot or output.plot_path,
        )
        cfg = replace(cfg, output=output)
        if output.plot_path and args.subcommand in ("ratio", "steady"):
            return _fail("ValidationError", f"--plot is not available for {args.subcommand}", 1)
    except OSError as exc:
        return _fail("ParseError", f"cannot read configuration: {exc}", 1)
    except ConfigError as exc:
        return _fail(type(exc).__name__, str(exc), 1)

    try:
        text, spectrum, peaks = execute(args, cfg)
        if output.path:
            atomic_write(output.path, text.encode("utf-8"))
        else:
            sys.stdout.write(text)
        if output.plot_path and spectrum is not None:
            columns = ["chi_re", "chi_im"] if args.subcommand == "chi" else ["transmission"]
            render_plot(spectrum, columns, output.plot_path, output.normalize_peak, peaks=peaks)
    except ConfigError as exc:
        return _fail(type(exc).__name__, str(exc), 1)
    except (ComputationError, TripodError) as exc:
        return _fail(type(exc).__name__, str(exc), 2)
    except OSError as exc:
        return _fail("IoError", str(exc), 2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
