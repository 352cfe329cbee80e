"""Command-line front end.

Subcommands ``spectrum``, ``shift-scan``, ``cad-scan`` and ``calibrate``
read a scenario file (see :mod:`dispersive_ring.config`), write a CSV with
a JSON metadata sidecar and, with ``--plot``, an SVG figure.

Exit status: 0 success, 2 configuration error, 3 physics-domain error,
4 solver failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import asdict, fields
from pathlib import Path

import numpy as np

from . import __version__
from .cavity import find_resonance, linewidth_ratio_analytic, spectrum, transmission, vacuum_linewidth
from .config import MHZ, Scenario, load_scenario
from .errors import DispersiveRingError, ParameterError
from .media import MediumKind, MediumSpec, eit_linewidth
from .sensitivity import ShiftScanResult, cad_enhancement_scan, scan_shift
from .svgplot import Series, render

OUTPUT_DIR_ENV = "DISPERSIVE_RING_OUTPUT_DIR"
log = logging.getLogger("dispersive_ring")


def fmt(value: float) -> str:
    """Fixed 9-significant-digit rendering; no negative zero."""
    value = float(value)
    if value == 0.0:
        return "0"
    if math.isnan(value):
        return "nan"
    return format(value, ".9g")


def _jsonable(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None if math.isnan(value) else ("inf" if value > 0 else "-inf")
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, MediumKind):
        return value.value
    if isinstance(value, np.generic):
        return _jsonable(value.item())
    return value


def write_csv(path: Path, header: list[str], rows, footer: dict[str, float] | None = None) -> None:
    lines = [",".join(header)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    for key, value in (footer or {}).items():
        lines.append(f"# {key}={fmt(value)}")
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _outputs(args, scenario: Scenario, command: str) -> tuple[Path, Path, Path]:
    if args.out:
        csv_path = Path(args.out)
    else:
        directory = os.environ.get(OUTPUT_DIR_ENV) or scenario.output_directory
        csv_path = Path(directory) / f"{scenario.output_stem or command}.csv"
    return csv_path, csv_path.with_suffix(".json"), csv_path.with_suffix(".svg")


def _metadata(args, scenario: Scenario, command: str, results: dict) -> dict:
    cfg = scenario.cavity
    return _jsonable(
        {
            "version": __version__,
            "command": command,
            "config": str(args.config) if args.config else None,
            "seed": args.seed,
            "inputs": scenario.raw,
            "defaulted": list(scenario.defaulted),
            "cavity": {f.name: getattr(cfg, f.name) for f in fields(cfg)}
            | {
                "free_spectral_range_MHz": cfg.free_spectral_range / MHZ,
                "round_trip_amplitude": cfg.round_trip_amplitude,
                "vacuum_linewidth_MHz": vacuum_linewidth(cfg) / MHZ,
            },
            "medium": asdict(scenario.medium),
            "results": results,
        }
    )


def _write_meta(path: Path, meta: dict) -> None:
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def _vacuum_like(scenario: Scenario) -> MediumSpec:
    return MediumSpec.vacuum(scenario.medium.center)


# -- subcommands ------------------------------------------------------------


def cmd_spectrum(args, scenario: Scenario) -> dict:
    cfg, medium, scan = scenario.cavity, scenario.medium, scenario.scan
    if scan.span is None:
        res = find_resonance(cfg, medium, scan.cavity_shift, scan.center, scan.samples)
    else:
        half = 0.5 * scan.span
        res = spectrum(cfg, medium, scan.center - half, scan.center + half, scan.samples, scan.cavity_shift)
    vac = transmission(cfg, _vacuum_like(scenario), res.detunings, scan.cavity_shift)
    results = {
        "fwhm_MHz": res.fwhm / MHZ,
        "peak_center_MHz": res.peak_center / MHZ,
        "peak_height": res.peak_height,
        "vacuum_fwhm_MHz": vacuum_linewidth(cfg) / MHZ,
        "linewidth_ratio_numeric": res.fwhm / vacuum_linewidth(cfg),
    }
    try:
        results["linewidth_ratio_analytic"] = linewidth_ratio_analytic(cfg, medium)
    except DispersiveRingError as exc:
        log.info("analytic linewidth ratio unavailable: %s", exc)

    csv_path, meta_path, svg_path = _outputs(args, scenario, "spectrum")
    det = res.detunings / MHZ
    write_csv(csv_path, ["detuning_MHz", "transmission"], zip(det, res.transmission))
    _write_meta(meta_path, _metadata(args, scenario, "spectrum", results))
    if args.plot:
        svg = render(
            [
                Series(f"with medium ({medium.kind.value})", det, res.transmission),
                Series("vacuum medium", det, vac, dashed=True),
            ],
            "Cavity transmission",
            "detuning from lock point (MHz)",
            "transmission (norm.)",
        )
        svg_path.write_text(svg, encoding="utf-8")
    print(f"fwhm_MHz={fmt(results['fwhm_MHz'])} peak_center_MHz={fmt(results['peak_center_MHz'])}")
    return results


def _scan_output(args, scenario: Scenario, command: str, scan: ShiftScanResult, extra: dict) -> dict:
    rows = [
        (p.dw0 / MHZ, p.dw0_prime_linear / MHZ, p.dw0_prime / MHZ, p.n_g_eff, p.residual / (2 * math.pi))
        for p in scan.points
    ]
    footer = {"fitted_slope": scan.fitted_slope, "implied_S": scan.implied_S} | {
        k: v for k, v in extra.items() if isinstance(v, float)
    }
    results = dict(footer)
    results["dropped_dw0_MHz"] = [v / MHZ for v in scan.dropped]
    results["fold_dw0_MHz"] = [p.dw0 / MHZ for p in scan.points if p.fold]
    results |= {k: v for k, v in extra.items() if not isinstance(v, float)}

    csv_path, meta_path, svg_path = _outputs(args, scenario, command)
    write_csv(
        csv_path,
        ["dw0_MHz", "dw0_prime_linear_MHz", "dw0_prime_MHz", "ng_eff", "residual_Hz"],
        rows,
        footer,
    )
    _write_meta(meta_path, _metadata(args, scenario, command, results))
    if args.plot:
        x = np.array([r[0] for r in rows])
        line = np.linspace(x.min(), x.max(), 2)
        svg = render(
            [
                Series("self-consistent shift", x, np.array([r[2] for r in rows]), markers=True),
                Series(f"fit, slope {scan.fitted_slope:.4g}", line, scan.fitted_slope * line),
                Series("empty cavity", line, line, dashed=True),
            ],
            "Loaded vs empty cavity shift",
            "empty-cavity shift (MHz)",
            "loaded shift (MHz)",
        )
        svg_path.write_text(svg, encoding="utf-8")
    print(f"fitted_slope={fmt(scan.fitted_slope)} implied_S={fmt(scan.implied_S)}")
    return results


def cmd_shift_scan(args, scenario: Scenario) -> dict:
    scan = scan_shift(scenario.cavity, scenario.medium, scenario.scan.dw0_grid, scenario.scan.truncate)
    return _scan_output(args, scenario, "shift-scan", scan, {})


def cmd_cad_scan(args, scenario: Scenario) -> dict:
    cfg, medium = scenario.cavity, scenario.medium
    if medium.kind is not MediumKind.RAMAN_GAIN_DUAL:
        raise ParameterError("medium.kind", "cad-scan needs kind = \"raman_gain_dual\"")
    scan = cad_enhancement_scan(cfg, medium, scenario.scan.dw0_grid)
    nonzero = [p for p in scan.points if p.dw0 != 0.0]
    if not nonzero:
        raise ParameterError("scan", "cad-scan needs at least one nonzero grid point")
    smallest = min(nonzero, key=lambda p: abs(p.dw0))
    loaded = find_resonance(cfg, medium, samples=scenario.scan.samples).fwhm
    vacuum = find_resonance(cfg, _vacuum_like(scenario), samples=scenario.scan.samples).fwhm
    extra = {
        "center_group_index": medium.group_index(cfg.omega_lock - medium.center),
        "smallest_dw0_MHz": smallest.dw0 / MHZ,
        "enhancement_at_smallest": smallest.dw0_prime / smallest.dw0,
        "linewidth_ratio": loaded / vacuum,
        "peak_offset_MHz": medium.peak_offset / MHZ,
    }
    return _scan_output(args, scenario, "cad-scan", scan, extra)


def cmd_calibrate(args, scenario: Scenario) -> dict:
    medium = scenario.medium
    if medium.kind is not MediumKind.EIT_LAMBDA:
        raise ParameterError("medium.kind", "calibrate needs kind = \"eit_lambda\"")
    width = eit_linewidth(medium) if medium.chi0 > 0 else float("nan")
    n_g = medium.group_index(0.0)
    lines = [
        "[medium]",
        'kind = "eit_lambda"',
        f"chi0 = {fmt(medium.chi0)}",
        f"gamma_opt_MHz = {fmt(medium.gamma_opt / MHZ)}",
        f"gamma_ground_kHz = {fmt(medium.gamma_ground / (2 * math.pi * 1e3))}",
        f"rabi_MHz = {fmt(medium.rabi_pump / MHZ)}",
        f"# achieved eit_linewidth_MHz = {fmt(width / MHZ)}",
        f"# achieved group_index = {fmt(n_g)}",
    ]
    text = "\n".join(lines) + "\n"
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return {"eit_linewidth_MHz": width / MHZ, "group_index": n_g}


COMMANDS = {
    "spectrum": (cmd_spectrum, "cavity transmission spectrum around the lock point"),
    "shift-scan": (cmd_shift_scan, "loaded-cavity shift over a grid of empty-cavity shifts"),
    "cad-scan": (cmd_cad_scan, "shift scan for a dual-peak gain medium near zero group index"),
    "calibrate": (cmd_calibrate, "solve EIT medium parameters for a width and group index"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dispersive-ring", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", metavar="PATH", help="scenario TOML file (default: reference setup)")
        p.add_argument("--out", metavar="PATH", help="output file (CSV; sidecar and SVG alongside)")
        p.add_argument("--plot", action="store_true", help="also write an SVG figure")
        p.add_argument("--seed", type=int, default=None, help="reserved; recorded in metadata")
        p.add_argument("--verbose", "-v", action="store_true", help="log progress to stderr")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    handler, _ = COMMANDS[args.command]
    try:
        scenario = load_scenario(args.config)
        if scenario.defaulted:
            log.info("defaults used: %s", ", ".join(scenario.defaulted))
        handler(args, scenario)
    except DispersiveRingError as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
