"""Scenario configuration files.

A scenario is a TOML file with four optional tables::

    [cavity]
    length_cm = 100.0
    medium_length_cm = 10.0
    empty_linewidth_MHz = 3.0     # sets the mirror reflectivity
    vacuum_linewidth_MHz = 8.0    # optional: excess loss for this width

    [medium]
    kind = "eit_lambda"
    eit_linewidth_MHz = 1.0
    group_index = 50.0

    [scan]
    span_MHz = 20.0

    [output]
    directory = "out"

User-facing frequencies are ordinary frequencies in MHz and lengths are in
cm; everything is converted to rad/s and metres here and nowhere else.
Unknown tables or keys are errors. Every key left at its default is
recorded in :attr:`Scenario.defaulted` for the run metadata.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .cavity import CavityConfig, amplitude_for_linewidth
from .errors import ParameterError
from .media import (
    C_LIGHT,
    DEFAULT_GAMMA_GROUND,
    DEFAULT_GAMMA_OPT,
    TWO_PI,
    MediumKind,
    MediumSpec,
    calibrate_eit,
    tune_dual_raman,
)
from .presets import (
    CAD_STRENGTH,
    CAVITY_LENGTH,
    CELL_LENGTH,
    EMPTY_LINEWIDTH,
    RAMAN_LINEWIDTH,
    excess_loss_for,
    mirror_reflectivity,
)

MHZ = TWO_PI * 1e6
CM = 1e-2
RB_D2_THZ = 384.2304844685

# key -> (type, default); None means "absent unless given"
CAVITY_KEYS: dict[str, tuple[type, Any]] = {
    "length_cm": (float, CAVITY_LENGTH / CM),
    "medium_length_cm": (float, CELL_LENGTH / CM),
    "lock_frequency_THz": (float, RB_D2_THZ),
    "empty_linewidth_MHz": (float, EMPTY_LINEWIDTH / MHZ),
    "reflectivity": (float, None),
    "excess_loss": (float, None),
    "vacuum_linewidth_MHz": (float, None),
    "round_trip_amplitude": (float, None),
}

MEDIUM_KEYS: dict[str, tuple[type, Any]] = {
    "kind": (str, "vacuum"),
    "group_index": (float, None),
    "chi0": (float, None),
    "gamma_opt_MHz": (float, None),
    "gamma_ground_kHz": (float, None),
    "rabi_MHz": (float, None),
    "eit_linewidth_MHz": (float, None),
    "peak_offset_MHz": (float, None),
    "target_group_index": (float, None),
}

SCAN_KEYS: dict[str, tuple[type, Any]] = {
    "span_MHz": (float, None),
    "center_MHz": (float, 0.0),
    "samples": (int, 2001),
    "cavity_shift_MHz": (float, 0.0),
    "dw0_MHz": (list, None),
    "dw0_max_MHz": (float, 4.0),
    "dw0_step_MHz": (float, 0.5),
    "truncate": (bool, True),
}

OUTPUT_KEYS: dict[str, tuple[type, Any]] = {
    "directory": (str, "."),
    "stem": (str, None),
}

SECTIONS = {
    "cavity": CAVITY_KEYS,
    "medium": MEDIUM_KEYS,
    "scan": SCAN_KEYS,
    "output": OUTPUT_KEYS,
}


@dataclass(frozen=True)
class ScanSettings:
    """Command-specific settings, already in rad/s."""

    span: float | None
    center: float
    samples: int
    cavity_shift: float
    dw0_grid: tuple[float, ...]
    truncate: bool


@dataclass(frozen=True)
class Scenario:
    cavity: CavityConfig
    medium: MediumSpec
    scan: ScanSettings
    output_directory: str
    output_stem: str | None
    raw: dict[str, dict[str, Any]]
    defaulted: tuple[str, ...] = field(default=())


def _coerce(section: str, key: str, value: Any, kind: type) -> Any:
    name = f"{section}.{key}"
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ParameterError(name, f"expected a number, got {value!r}")
        value = float(value)
        if not math.isfinite(value):
            raise ParameterError(name, "must be finite")
        return value
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ParameterError(name, f"expected an integer, got {value!r}")
        return value
    if kind is bool:
        if not isinstance(value, bool):
            raise ParameterError(name, f"expected true/false, got {value!r}")
        return value
    if kind is str:
        if not isinstance(value, str):
            raise ParameterError(name, f"expected a string, got {value!r}")
        return value
    if kind is list:
        if not isinstance(value, list) or not value:
            raise ParameterError(name, "expected a non-empty array of numbers")
        return [_coerce(section, key, v, float) for v in value]
    raise TypeError(kind)


def resolve(data: dict[str, Any]) -> tuple[dict[str, dict[str, Any]], list[str]]:
    """Check names and types, fill defaults. Returns (tables, defaulted keys)."""
    unknown = sorted(set(data) - set(SECTIONS))
    if unknown:
        raise ParameterError(unknown[0], "unknown config table")
    tables: dict[str, dict[str, Any]] = {}
    defaulted: list[str] = []
    for section, keys in SECTIONS.items():
        given = data.get(section, {})
        if not isinstance(given, dict):
            raise ParameterError(section, "must be a table")
        extra = sorted(set(given) - set(keys))
        if extra:
            raise ParameterError(f"{section}.{extra[0]}", "unknown config key")
        table = {}
        for key, (kind, default) in keys.items():
            if key in given:
                table[key] = _coerce(section, key, given[key], kind)
            elif default is not None:
                table[key] = default
                defaulted.append(f"{section}.{key}")
        tables[section] = table
    return tables, defaulted


def build_cavity(table: dict[str, Any]) -> CavityConfig:
    length = table["length_cm"] * CM
    omega_lock = TWO_PI * table["lock_frequency_THz"] * 1e12
    if "reflectivity" in table:
        r = table["reflectivity"]
    else:
        width = table["empty_linewidth_MHz"] * MHZ
        if not width > 0:
            raise ParameterError("cavity.empty_linewidth_MHz", "must be > 0")
        if width * length / (4.0 * C_LIGHT) >= math.pi / 2:
            raise ParameterError("cavity.empty_linewidth_MHz", "wider than the free spectral range")
        r = mirror_reflectivity(width, length)

    loss_keys = [k for k in ("excess_loss", "vacuum_linewidth_MHz", "round_trip_amplitude") if k in table]
    if len(loss_keys) > 1:
        raise ParameterError(f"cavity.{loss_keys[1]}", f"conflicts with cavity.{loss_keys[0]}")
    loss = 0.0
    if "excess_loss" in table:
        loss = table["excess_loss"]
    elif "vacuum_linewidth_MHz" in table:
        width = table["vacuum_linewidth_MHz"] * MHZ
        if not width > 0:
            raise ParameterError("cavity.vacuum_linewidth_MHz", "must be > 0")
        if width * length / (4.0 * C_LIGHT) >= math.pi / 2:
            raise ParameterError("cavity.vacuum_linewidth_MHz", "wider than the free spectral range")
        loss = excess_loss_for(amplitude_for_linewidth(width, length), r)
    elif "round_trip_amplitude" in table:
        a = table["round_trip_amplitude"]
        if not 0 < a <= r:
            raise ParameterError("cavity.round_trip_amplitude", f"must lie in (0, R={r:.6g}]")
        loss = excess_loss_for(a, r)
    if loss < 0:
        raise ParameterError("cavity", "requested vacuum linewidth is narrower than the empty cavity")

    return CavityConfig(
        length_L=length,
        length_medium=table["medium_length_cm"] * CM,
        reflectivity_R=r,
        excess_loss=loss,
        omega_lock=omega_lock,
    )


def _require(table, key):
    if key not in table:
        raise ParameterError(f"medium.{key}", "required for this medium kind")
    return table[key]


def build_medium(table: dict[str, Any], omega0: float) -> MediumSpec:
    """Medium centered on the lock point; calibrates or tunes when asked to."""
    try:
        kind = MediumKind(table["kind"])
    except ValueError:
        names = ", ".join(k.value for k in MediumKind)
        raise ParameterError("medium.kind", f"unknown kind {table['kind']!r} (one of {names})")

    gamma_opt = table.get("gamma_opt_MHz")
    gamma_opt = gamma_opt * MHZ if gamma_opt is not None else None

    if kind is MediumKind.VACUUM:
        return MediumSpec.vacuum(omega0)
    if kind is MediumKind.LINEAR_TOY:
        return MediumSpec.linear_toy(_require(table, "group_index"), omega0)
    if kind is MediumKind.EIT_LAMBDA:
        gamma_opt = gamma_opt if gamma_opt is not None else DEFAULT_GAMMA_OPT
        ground = table.get("gamma_ground_kHz")
        ground = TWO_PI * 1e3 * ground if ground is not None else DEFAULT_GAMMA_GROUND
        if "chi0" in table or "rabi_MHz" in table:
            return MediumSpec(
                kind,
                omega0,
                chi0=_require(table, "chi0"),
                gamma_opt=gamma_opt,
                gamma_ground=ground,
                rabi_pump=_require(table, "rabi_MHz") * MHZ,
            )
        width = _require(table, "eit_linewidth_MHz") * MHZ
        return calibrate_eit(width, _require(table, "group_index"), omega0, gamma_opt, ground)
    if kind is MediumKind.RAMAN_GAIN_SINGLE:
        return MediumSpec(
            kind,
            omega0,
            chi0=_require(table, "chi0"),
            gamma_opt=gamma_opt if gamma_opt is not None else RAMAN_LINEWIDTH,
        )
    # dual-peak gain: explicit offset, or tuned to a target center group index
    gamma_opt = gamma_opt if gamma_opt is not None else RAMAN_LINEWIDTH
    chi0 = table.get("chi0", CAD_STRENGTH * 4.0 * gamma_opt / omega0)
    if "peak_offset_MHz" in table:
        if "target_group_index" in table:
            raise ParameterError("medium.peak_offset_MHz", "conflicts with medium.target_group_index")
        return MediumSpec(
            kind, omega0, chi0=chi0, gamma_opt=gamma_opt, peak_offset=table["peak_offset_MHz"] * MHZ
        )
    return tune_dual_raman(table.get("target_group_index", 0.0), chi0, gamma_opt, omega0)


def build_scan(table: dict[str, Any]) -> ScanSettings:
    if table["samples"] < 16:
        raise ParameterError("scan.samples", f"need at least 16 samples, got {table['samples']}")
    span = table.get("span_MHz")
    if span is not None and not span > 0:
        raise ParameterError("scan.span_MHz", "must be > 0")
    if "dw0_MHz" in table:
        grid = sorted(table["dw0_MHz"])
    else:
        top, step = table["dw0_max_MHz"], table["dw0_step_MHz"]
        if not (top > 0 and step > 0):
            raise ParameterError("scan.dw0_step_MHz", "dw0_max_MHz and dw0_step_MHz must be > 0")
        n = int(round(top / step))
        if n < 1 or n > 10_000:
            raise ParameterError("scan.dw0_step_MHz", "grid must have between 1 and 10000 steps per side")
        grid = [step * k for k in range(-n, n + 1)]
    return ScanSettings(
        span=span * MHZ if span is not None else None,
        center=table["center_MHz"] * MHZ,
        samples=table["samples"],
        cavity_shift=table["cavity_shift_MHz"] * MHZ,
        dw0_grid=tuple(v * MHZ for v in grid),
        truncate=table["truncate"],
    )


def scenario_from_dict(data: dict[str, Any]) -> Scenario:
    tables, defaulted = resolve(data)
    cavity = build_cavity(tables["cavity"])
    medium = build_medium(tables["medium"], cavity.omega_lock)
    return Scenario(
        cavity=cavity,
        medium=medium,
        scan=build_scan(tables["scan"]),
        output_directory=tables["output"]["directory"],
        output_stem=tables["output"].get("stem"),
        raw=tables,
        defaulted=tuple(defaulted),
    )


def load_scenario(path: str | Path | None) -> Scenario:
    """Read a scenario file; ``None`` gives the default reference setup."""
    if path is None:
        return scenario_from_dict({})
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError:
        raise ParameterError("--config", f"no such file: {path}")
    except tomllib.TOMLDecodeError as exc:
        raise ParameterError("--config", f"{path}: {exc}")
    return scenario_from_dict(data)
