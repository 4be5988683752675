"""Scenario configuration: flat key=value documents, overrides, validation.

The document format is line-oriented `key = value` with `#` comments.
Keys are dotted and snake_case (camelCase spellings are accepted and
normalized).  Unknown keys are errors so typos cannot silently fall back
to defaults.  An empty document yields the paper-parameter defaults:
omega0 = 1 eV, omega_c = 0.9, rabi = 0.05, kappa = 0.01, 601 sites over
200 um, 1e6 molecules, 25 fs / 5 um Gaussian pulses at k = +-pi/2 1/um
driven on the lower polariton.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, fields as dc_fields
from pathlib import Path

import numpy as np

from .errors import ParseError, UnknownKeyError, ValidationError
from .meanfield import IntegratorConfig
from .model import ModelParams, polariton_frequencies
from .pulses import PulseSpec

SCENARIOS = (
    "dispersion",
    "pump-only",
    "pump-probe",
    "sweep-momentum",
    "sweep-dephasing",
    "beer-lambert",
)
FORMATS = ("text", "binary", "both")

DEFAULT_DELAYS = tuple(np.linspace(-800.0, 800.0, 9))

_ALIASES = {
    "model.length_l": "model.length",
    "pump.omega_drive": "pump.omega",
    "probe.omega_drive": "probe.omega",
}

_CAMEL = re.compile(r"(?<=[a-z0-9])([A-Z])")


@dataclass(frozen=True)
class ScenarioConfig:
    model: ModelParams
    pump: PulseSpec
    probe: PulseSpec
    integrator: IntegratorConfig
    scenario: str = "pump-only"
    sweep_values: tuple | None = None
    delays: tuple = DEFAULT_DELAYS
    window_fs: float = 900.0
    apodization_tau: float | None = None
    beer_omega: float | None = None
    beer_fit: tuple = (-35.0, -5.0)
    out_dir: str = "out"
    out_format: str = "both"
    threads: int = 1

    def formats(self) -> tuple:
        return ("text", "binary") if self.out_format == "both" else (self.out_format,)


def _parse_float(s):
    try:
        return float(s)
    except ValueError:
        raise ParseError(f"expected a number, got {s!r}") from None


def _parse_int(s):
    try:
        return int(s)
    except ValueError:
        raise ParseError(f"expected an integer, got {s!r}") from None


def _parse_auto_float(s):
    return None if s == "auto" else _parse_float(s)


def _parse_opt_float(s):
    return None if s == "none" else _parse_float(s)


def _parse_floats(s):
    if s == "none":
        return None
    try:
        return tuple(float(tok) for tok in s.split(",") if tok.strip())
    except ValueError:
        raise ParseError(f"expected comma-separated numbers, got {s!r}") from None


def _fmt(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, tuple):
        return ",".join(repr(float(v)) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


# canonical key -> (parser, default getter); the save order follows this table
_SCHEMA = {
    "scenario": str,
    "model.omega0": _parse_float,
    "model.omega_c": _parse_float,
    "model.rabi": _parse_float,
    "model.kappa": _parse_float,
    "model.gamma_phi": _parse_float,
    "model.length": _parse_float,
    "model.num_sites": _parse_int,
    "model.num_molecules": _parse_int,
    "model.disorder": _parse_floats,
    "pump.amplitude": _parse_float,
    "pump.omega": _parse_auto_float,
    "pump.sigma_t": _parse_float,
    "pump.sigma_r": _parse_float,
    "pump.k_center": _parse_float,
    "pump.center": _parse_auto_float,
    "pump.arrival": _parse_float,
    "probe.amplitude": _parse_float,
    "probe.omega": _parse_auto_float,
    "probe.sigma_t": _parse_float,
    "probe.sigma_r": _parse_float,
    "probe.k_center": _parse_float,
    "probe.center": _parse_auto_float,
    "probe.arrival": _parse_float,
    "integrator.dt": _parse_float,
    "integrator.t_end": _parse_float,
    "integrator.snapshot_stride": _parse_int,
    "integrator.laplacian": str,
    "integrator.omega_ref": _parse_auto_float,
    "sweep.values": _parse_floats,
    "delays.values": _parse_floats,
    "fft.window_fs": _parse_float,
    "fft.apodization_tau": _parse_opt_float,
    "beer.omega": _parse_auto_float,
    "beer.fit_lo": _parse_float,
    "beer.fit_hi": _parse_float,
    "output.dir": str,
    "output.format": str,
    "threads": _parse_int,
}


def normalize_key(key: str) -> str:
    snake = _CAMEL.sub(lambda m: "_" + m.group(1), key).lower()
    return _ALIASES.get(snake, snake)


def parse_document(text: str) -> dict:
    """Parse a key=value document to a raw {canonical key: string} map."""
    raw = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ParseError(f"line {lineno}: expected 'key = value': {line!r}")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if not key or not value:
            raise ParseError(f"line {lineno}: empty key or value: {line!r}")
        canon = normalize_key(key)
        if canon not in _SCHEMA:
            raise UnknownKeyError(f"line {lineno}: unknown key {key!r}")
        raw[canon] = value
    return raw


def apply_overrides(raw: dict, overrides) -> dict:
    out = dict(raw)
    for item in overrides or []:
        if "=" not in item:
            raise ParseError(f"override must be key=value: {item!r}")
        key, value = (part.strip() for part in item.split("=", 1))
        canon = normalize_key(key)
        if canon not in _SCHEMA:
            raise UnknownKeyError(f"unknown key {key!r}")
        out[canon] = value
    return out


def _defaults() -> dict:
    model = ModelParams()
    half_pi = float(np.pi / 2)
    return {
        "scenario": "pump-only",
        "model.omega0": model.omega0,
        "model.omega_c": model.omega_c,
        "model.rabi": model.rabi,
        "model.kappa": model.kappa,
        "model.gamma_phi": model.gamma_phi,
        "model.length": model.length,
        "model.num_sites": model.num_sites,
        "model.num_molecules": model.num_molecules,
        "model.disorder": None,
        "pump.amplitude": 3e-4,
        "pump.omega": None,
        "pump.sigma_t": 25.0,
        "pump.sigma_r": 5.0,
        "pump.k_center": half_pi,
        "pump.center": None,
        "pump.arrival": 200.0,
        "probe.amplitude": 3e-4,
        "probe.omega": None,
        "probe.sigma_t": 25.0,
        "probe.sigma_r": 5.0,
        "probe.k_center": -half_pi,
        "probe.center": None,
        "probe.arrival": 200.0,
        "integrator.dt": 0.1,
        "integrator.t_end": 1300.0,
        "integrator.snapshot_stride": 10,
        "integrator.laplacian": "stencil",
        "integrator.omega_ref": None,
        "sweep.values": None,
        "delays.values": DEFAULT_DELAYS,
        "fft.window_fs": 900.0,
        "fft.apodization_tau": None,
        "beer.omega": None,
        "beer.fit_lo": -35.0,
        "beer.fit_hi": -5.0,
        "output.dir": "out",
        "output.format": "both",
        "threads": 1,
    }


def build_config(raw: dict) -> ScenarioConfig:
    """Typed, validated config from a raw string map (defaults filled in)."""
    vals = _defaults()
    for key, text in raw.items():
        vals[key] = _SCHEMA[key](text)

    model = ModelParams(
        omega0=vals["model.omega0"],
        omega_c=vals["model.omega_c"],
        rabi=vals["model.rabi"],
        kappa=vals["model.kappa"],
        gamma_phi=vals["model.gamma_phi"],
        length=vals["model.length"],
        num_sites=vals["model.num_sites"],
        num_molecules=vals["model.num_molecules"],
        disorder=vals["model.disorder"],
    )

    def pulse(which, default_center_sign):
        omega = vals[f"{which}.omega"]
        if omega is None:
            omega = polariton_frequencies(vals[f"{which}.k_center"], model)[1]
        center = vals[f"{which}.center"]
        if center is None:
            center = default_center_sign * model.length / 4.0
        return PulseSpec(
            amplitude=vals[f"{which}.amplitude"],
            omega_drive=float(omega),
            sigma_t=vals[f"{which}.sigma_t"],
            sigma_r=vals[f"{which}.sigma_r"],
            k_center=vals[f"{which}.k_center"],
            center=float(center),
            arrival=vals[f"{which}.arrival"],
        )

    pump = pulse("pump", -1.0)
    probe = pulse("probe", +1.0)
    integrator = IntegratorConfig(
        dt=vals["integrator.dt"],
        t_end=vals["integrator.t_end"],
        snapshot_stride=vals["integrator.snapshot_stride"],
        laplacian=vals["integrator.laplacian"],
        omega_ref=vals["integrator.omega_ref"],
    )

    scenario = vals["scenario"]
    if scenario not in SCENARIOS:
        raise ValidationError(
            f"scenario must be one of {', '.join(SCENARIOS)}; got {scenario!r}"
        )
    if vals["output.format"] not in FORMATS:
        raise ValidationError("output.format must be text, binary or both")
    if vals["threads"] < 1:
        raise ValidationError("threads must be >= 1")
    if scenario.startswith("sweep-") and not vals["sweep.values"]:
        raise ValidationError(f"scenario {scenario} requires sweep.values")
    delays = vals["delays.values"]
    if not delays:
        raise ValidationError("delays.values must not be empty")
    if not vals["fft.window_fs"] > 0:
        raise ValidationError("fft.window_fs must be positive")
    if vals["beer.fit_hi"] <= vals["beer.fit_lo"]:
        raise ValidationError("beer.fit_hi must exceed beer.fit_lo")

    pump.check_resolvable(model)
    probe.check_resolvable(model)
    integrator.check_stability(model)

    return ScenarioConfig(
        model=model,
        pump=pump,
        probe=probe,
        integrator=integrator,
        scenario=scenario,
        sweep_values=vals["sweep.values"],
        delays=tuple(delays),
        window_fs=vals["fft.window_fs"],
        apodization_tau=vals["fft.apodization_tau"],
        beer_omega=vals["beer.omega"],
        beer_fit=(vals["beer.fit_lo"], vals["beer.fit_hi"]),
        out_dir=vals["output.dir"],
        out_format=vals["output.format"],
        threads=vals["threads"],
    )


def loads_config(text: str, overrides=None) -> ScenarioConfig:
    return build_config(apply_overrides(parse_document(text), overrides))


def load_config(path, overrides=None) -> ScenarioConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read config {path}: {exc}") from None
    return loads_config(text, overrides)


def config_items(cfg: ScenarioConfig) -> list:
    """(key, formatted value) pairs covering every schema key."""
    model, pump, probe, integ = cfg.model, cfg.pump, cfg.probe, cfg.integrator
    pulse_items = []
    for which, spec in (("pump", pump), ("probe", probe)):
        pulse_items += [
            (f"{which}.amplitude", spec.amplitude),
            (f"{which}.omega", spec.omega_drive),
            (f"{which}.sigma_t", spec.sigma_t),
            (f"{which}.sigma_r", spec.sigma_r),
            (f"{which}.k_center", spec.k_center),
            (f"{which}.center", spec.center),
            (f"{which}.arrival", spec.arrival),
        ]
    items = [
        ("scenario", cfg.scenario),
        ("model.omega0", model.omega0),
        ("model.omega_c", model.omega_c),
        ("model.rabi", model.rabi),
        ("model.kappa", model.kappa),
        ("model.gamma_phi", model.gamma_phi),
        ("model.length", model.length),
        ("model.num_sites", model.num_sites),
        ("model.num_molecules", model.num_molecules),
        ("model.disorder", model.disorder),
        *pulse_items,
        ("integrator.dt", integ.dt),
        ("integrator.t_end", integ.t_end),
        ("integrator.snapshot_stride", integ.snapshot_stride),
        ("integrator.laplacian", integ.laplacian),
        ("integrator.omega_ref",
         "auto" if integ.omega_ref is None else integ.omega_ref),
        ("sweep.values", cfg.sweep_values),
        ("delays.values", cfg.delays),
        ("fft.window_fs", cfg.window_fs),
        ("fft.apodization_tau", cfg.apodization_tau),
        ("beer.omega", "auto" if cfg.beer_omega is None else cfg.beer_omega),
        ("beer.fit_lo", cfg.beer_fit[0]),
        ("beer.fit_hi", cfg.beer_fit[1]),
        ("output.dir", cfg.out_dir),
        ("output.format", cfg.out_format),
        ("threads", cfg.threads),
    ]
    return items


def config_lines(cfg: ScenarioConfig) -> list:
    return [f"{key} = {_fmt(value)}" for key, value in config_items(cfg)]


def save_config(cfg: ScenarioConfig, path) -> None:
    Path(path).write_text(
        "# poltrans configuration\n" + "\n".join(config_lines(cfg)) + "\n",
        encoding="utf-8",
    )
