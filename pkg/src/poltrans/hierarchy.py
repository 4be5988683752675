"""Perturbative expansion of the mean-field equations in pump and probe.

Expanding every variable in powers of the pump amplitude eta_p and probe
amplitude eta_p' leaves eight nontrivial order-(a, b) fields for a <= 2,
b <= 1 when starting from the vacuum: the linear pump and probe sectors
(alpha10, sigma10) and (alpha01, sigma01); the pump-induced population
z20 and pump-probe grating z11; and the mixed third-order pair (alpha21,
sigma21) that heterodynes against the probe in the differential
transmission.  The drives enter with unit amplitude (the eta factors are
applied externally), so alpha10 scales linearly with the pump drive and
z20 quadratically.

Same grid, Laplacian, hbar convention and rotating-frame treatment as the
nonlinear solver, so probe-delay scans share machinery and oracles.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ValidationError
from .model import HBAR, ModelParams
from .meanfield import IntegratorConfig, _rk4_run, make_laplacian
from .pulses import PulseSpec, compile_drive
from .records import SpatioTemporalRecord

# packing order groups the three photon rows and three coherence rows so
# the integrator works on contiguous slices
FIELD_ORDER = (
    "alpha10",
    "alpha01",
    "alpha21",
    "sigma10",
    "sigma01",
    "sigma21",
    "z20",
    "z11",
)
_ROW = {name: i for i, name in enumerate(FIELD_ORDER)}
_REAL_FIELDS = ("z20", "z11")


@dataclass
class PerturbativeState:
    """The eight order-(a, b) fields; z20 and z11 are real-valued."""

    alpha10: np.ndarray
    sigma10: np.ndarray
    alpha01: np.ndarray
    sigma01: np.ndarray
    z20: np.ndarray
    z11: np.ndarray
    alpha21: np.ndarray
    sigma21: np.ndarray
    time: float = 0.0

    @classmethod
    def zero(cls, p: ModelParams) -> "PerturbativeState":
        n = p.num_sites
        return cls(
            **{name: np.zeros(n, dtype=complex) for name in FIELD_ORDER},
            time=0.0,
        )

    def validate(self, p: ModelParams) -> None:
        for name in FIELD_ORDER:
            if len(getattr(self, name)) != p.num_sites:
                raise ValidationError(f"{name} must have length num_sites")
        for name in _REAL_FIELDS:
            arr = np.asarray(getattr(self, name))
            if np.iscomplexobj(arr) and np.max(np.abs(arr.imag), initial=0.0) > 1e-12:
                raise ValidationError(f"{name} must be real-valued")


def hierarchy_rhs(
    state: PerturbativeState,
    pump_drive: np.ndarray,
    probe_drive: np.ndarray,
    p: ModelParams,
) -> PerturbativeState:
    """Lab-frame derivative of the eight-field system (z00 = -1).

    The drives are per-site complex arrays with unit amplitude
    normalization, not yet divided by hbar.
    """
    a10, s10 = np.asarray(state.alpha10), np.asarray(state.sigma10)
    a01, s01 = np.asarray(state.alpha01), np.asarray(state.sigma01)
    z20, z11 = np.asarray(state.z20), np.asarray(state.z11)
    a21, s21 = np.asarray(state.alpha21), np.asarray(state.sigma21)

    w0 = p.omega0 + p.disorder_array()
    om = p.rabi

    def lap(a):
        return np.roll(a, 1) + np.roll(a, -1) - 2.0 * a

    def photon_part(a, s, drive):
        return (
            -(1j * p.omega_c + 0.5 * p.kappa) * a
            + 1j * p.photon_hop * lap(a)
            - 1j * om * s
            + drive
        ) / HBAR

    def coherence_part(s, source):
        return (-(1j * w0 + 0.5 * p.gamma_phi) * s + 1j * om * source) / HBAR

    d_a10 = photon_part(a10, s10, pump_drive)
    d_s10 = coherence_part(s10, -a10)  # z00 = -1
    d_a01 = photon_part(a01, s01, probe_drive)
    d_s01 = coherence_part(s01, -a01)
    d_z20 = -4.0 * om * np.imag(s10 * np.conj(a10)) / HBAR
    d_z11 = (
        -4.0 * om * np.imag(s10 * np.conj(a01) + s01 * np.conj(a10)) / HBAR
    )
    d_a21 = photon_part(a21, s21, 0.0)
    d_s21 = coherence_part(s21, -a21 + z11 * a10 + z20 * a01)
    return PerturbativeState(
        alpha10=d_a10,
        sigma10=d_s10,
        alpha01=d_a01,
        sigma01=d_s01,
        z20=d_z20,
        z11=d_z11,
        alpha21=d_a21,
        sigma21=d_s21,
        time=state.time,
    )


def evolve_hierarchy(
    pump: PulseSpec | None,
    probe: PulseSpec | None,
    cfg: IntegratorConfig,
    p: ModelParams,
    *,
    record_fields=FIELD_ORDER,
    drive_scales=(1.0, 1.0),
) -> SpatioTemporalRecord:
    """RK4 trajectory of the eight-field system from the zero state.

    Pump/probe specs provide pulse shape, carrier and geometry; their
    amplitudes are ignored (unit normalization; `drive_scales` can apply
    extra complex factors for linearity checks).  Passing None disables
    that drive.  `record_fields` selects which fields are kept in the
    record (alpha01 and alpha21 at minimum for spectroscopy).
    """
    cfg.check_stability(p)
    record_fields = tuple(record_fields)
    for name in record_fields:
        if name not in _ROW:
            raise ValidationError(f"unknown hierarchy field {name!r}")
    wref = cfg.resolve_omega_ref(p)
    grid = p.grid

    def unit_drive(spec, scale):
        if spec is None:
            zero = np.zeros(p.num_sites, dtype=complex)
            return lambda t: zero
        spec.check_resolvable(p)
        unit = replace(spec, amplitude=1.0)
        return compile_drive([unit], grid, omega_ref=wref, scales=[scale])

    pump_drive = unit_drive(pump, drive_scales[0])
    probe_drive = unit_drive(probe, drive_scales[1])
    lap = make_laplacian(p, cfg.laplacian)

    w0 = p.omega0 + p.disorder_array()
    ca = -(1j * (p.omega_c - wref) + 0.5 * p.kappa) / HBAR
    cs = -(1j * (w0 - wref) + 0.5 * p.gamma_phi) / HBAR
    ic_h = 1j * p.photon_hop / HBAR
    iom_h = 1j * p.rabi / HBAR
    fourom_h = 4.0 * p.rabi / HBAR

    def rhs(y, t):
        alphas = y[0:3]
        sigmas = y[3:6]
        z20 = y[6].real
        z11 = y[7].real
        a10, a01, a21 = alphas
        s10, s01 = sigmas[0], sigmas[1]

        d = np.empty_like(y)
        d[0:3] = ca * alphas + ic_h * lap(alphas) - iom_h * sigmas
        d[0] += pump_drive(t)
        d[1] += probe_drive(t)
        sources = np.stack([-a10, -a01, -a21 + z11 * a10 + z20 * a01])
        d[3:6] = cs * sigmas + iom_h * sources
        d[6] = (-fourom_h) * np.imag(s10 * np.conj(a10))
        d[7] = (-fourom_h) * np.imag(s10 * np.conj(a01) + s01 * np.conj(a10))
        return d

    y0 = np.zeros((len(FIELD_ORDER), p.num_sites), dtype=complex)
    n_steps = int(round(cfg.t_end / cfg.dt))
    times, snaps = [], []
    rows = [_ROW[name] for name in record_fields]

    def on_snapshot(step, y):
        t = step * cfg.dt
        back = np.exp(-1j * wref * t / HBAR)
        times.append(t)
        out = []
        for name, row in zip(record_fields, rows):
            if name in _REAL_FIELDS:
                out.append(y[row].real.copy())
            else:
                out.append(y[row] * back)
        snaps.append(out)

    _rk4_run(y0, rhs, cfg.dt, n_steps, cfg.snapshot_stride, on_snapshot)

    fields = {
        name: np.stack([snap[i] for snap in snaps])
        for i, name in enumerate(record_fields)
    }
    meta = {
        "model": p,
        "pulses": [s for s in (pump, probe) if s is not None],
        "pump": pump,
        "probe": probe,
        "integrator": cfg,
        "omega_ref": wref,
        "kind": "hierarchy",
    }
    return SpatioTemporalRecord(times=np.asarray(times), fields=fields, meta=meta)
