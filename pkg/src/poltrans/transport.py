"""Velocity extraction from |dT| profiles and renormalization sweeps.

Peak and rms positions of the differential-transmission profile are fit
with a straight line across probe delays.  In the counter-propagating
geometry the meeting point of the pump excitation and the probe advances
by v dtau / 2 per unit delay (each front contributes half of the closing
speed), so the raw slopes are doubled to report per-front transport
velocities; the reported peak velocity then lands on the LP group
velocity in the ballistic limit.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateFitError, ValidationError
from .model import ModelParams, exciton_fraction_lp, group_velocity_lp
from .observables import peak_position, rms_displacement
from .pumpprobe import DEFAULT_DELAYS_FS, delay_scan

COUNTER_PROPAGATION_FACTOR = 2.0
MIN_DELAYS = 5
MIN_SPAN_FS = 1000.0


@dataclass
class TransportFit:
    v_peak: float
    v_rms: float
    v_grp: float
    r_squared_peak: float
    r_squared_rms: float
    delays: np.ndarray
    peak_positions: np.ndarray
    rms_displacements: np.ndarray


@dataclass
class SweepResult:
    axis: np.ndarray
    fits: list
    renormalization: np.ndarray
    exciton_fractions: np.ndarray
    errors: list


def _line_fit(x, y):
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = np.sum((y - y.mean()) ** 2)
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - np.sum(resid**2) / ss_tot
    return float(slope), float(r2)


def fit_velocities(
    delay_profiles,
    k_pump: float,
    p: ModelParams,
    *,
    origin: float = 0.0,
    counter_propagating: bool = False,
) -> TransportFit:
    """Straight-line velocities of the |dT| peak and rms displacement.

    delay_profiles: sequence of (delay_fs, profile_over_sites).  Profiles
    enter only through their shape; rescaling them leaves the fit
    unchanged.  `origin` is the rms reference point (the pump spot).
    With counter_propagating=True the raw slopes are multiplied by
    COUNTER_PROPAGATION_FACTOR (see module docstring).
    """
    pairs = sorted(delay_profiles, key=lambda dp: dp[0])
    if len(pairs) < MIN_DELAYS:
        raise ValidationError(f"need at least {MIN_DELAYS} delays")
    delays = np.array([d for d, _ in pairs], dtype=float)
    if delays[-1] - delays[0] < MIN_SPAN_FS:
        raise ValidationError(f"delays must span at least {MIN_SPAN_FS} fs")
    profiles = np.stack([np.asarray(prof, dtype=float) for _, prof in pairs])
    positions = p.grid.positions

    peaks = np.atleast_1d(peak_position(profiles, positions))
    rmss = np.atleast_1d(rms_displacement(np.abs(profiles), positions, origin))

    factor = COUNTER_PROPAGATION_FACTOR if counter_propagating else 1.0
    span = peaks.max() - peaks.min()
    if span == 0.0 and rmss.max() - rmss.min() == 0.0:
        v_peak, r2_peak, v_rms, r2_rms = 0.0, 1.0, 0.0, 1.0
    elif 0.0 < span < 2.0 * p.delta_r:
        raise DegenerateFitError(
            f"peak positions span {span:.3g} um, below two grid spacings"
        )
    else:
        s_peak, r2_peak = _line_fit(delays, peaks)
        s_rms, r2_rms = _line_fit(delays, rmss)
        v_peak = factor * s_peak
        v_rms = factor * s_rms
    return TransportFit(
        v_peak=v_peak,
        v_rms=v_rms,
        v_grp=float(group_velocity_lp(k_pump, p)),
        r_squared_peak=r2_peak,
        r_squared_rms=r2_rms,
        delays=delays,
        peak_positions=peaks,
        rms_displacements=rmss,
    )


def _sweep_point(p, k_pump, delays, workers, scan_kw):
    points = delay_scan(p, k_pump, delays, workers=workers, **scan_kw)
    origin = -p.length / 4.0  # pump spot center
    return fit_velocities(
        [(pt.delay, pt.profile) for pt in points],
        k_pump,
        p,
        origin=origin,
        counter_propagating=True,
    )


def _run_sweep(axis, params_list, k_list, delays, workers, scan_kw):
    fits, errors = [], []
    for p_i, k_i in zip(params_list, k_list):
        try:
            fits.append(_sweep_point(p_i, k_i, delays, workers, scan_kw))
            errors.append(None)
        except Exception as exc:  # annotate, keep sweeping
            fits.append(None)
            errors.append(f"{type(exc).__name__}: {exc}")
    renorm = np.array(
        [f.v_rms / f.v_grp if f is not None else np.nan for f in fits]
    )
    x2 = np.array(
        [exciton_fraction_lp(k, p) for p, k in zip(params_list, k_list)]
    )
    return SweepResult(
        axis=np.asarray(axis, dtype=float),
        fits=fits,
        renormalization=renorm,
        exciton_fractions=x2,
        errors=errors,
    )


def sweep_momentum(
    kp_values,
    p: ModelParams,
    gamma_phi: float,
    *,
    delays=DEFAULT_DELAYS_FS,
    workers: int = 1,
    **scan_kw,
) -> SweepResult:
    """Pump-probe transport fits across pump momenta at fixed dephasing."""
    kp_values = list(kp_values)
    base = replace(p, gamma_phi=gamma_phi)
    for k in kp_values:
        if abs(k) > np.pi / p.delta_r:
            raise ValidationError(f"k_pump {k} not resolvable on the grid")
    return _run_sweep(
        kp_values, [base] * len(kp_values), kp_values, delays, workers, scan_kw
    )


def sweep_dephasing(
    gamma_values,
    k_pump: float,
    p: ModelParams,
    *,
    delays=DEFAULT_DELAYS_FS,
    workers: int = 1,
    **scan_kw,
) -> SweepResult:
    """Pump-probe transport fits across dephasing rates at fixed momentum."""
    gamma_values = list(gamma_values)
    if any(g < 0 for g in gamma_values):
        raise ValidationError("gamma_phi values must be nonnegative")
    params_list = [replace(p, gamma_phi=g) for g in gamma_values]
    return _run_sweep(
        gamma_values,
        params_list,
        [k_pump] * len(gamma_values),
        delays,
        workers,
        scan_kw,
    )
