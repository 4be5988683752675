"""Measured quantities: populations, bright/dark split, spectra, transport aids.

Fourier convention: f(omega) = dt * sum_j exp(+i omega t_j / hbar) f(t_j),
with omega in eV, so a field oscillating as exp(-i w0 t / hbar) peaks at
+w0.  The per-molecule populations are n_ph = |<a_n>|^2 and
n_m = (1 + <z_n>)/2; multiply by molecules_per_site for totals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptyWeightError,
    FitRangeError,
    ValidationError,
    WindowOutOfRangeError,
)
from .model import HBAR, ModelParams, lambda_of_omega
from .records import SpatioTemporalRecord, SpectrumMap

WEIGHT_FLOOR = 1e-300


def populations(record: SpatioTemporalRecord):
    """Photon and molecular populations per site, (n_ph, n_m)."""
    a = record.get("photon")
    z = record.get("inversion")
    return np.abs(a) ** 2, (1.0 + z) / 2.0


def bright_dark(record: SpatioTemporalRecord):
    """Bright/dark decomposition (p_B, p_D, Im Pi) per site and snapshot.

    p_B = |<s_n>|^2, p_D = (1 + <z_n>)/2 - p_B, and
    Im Pi = Im[<a_n> <s_n>*] is the light-matter correlation sourcing the
    population transfer.
    """
    a = record.get("photon")
    s = record.get("coherence")
    z = record.get("inversion")
    p_b = np.abs(s) ** 2
    p_d = (1.0 + z) / 2.0 - p_b
    im_pi = np.imag(a * np.conj(s))
    return p_b, p_d, im_pi


def bright_dark_rates(record: SpatioTemporalRecord, p: ModelParams):
    """Right-hand sides of the bright/dark rate equations along a record.

    dp_B/dt = [-gamma_phi p_B + 2 Omega (1 - 2 p_m) Im Pi] / hbar
    dp_D/dt = [+gamma_phi p_B + 2 Omega (2 p_m) Im Pi] / hbar

    These follow from the mean-field equations with Im Pi = Im[<a><s>*];
    the transfer term feeds both populations through the light-matter
    correlation, and dephasing moves bright weight to the dark reservoir.
    """
    p_b, _, im_pi = bright_dark(record)
    _, p_m = populations(record)
    d_pb = (-p.gamma_phi * p_b + 2.0 * p.rabi * (1.0 - 2.0 * p_m) * im_pi) / HBAR
    d_pd = (p.gamma_phi * p_b + 2.0 * p.rabi * (2.0 * p_m) * im_pi) / HBAR
    return d_pb, d_pd


def finite_difference_time(values: np.ndarray, dt: float) -> np.ndarray:
    """Fourth-order central time derivative on the interior snapshots.

    Returns an array over snapshots 2..n-3 (axis 0 shrinks by 4).
    """
    if values.shape[0] < 5:
        raise ValidationError("need at least 5 snapshots for the 4th-order stencil")
    v = values
    return (-v[4:] + 8.0 * v[3:-1] - 8.0 * v[1:-3] + v[:-4]) / (12.0 * dt)


def rms_displacement(weights: np.ndarray, positions: np.ndarray, origin: float):
    """Weighted rms displacement sqrt(sum w (r - origin)^2 / sum w).

    `weights` may be a single profile or a (snapshots x sites) stack;
    weights must be nonnegative with nonzero total per profile.
    """
    w = np.asarray(weights, dtype=float)
    if np.any(w < 0):
        raise ValidationError("rms weights must be nonnegative")
    total = w.sum(axis=-1)
    if np.any(total < WEIGHT_FLOOR):
        raise EmptyWeightError("a weight profile has zero total weight")
    second = (w * (positions - origin) ** 2).sum(axis=-1)
    out = np.sqrt(second / total)
    return out if out.ndim else float(out)


def peak_position(weights: np.ndarray, positions: np.ndarray):
    """Position of the maximum |weight|, parabolically refined.

    Ties break to the leftmost maximum; edge maxima are not refined.
    Accepts a single profile or a stack of profiles.
    """
    w = np.abs(np.asarray(weights, dtype=float))
    single = w.ndim == 1
    if single:
        w = w[None, :]
    if np.any(w.sum(axis=-1) < WEIGHT_FLOOR):
        raise EmptyWeightError("a weight profile has zero total weight")
    dr = positions[1] - positions[0]
    out = np.empty(w.shape[0])
    for row, prof in enumerate(w):
        i = int(np.argmax(prof))
        pos = positions[i]
        if 0 < i < len(prof) - 1:
            denom = prof[i - 1] - 2.0 * prof[i] + prof[i + 1]
            if denom != 0.0:
                delta = 0.5 * (prof[i - 1] - prof[i + 1]) / denom
                pos = positions[i] + float(np.clip(delta, -0.5, 0.5)) * dr
        out[row] = pos
    return float(out[0]) if single else out


@dataclass(frozen=True)
class FftWindow:
    """Time segment and optional exponential apodization for spectra.

    With t_start/t_end None, the window runs from 4 temporal widths after
    the probe arrival (when the record knows its probe pulse) to the end
    of the record.  apodization_tau multiplies the signal by
    exp(-(t - t_start)/tau) to suppress truncation ringing.
    """

    t_start: float | None = None
    t_end: float | None = None
    apodization_tau: float | None = None

    def resolve(self, record: SpatioTemporalRecord):
        times = record.times
        t0 = self.t_start
        if t0 is None:
            probe = record.meta.get("probe")
            if probe is None:
                pulses = record.meta.get("pulses") or []
                probe = max(pulses, key=lambda s: s.arrival) if pulses else None
            t0 = probe.arrival + 4.0 * probe.sigma_t if probe else float(times[0])
        t1 = float(times[-1]) if self.t_end is None else self.t_end
        eps = 1e-9 * max(1.0, abs(times[-1]))
        if t0 < times[0] - eps or t1 > times[-1] + eps or t1 <= t0:
            raise WindowOutOfRangeError(
                f"window [{t0}, {t1}] outside record span "
                f"[{times[0]}, {times[-1]}]"
            )
        mask = (times >= t0 - eps) & (times <= t1 + eps)
        if mask.sum() < 2:
            raise WindowOutOfRangeError("window contains fewer than 2 snapshots")
        return mask, t0, t1

    def describe(self, t0: float, t1: float) -> dict:
        return {
            "t_start": t0,
            "t_end": t1,
            "apodization_tau": self.apodization_tau,
        }


def time_fft(
    record: SpatioTemporalRecord, field_name: str, window: FftWindow | None = None
) -> SpectrumMap:
    """Per-site discrete Fourier transform with the e^{+i w t} convention."""
    window = window or FftWindow()
    mask, t0, t1 = window.resolve(record)
    values = record.get(field_name)[mask].astype(complex)
    times = record.times[mask]
    dt = record.dt
    if window.apodization_tau is not None:
        values = values * np.exp(-(times - t0) / window.apodization_tau)[:, None]
    n = values.shape[0]
    # e^{+i w t} convention: inverse FFT times n, with the window's absolute
    # time offset restored as a phase
    spectrum = np.fft.ifft(values, axis=0) * n * dt
    omegas = 2.0 * np.pi * HBAR * np.fft.fftfreq(n, d=dt)
    phase = np.exp(1j * omegas * t0 / HBAR)
    spectrum = spectrum * phase[:, None]
    order = np.argsort(omegas, kind="stable")
    return SpectrumMap(
        omegas=omegas[order],
        values=spectrum[order],
        window=window.describe(t0, t1),
    )


def differential_transmission(
    hier_record: SpatioTemporalRecord, window: FftWindow | None = None
) -> SpectrumMap:
    """Position-resolved differential transmission map.

    Heterodynes the third-order field against the linear probe field:
    (kappa^2/2) Re[alpha01_n(w) conj(alpha21_n(w))], both transformed over
    the same window.  kappa^2 carries eV^2: the map is an overall-scaled
    signal, and external amplitudes contribute eta_p^2 eta_p'^2.
    """
    model = hier_record.meta.get("model")
    if model is None:
        raise ValidationError("hierarchy record lacks model parameters in meta")
    window = window or FftWindow()
    probe_spec = time_fft(hier_record, "alpha01", window)
    mixed_spec = time_fft(hier_record, "alpha21", window)
    values = (
        0.5
        * model.kappa**2
        * np.real(probe_spec.values * np.conj(mixed_spec.values))
    )
    return SpectrumMap(
        omegas=probe_spec.omegas, values=values, window=probe_spec.window
    )


def integrated_abs_profile(spectrum: SpectrumMap) -> np.ndarray:
    """Frequency-integrated |values| per site (transport weight profile)."""
    return np.abs(spectrum.values).sum(axis=0) * spectrum.domega


def momentum_filter(values: np.ndarray, direction: float) -> np.ndarray:
    """Keep only spatial Fourier components propagating along `direction`.

    Models direction-resolved detection in a counter-propagating geometry:
    the probe-direction transmitted field keeps sign(k) == sign(direction)
    components (the k = 0 line is dropped).  Operates on the last axis.
    """
    if direction == 0:
        raise ValidationError("direction must be nonzero")
    n = values.shape[-1]
    k = np.fft.fftfreq(n)
    keep = (k * np.sign(direction)) > 0
    ft = np.fft.fft(values, axis=-1)
    ft[..., ~keep] = 0.0
    return np.fft.ifft(ft, axis=-1)


def beer_lambert_check(
    record: SpatioTemporalRecord,
    omega: float,
    fit_range: tuple[float, float],
    *,
    z0: float = -1.0,
):
    """Compare the simulated spatial decay against the linear-response one.

    Fits log of the time-maximum photon-population envelope over sites
    with positions in [fit_range[0], fit_range[1]] (um), ahead of the
    pump spot.  Returns (sim_slope, predicted_slope) in 1/um where the
    prediction is 2 Re lambda(omega) / delta_r.
    """
    model = record.meta.get("model")
    if model is None:
        raise ValidationError("record lacks model parameters in meta")
    n_ph, _ = populations(record)
    envelope = n_ph.max(axis=0)
    positions = model.grid.positions
    lo, hi = fit_range
    mask = (positions >= lo) & (positions <= hi)
    if mask.sum() < 8:
        raise FitRangeError("fit range must contain at least 8 sites")
    env = envelope[mask]
    if np.any(env <= 0):
        raise FitRangeError("fit range contains non-positive populations")
    sim_slope = float(np.polyfit(positions[mask], np.log(env), 1)[0])
    lam = lambda_of_omega(omega, z0, model)
    pred_slope = 2.0 * lam.real / model.delta_r
    return sim_slope, pred_slope
