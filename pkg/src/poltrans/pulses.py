"""Gaussian pump/probe drive fields for the photonic equation of motion.

A pulse contributes eta * f(t) * exp(-i omega t / hbar) * D_n with temporal
envelope f(t) = exp(-(t - t0)^2 / 2 sigma_t^2) and spatial profile
D_n = exp(-(r_n - r0)^2 / 2 sigma_r^2) * exp(i k r_n).  The carrier sign
follows the e^{-i omega t} convention so a positive-frequency drive
resonates with the freely evolving photon amplitude.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .model import HBAR, LatticeGrid, ModelParams

# envelope support; beyond this many temporal widths the pulse is zero
TRUNCATE_SIGMAS = 8.0


@dataclass(frozen=True)
class PulseSpec:
    """Declarative description of one Gaussian drive pulse.

    amplitude    dimensionless drive strength eta (>= 0)
    omega_drive  carrier energy (eV)
    sigma_t      temporal Gaussian width (fs)
    sigma_r      spatial Gaussian width (um)
    k_center     central wavevector (1/um)
    center       spot center (um)
    arrival      temporal center (fs)
    """

    amplitude: float = 3e-4
    omega_drive: float = 0.9215200235419587
    sigma_t: float = 25.0
    sigma_r: float = 5.0
    k_center: float = np.pi / 2
    center: float = -50.0
    arrival: float = 200.0

    def __post_init__(self):
        if not (self.sigma_t > 0 and self.sigma_r > 0):
            raise ValidationError("sigma_t and sigma_r must be positive")
        if self.amplitude < 0:
            raise ValidationError("amplitude must be nonnegative")

    def check_resolvable(self, p: ModelParams) -> None:
        if abs(self.k_center) > np.pi / p.delta_r:
            raise ValidationError(
                "pulse k_center exceeds the grid Nyquist momentum pi/delta_r"
            )

    def envelope(self, t: float) -> float:
        """Temporal Gaussian, truncated beyond TRUNCATE_SIGMAS widths."""
        dt = t - self.arrival
        if abs(dt) > TRUNCATE_SIGMAS * self.sigma_t:
            return 0.0
        return float(np.exp(-(dt * dt) / (2.0 * self.sigma_t**2)))

    def spatial_profile(self, grid: LatticeGrid) -> np.ndarray:
        r = grid.positions
        return np.exp(-((r - self.center) ** 2) / (2.0 * self.sigma_r**2)) * np.exp(
            1j * self.k_center * r
        )


def drive_field(t: float, spec: PulseSpec, grid: LatticeGrid) -> np.ndarray:
    """Complex drive array over sites at time t (fs)."""
    f = spec.envelope(t)
    if f == 0.0 or spec.amplitude == 0.0:
        return np.zeros(grid.num_sites, dtype=complex)
    phase = np.exp(-1j * spec.omega_drive * t / HBAR)
    return spec.amplitude * f * phase * spec.spatial_profile(grid)


def two_pulse_drive(
    t: float, pump: PulseSpec, probe: PulseSpec, grid: LatticeGrid
) -> np.ndarray:
    """Sum of pump and probe drive fields at time t."""
    return drive_field(t, pump, grid) + drive_field(t, probe, grid)


def compile_drive(specs, grid: LatticeGrid, *, omega_ref: float = 0.0, scales=None):
    """Build a fast t -> complex-array callable for the integrators.

    The returned drive is expressed in the frame rotating at omega_ref and
    already carries the 1/hbar factor of the equations of motion.  `scales`
    optionally multiplies each pulse by an extra complex factor (used by
    finite-difference oracles that need sign-flipped pump amplitudes).
    """
    specs = list(specs)
    if scales is None:
        scales = [1.0] * len(specs)
    profiles = [s.spatial_profile(grid) for s in specs]
    zero = np.zeros(grid.num_sites, dtype=complex)

    def drive(t: float) -> np.ndarray:
        total = None
        for spec, prof, scale in zip(specs, profiles, scales):
            f = spec.envelope(t)
            if f == 0.0 or spec.amplitude == 0.0 or scale == 0.0:
                continue
            phase = np.exp(-1j * (spec.omega_drive - omega_ref) * t / HBAR)
            term = (scale * spec.amplitude * f * phase / HBAR) * prof
            total = term if total is None else total + term
        return zero if total is None else total

    return drive
