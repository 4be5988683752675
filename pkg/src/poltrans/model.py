"""Physical parameters, lattice grids, dispersions and linear response.

Unit system: energies in eV, times in fs, lengths in um, with
hbar = 0.6582119569 eV fs.  Every equation of motion divides energy
coefficients by hbar exactly once, so rates like kappa/hbar are in 1/fs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import PoleError, ValidationError

HBAR = 0.6582119569        # eV fs
C_LIGHT = 0.299792458      # um / fs


@dataclass(frozen=True)
class LatticeGrid:
    """Site positions r_n = n*dr - L/2 and momenta k_Q = 2*pi*Q/L."""

    positions: np.ndarray
    momenta: np.ndarray

    @property
    def num_sites(self) -> int:
        return len(self.positions)

    @property
    def spacing(self) -> float:
        return float(self.positions[1] - self.positions[0])


@dataclass(frozen=True)
class ModelParams:
    """All physical constants of the coupled cavity-molecule chain.

    omega0    molecular transition energy (eV)
    omega_c   cavity cutoff energy (eV)
    rabi      collective coupling Omega = g*sqrt(N) (eV); 0 decouples light
              and matter (used by photon-only checks)
    kappa     cavity decay (eV)
    gamma_phi molecular pure dephasing (eV)
    length    chain length L (um)
    num_sites number of lattice sites / cavity modes, odd so momenta
              center on zero
    num_molecules  total molecule number N; only N_E = N/num_sites enters
    disorder  optional per-site offsets added to omega0 (eV)
    """

    omega0: float = 1.0
    omega_c: float = 0.9
    rabi: float = 0.05
    kappa: float = 0.01
    gamma_phi: float = 0.005
    length: float = 200.0
    num_sites: int = 601
    num_molecules: int = 1_000_000
    disorder: tuple[float, ...] | None = None

    def __post_init__(self):
        if not (self.omega0 > 0 and self.omega_c > 0):
            raise ValidationError("omega0 and omega_c must be positive")
        # rabi = 0 is allowed: the spec examples exercise the decoupled limit
        if self.rabi < 0:
            raise ValidationError("rabi must be nonnegative")
        if self.kappa < 0 or self.gamma_phi < 0:
            raise ValidationError("kappa and gamma_phi must be nonnegative")
        if self.num_sites < 3 or self.num_sites % 2 == 0:
            raise ValidationError(
                "num_sites must be odd and >= 3 so momenta center on zero"
            )
        if self.num_molecules < self.num_sites:
            raise ValidationError("num_molecules must be >= num_sites")
        if not self.length > 0:
            raise ValidationError("length must be positive (delta_r > 0)")
        if self.disorder is not None and len(self.disorder) != self.num_sites:
            raise ValidationError("disorder length must equal num_sites")

    @property
    def delta_r(self) -> float:
        """Grid spacing L / N_k (um)."""
        return self.length / self.num_sites

    @property
    def photon_hop(self) -> float:
        """Laplacian coefficient C = (hbar c)^2 / (2 omega_c dr^2), in eV."""
        return (HBAR * C_LIGHT) ** 2 / (2.0 * self.omega_c * self.delta_r**2)

    @property
    def molecules_per_site(self) -> float:
        """N_E = N / N_k."""
        return self.num_molecules / self.num_sites

    @cached_property
    def grid(self) -> LatticeGrid:
        n = self.num_sites
        idx = np.arange(n)
        positions = idx * self.delta_r - self.length / 2.0
        q = idx - (n - 1) // 2
        momenta = 2.0 * np.pi * q / self.length
        return LatticeGrid(positions=positions, momenta=momenta)

    def disorder_array(self) -> np.ndarray:
        if self.disorder is None:
            return np.zeros(self.num_sites)
        return np.asarray(self.disorder, dtype=float)


def omega_cavity(k, p: ModelParams):
    """Quadratic cavity dispersion omega_c + (hbar k c)^2 / (2 omega_c)."""
    k = np.asarray(k, dtype=float)
    out = p.omega_c + (HBAR * k * C_LIGHT) ** 2 / (2.0 * p.omega_c)
    return out if out.ndim else float(out)


def polariton_frequencies(k, p: ModelParams):
    """Upper and lower polariton branches (omega_UP, omega_LP) at momentum k."""
    wk = np.asarray(omega_cavity(k, p))
    delta = wk - p.omega0
    root = np.sqrt(delta * delta + 4.0 * p.rabi**2)
    up = 0.5 * (p.omega0 + wk + root)
    lp = 0.5 * (p.omega0 + wk - root)
    if up.ndim:
        return up, lp
    return float(up), float(lp)


def exciton_fraction_lp(k, p: ModelParams):
    """Excitonic (matter) weight of the lower polariton, in [0, 1]."""
    wk = np.asarray(omega_cavity(k, p))
    delta = wk - p.omega0
    root = np.sqrt(delta * delta + 4.0 * p.rabi**2)
    out = 0.5 * (1.0 + delta / root)
    return out if out.ndim else float(out)


def exciton_fraction_up(k, p: ModelParams):
    """Excitonic weight of the upper polariton (complement of the LP one)."""
    wk = np.asarray(omega_cavity(k, p))
    delta = wk - p.omega0
    root = np.sqrt(delta * delta + 4.0 * p.rabi**2)
    out = 0.5 * (1.0 - delta / root)
    return out if out.ndim else float(out)


def group_velocity_lp(k, p: ModelParams):
    """Analytic LP group velocity (1 - X_k^2) * hbar k c^2 / omega_c, um/fs."""
    k = np.asarray(k, dtype=float)
    x2 = np.asarray(exciton_fraction_lp(k, p))
    out = (1.0 - x2) * HBAR * k * C_LIGHT**2 / p.omega_c
    return out if out.ndim else float(out)


def susceptibility(omega, z0: float, p: ModelParams):
    """Complex Lorentzian chi(omega) = z0 / ((omega - omega0) + i gamma_phi/2).

    Raises PoleError at the undamped pole omega == omega0, gamma_phi == 0.
    """
    omega = np.asarray(omega, dtype=float)
    if p.gamma_phi == 0.0 and np.any(omega == p.omega0):
        raise PoleError(
            "susceptibility pole: omega == omega0 with gamma_phi == 0"
        )
    out = z0 / ((omega - p.omega0) + 0.5j * p.gamma_phi)
    return out if out.ndim else complex(out)


def lambda_squared(omega, z0: float, p: ModelParams):
    """Inverse-Green's-function combination, per site^2.

    lambda^2 = -[(omega - omega_c) + i kappa/2 + Omega^2 chi(omega)] / C.
    """
    chi = susceptibility(omega, z0, p)
    omega = np.asarray(omega, dtype=float)
    out = -((omega - p.omega_c) + 0.5j * p.kappa + p.rabi**2 * chi) / p.photon_hop
    return out if out.ndim else complex(out)


def lambda_of_omega(omega, z0: float, p: ModelParams):
    """Decaying-branch propagation constant per site: root with Re <= 0.

    Both propagation directions then decay under the |n - n0| displacement
    convention.  Divide by delta_r for a per-um constant; the field decays
    with Re(lambda) and the population with 2 Re(lambda).
    """
    lam = np.sqrt(lambda_squared(omega, z0, p))
    lam = np.where(np.real(lam) > 0, -lam, lam)
    return lam if lam.ndim else complex(lam)
