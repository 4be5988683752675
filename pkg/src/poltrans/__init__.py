"""Mean-field simulator of molecular-polariton transport in multimode
cavities, with perturbative pump-probe spectroscopy and transport fits."""

__version__ = "0.1.0"

from .config import ScenarioConfig, load_config, loads_config, save_config
from .hierarchy import PerturbativeState, evolve_hierarchy, hierarchy_rhs
from .meanfield import (
    IntegratorConfig,
    MeanFieldState,
    evolve,
    mean_field_rhs,
    pump_only,
    total_excitation,
)
from .model import (
    HBAR,
    C_LIGHT,
    LatticeGrid,
    ModelParams,
    exciton_fraction_lp,
    exciton_fraction_up,
    group_velocity_lp,
    lambda_of_omega,
    lambda_squared,
    omega_cavity,
    polariton_frequencies,
    susceptibility,
)
from .observables import (
    FftWindow,
    beer_lambert_check,
    bright_dark,
    bright_dark_rates,
    differential_transmission,
    integrated_abs_profile,
    momentum_filter,
    peak_position,
    populations,
    rms_displacement,
    time_fft,
)
from .pulses import PulseSpec, drive_field, two_pulse_drive
from .pumpprobe import DelayPoint, delay_point, delay_scan, pulse_pair
from .records import SpatioTemporalRecord, SpectrumMap
from .transport import (
    SweepResult,
    TransportFit,
    fit_velocities,
    sweep_dephasing,
    sweep_momentum,
)

__all__ = [name for name in dir() if not name.startswith("_")]
