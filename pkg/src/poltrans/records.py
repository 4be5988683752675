"""Containers for time-resolved simulation output and derived spectra."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import MissingFieldError, ValidationError


@dataclass
class SpatioTemporalRecord:
    """Uniformly sampled snapshots of named per-site fields.

    times   snapshot times (fs), strictly increasing, uniform spacing
    fields  name -> array of shape (num_snapshots, num_sites)
    meta    provenance: model parameters, pulse specs, integrator settings
    """

    times: np.ndarray
    fields: dict[str, np.ndarray]
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if len(t) > 1:
            dt = np.diff(t)
            if np.any(dt <= 0):
                raise ValidationError("record times must be strictly increasing")
            if not np.allclose(dt, dt[0], rtol=1e-9, atol=1e-12):
                raise ValidationError("record times must be uniformly spaced")
        for name, arr in self.fields.items():
            if arr.shape[0] != len(t):
                raise ValidationError(
                    f"field {name!r} has {arr.shape[0]} rows for {len(t)} times"
                )
        self.times = t

    @property
    def num_sites(self) -> int:
        return next(iter(self.fields.values())).shape[1]

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])

    def get(self, name: str) -> np.ndarray:
        try:
            return self.fields[name]
        except KeyError:
            raise MissingFieldError(
                f"record has no field {name!r}; available: {sorted(self.fields)}"
            ) from None

    def positions(self) -> np.ndarray:
        model = self.meta.get("model")
        if model is None:
            raise MissingFieldError("record meta lacks model parameters")
        return model.grid.positions


@dataclass
class SpectrumMap:
    """Per-site spectra on a uniform frequency axis.

    omegas  frequencies (eV), uniform spacing, ascending
    values  array (num_freqs, num_sites), complex or real
    window  descriptor of the Fourier window that produced the map
    """

    omegas: np.ndarray
    values: np.ndarray
    window: dict = field(default_factory=dict)

    def __post_init__(self):
        w = np.asarray(self.omegas, dtype=float)
        if len(w) > 1 and not np.allclose(np.diff(w), w[1] - w[0], rtol=1e-9):
            raise ValidationError("spectrum omegas must be uniformly spaced")
        if not np.all(np.isfinite(self.values)):
            raise ValidationError("spectrum values must be finite")
        self.omegas = w

    @property
    def domega(self) -> float:
        return float(self.omegas[1] - self.omegas[0])
