import numpy as np
import pytest

from poltrans.hierarchy import (
    FIELD_ORDER,
    PerturbativeState,
    evolve_hierarchy,
    hierarchy_rhs,
)
from poltrans.meanfield import IntegratorConfig, MeanFieldState, evolve
from poltrans.model import ModelParams, polariton_frequencies
from poltrans.pulses import PulseSpec

P = ModelParams(length=40.0, num_sites=121, num_molecules=10_000, gamma_phi=0.005)
KP = np.pi / 2
WLP = polariton_frequencies(KP, P)[1]
PUMP = PulseSpec(amplitude=1.0, omega_drive=WLP, k_center=KP, center=-10.0,
                 arrival=200.0, sigma_r=4.0)
PROBE = PulseSpec(amplitude=1.0, omega_drive=WLP, k_center=-KP, center=10.0,
                  arrival=200.0, sigma_r=4.0)
CFG = IntegratorConfig(dt=0.1, t_end=600.0, snapshot_stride=100)


def test_rhs_zero_state_zero_drive():
    state = PerturbativeState.zero(P)
    zero = np.zeros(P.num_sites, dtype=complex)
    d = hierarchy_rhs(state, zero, zero, P)
    for name in FIELD_ORDER:
        assert np.all(getattr(d, name) == 0)


def test_pump_probe_sector_symmetry():
    # the (1,0) and (0,1) equations are identical in form: swapping the
    # drive inputs swaps the solutions exactly
    rec_a = evolve_hierarchy(PUMP, PROBE, CFG, P)
    rec_b = evolve_hierarchy(PROBE, PUMP, CFG, P)
    np.testing.assert_array_equal(rec_a.get("alpha10"), rec_b.get("alpha01"))
    np.testing.assert_array_equal(rec_a.get("sigma01"), rec_b.get("sigma10"))


def test_zero_pump_leaves_pump_sector_and_mixed_orders_zero():
    rec = evolve_hierarchy(None, PROBE, CFG, P)
    for name in ("alpha10", "sigma10", "z20", "z11", "alpha21", "sigma21"):
        assert np.all(rec.get(name) == 0), name
    assert np.abs(rec.get("alpha01")).max() > 0


def test_zero_probe_leaves_probe_sector_and_mixed_orders_zero():
    rec = evolve_hierarchy(PUMP, None, CFG, P)
    for name in ("alpha01", "sigma01", "z11", "alpha21", "sigma21"):
        assert np.all(rec.get(name) == 0), name
    assert np.abs(rec.get("alpha10")).max() > 0


def test_z_fields_are_real():
    rec = evolve_hierarchy(PUMP, PROBE, CFG, P)
    assert not np.iscomplexobj(rec.get("z20"))
    assert not np.iscomplexobj(rec.get("z11"))
    # and the rhs of z20 for a complex state is real up to machine precision
    rng = np.random.default_rng(3)
    state = PerturbativeState.zero(P)
    state.alpha10 = rng.normal(size=P.num_sites) + 1j * rng.normal(size=P.num_sites)
    state.sigma10 = rng.normal(size=P.num_sites) + 1j * rng.normal(size=P.num_sites)
    zero = np.zeros(P.num_sites, dtype=complex)
    d = hierarchy_rhs(state, zero, zero, P)
    assert np.max(np.abs(np.imag(d.z20)), initial=0.0) == 0.0


def test_lower_sectors_decoupled_from_mixed_order():
    full = evolve_hierarchy(PUMP, PROBE, CFG, P)
    pump_alone = evolve_hierarchy(PUMP, None, CFG, P)
    probe_alone = evolve_hierarchy(None, PROBE, CFG, P)
    np.testing.assert_array_equal(full.get("alpha10"), pump_alone.get("alpha10"))
    np.testing.assert_array_equal(full.get("z20"), pump_alone.get("z20"))
    np.testing.assert_array_equal(full.get("alpha01"), probe_alone.get("alpha01"))


def test_linearity_in_pump_scale():
    base = evolve_hierarchy(PUMP, PROBE, CFG, P)
    doubled = evolve_hierarchy(PUMP, PROBE, CFG, P, drive_scales=(2.0, 1.0))
    imag = evolve_hierarchy(PUMP, PROBE, CFG, P, drive_scales=(1j, 1.0))
    def close(actual, desired):
        atol = 1e-13 * max(np.abs(desired).max(), 1e-30)
        np.testing.assert_allclose(actual, desired, rtol=1e-12, atol=atol)

    close(doubled.get("alpha10"), 2.0 * base.get("alpha10"))
    close(doubled.get("z20"), 4.0 * base.get("z20"))
    close(imag.get("alpha10"), 1j * base.get("alpha10"))
    close(imag.get("z20"), base.get("z20"))


def test_field_oracle_against_nonlinear_solver():
    # mixed finite differences of the full nonlinear solver reproduce the
    # expansion coefficients
    eta = 1.5e-4
    hier = evolve_hierarchy(PUMP, PROBE, CFG, P)

    def nonlinear(scale_pump, scale_probe):
        pulses = [
            PulseSpec(**{**PUMP.__dict__, "amplitude": eta}),
            PulseSpec(**{**PROBE.__dict__, "amplitude": eta}),
        ]
        rec = evolve(
            MeanFieldState.vacuum(P), pulses, CFG, P,
            drive_scales=[scale_pump, scale_probe],
        )
        return rec.get("photon")[-1], rec.get("inversion")[-1]

    a_pp, _ = nonlinear(1, 1)
    a_mp, _ = nonlinear(-1, 1)
    a_0p, _ = nonlinear(0, 1)
    a_p0, z_p0 = nonlinear(1, 0)

    a01 = hier.get("alpha01")[-1]
    err01 = np.linalg.norm(a_0p / eta - a01) / np.linalg.norm(a01)
    assert err01 < 1e-3

    a10 = hier.get("alpha10")[-1]
    err10 = np.linalg.norm(a_p0 / eta - a10) / np.linalg.norm(a10)
    assert err10 < 1e-3

    a21 = hier.get("alpha21")[-1]
    a21_fd = (a_pp + a_mp - 2 * a_0p) / (2 * eta**3)
    err21 = np.linalg.norm(a21_fd - a21) / np.linalg.norm(a21)
    assert err21 < 1e-3

    z20 = hier.get("z20")[-1]
    z20_fd = (z_p0 + 1.0) / eta**2
    errz = np.linalg.norm(z20_fd - z20) / np.linalg.norm(z20)
    assert errz < 1e-3


def test_z20_positive_at_pump_spot():
    rec = evolve_hierarchy(PUMP, None, CFG, P)
    site = int(np.argmin(np.abs(P.grid.positions - PUMP.center)))
    assert rec.get("z20")[-1, site] > 0


def test_selective_recording():
    rec = evolve_hierarchy(PUMP, PROBE, CFG, P, record_fields=("alpha01", "alpha21"))
    assert set(rec.fields) == {"alpha01", "alpha21"}
    full = evolve_hierarchy(PUMP, PROBE, CFG, P)
    np.testing.assert_array_equal(rec.get("alpha21"), full.get("alpha21"))
