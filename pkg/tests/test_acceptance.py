"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
measurements.  The sweeps (A8, A9) dominate the runtime at roughly ten
minutes combined; everything else finishes in under a minute.
"""

import numpy as np
import pytest

from poltrans.hierarchy import evolve_hierarchy
from poltrans.meanfield import (
    IntegratorConfig,
    MeanFieldState,
    evolve,
    pump_only,
    total_excitation,
)
from poltrans.model import (
    HBAR,
    C_LIGHT,
    ModelParams,
    exciton_fraction_lp,
    group_velocity_lp,
    polariton_frequencies,
)
from poltrans.observables import (
    FftWindow,
    beer_lambert_check,
    bright_dark,
    bright_dark_rates,
    differential_transmission,
    finite_difference_time,
    integrated_abs_profile,
    momentum_filter,
    peak_position,
    populations,
    time_fft,
)
from poltrans.pumpprobe import pulse_pair
from poltrans.records import SpatioTemporalRecord
from poltrans.transport import sweep_dephasing, sweep_momentum

KP = np.pi / 2
WLP = 0.9215200235419587  # lower polariton at k = pi/2, paper parameters


def report(cid: str, ok: bool, detail: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {cid}: {detail}")


# ---------------------------------------------------------------- fixtures

@pytest.fixture(scope="module")
def gamma0_record():
    p = ModelParams(gamma_phi=0.0)
    pump, _ = pulse_pair(p, KP)
    cfg = IntegratorConfig(dt=0.1, t_end=1300.0, snapshot_stride=10)
    return p, pump_only(p, pump, cfg)


@pytest.fixture(scope="module")
def gamma_half_record():
    p = ModelParams(gamma_phi=0.005)
    pump, _ = pulse_pair(p, KP)
    cfg = IntegratorConfig(dt=0.1, t_end=1300.0, snapshot_stride=5)
    return p, pump_only(p, pump, cfg)


@pytest.fixture(scope="module")
def a6_bundle():
    """Hierarchy map plus momentum-filtered nonlinear oracle at two etas."""
    p = ModelParams(gamma_phi=0.005)
    window = FftWindow(t_start=300.0)
    cfg = IntegratorConfig(dt=0.1, t_end=1200.0, snapshot_stride=10)
    pump_u, probe_u = pulse_pair(p, KP, delay=0.0, eta_pump=1.0, eta_probe=1.0)
    hier = evolve_hierarchy(pump_u, probe_u, cfg, p,
                            record_fields=("alpha01", "alpha21"))

    def filtered_fft(times, arr):
        filt = momentum_filter(arr, direction=-1.0)  # probe travels left
        rec = SpatioTemporalRecord(times=times, fields={"f": filt}, meta={})
        return time_fft(rec, "f", window).values

    a01f = filtered_fft(hier.times, hier.get("alpha01"))
    a21f = filtered_fft(hier.times, hier.get("alpha21"))
    dt_filtered = 0.5 * p.kappa**2 * np.real(a01f * np.conj(a21f))

    def oracle(eta):
        pump, probe = pulse_pair(p, KP, delay=0.0, eta_pump=eta, eta_probe=eta)
        s = {}
        for tag, scales in (("pp", (1, 1)), ("mp", (-1, 1)),
                            ("0p", (0, 1)), ("p0", (1, 0))):
            rec = evolve(MeanFieldState.vacuum(p), [pump, probe], cfg, p,
                         drive_scales=list(scales))
            s[tag] = np.abs(filtered_fft(rec.times, rec.get("photon"))) ** 2
        num = s["pp"] + s["mp"] - 2 * s["0p"] - 2 * s["p0"]
        return 0.5 * p.kappa**2 * num / (4 * eta**4)

    disc = {}
    for eta in (3e-4, 1.5e-4):
        d = np.linalg.norm(oracle(eta) - dt_filtered) / np.linalg.norm(dt_filtered)
        disc[eta] = d
    return {
        "params": p,
        "hier": hier,
        "window": window,
        "discrepancies": disc,
    }


@pytest.fixture(scope="module")
def dephasing_sweep():
    p = ModelParams()
    gammas = [p.kappa * i / 8.0 for i in range(1, 9)]
    return gammas, sweep_dephasing(gammas, KP, p)


@pytest.fixture(scope="module")
def momentum_sweep():
    p = ModelParams(gamma_phi=0.005)
    kps = [np.pi / 4, np.pi / 2, 3 * np.pi / 4, np.pi]
    return kps, sweep_momentum(kps, p, gamma_phi=0.005)


# ---------------------------------------------------------------- criteria

def test_A1_resonance_splitting():
    p = ModelParams()
    k_res = np.sqrt(2 * p.omega_c * (p.omega0 - p.omega_c)) / (HBAR * C_LIGHT)
    up, lp = polariton_frequencies(k_res, p)
    rel = abs((up - lp) - 2 * p.rabi) / (2 * p.rabi)
    ok = rel < 1e-12
    report("A1", ok, f"splitting at resonance = {up - lp:.15f} eV, rel dev {rel:.2e}")
    assert ok


def test_A2_lp_frequency():
    p = ModelParams()
    lp = polariton_frequencies(KP, p)[1]
    ok = abs(lp - 0.922) <= 1e-3
    report("A2", ok, f"omega_LP(pi/2) = {lp:.6f} eV (target 0.922 +- 0.001)")
    assert ok


def test_A3_closed_system_conservation():
    p = ModelParams(kappa=0.0, gamma_phi=0.0)
    pump, _ = pulse_pair(p, KP)
    cfg = IntegratorConfig(dt=0.1, t_end=1400.0, snapshot_stride=100)
    rec = pump_only(p, pump, cfg)
    e = total_excitation(rec)
    post = rec.times >= 400.0  # pulse support ends here; window is 1 ps
    drift = float(np.abs(e[post] - e[post][0]).max() / e[post][0])
    ok = drift < 1e-6
    report("A3", ok, f"post-pulse relative drift over 1 ps = {drift:.2e}")
    assert ok


def test_A4_ballistic_peak_velocity(gamma0_record):
    p, rec = gamma0_record
    n_ph, _ = populations(rec)
    sel = (rec.times >= 400.0) & (rec.times <= 1200.0)
    peaks = peak_position(n_ph[sel], p.grid.positions)
    v = float(np.polyfit(rec.times[sel], peaks, 1)[0])
    v_grp = group_velocity_lp(KP, p)
    ok = abs(v / v_grp - 1.0) < 0.05
    report("A4-velocity", ok,
           f"peak velocity {v:.5f} um/fs vs v_grp {v_grp:.5f} ({v / v_grp:.4f})")
    assert ok


def _gamma0_decay_rate(p, rec):
    n_ph, _ = populations(rec)
    tot = n_ph.sum(axis=1)
    sel = (rec.times >= 500.0) & (rec.times <= 1200.0)
    return float(-np.polyfit(rec.times[sel], np.log(tot[sel]), 1)[0])


@pytest.mark.xfail(
    strict=True,
    reason=(
        "stated rate contradicts the model: a lower-polariton wavepacket "
        "loses photons only through its photonic fraction, so the photon "
        "population decays at (1 - X_k^2) kappa/hbar (~0.71 kappa/hbar at "
        "k = pi/2), nearly 30% below the bare-cavity rate; see the decay "
        "criterion discussion in the project notes"
    ),
)
def test_A4_photon_decay_at_bare_cavity_rate(gamma0_record):
    p, rec = gamma0_record
    rate = _gamma0_decay_rate(p, rec)
    rel = abs(rate * HBAR / p.kappa - 1.0)
    report("A4-decay(literal)", rel < 0.02,
           f"fitted rate*hbar = {rate * HBAR:.6f} eV vs kappa = {p.kappa} "
           f"(rel dev {rel:.3f})")
    assert rel < 0.02


def test_A4_photon_decay_via_photonic_fraction(gamma0_record):
    # the physically consistent version of the decay clause: cavity loss
    # alone depletes the wavepacket, acting through its photonic weight
    p, rec = gamma0_record
    rate = _gamma0_decay_rate(p, rec)
    expected = (1.0 - exciton_fraction_lp(KP, p)) * p.kappa / HBAR
    rel = abs(rate / expected - 1.0)
    ok = rel < 0.02
    report("A4-decay(photonic-fraction)", ok,
           f"fitted rate*hbar = {rate * HBAR:.6f} eV vs "
           f"(1-X^2)kappa = {expected * HBAR:.6f} eV (rel dev {rel:.4f})")
    assert ok


def test_A5_beer_lambert(gamma_half_record):
    p, rec = gamma_half_record
    wlp = polariton_frequencies(KP, p)[1]
    sim, pred = beer_lambert_check(rec, wlp, (-35.0, -5.0))
    ratio = sim / pred
    ok = 0.9 <= ratio <= 1.1
    report("A5", ok,
           f"sim slope {sim:.5f} /um vs 2 Re(lambda)/dr {pred:.5f} /um "
           f"(ratio {ratio:.4f})")
    assert ok


def test_A6_perturbative_oracle(a6_bundle):
    disc = a6_bundle["discrepancies"]
    d_hi, d_lo = disc[3e-4], disc[1.5e-4]
    ratio = d_hi / d_lo
    ok = d_hi < 0.05 and 2.8 <= ratio <= 5.2
    report("A6", ok,
           f"oracle discrepancy {d_hi:.2e} at eta=3e-4, {d_lo:.2e} at "
           f"eta=1.5e-4; halving-eta improvement x{ratio:.2f} (expect ~4)")
    assert ok


def test_A7_bright_dark_rate_equations(gamma_half_record):
    p, rec = gamma_half_record
    p_b, p_d, _ = bright_dark(rec)
    d_pb, d_pd = bright_dark_rates(rec, p)
    inner = slice(2, -2)
    worst = 0.0
    for series, rhs in ((p_b, d_pb), (p_d, d_pd)):
        fd = finite_difference_time(series, rec.dt)
        r = rhs[inner]
        resid = np.abs(fd - r).max(axis=1)
        dominant = np.maximum(np.abs(fd).max(axis=1), np.abs(r).max(axis=1))
        mask = dominant >= 1e-3 * dominant.max()  # above population noise floor
        assert mask.sum() > 0.7 * np.count_nonzero(rec.times[inner] > 200.0)
        worst = max(worst, float((resid[mask] / dominant[mask]).max()))
    ok = worst < 1e-3
    report("A7", ok, f"worst relative rate-equation residual = {worst:.2e}")
    assert ok


def test_A8_dephasing_trend(dephasing_sweep):
    gammas, res = dephasing_sweep
    assert all(e is None for e in res.errors), res.errors
    renorm = res.renormalization
    slowdown = 1.0 - renorm
    strictly_increasing = bool(np.all(np.diff(slowdown) > 0))
    v_ratio = np.array([f.v_peak / f.v_grp for f in res.fits])
    peaks_ok = bool(np.all(np.abs(v_ratio - 1.0) < 0.10))
    ok = strictly_increasing and peaks_ok
    report("A8", ok,
           "1 - vRms/vGrp over gamma/kappa in 1/8..1: "
           + ", ".join(f"{s:.4f}" for s in slowdown)
           + f"; vPeak/vGrp in [{v_ratio.min():.3f}, {v_ratio.max():.3f}]")
    assert strictly_increasing
    assert peaks_ok


def test_A9_momentum_trend(momentum_sweep):
    kps, res = momentum_sweep
    assert all(e is None for e in res.errors), res.errors
    x2 = res.exciton_fractions
    slowdown = 1.0 - res.renormalization
    # exciton fraction grows along this momentum grid, so the slowdown
    # must grow monotonically with it
    assert bool(np.all(np.diff(x2) > 0))
    ok = bool(np.all(np.diff(slowdown) > 0))
    report("A9", ok,
           "X^2: " + ", ".join(f"{x:.3f}" for x in x2)
           + " | 1 - vRms/vGrp: " + ", ".join(f"{s:.4f}" for s in slowdown))
    assert ok
    expected_x2 = [exciton_fraction_lp(k, ModelParams(gamma_phi=0.005)) for k in kps]
    np.testing.assert_allclose(x2, expected_x2, rtol=1e-12)


def test_A10_rabi_contraction_signature(a6_bundle):
    p = a6_bundle["params"]
    dt_map = differential_transmission(a6_bundle["hier"], a6_bundle["window"])
    profile = integrated_abs_profile(dt_map)
    peak = peak_position(profile, p.grid.positions)
    site = int(np.argmin(np.abs(p.grid.positions - peak)))
    sel = np.abs(dt_map.omegas - WLP) <= 0.02
    band = dt_map.values[sel, site]
    ok = bool(band.min() < 0.0 < band.max())
    report("A10", ok,
           f"deltaT at wavepacket site {peak:.1f} um within +-0.02 eV of "
           f"omega_LP spans [{band.min():.3g}, {band.max():.3g}]")
    assert ok
