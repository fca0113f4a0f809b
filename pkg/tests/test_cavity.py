import math

import numpy as np
import pytest

from squeezelab import (
    CavityConfig,
    PulseSpectrum,
    expand_per_photon_phase,
    factorization_fidelity,
    fit_power_law,
    phase_lag,
)


def test_config_requires_a_parameterization():
    with pytest.raises(ValueError):
        CavityConfig(kappa=1.0)
    with pytest.raises(ValueError):
        CavityConfig(kappa=1.0, eta=0.1)  # pair incomplete
    with pytest.raises(ValueError):
        CavityConfig(kappa=0.0, omega=1e-4)


def test_config_consistency_check():
    # phi = 2 omega / kappa must equal eta * gamma/|delta| when both given
    CavityConfig(kappa=1.0, omega=9e-5, eta=0.1, gamma_over_delta=1.8e-3)
    with pytest.raises(ValueError, match="inconsistent"):
        CavityConfig(kappa=1.0, omega=1e-4, eta=0.1, gamma_over_delta=1.8e-3)


def test_per_photon_phase_from_cooperativity():
    cfg = CavityConfig(kappa=2.0, eta=0.1, gamma_over_delta=1.8e-3)
    assert cfg.per_photon_phase == pytest.approx(1.8e-4, rel=1e-12)
    assert cfg.omega == pytest.approx(1.8e-4, rel=1e-12)  # kappa/2 * phi


def test_phase_lag_reference_point():
    cfg = CavityConfig(kappa=1.0, omega=1e-4)
    assert phase_lag(cfg, 0.5, 0.0) == pytest.approx(0.0, abs=1e-15)


def test_phase_lag_linear_response():
    cfg = CavityConfig(kappa=1.0, omega=1e-4)
    phi = cfg.per_photon_phase
    m = 100.0  # Omega m / kappa = 0.01
    up = phase_lag(cfg, 0.5, m) - phase_lag(cfg, 0.5, 0.0)
    dn = phase_lag(cfg, 0.5, -m) - phase_lag(cfg, 0.5, 0.0)
    # odd to first order; the even quadratic residue is phi^2 m^2 / 2
    assert up + dn == pytest.approx(0.5 * phi**2 * m**2, rel=0.05)
    # 2 dPhi = phi m to within the quadratic term
    assert 2 * up / (phi * m) == pytest.approx(1.0, abs=0.011)


def test_phase_lag_monotone_and_continuous_through_pole():
    # the shifted resonance detuning - omega m = 0 is crossed smoothly;
    # the lag spans (-pi/4, 3pi/4), increasing in m and decreasing in
    # detuning for positive dispersive shift
    cfg = CavityConfig(kappa=1.0, omega=1e-3)
    ms = np.linspace(-2000, 2000, 4001)  # pole sits at m = 500
    vals = phase_lag(cfg, 0.5, ms)
    assert np.all(np.diff(vals) > 0)
    assert np.all(vals > -0.25 * math.pi) and np.all(vals < 0.75 * math.pi)
    assert np.max(np.abs(np.diff(vals))) < 0.01  # no branch jump at the pole
    dets = np.linspace(-3.0, 3.0, 2001)
    assert np.all(np.diff(phase_lag(cfg, dets, 0.0)) < 0)


def test_expansion_coefficients():
    cfg = CavityConfig(kappa=1.0, omega=1e-4)
    phi = cfg.per_photon_phase
    ex = expand_per_photon_phase(cfg, 100)
    assert ex.linear / phi == pytest.approx(1.0, abs=1e-4)
    assert ex.quadratic / (0.5 * phi**2) == pytest.approx(1.0, abs=1e-2)
    assert abs(ex.linear - phi) <= ex.cubic_bound
    assert abs(ex.quadratic - 0.5 * phi**2) <= ex.cubic_bound


def test_expansion_empty_cavity():
    ex = expand_per_photon_phase(CavityConfig(kappa=1.0, omega=0.0), 100)
    assert ex.linear == 0.0 and ex.quadratic == 0.0


def test_expansion_regime_violation():
    cfg = CavityConfig(kappa=1.0, omega=1e-2)
    with pytest.raises(ValueError, match="regime"):
        expand_per_photon_phase(cfg, 60)  # m_max * omega = 0.6 > kappa/2


def test_operating_point_chain():
    # eta = 0.1 and gamma/|delta| = 1.8e-3 give phi = 1.8e-4; a pulse
    # pair with 2.7e4 photons each then shears by (n1+n2) phi^2 =
    # 1.7496e-3, the quoted 1.8e-3 operating point up to rounding
    cfg = CavityConfig(kappa=1.0, eta=0.1, gamma_over_delta=1.8e-3)
    assert cfg.per_photon_phase == pytest.approx(1.8e-4, rel=1e-9)
    ex = expand_per_photon_phase(cfg, 100)
    mu_chain = 5.4e4 * ex.linear**2
    assert mu_chain == pytest.approx(5.4e4 * 1.8e-4**2, rel=0.01)
    assert mu_chain == pytest.approx(1.8e-3, rel=0.03)


def test_pulse_spectrum_validation():
    with pytest.raises(ValueError):
        PulseSpectrum(shape="triangle", center_detuning=0.5, bandwidth=0.1)
    with pytest.raises(ValueError):
        PulseSpectrum(shape="gaussian", center_detuning=0.5, bandwidth=0.0)


@pytest.mark.parametrize("shape", ["gaussian", "lorentzian", "square"])
def test_spectral_density_normalized(shape):
    pulse = PulseSpectrum(shape=shape, center_detuning=0.0, bandwidth=0.37)
    w = 60.0 * pulse.bandwidth
    xs = np.linspace(-w, w, 400_001)
    body = float(np.trapezoid(pulse.density(xs), xs))
    assert body + 2 * pulse.tail_mass(w) == pytest.approx(1.0, abs=1e-6)


def test_fidelity_equal_eigenvalues():
    cfg = CavityConfig(kappa=1.0, omega=0.01)
    pulse = PulseSpectrum(shape="gaussian", center_detuning=0.5, bandwidth=0.05)
    assert factorization_fidelity(cfg, pulse, 4, 4) == 1.0


@pytest.mark.parametrize("shape", ["gaussian", "lorentzian", "square"])
def test_fidelity_bounds_and_symmetry(shape):
    cfg = CavityConfig(kappa=1.0, omega=0.01)
    pulse = PulseSpectrum(shape=shape, center_detuning=0.5, bandwidth=0.05)
    f = factorization_fidelity(cfg, pulse, 1, 0)
    assert 0.0 <= f <= 1.0
    assert f == factorization_fidelity(cfg, pulse, 0, 1)
    assert f < 1.0  # finite bandwidth leaves some entanglement


def test_fidelity_monochromatic_limit():
    cfg = CavityConfig(kappa=1.0, omega=0.01)
    prev = 0.0
    for sigma in (1e-2, 1e-3, 1e-4):
        f = factorization_fidelity(cfg, PulseSpectrum("gaussian", 0.5, sigma), 3, -2)
        assert f > prev
        prev = f
    assert prev > 1 - 1e-9


def test_fidelity_quadratic_bandwidth_scaling():
    cfg = CavityConfig(kappa=1.0, omega=0.01)  # Omega (m - m') / kappa = 0.01
    sigmas = np.logspace(-3, -1, 9)
    defect = [1.0 - factorization_fidelity(cfg, PulseSpectrum("gaussian", 0.5, s), 1, 0)
              for s in sigmas]
    slope, _ = fit_power_law(sigmas, defect)
    assert slope == pytest.approx(2.0, abs=0.2)
