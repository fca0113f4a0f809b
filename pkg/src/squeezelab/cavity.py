"""Dispersive cavity phase response and pulse factorization fidelity.

A drive at detuning delta from the bare cavity resonance sees a phase
lag that depends on the collective atomic state through the dispersive
shift Omega per unit Sz:

    Phi(delta, m) = arctan( (kappa/2) / (delta - Omega m) ) - pi/4,

with the arctan branch continued through the pole so the lag sweeps a
full pi as the shifted resonance is crossed.  At the half-linewidth
operating point delta = kappa/2 the per-photon atomic phase 2 Phi
expands as phi*m + (phi^2/2) m^2 with phi = 2 Omega / kappa: the linear
term rotates the spin, the quadratic term shears it.

For a pulse of finite bandwidth the output field retains conditional
which-m information; ``factorization_fidelity`` quantifies the residual
atom-field entanglement as the overlap of the single-photon output
states conditioned on two atomic eigenvalues,

    F = | integral |B(w)|^2 exp(-2i [Phi_w(m) - Phi_w(m')]) dw |,

which tends to 1 as the bandwidth shrinks below kappa: quadratically
for a gaussian spectrum, linearly for heavy-tailed (lorentzian, sinc^2)
spectra whose wings keep sampling the kappa-scale phase variation.
Only detunings from the cavity resonance are ever represented; absolute
optical frequencies are frame constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import sici

__all__ = [
    "CavityConfig",
    "PulseSpectrum",
    "phase_lag",
    "expand_per_photon_phase",
    "PhaseExpansion",
    "factorization_fidelity",
]


@dataclass(frozen=True)
class CavityConfig:
    """Cavity linewidth and dispersive coupling.

    Either omega (the cavity shift per spin flip, equal to the atomic
    shift per photon) or the pair (eta, gamma_over_delta) must be
    given; when both routes are supplied they must agree on the
    per-photon phase phi = 2 omega / kappa = eta * gamma_over_delta to
    one part in 1e9.
    """

    kappa: float
    omega: float | None = None
    eta: float | None = None
    gamma_over_delta: float | None = None

    def __post_init__(self):
        if not self.kappa > 0:
            raise ValueError(f"cavity linewidth must be > 0, got {self.kappa!r}")
        has_pair = self.eta is not None and self.gamma_over_delta is not None
        if (self.eta is None) != (self.gamma_over_delta is None):
            raise ValueError("eta and gamma_over_delta must be supplied together")
        if has_pair and (self.eta <= 0 or self.gamma_over_delta < 0):
            raise ValueError("need eta > 0 and gamma_over_delta >= 0")
        if self.omega is None and not has_pair:
            raise ValueError("need omega or the (eta, gamma_over_delta) pair")
        if self.omega is not None and has_pair:
            phi_direct = 2.0 * self.omega / self.kappa
            phi_coop = self.eta * self.gamma_over_delta
            scale = max(abs(phi_direct), abs(phi_coop))
            if scale > 0 and abs(phi_direct - phi_coop) > 1e-9 * scale:
                raise ValueError(
                    f"inconsistent parameterizations: 2 omega/kappa = {phi_direct!r} "
                    f"but eta * gamma/|delta| = {phi_coop!r}")
        if self.omega is None:
            object.__setattr__(self, "omega", 0.5 * self.kappa * self.eta * self.gamma_over_delta)

    @property
    def per_photon_phase(self) -> float:
        """Spin rotation angle per incident photon, phi = 2 omega / kappa."""
        return 2.0 * self.omega / self.kappa


def phase_lag(cfg: CavityConfig, detuning, m):
    """Phase lag of the intracavity response at a given drive detuning and Sz value.

    Accepts scalars or arrays.  The branch is continuous through the
    shifted resonance: principal arctan for detuning - omega*m > 0,
    shifted by pi below, so the lag runs from -pi/4 (far blue) to
    3 pi/4 (far red).  arctan2 implements exactly that.
    """
    x = np.asarray(detuning, dtype=float) - cfg.omega * np.asarray(m, dtype=float)
    out = np.arctan2(0.5 * cfg.kappa, x) - 0.25 * math.pi
    if out.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class PhaseExpansion:
    """Quadratic fit of the two-pass phase 2 Phi(m) at the operating detuning."""

    linear: float
    quadratic: float
    cubic_bound: float


def expand_per_photon_phase(cfg: CavityConfig, m_max: float) -> PhaseExpansion:
    """Fit 2 Phi at detuning kappa/2 as linear*m + quadratic*m^2 over |m| <= m_max.

    The returned cubic_bound estimates how much the neglected cubic
    Taylor term can contaminate the fitted coefficients; the fit is
    checked against phi and phi^2/2 at that level before returning.
    Raises when the operating regime m_max * omega >= kappa/2 is
    violated (the shifted resonance would enter the fit window).
    """
    if m_max <= 0:
        raise ValueError(f"m_max must be > 0, got {m_max!r}")
    if m_max * abs(cfg.omega) >= 0.5 * cfg.kappa:
        raise ValueError(
            f"dispersive regime violated: m_max * omega = {m_max * abs(cfg.omega)!r} "
            f">= kappa/2 = {0.5 * cfg.kappa!r}")
    delta = 0.5 * cfg.kappa
    ms = np.linspace(-m_max, m_max, 401)
    y = 2.0 * (phase_lag(cfg, delta, ms) - phase_lag(cfg, delta, 0.0))
    _, linear, quadratic = np.polynomial.polynomial.polyfit(ms, y, 2)

    # next Taylor coefficient via a third central difference of 2 Phi
    h = m_max / 8.0
    f = lambda m: 2.0 * phase_lag(cfg, delta, m)
    third = (f(2 * h) - 2 * f(h) + 2 * f(-h) - f(-2 * h)) / (2.0 * h ** 3)
    cubic_bound = abs(third / 6.0) * m_max ** 2

    phi = cfg.per_photon_phase
    if abs(linear - phi) > cubic_bound + 1e-15 or abs(quadratic - 0.5 * phi * phi) > cubic_bound + 1e-15:
        raise RuntimeError(
            f"phase expansion inconsistent beyond the cubic bound: linear={linear!r} "
            f"(phi={phi!r}), quadratic={quadratic!r} (phi^2/2={0.5 * phi * phi!r}), "
            f"bound={cubic_bound!r}")
    return PhaseExpansion(linear=float(linear), quadratic=float(quadratic),
                          cubic_bound=float(cubic_bound))


@dataclass(frozen=True)
class PulseSpectrum:
    """Normalized spectral density of the drive pulse.

    shape is one of "gaussian", "lorentzian", "square"; center_detuning
    is the pulse center relative to the bare cavity resonance;
    bandwidth sets the spectral scale sigma (standard deviation for the
    gaussian, half width at half maximum for the lorentzian, inverse
    pulse duration for the square temporal pulse, whose spectrum is
    sinc^2).
    """

    shape: str
    center_detuning: float
    bandwidth: float

    def __post_init__(self):
        if self.shape not in ("gaussian", "lorentzian", "square"):
            raise ValueError(f"unknown pulse shape {self.shape!r}")
        if not self.bandwidth > 0:
            raise ValueError(f"bandwidth must be > 0, got {self.bandwidth!r}")

    def density(self, offset):
        """|B|^2 as a function of detuning offset from the pulse center."""
        s = self.bandwidth
        offset = np.asarray(offset, dtype=float)
        if self.shape == "gaussian":
            return np.exp(-0.5 * (offset / s) ** 2) / (s * math.sqrt(2.0 * math.pi))
        if self.shape == "lorentzian":
            return (s / math.pi) / (offset * offset + s * s)
        x = 0.5 * offset / s  # sin(x)/x form via np.sinc(x/pi)
        return (0.5 / (math.pi * s)) * np.sinc(x / math.pi) ** 2

    def tail_mass(self, w: float) -> float:
        """Spectral weight beyond +- w from the center, per side."""
        s = self.bandwidth
        if self.shape == "gaussian":
            return 0.5 * math.erfc(w / (s * math.sqrt(2.0)))
        if self.shape == "lorentzian":
            return 0.5 - math.atan(w / s) / math.pi
        u = 0.5 * w / s
        if u == 0.0:
            return 0.5
        si, _ = sici(2.0 * u)
        # integral of (sin u / u)^2 from u to infinity
        return (0.5 * math.pi - si + math.sin(u) ** 2 / u) / math.pi


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(32)


def _panel_edges(half_width, sigma, refine):
    """Symmetric panel edges: uniform core over the pulse, geometric wings.

    The core resolves the spectral width sigma, the octave-spaced wings
    resolve the kappa-scale phase variation of heavy-tailed spectra
    without wasting points; refine doubles the density of both.
    """
    core = min(8.0 * sigma, half_width)
    n_core = 8 * (1 << refine)
    pos = np.linspace(0.0, core, n_core + 1)
    if core < half_width:
        ratio = 2.0 ** (1.0 / (1 << refine))
        wing = [core]
        while wing[-1] < half_width:
            wing.append(min(wing[-1] * ratio, half_width))
        pos = np.concatenate([pos, wing[1:]])
    return np.concatenate([-pos[:0:-1], pos])


def _overlap_on_window(cfg, pulse, m, m_prime, half_width, refine):
    """Self-normalized conditional-state overlap integral on a finite window.

    Analytic tail masses complete the window; the far-wing phase
    difference is taken at the window edge, which is accurate because
    Phi_w(m) - Phi_w(m') decays like 1/w^2.
    """
    center = pulse.center_detuning
    edges = center + _panel_edges(half_width, pulse.bandwidth, refine)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    weights = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()

    dens = pulse.density(nodes - center)
    dphi = phase_lag(cfg, nodes, m) - phase_lag(cfg, nodes, m_prime)
    numer = np.sum(weights * dens * np.exp(-2j * dphi))
    denom = float(np.sum(weights * dens))

    tail = pulse.tail_mass(half_width)
    for edge_det in (center - half_width, center + half_width):
        edge_dphi = phase_lag(cfg, edge_det, m) - phase_lag(cfg, edge_det, m_prime)
        numer += tail * np.exp(-2j * edge_dphi)
        denom += tail
    return float(abs(numer)) / denom


def factorization_fidelity(cfg: CavityConfig, pulse: PulseSpectrum, m, m_prime,
                           tol: float = 1e-10) -> float:
    """Overlap of single-photon output states conditioned on Sz values m and m'.

    F = 1 means the pulse leaves no atom-field entanglement between the
    two branches; for a gaussian pulse with sigma << kappa, 1 - F grows
    as (sigma/kappa)^2.  The quadrature refines (and, for heavy-tailed
    spectra, widens) until successive estimates agree to tol; failure
    to converge raises with the last residual.
    """
    if m == m_prime:
        return 1.0
    sigma = pulse.bandwidth
    if pulse.shape == "gaussian":
        widths = [8.0 * sigma]
    else:
        base = max(16.0 * sigma, 4.0 * cfg.kappa)
        widths = [base * 4.0 ** k for k in range(8)]

    prev = None
    residual = math.inf
    for half_width in widths:
        inner_prev = None
        for refine in range(8):
            val = _overlap_on_window(cfg, pulse, m, m_prime, half_width, refine)
            if inner_prev is not None and abs(val - inner_prev) < 0.5 * tol:
                break
            inner_prev = val
        if prev is not None:
            residual = abs(val - prev)
            if residual < tol:
                return min(val, 1.0)
        prev = val
    if len(widths) == 1:
        return min(prev, 1.0)
    raise RuntimeError(f"fidelity quadrature did not converge: residual {residual:.3e} > {tol:.1e}")
