"""Photon statistics of the four shot-noise-suppression light schemes.

The squeezing pulse pair imprints a rotation rho = (n2 - n1) * phi and
a shear mu = (n1 + n2) * phi^2 on the atoms.  What limits the scheme is
the residual variance of the photon-number difference, expressed as the
shot-noise fraction

    nu = Var(n2 - n1) / <n1 + n2>,

which equals 1 for two independent coherent pulses and can be pushed
far below 1 by a delay-line spin echo, squeezed input light, or photon
counting with classical feedback.  ``sample_photon_pair`` draws (n1, n2)
from the matching counting model so that Monte-Carlo averages reproduce
each nu exactly; all sampling goes through an explicit numpy Generator,
so identical seeds give identical draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import singledispatch
from typing import Union

import numpy as np

from .optimize import golden_section

__all__ = [
    "IndependentCoherent",
    "SpinEchoDelayLine",
    "SqueezedInput",
    "FockByDetection",
    "CavityLoss",
    "SchemeConfig",
    "shot_noise_fraction",
    "optimal_squeezing_s",
    "sample_photon_pair",
    "measurement_comparison",
    "MEASUREMENT_CROSSOVER_Q",
]


def _check_fraction(value, name, lo_open=False, hi_closed=False):
    lo_ok = value > 0 if lo_open else value >= 0
    hi_ok = value <= 1 if hi_closed else value < 1
    if not (lo_ok and hi_ok):
        raise ValueError(f"{name} out of range: {value!r}")


@dataclass(frozen=True)
class IndependentCoherent:
    """Two separate coherent pulses with uncorrelated photon numbers."""

    n_mean_per_pulse: float

    def __post_init__(self):
        if not self.n_mean_per_pulse > 0:
            raise ValueError(f"mean photon number must be > 0, got {self.n_mean_per_pulse!r}")


@dataclass(frozen=True)
class SpinEchoDelayLine:
    """One coherent pulse reused via a delay line; loss is the fraction lost between passes."""

    n_mean_per_pulse: float
    loss: float

    def __post_init__(self):
        if not self.n_mean_per_pulse > 0:
            raise ValueError(f"mean photon number must be > 0, got {self.n_mean_per_pulse!r}")
        _check_fraction(self.loss, "loss")


@dataclass(frozen=True)
class SqueezedInput:
    """Amplitude-squeezed pulses; s is the optical squeezing parameter."""

    n_mean_per_pulse: float
    s: float

    def __post_init__(self):
        if not self.n_mean_per_pulse > 0:
            raise ValueError(f"mean photon number must be > 0, got {self.n_mean_per_pulse!r}")
        if self.s < 0:
            raise ValueError(f"squeezing parameter must be >= 0, got {self.s!r}")


@dataclass(frozen=True)
class FockByDetection:
    """Effective Fock state from counting reflected photons with feedback.

    The source is switched off once n_target photons have been counted
    over the pulse pair, so only detector inefficiency (quantum
    efficiency Q) leaks photon-number uncertainty back in.
    """

    n_target: int
    quantum_efficiency: float

    def __post_init__(self):
        if int(self.n_target) != self.n_target or self.n_target < 1:
            raise ValueError(f"target photon number must be a positive integer, got {self.n_target!r}")
        _check_fraction(self.quantum_efficiency, "quantum efficiency", lo_open=True, hi_closed=True)


@dataclass(frozen=True)
class CavityLoss:
    """Definite-photon-number input degraded by optical loss at the cavity.

    At half-linewidth detuning an incident photon fails to couple with
    probability loss/2, re-randomizing the interacting photon number.
    """

    n_mean_per_pulse: float
    loss: float

    def __post_init__(self):
        if not self.n_mean_per_pulse > 0:
            raise ValueError(f"mean photon number must be > 0, got {self.n_mean_per_pulse!r}")
        _check_fraction(self.loss, "loss")


SchemeConfig = Union[IndependentCoherent, SpinEchoDelayLine, SqueezedInput,
                     FockByDetection, CavityLoss]


@singledispatch
def shot_noise_fraction(cfg) -> float:
    """Residual shot-noise fraction nu = Var(n2 - n1) / <n1 + n2> for a scheme."""
    raise TypeError(f"not a scheme config: {cfg!r}")


@shot_noise_fraction.register
def _(cfg: IndependentCoherent) -> float:
    return 1.0


@shot_noise_fraction.register
def _(cfg: SpinEchoDelayLine) -> float:
    return 0.5 * cfg.loss


@shot_noise_fraction.register
def _(cfg: SqueezedInput) -> float:
    n_total = 2.0 * cfg.n_mean_per_pulse
    return _squeezed_nu(cfg.s, n_total)


@shot_noise_fraction.register
def _(cfg: FockByDetection) -> float:
    return 1.0 - cfg.quantum_efficiency


@shot_noise_fraction.register
def _(cfg: CavityLoss) -> float:
    return 0.5 * cfg.loss


def _squeezed_nu(s: float, n_total: float) -> float:
    # Var(n) = |alpha|^2 e^(-2s) + 2 sinh^2 s cosh^2 s per pulse
    return math.exp(-2.0 * s) + 2.0 * (math.sinh(s) * math.cosh(s)) ** 2 / n_total


def optimal_squeezing_s(n_total: float):
    """Squeezing parameter s minimizing nu for a given total photon number.

    nu(s) falls as e^(-2s) before the anti-squeezed amplitude quadrature
    feeds number noise back in; the minimum improves as n_total^(-1/3).
    Returns (s_opt, nu_min).
    """
    if not n_total > 0:
        raise ValueError(f"total photon number must be > 0, got {n_total!r}")
    # interior minimum near ln(4 n)/6; bracket it generously
    s_hi = max(math.log(4.0 * n_total) / 6.0, 0.0) + 2.0
    grid = np.linspace(0.0, s_hi, 256)
    vals = [_squeezed_nu(s, n_total) for s in grid]
    i = int(np.argmin(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    if lo == 0.0:
        lo = 1e-12
    s_opt, nu_min = golden_section(lambda s: _squeezed_nu(s, n_total), lo, hi, rel_tol=1e-9)
    return s_opt, nu_min


@singledispatch
def sample_photon_pair(cfg, rng: np.random.Generator):
    """Draw one (n1, n2) photon-number pair from the scheme's counting model."""
    raise TypeError(f"not a scheme config: {cfg!r}")


@sample_photon_pair.register
def _(cfg: IndependentCoherent, rng):
    n1, n2 = rng.poisson(cfg.n_mean_per_pulse, 2)
    return int(n1), int(n2)


@sample_photon_pair.register
def _(cfg: SpinEchoDelayLine, rng):
    # the mean loss n*L between the passes is a calibrated systematic
    # (compensated at the rotation stage); what survives is the shot
    # noise of the lost photons, Var(n2 - n1) = <n> L
    n1 = int(rng.poisson(cfg.n_mean_per_pulse))
    lost = int(rng.binomial(n1, cfg.loss)) if n1 > 0 else 0
    n2 = n1 - lost + int(round(cfg.n_mean_per_pulse * cfg.loss))
    return n1, n2


@sample_photon_pair.register
def _(cfg: SqueezedInput, rng):
    # Gaussian-approximated number distribution, variance nu * <n> per pulse
    nu = shot_noise_fraction(cfg)
    sigma = math.sqrt(nu * cfg.n_mean_per_pulse)
    draws = rng.normal(cfg.n_mean_per_pulse, sigma, 2)
    return tuple(int(max(round(d), 0)) for d in draws)


@sample_photon_pair.register
def _(cfg: FockByDetection, rng):
    # Feedback pins the cumulative detected count at n_target over the
    # pair, so the detected photons split deterministically while each
    # of the NB-distributed undetected photons lands in either pulse
    # with equal probability.
    undetected = int(rng.negative_binomial(cfg.n_target, cfg.quantum_efficiency))
    u1 = int(rng.binomial(undetected, 0.5)) if undetected > 0 else 0
    n1 = cfg.n_target // 2 + u1
    n2 = (cfg.n_target - cfg.n_target // 2) + (undetected - u1)
    return n1, n2


@sample_photon_pair.register
def _(cfg: CavityLoss, rng):
    n0 = max(int(round(cfg.n_mean_per_pulse)), 1)
    p = 0.5 * cfg.loss
    n1 = n0 - int(rng.binomial(n0, p))
    n2 = n0 - int(rng.binomial(n0, p))
    return n1, n2


# Detected-photon efficiency above which cavity feedback outpaces even a
# perfect phase measurement: root of 1/(4Q) = 2(1-Q).
MEASUREMENT_CROSSOVER_Q = (2.0 + math.sqrt(2.0)) / 4.0


def measurement_comparison(S, mu: float, quantum_efficiency: float) -> dict:
    """Initial squeezing rates of cavity feedback vs measurement-based schemes.

    Returns the squeezing parameters after shearing mu for a QND
    transmission measurement, an ideal phase measurement on the
    reflected light, and cavity feedback with photon counting of
    efficiency Q.  The cavity entry reads the residual-noise factor as
    nu = 1 - Q (the natural identification for the counting scheme; see
    module docs).  For Q above ``crossover_q`` (about 0.854) the
    feedback scheme squeezes faster than the phase measurement.
    """
    q = quantum_efficiency
    _check_fraction(q, "quantum efficiency", lo_open=True, hi_closed=True)
    s_mu = float(S) * mu
    if not s_mu > 0:
        raise ValueError(f"need S * mu > 0, got {s_mu!r}")
    return {
        "xi_qnd": 2.0 / (s_mu * q),
        "xi_phase_measurement": 1.0 / (4.0 * s_mu * q),
        "xi_cavity_feedback": 2.0 * (1.0 - q) / s_mu,
        "crossover_q": MEASUREMENT_CROSSOVER_Q,
    }
