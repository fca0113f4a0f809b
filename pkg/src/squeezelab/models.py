"""Closed-form squeezing models for one-axis twisting with light noise.

Three moment models, in decreasing order of exactness:

* ``kitagawa_moments`` -- exact expectation values after the unitary
  exp(-i (rho Sz + mu Sz^2/2)) applied to an x-polarized CSS, valid for
  any S, rho, mu.
* ``gaussian_moments`` -- the large-S Gaussian-photon-statistics model:
  the two-pulse rotation angle is a zero-mean Gaussian of variance
  eps*mu, giving the characteristic phase variance V = eps*mu + mu^2 S/2.
* ``scattering_moments`` -- the Gaussian model corrected for photons
  scattered into free space: r = mu/(4 eta) scattering events per atom
  per channel shrink the Bloch vector by the contrast C = exp(-2r) and
  soften the shear-noise and cross-correlation factors to leading
  order in r.

Asymptotic optima of the resulting squeezing parameter and their
scaling laws are collected in ``asymptotic_optimum`` and
``leading_order_optimum``, with ``optimal_squeezing`` performing the
actual numerical minimization over the shearing strength.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .optimize import minimize_unimodal
from .spin import SpinMoments, _check_spin, squeezing_param

__all__ = [
    "NoiseParams",
    "ScatterFactors",
    "kitagawa_moments",
    "gaussian_moments",
    "scattering_moments",
    "kitagawa_xi",
    "gaussian_xi",
    "scattering_xi",
    "model_xi",
    "asymptotic_optimum",
    "leading_order_optimum",
    "optimal_squeezing",
]


@dataclass(frozen=True)
class NoiseParams:
    """Residual photon shot-noise fraction eps (a.k.a. nu) and cooperativity eta."""

    eps: float
    eta: float = math.inf

    def __post_init__(self):
        if self.eps < 0 or math.isnan(self.eps):
            raise ValueError(f"shot-noise fraction must be >= 0, got {self.eps!r}")
        if not self.eta > 0:
            raise ValueError(f"cooperativity must be > 0, got {self.eta!r}")


@dataclass(frozen=True)
class ScatterFactors:
    """Free-space scattering bookkeeping for one shearing pulse pair.

    r is the mean number of Raman (equivalently Rayleigh) scattering
    events per atom; contrast = exp(-2r) is the unscattered fraction;
    szbar2 and sz_szbar are the time-averaged <Szbar^2> and the
    <Sz Szbar> correlation; vprime is the adjusted phase variance.
    """

    r: float
    contrast: float
    szbar2: float
    sz_szbar: float
    vprime: float


def _cos_pow(x: float, n: int) -> float:
    """cos(x)**n for integer n, evaluated as exp(n log|cos x|) with sign tracking.

    Direct powering underflows and loses precision once n is in the
    thousands; the log form is good to a few ulps at any S.
    """
    if n == 0:
        return 1.0
    c = math.cos(x)
    if c == 0.0:
        return 0.0 if n > 0 else math.inf
    mag = math.exp(n * math.log(abs(c)))
    if c < 0 and (n % 2):
        return -mag
    return mag


def kitagawa_moments(S, rho: float, mu: float) -> SpinMoments:
    """Exact one-axis-twisting moments of a CSS after the (rho, mu) unitary."""
    two_s = _check_spin(S)
    S = two_s / 2.0
    half = 0.5 * mu
    c1 = _cos_pow(half, two_s - 1)
    sx = S * math.cos(rho) * c1
    sy = S * math.sin(rho) * c1
    if two_s == 1:
        # single atom: Sz^2 is proportional to the identity, nothing shears
        sy2 = 0.5 * S
        syz = 0.0
    else:
        sy2 = 0.5 * S * (1.0 + (S - 0.5) * (1.0 - math.cos(2.0 * rho) * _cos_pow(mu, two_s - 2)))
        syz = S * (two_s - 1) * math.cos(rho) * math.sin(half) * _cos_pow(half, two_s - 2)
    return SpinMoments(sx=sx, sy=sy, sz=0.0, sy2=sy2, sz2=0.5 * S, syz=syz)


def gaussian_moments(S, mu: float, eps: float) -> SpinMoments:
    """Large-S moments with Gaussian photon statistics.

    eps is the residual shot-noise fraction: the pulse-pair rotation
    angle has variance eps*mu, so the total phase variance is
    V = eps*mu + mu^2 <Sz^2> with <Sz^2> = S/2.
    """
    two_s = _check_spin(S)
    S = two_s / 2.0
    if mu < 0 or eps < 0:
        raise ValueError(f"mu and eps must be >= 0, got mu={mu!r}, eps={eps!r}")
    v = eps * mu + 0.5 * mu * mu * S
    e_half = math.exp(-0.5 * v)
    sy2 = 0.5 * S * (1.0 - S * math.expm1(-2.0 * v))
    return SpinMoments(
        sx=S * e_half,
        sy=0.0,
        sz=0.0,
        sy2=sy2,
        sz2=0.5 * S,
        syz=S * S * mu * e_half,
    )


def scattering_moments(S, mu: float, eps: float, eta: float):
    """Gaussian-regime moments adjusted for free-space scattering.

    Returns (SpinMoments, ScatterFactors).  The factors are the
    leading-order-in-r expressions; a RuntimeWarning is emitted when
    r = mu/(4 eta) exceeds 0.2 and the leading-order treatment becomes
    questionable.
    """
    two_s = _check_spin(S)
    S = two_s / 2.0
    if mu < 0 or eps < 0:
        raise ValueError(f"mu and eps must be >= 0, got mu={mu!r}, eps={eps!r}")
    if not eta > 0:
        raise ValueError(f"cooperativity must be > 0, got {eta!r}")
    r = mu / (4.0 * eta)
    if r == 0.0:
        # no-scattering limit reduces to the Gaussian model exactly
        mom = gaussian_moments(S, mu, eps)
        return mom, ScatterFactors(r=0.0, contrast=1.0, szbar2=0.5 * S,
                                   sz_szbar=0.5 * S, vprime=eps * mu + 0.5 * mu * mu * S)
    if r > 0.2:
        warnings.warn(f"r = {r:.3g} > 0.2: leading-order scattering factors are unreliable",
                      RuntimeWarning, stacklevel=2)
    contrast = math.exp(-2.0 * r)
    szbar2 = (1.0 - 2.0 * r / 3.0) * 0.5 * S
    sz_szbar = (1.0 - r) * 0.5 * S
    vprime = eps * mu + mu * mu * szbar2
    e_half = math.exp(-0.5 * vprime)
    mom = SpinMoments(
        sx=S * contrast * e_half,
        sy=0.0,
        sz=0.0,
        sy2=0.5 * S * (1.0 - S * contrast * contrast * math.expm1(-2.0 * vprime)),
        sz2=0.5 * S,
        syz=S * S * (1.0 - r) * contrast * mu * e_half,
    )
    return mom, ScatterFactors(r=r, contrast=contrast, szbar2=szbar2,
                               sz_szbar=sz_szbar, vprime=vprime)


def kitagawa_xi(S, mu: float, rho: float = 0.0) -> float:
    return squeezing_param(kitagawa_moments(S, rho, mu), S)


def gaussian_xi(S, mu: float, eps: float) -> float:
    return squeezing_param(gaussian_moments(S, mu, eps), S)


def scattering_xi(S, mu: float, eps: float, eta: float) -> float:
    mom, _ = scattering_moments(S, mu, eps, eta)
    return squeezing_param(mom, S)


def model_xi(S, mu: float, eps: float, eta: float) -> float:
    """Squeezing parameter from the most exact model matching (eps, eta).

    Finite eta selects the scattering model; infinite eta with eps = 0
    selects the exact twisting result; otherwise the Gaussian model.
    """
    if math.isfinite(eta):
        return scattering_xi(S, mu, eps, eta)
    if eps == 0.0:
        return kitagawa_xi(S, mu)
    return gaussian_xi(S, mu, eps)


def asymptotic_optimum(S, eps: float, eta: float, regime: str):
    """Closed-form (mu_opt, xi_opt) for the named asymptotic regime.

    regime:
        "ideal"      -- no photon noise, no scattering:
                        mu ~ 12^(1/6)/S^(2/3), xi ~ 12^(2/3)/(8 S^(2/3))
        "coherent"   -- full shot noise (eps = 1), no scattering:
                        mu ~ 12^(1/5)/S^(3/5), xi ~ 5/(384^(1/5) S^(2/5))
        "scattering" -- no photon noise, finite cooperativity:
                        mu ~ (6 eta)^(1/3)/S^(2/3), xi ~ 6^(1/3)/(2 (S eta)^(2/3))
    """
    two_s = _check_spin(S)
    S = two_s / 2.0
    if regime == "ideal":
        return 12.0 ** (1.0 / 6.0) / S ** (2.0 / 3.0), 12.0 ** (2.0 / 3.0) / (8.0 * S ** (2.0 / 3.0))
    if regime == "coherent":
        return 12.0 ** 0.2 / S ** 0.6, 5.0 / (384.0 ** 0.2 * S ** 0.4)
    if regime == "scattering":
        if not (eta > 0 and math.isfinite(eta)):
            raise ValueError(f"scattering regime needs finite eta > 0, got {eta!r}")
        return (6.0 * eta) ** (1.0 / 3.0) / S ** (2.0 / 3.0), \
            6.0 ** (1.0 / 3.0) / (2.0 * (S * eta) ** (2.0 / 3.0))
    raise ValueError(f"unknown regime {regime!r}; expected ideal, coherent or scattering")


def leading_order_optimum(S, eps: float, eta: float):
    """Best (mu_opt, xi_opt) of the binding leading-order noise budget.

    The full budget is xi ~ 2 eps/(S mu) + (S mu)^(-2) + mu/(3 eta)
    + S^2 mu^4 / 24.  Each pair of one falling and one rising term has a
    closed-form optimum; the controlling asymptote for a given
    (eps, eta) is the pair whose optimum sits highest, so that is the
    one returned.  With both shot noise and scattering active this is
    mu = sqrt(6 eps eta / S), xi = 2 sqrt(2 eps / (3 eta S)), the
    expression behind the published optimum figures for noisy
    finite-cooperativity systems.
    """
    two_s = _check_spin(S)
    S = two_s / 2.0
    if eps < 0:
        raise ValueError(f"shot-noise fraction must be >= 0, got {eps!r}")
    if not eta > 0:
        raise ValueError(f"cooperativity must be > 0, got {eta!r}")
    # curvature floors
    candidates = [(12.0 ** (1.0 / 6.0) / S ** (2.0 / 3.0),
                   12.0 ** (2.0 / 3.0) / (8.0 * S ** (2.0 / 3.0)))]
    if eps > 0:
        candidates.append(((12.0 * eps) ** 0.2 / S ** 0.6,
                           2.5 * eps * (12.0 * eps) ** -0.2 / S ** 0.4))
    # scattering floors
    if math.isfinite(eta):
        candidates.append(((6.0 * eta) ** (1.0 / 3.0) / S ** (2.0 / 3.0),
                           6.0 ** (1.0 / 3.0) / (2.0 * (S * eta) ** (2.0 / 3.0))))
        if eps > 0:
            candidates.append((math.sqrt(6.0 * eps * eta / S),
                               2.0 * math.sqrt(2.0 * eps / (3.0 * eta * S))))
    return max(candidates, key=lambda pair: pair[1])


def optimal_squeezing(S, eps: float, eta: float, mu_window=None, rel_tol=1e-6,
                      check_unimodal=True):
    """Numerically minimize the model squeezing parameter over the shearing mu.

    The search window defaults to a factor of 30 either side of the
    leading-order guess.  Returns (mu_opt, xi_opt).
    """
    if mu_window is None:
        guess, _ = leading_order_optimum(S, eps, eta)
        mu_window = (guess / 30.0, guess * 30.0)

    def objective(mu):
        return model_xi(S, mu, eps, eta)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return minimize_unimodal(objective, mu_window[0], mu_window[1],
                                 rel_tol=rel_tol, check_unimodal=check_unimodal)
