"""Exact collective-spin states on the symmetric (Dicke) manifold.

An ensemble of N = 2S spin-1/2 atoms restricted to the fully symmetric
subspace behaves as a single spin of magnitude S with basis |m>,
m = -S..S.  This module builds the x-polarized coherent spin state,
applies the diagonal rotation-plus-shearing unitary

    U(rho, mu) = exp(-i (rho * Sz + mu * Sz^2 / 2)),

and evaluates the first and second spin moments needed for squeezing
metrics.  Everything runs in O(2S+1) time and memory per operation via
the tridiagonal action of the ladder operators, so S of order 1e5 is
comfortable on a desktop.

States are immutable values; all operations are pure functions and
safe to call concurrently.  Global phase is never observable, so
equality of states is always asserted on moments or populations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

__all__ = [
    "SpinState",
    "SpinMoments",
    "TwistParams",
    "css_state",
    "apply_twist",
    "moments",
    "moments_batch",
    "min_transverse_variance",
    "squeezing_param",
    "xi_to_db",
]


def _check_spin(S) -> int:
    """Validate a half-integer spin magnitude and return the integer 2S."""
    two_s = round(2 * float(S))
    if not math.isfinite(float(S)) or abs(2 * float(S) - two_s) > 1e-9 or two_s < 1:
        raise ValueError(f"spin magnitude must be a positive half-integer, got {S!r}")
    return two_s


@dataclass(frozen=True)
class SpinState:
    """Pure symmetric-subspace state: amplitudes c_m over Sz eigenvalues m = -S..S."""

    S: float
    amps: np.ndarray

    def __post_init__(self):
        two_s = round(2 * float(self.S))
        if abs(2 * float(self.S) - two_s) > 1e-9 or two_s < 0:
            raise ValueError(f"spin magnitude must be a non-negative half-integer, got {self.S!r}")
        amps = np.ascontiguousarray(self.amps, dtype=complex)
        if amps.shape != (two_s + 1,):
            raise ValueError(f"expected {two_s + 1} amplitudes for S={self.S}, got shape {amps.shape}")
        norm = float(np.sum(amps.real**2 + amps.imag**2))
        if not math.isfinite(norm) or abs(norm - 1.0) > 1e-9:
            raise ValueError(f"state is not normalized: sum |c_m|^2 = {norm!r}")
        object.__setattr__(self, "S", two_s / 2.0)
        object.__setattr__(self, "amps", amps)

    @property
    def m_values(self) -> np.ndarray:
        """Sz eigenvalues -S, -S+1, ..., S (half-integers when 2S is odd)."""
        return np.arange(len(self.amps)) - self.S

    def populations(self) -> np.ndarray:
        return np.abs(self.amps) ** 2


@dataclass(frozen=True)
class SpinMoments:
    """First and second moments of the collective spin components.

    sy2 and sz2 are full second moments <Sy^2>, <Sz^2>; syz is the
    symmetrized cross correlation <Sy Sz + Sz Sy>.
    """

    sx: float
    sy: float
    sz: float
    sy2: float
    sz2: float
    syz: float

    def as_array(self) -> np.ndarray:
        return np.array([self.sx, self.sy, self.sz, self.sy2, self.sz2, self.syz])


@dataclass(frozen=True)
class TwistParams:
    """Net rotation angle rho (rad) and shearing strength mu (rad per unit Sz)."""

    rho: float
    mu: float

    def __post_init__(self):
        if not (math.isfinite(self.rho) and math.isfinite(self.mu)):
            raise ValueError(f"rotation and shearing must be finite, got {self!r}")


def css_state(S) -> SpinState:
    """Coherent spin state polarized along +x.

    Amplitudes are the square roots of the binomial Sz distribution,
    c_m = sqrt(C(2S, S+m) / 2^(2S)); evaluated in log space so large S
    neither overflows nor underflows.
    """
    two_s = _check_spin(S)
    k = np.arange(two_s + 1)
    log_c = 0.5 * (gammaln(two_s + 1) - gammaln(k + 1) - gammaln(two_s - k + 1)) \
        - 0.5 * two_s * math.log(2.0)
    amps = np.exp(log_c)
    amps /= math.sqrt(float(np.sum(amps * amps)))
    return SpinState(S=two_s / 2.0, amps=amps.astype(complex))


def apply_twist(state: SpinState, p: TwistParams) -> SpinState:
    """Apply exp(-i (rho Sz + mu Sz^2 / 2)); diagonal, so populations are untouched."""
    m = state.m_values
    phase = np.exp(-1j * (p.rho * m + 0.5 * p.mu * m * m))
    return SpinState(state.S, state.amps * phase)


def moments_batch(amps: np.ndarray, S: float) -> np.ndarray:
    """Spin moments for a batch of amplitude rows.

    amps has shape (batch, 2S+1); returns shape (batch, 6) with columns
    (sx, sy, sz, sy2, sz2, syz).  Used by the Monte-Carlo driver to
    evaluate many photon-number realizations without Python overhead.
    """
    two_s = round(2 * S)
    amps = np.atleast_2d(amps)
    if amps.shape[1] != two_s + 1:
        raise ValueError(f"expected {two_s + 1} columns for S={S}, got {amps.shape[1]}")
    m = np.arange(two_s + 1) - S
    p = amps.real**2 + amps.imag**2

    sz = p @ m
    sz2 = p @ (m * m)

    # S+|m> = a_m |m+1> with a_m = sqrt(S(S+1) - m(m+1))
    a = np.sqrt(S * (S + 1) - m[:-1] * (m[:-1] + 1))
    cross = np.conj(amps[:, 1:]) * amps[:, :-1]
    splus = cross @ a
    sx = splus.real
    sy = splus.imag

    # <S+S- + S-S+> is diagonal; <S+^2> couples m to m+2
    anti = p @ (2 * S * (S + 1) - m * (m + 1) - m * (m - 1))
    if two_s >= 2:
        spp = (np.conj(amps[:, 2:]) * amps[:, :-2]) @ (a[1:] * a[:-1])
    else:
        spp = np.zeros(amps.shape[0], dtype=complex)
    sy2 = 0.25 * (anti - 2.0 * spp.real)

    # Sy Sz + Sz Sy: <m+1| . |m> matrix element is (2m+1) a_m, taken at Im
    syz = (cross @ ((2 * m[:-1] + 1) * a)).imag

    return np.stack([sx, sy, sz, sy2, sz2, syz], axis=1)


def moments(state: SpinState) -> SpinMoments:
    """Exact expectation values <Sx>, <Sy>, <Sz>, <Sy^2>, <Sz^2>, <SySz+SzSy>."""
    row = moments_batch(state.amps[None, :], state.S)[0]
    return SpinMoments(*(float(v) for v in row))


def min_transverse_variance(mom: SpinMoments) -> float:
    """Minimum spin variance over directions in the y-z plane.

    Meaningful as the squeezed variance when the mean spin points along
    x.  Evaluated as (4 sy2 sz2 - syz^2) / (2 (u+ + sqrt(u-^2 + syz^2)))
    with u+- = sy2 +- sz2, which is algebraically identical to
    (u+ - sqrt(u-^2 + syz^2))/2 but immune to cancellation when the
    squeezed variance is many orders below the anti-squeezed one.
    """
    sy2, sz2, syz = mom.sy2, mom.sz2, mom.syz
    if any(map(math.isnan, (sy2, sz2, syz))):
        raise ValueError(f"moments contain NaN: {mom!r}")
    u_plus = sy2 + sz2
    root = math.hypot(sy2 - sz2, syz)
    num = 4.0 * sy2 * sz2 - syz * syz
    if num <= 0.0:
        # Cauchy-Schwarz saturated (or violated by rounding): fully squeezed
        return max(0.5 * (u_plus - root), 0.0)
    return num / (2.0 * (u_plus + root))


def squeezing_param(mom: SpinMoments, S) -> float:
    """Metrological squeezing parameter xi = 2S Var(S_min) / <Sx>^2.

    xi < 1 means the state beats the standard quantum limit; the CSS
    gives exactly 1.
    """
    two_s = _check_spin(S)
    if mom.sx == 0.0:
        raise ValueError("degenerate mean spin: <Sx> = 0, squeezing parameter undefined")
    return two_s * min_transverse_variance(mom) / (mom.sx * mom.sx)


def xi_to_db(xi: float) -> float:
    """Squeezing in decibels, 10 log10(xi); negative values beat the SQL."""
    if xi <= 0:
        raise ValueError(f"xi must be positive, got {xi!r}")
    return 10.0 * math.log10(xi)
