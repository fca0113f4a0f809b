"""Brute-force stochastic oracles for the closed-form squeezing models.

Two independent checks:

* ``mc_moments`` draws photon-number pairs from a scheme's counting
  model, applies the exact two-pulse twist with rho = (n2 - n1) phi and
  mu = (n1 + n2) phi^2 to a coherent spin state, and averages the exact
  moments over trials.  Since expectation values are linear in the
  density operator, the trial average converges to the mixed-state
  moments that the Gaussian-regime formulas approximate.

* ``trajectory_scattering_sim`` evolves N distinguishable atoms over
  the full 2^N product basis, interleaving diagonal shear steps with
  stochastic single-atom jumps: a Rayleigh event dephases the atom
  (sigma_z with probability 1/2, the unraveling whose average is
  complete coherence erasure) and a Raman event flips it (sigma_x) and
  dephases it the same way, since a scattered photon reveals the atom's
  state in either channel.  Both event types occur with probability
  r/K per atom per step, r = mu/(4 eta).

Determinism contract: trial i draws from a generator seeded with
(master_seed, i), and reduction is an ordered mean over the per-trial
moment table, so results are bit-identical for any process count.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from multiprocessing import Pool

import numpy as np

from . import schemes
from .spin import SpinMoments, css_state, moments_batch

__all__ = [
    "McConfig",
    "McResult",
    "TrajectoryResult",
    "ResourceLimitError",
    "mc_moments",
    "trajectory_scattering_sim",
    "resolve_threads",
]

MAX_TRAJECTORY_ATOMS = 12


class ResourceLimitError(ValueError):
    """Requested trajectory simulation exceeds the exact-basis atom limit."""


@dataclass(frozen=True)
class McConfig:
    """Trial count, master seed, and shear discretization for the oracles."""

    trials: int
    master_seed: int = 20260809
    steps: int = 64
    n_atoms: int | None = None

    def __post_init__(self):
        if int(self.trials) != self.trials or self.trials < 1:
            raise ValueError(f"trials must be a positive integer, got {self.trials!r}")
        if int(self.steps) != self.steps or self.steps < 1:
            raise ValueError(f"steps must be a positive integer, got {self.steps!r}")
        if self.master_seed < 0:
            raise ValueError(f"master seed must be non-negative, got {self.master_seed!r}")
        if self.n_atoms is not None and not (1 <= self.n_atoms <= MAX_TRAJECTORY_ATOMS):
            raise ResourceLimitError(
                f"n_atoms must be in [1, {MAX_TRAJECTORY_ATOMS}], got {self.n_atoms!r}")


@dataclass(frozen=True)
class McResult:
    """Trial-averaged moments with their standard errors."""

    moments: SpinMoments
    std_errors: SpinMoments
    trials: int


@dataclass(frozen=True)
class TrajectoryResult:
    moments: SpinMoments
    std_errors: SpinMoments
    trials: int
    r: float
    contrast_estimate: float
    max_norm_drift: float
    warnings: tuple = ()


def _trial_rng(master_seed: int, index: int) -> np.random.Generator:
    # substream per trial: seed sequence hashed from (master_seed, index)
    return np.random.default_rng([master_seed, index])


def resolve_threads(requested: int | None, trials: int) -> int:
    """Worker-process count honoring the SQUEEZELAB_THREADS cap."""
    cap = os.environ.get("SQUEEZELAB_THREADS")
    limit = int(cap) if cap else 1
    if requested is None:
        requested = limit
    n = min(requested, limit if cap else requested, os.cpu_count() or 1, trials)
    return max(n, 1)


def _reduce_rows(rows: np.ndarray) -> tuple[SpinMoments, SpinMoments]:
    # fixed-shape pairwise summation: reduction order never depends on
    # how the trials were distributed over workers
    mean = rows.mean(axis=0)
    if rows.shape[0] > 1:
        err = rows.std(axis=0, ddof=1) / math.sqrt(rows.shape[0])
    else:
        err = np.zeros(6)
    return SpinMoments(*map(float, mean)), SpinMoments(*map(float, err))


# ---------------------------------------------------------------------------
# photon-number-sampled exact twisting
# ---------------------------------------------------------------------------

def mc_moments(S, scheme: schemes.SchemeConfig, phi: float, mc: McConfig) -> McResult:
    """Trial-averaged exact moments under photon-number-sampled twisting.

    Each trial draws (n1, n2) with ``sample_photon_pair`` and evolves
    the CSS by the exact diagonal unitary; the pi pulse between the two
    light pulses is already folded into rho = (n2 - n1) phi.
    """
    if not phi > 0:
        raise ValueError(f"per-photon phase must be > 0, got {phi!r}")
    base = css_state(S)
    m = base.m_values
    m2 = m * m
    amps0 = base.amps

    n1 = np.empty(mc.trials)
    n2 = np.empty(mc.trials)
    for i in range(mc.trials):
        n1[i], n2[i] = schemes.sample_photon_pair(scheme, _trial_rng(mc.master_seed, i))
    rho = (n2 - n1) * phi
    mu = (n1 + n2) * phi * phi

    rows = np.empty((mc.trials, 6))
    block = max(1, min(mc.trials, (1 << 22) // (len(m) + 1)))  # ~64 MB of transient complex
    for lo in range(0, mc.trials, block):
        hi = min(lo + block, mc.trials)
        phases = np.exp(-1j * (rho[lo:hi, None] * m[None, :]
                               + 0.5 * mu[lo:hi, None] * m2[None, :]))
        rows[lo:hi] = moments_batch(amps0[None, :] * phases, base.S)
    mean, err = _reduce_rows(rows)
    return McResult(moments=mean, std_errors=err, trials=mc.trials)


# ---------------------------------------------------------------------------
# full product-basis trajectory simulation with scattering jumps
# ---------------------------------------------------------------------------

class _ProductBasis:
    """Precomputed index tables for N distinguishable spin-1/2 atoms."""

    def __init__(self, n_atoms: int):
        dim = 1 << n_atoms
        idx = np.arange(dim)
        bits = (idx[:, None] >> np.arange(n_atoms)[None, :]) & 1
        self.n_atoms = n_atoms
        self.dim = dim
        self.m = bits.sum(axis=1) - 0.5 * n_atoms          # Sz eigenvalue per basis state
        self.m2 = self.m * self.m
        self.zsign = (2 * bits - 1).T.astype(float)         # sigma_z eigenvalues, (N, dim)
        self.flip = idx[None, :] ^ (1 << np.arange(n_atoms))[:, None]  # sigma_x index maps


def _product_moments(psi: np.ndarray, basis: _ProductBasis) -> np.ndarray:
    p = psi.real**2 + psi.imag**2
    sz = float(p @ basis.m)
    sz2 = float(p @ basis.m2)
    flipped = psi[basis.flip]                               # (N, dim)
    phi_x = 0.5 * flipped.sum(axis=0)
    # sigma_y lands on |b> with coefficient -i sigma_z(b) (i when arriving
    # spin-down, -i spin-up), matching the S+ = Sx + iSy ladder convention
    phi_y = -0.5j * (basis.zsign * flipped).sum(axis=0)
    sx = float(np.vdot(psi, phi_x).real)
    sy = float(np.vdot(psi, phi_y).real)
    sy2 = float(np.vdot(phi_y, phi_y).real)
    syz = 2.0 * float(np.vdot(phi_y, basis.m * psi).real)
    return np.array([sx, sy, sz, sy2, sz2, syz])


def _trajectory_trial(rng, basis: _ProductBasis, mu: float, steps: int, p_event: float):
    """One quantum trajectory; returns (moment row, norm drift before renorm)."""
    n_atoms = basis.n_atoms
    psi = np.full(basis.dim, 2.0 ** (-0.5 * n_atoms), dtype=complex)

    # channel 0 = Rayleigh (dephase), channel 1 = Raman (flip + dephase)
    events = rng.random((steps, n_atoms, 2)) < p_event
    coins = rng.random((steps, n_atoms, 2)) < 0.5

    # diagonal shear steps commute, so stretches between event steps
    # collapse into a single phase multiply
    step_angle = 0.5 * mu / steps
    event_steps = np.nonzero(events.any(axis=(1, 2)))[0]
    done = 0

    def shear_through(k):
        nonlocal psi, done
        if k > done:
            psi = psi * np.exp(-1j * (step_angle * (k - done)) * basis.m2)
            done = k

    for k in event_steps:
        shear_through(k + 1)  # the step-k shear acts before the step-k jumps
        for i in range(n_atoms):
            if events[k, i, 0] and coins[k, i, 0]:
                psi = psi * basis.zsign[i]
            if events[k, i, 1]:
                psi = psi[basis.flip[i]]
                if coins[k, i, 1]:
                    psi = psi * basis.zsign[i]
    shear_through(steps)

    norm = math.sqrt(float(np.vdot(psi, psi).real))
    drift = abs(norm - 1.0)
    psi = psi / norm
    return _product_moments(psi, basis), drift


def _trajectory_chunk(args):
    n_atoms, mu, steps, p_event, master_seed, lo, hi = args
    basis = _ProductBasis(n_atoms)
    rows = np.empty((hi - lo, 6))
    drift = 0.0
    for i in range(lo, hi):
        rows[i - lo], d = _trajectory_trial(_trial_rng(master_seed, i), basis, mu, steps, p_event)
        drift = max(drift, d)
    return rows, drift


def trajectory_scattering_sim(n_atoms: int, mu: float, eta: float, mc: McConfig,
                              threads: int | None = None, r: float | None = None) -> TrajectoryResult:
    """Product-basis trajectory average of shearing with scattering jumps.

    r defaults to mu/(4 eta); passing it explicitly decouples the jump
    rate from the shear (diagnostics such as the no-shear contrast
    check need events at mu = 0).  Results carry the contrast estimate
    <Sx> / (S exp(-V'/2)) with V' the scattering-adjusted phase
    variance at eps = 0.
    """
    if not (1 <= n_atoms <= MAX_TRAJECTORY_ATOMS):
        raise ResourceLimitError(
            f"exact product basis limited to {MAX_TRAJECTORY_ATOMS} atoms, got {n_atoms}")
    if mc.n_atoms is not None and mc.n_atoms != n_atoms:
        raise ValueError(f"config says {mc.n_atoms} atoms but {n_atoms} were requested")
    if mu < 0:
        raise ValueError(f"shearing must be >= 0, got {mu!r}")
    if not eta > 0:
        raise ValueError(f"cooperativity must be > 0, got {eta!r}")
    if r is None:
        r = mu / (4.0 * eta)
    warn: tuple = ()
    if r > 0.2:
        warn = (f"r = {r:.3g} > 0.2: leading-order scattering factors are unreliable",)

    p_event = r / mc.steps
    if p_event > 1.0:
        raise ValueError(f"event probability per step {p_event!r} > 1; increase steps")

    n_threads = resolve_threads(threads, mc.trials)
    bounds = np.linspace(0, mc.trials, 4 * n_threads + 1).astype(int) if n_threads > 1 \
        else np.array([0, mc.trials])
    jobs = [(n_atoms, mu, mc.steps, p_event, mc.master_seed, int(lo), int(hi))
            for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]

    rows = np.empty((mc.trials, 6))
    drift = 0.0
    if n_threads > 1:
        with Pool(processes=n_threads) as pool:
            for (lo, hi), (chunk, d) in zip(
                    [(j[5], j[6]) for j in jobs], pool.map(_trajectory_chunk, jobs)):
                rows[lo:hi] = chunk
                drift = max(drift, d)
    else:
        for job in jobs:
            chunk, d = _trajectory_chunk(job)
            rows[job[5]:job[6]] = chunk
            drift = max(drift, d)

    mean, err = _reduce_rows(rows)
    S = 0.5 * n_atoms
    vprime = mu * mu * (1.0 - 2.0 * r / 3.0) * 0.5 * S
    contrast_estimate = mean.sx / (S * math.exp(-0.5 * vprime))
    return TrajectoryResult(moments=mean, std_errors=err, trials=mc.trials, r=r,
                            contrast_estimate=contrast_estimate,
                            max_norm_drift=drift, warnings=warn)
