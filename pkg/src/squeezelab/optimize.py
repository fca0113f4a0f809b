"""Scalar minimization and power-law fitting helpers.

The squeezing-vs-shearing curves handled here are smooth and unimodal
on any sensible window, so a coarse log-spaced grid scan followed by
golden-section refinement is all that is ever needed.  The grid scan
doubles as a cheap unimodality check: two separated interior minima
indicate a bad window or a broken model and are reported as an error
rather than silently resolved.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "NonUnimodalError",
    "golden_section",
    "minimize_unimodal",
    "fit_power_law",
    "power_law_amplitude",
]

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


class NonUnimodalError(RuntimeError):
    """Grid scan found more than one interior local minimum."""


def golden_section(f, lo, hi, rel_tol=1e-6, max_iter=200):
    """Golden-section search for the minimum of f on [lo, hi].

    Shrinks the bracket until its width is below rel_tol relative to
    the midpoint.  Returns (x_min, f(x_min)).
    """
    a, b = float(lo), float(hi)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if (b - a) <= rel_tol * max(abs(a), abs(b)):
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def minimize_unimodal(f, lo, hi, points_per_decade=64, rel_tol=1e-6,
                      check_unimodal=True):
    """Minimize f over [lo, hi] by log-grid scan plus golden-section refinement.

    lo and hi must be positive.  Raises NonUnimodalError when the scan
    sees multiple interior local minima and check_unimodal is set.
    Returns (x_min, f_min).
    """
    lo, hi = float(lo), float(hi)
    if not (0 < lo < hi):
        raise ValueError(f"need 0 < lo < hi, got [{lo}, {hi}]")
    decades = math.log10(hi / lo)
    n = max(int(points_per_decade * decades) + 1, 8)
    xs = np.logspace(math.log10(lo), math.log10(hi), n)
    ys = np.array([f(x) for x in xs])
    if not np.all(np.isfinite(ys)):
        raise ValueError("objective returned non-finite values on the scan grid")

    if check_unimodal:
        interior = (ys[1:-1] < ys[:-2]) & (ys[1:-1] < ys[2:])
        if int(np.count_nonzero(interior)) > 1:
            raise NonUnimodalError(
                f"{int(np.count_nonzero(interior))} local minima on the scan grid")

    i = int(np.argmin(ys))
    a = xs[max(i - 1, 0)]
    b = xs[min(i + 1, n - 1)]
    return golden_section(f, a, b, rel_tol=rel_tol)


def fit_power_law(x, y):
    """Least-squares (slope, amplitude) of y ~ amplitude * x**slope on log-log axes."""
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.asarray(y, dtype=float))
    slope, intercept = np.polyfit(lx, ly, 1)
    return float(slope), float(math.exp(intercept))


def power_law_amplitude(x, y, slope):
    """Geometric-mean amplitude of y ~ A * x**slope with the exponent pinned.

    Unlike the free-intercept fit this does not extrapolate to x = 1,
    so a small slope error does not contaminate the amplitude.
    """
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.asarray(y, dtype=float))
    return float(math.exp(float(np.mean(ly - slope * lx))))
