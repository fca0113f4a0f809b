"""Squeezing limits from photon shot noise and free-space scattering.

Generates the two families of squeezing-vs-shearing curves: varying
degrees of shot-noise suppression for a perfect cavity, and varying
single-atom cooperativity with perfect suppression.  Prints the headline
operating point (20 dB at mu = 1.8e-3 for eta = 0.1) and the optimum
scaling laws.  Saves squeezing_curves.png.
"""

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

import squeezelab as sq

S = 10_000
mus = np.logspace(-4, -1, 200)

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4), sharey=True)

# shot-noise family (perfect cavity)
for eps, style in [(1.0, "r:"), (0.1, "b--"), (0.01, "g-."), (0.0, "k-")]:
    xi = [sq.gaussian_xi(S, mu, eps) for mu in mus]
    ax1.loglog(mus, xi, style, label=f"residual noise {eps:g}")
ax1.set_title("photon shot noise suppression")
ax1.set_xlabel(r"$\mu$")
ax1.set_ylabel(r"$\xi$")
ax1.legend()

# scattering family (perfect suppression)
for eta, style in [(math.inf, "k-"), (1.0, "g-."), (0.1, "b--"), (0.01, "r:")]:
    xi = [sq.scattering_xi(S, mu, 0.0, eta) for mu in mus if mu / (4 * eta) < 1.0]
    ax2.loglog(mus[: len(xi)], xi, style, label=f"eta = {eta:g}")
xi_ref = [sq.gaussian_xi(S, mu, 1.0) for mu in mus]
ax2.loglog(mus, xi_ref, color="0.7", label="no suppression, eta = inf")
ax2.set_title("free-space scattering")
ax2.set_xlabel(r"$\mu$")
ax2.legend()
fig.tight_layout()
fig.savefig("squeezing_curves.png", dpi=150)
print("wrote squeezing_curves.png")

# headline operating point
mom, fac = sq.scattering_moments(S, 1.8e-3, 0.0, 0.1)
xi = sq.squeezing_param(mom, S)
print(f"\neta = 0.1, mu = 1.8e-3, full suppression: xi = {xi:.3e} = {sq.xi_to_db(xi):.2f} dB "
      f"(contrast {fac.contrast:.4f})")
_, xi_ns = sq.leading_order_optimum(S, 1.0, 0.1)
print(f"same system without suppression, leading-order best: {sq.xi_to_db(xi_ns):.2f} dB")

# optimum scaling with atom number and optical depth
print("\noptimum squeezing scaling laws:")
Ss = np.logspace(3, 6, 7)
xis = [sq.optimal_squeezing(int(s), 0.0, math.inf)[1] for s in Ss]
slope, _ = sq.fit_power_law(Ss, xis)
print(f"  ideal vs S:              slope {slope:+.3f} (law: -2/3)")
etas = np.logspace(-2, math.log10(0.3), 7)
xis = [sq.optimal_squeezing(S, 0.0, eta)[1] for eta in etas]
slope, _ = sq.fit_power_law(S * etas, xis)
print(f"  scattering vs S*eta:     slope {slope:+.3f} (law: -2/3)")
Ss = np.logspace(6, 10, 7)
xis = [sq.optimal_squeezing(int(s), 1.0, math.inf)[1] for s in Ss]
slope, _ = sq.fit_power_law(Ss, xis)
print(f"  full shot noise vs S:    slope {slope:+.3f} (law: -2/5)")
