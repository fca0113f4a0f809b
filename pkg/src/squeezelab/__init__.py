"""squeezelab: unitary cavity spin squeezing toolkit.

Exact one-axis-twisting evolution of collective spin states, closed-form
squeezing models with photon shot noise and free-space scattering,
shot-noise fractions for the practical light-pulse schemes, dispersive
cavity phase response, and brute-force Monte-Carlo oracles validating
every closed form.
"""

from .cavity import CavityConfig, PhaseExpansion, PulseSpectrum, \
    expand_per_photon_phase, factorization_fidelity, phase_lag
from .models import NoiseParams, ScatterFactors, asymptotic_optimum, gaussian_moments, \
    gaussian_xi, kitagawa_moments, kitagawa_xi, leading_order_optimum, model_xi, \
    optimal_squeezing, scattering_moments, scattering_xi
from .montecarlo import McConfig, McResult, ResourceLimitError, TrajectoryResult, \
    mc_moments, trajectory_scattering_sim
from .optimize import NonUnimodalError, fit_power_law, golden_section, \
    minimize_unimodal, power_law_amplitude
from .schemes import CavityLoss, FockByDetection, IndependentCoherent, SchemeConfig, \
    SpinEchoDelayLine, SqueezedInput, measurement_comparison, optimal_squeezing_s, \
    sample_photon_pair, shot_noise_fraction
from .spin import SpinMoments, SpinState, TwistParams, apply_twist, css_state, \
    min_transverse_variance, moments, moments_batch, squeezing_param, xi_to_db

__version__ = "0.1.0"

__all__ = [
    "SpinState", "SpinMoments", "TwistParams", "css_state", "apply_twist",
    "moments", "moments_batch", "min_transverse_variance", "squeezing_param",
    "xi_to_db",
    "NoiseParams", "ScatterFactors", "kitagawa_moments", "gaussian_moments",
    "scattering_moments", "kitagawa_xi", "gaussian_xi", "scattering_xi",
    "model_xi", "asymptotic_optimum", "leading_order_optimum", "optimal_squeezing",
    "IndependentCoherent", "SpinEchoDelayLine", "SqueezedInput", "FockByDetection",
    "CavityLoss", "SchemeConfig", "shot_noise_fraction", "optimal_squeezing_s",
    "sample_photon_pair", "measurement_comparison",
    "CavityConfig", "PulseSpectrum", "PhaseExpansion", "phase_lag",
    "expand_per_photon_phase", "factorization_fidelity",
    "McConfig", "McResult", "TrajectoryResult", "ResourceLimitError",
    "mc_moments", "trajectory_scattering_sim",
    "NonUnimodalError", "golden_section", "minimize_unimodal", "fit_power_law",
    "power_law_amplitude",
]
