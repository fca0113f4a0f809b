"""Command-line front end: sweeps, optima, scheme evaluation, validation, fidelity scans.

Subcommands
    sweep        squeezing-vs-shearing curves for selected models -> CSV
    optimize     numerical optimum of the model squeezing parameter -> JSON
    scheme-eval  shot-noise fraction and measurement comparison -> JSON
    validate     Monte-Carlo oracles vs closed forms, pass/fail -> JSON
    fano         factorization fidelity vs pulse bandwidth -> CSV

All physical inputs live in a single JSON config in the dimensionless
parameterization (S, phi or (eta, gamma_over_delta), eps or a scheme,
mu grid).  Infinite cooperativity is spelled "inf".  CSV output starts
with the schema line ``# squeezelab-csv v1`` and is byte-identical
across runs for a fixed config and seed; the SQUEEZELAB_THREADS
environment variable caps worker processes without affecting results.

Exit codes: 0 success, 2 config error, 3 optimization ambiguity,
4 resource limit, 1 anything else.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from dataclasses import asdict, dataclass, is_dataclass

from . import models, schemes
from .cavity import CavityConfig, PulseSpectrum, factorization_fidelity
from .montecarlo import McConfig, ResourceLimitError, mc_moments, resolve_threads, \
    trajectory_scattering_sim
from .optimize import NonUnimodalError
from .spin import min_transverse_variance, squeezing_param, xi_to_db

CSV_SCHEMA = "# squeezelab-csv v1"

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_AMBIGUOUS = 3
EXIT_RESOURCE = 4


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------

def _parse_eta(value) -> float:
    if value in ("inf", "Infinity", None):
        return math.inf
    eta = float(value)
    if not eta > 0:
        raise ConfigError(f"eta must be > 0 or 'inf', got {value!r}")
    return eta


def _parse_scheme(node: dict, n_mean=None) -> schemes.SchemeConfig:
    if not isinstance(node, dict) or "type" not in node:
        raise ConfigError(f"scheme must be an object with a 'type' tag, got {node!r}")
    kind = node["type"]
    try:
        if kind == "independent-coherent":
            return schemes.IndependentCoherent(
                n_mean_per_pulse=float(node.get("n_mean_per_pulse", n_mean)))
        if kind == "spin-echo-delay-line":
            return schemes.SpinEchoDelayLine(
                n_mean_per_pulse=float(node.get("n_mean_per_pulse", n_mean)),
                loss=float(node["loss"]))
        if kind == "squeezed-input":
            return schemes.SqueezedInput(
                n_mean_per_pulse=float(node.get("n_mean_per_pulse", n_mean)),
                s=float(node["s"]))
        if kind == "fock-by-detection":
            n_target = node.get("n_target")
            if n_target is None:
                if n_mean is None:
                    raise ConfigError("fock-by-detection needs n_target")
                n_target = 2 * max(int(round(n_mean)), 1)
            return schemes.FockByDetection(
                n_target=int(n_target),
                quantum_efficiency=float(node["quantum_efficiency"]))
        if kind == "cavity-loss":
            return schemes.CavityLoss(
                n_mean_per_pulse=float(node.get("n_mean_per_pulse", n_mean)),
                loss=float(node["loss"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad scheme config {node!r}: {exc}") from exc
    raise ConfigError(f"unknown scheme type {kind!r}")


def _mu_grid(node) -> list:
    try:
        start = float(node["start"])
        stop = float(node["stop"])
        points = int(node["points"])
        spacing = node.get("spacing", "log")
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad mu grid {node!r}: {exc}") from exc
    if points < 1 or start <= 0 or stop < start:
        raise ConfigError(f"bad mu grid: need points >= 1 and 0 < start <= stop, got {node!r}")
    if spacing not in ("log", "linear"):
        raise ConfigError(f"grid spacing must be 'log' or 'linear', got {spacing!r}")
    if points == 1:
        return [start]
    if spacing == "log":
        ratio = (stop / start) ** (1.0 / (points - 1))
        return [start * ratio**k for k in range(points)]
    step = (stop - start) / (points - 1)
    return [start + step * k for k in range(points)]


def _cavity_from_config(cfg: dict) -> CavityConfig:
    kappa = float(cfg.get("kappa", 1.0))
    if "omega" in cfg:
        return CavityConfig(kappa=kappa, omega=float(cfg["omega"]),
                            eta=cfg.get("eta") and float(cfg["eta"]),
                            gamma_over_delta=cfg.get("gamma_over_delta") and float(cfg["gamma_over_delta"]))
    if "eta" in cfg and "gamma_over_delta" in cfg:
        return CavityConfig(kappa=kappa, eta=float(cfg["eta"]),
                            gamma_over_delta=float(cfg["gamma_over_delta"]))
    raise ConfigError("cavity needs omega or the (eta, gamma_over_delta) pair")


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SqueezingPoint:
    """One sweep sample: shearing, squeezing, squeezed variance, contrast."""

    mu: float
    xi: float
    xi_dB: float
    variance: float
    contrast: float
    model_tag: str


def _curve_tag(curve: dict) -> str:
    if "label" in curve:
        return str(curve["label"])
    parts = [curve["model"]]
    if "eps" in curve:
        parts.append(f"eps={curve['eps']}")
    if "eta" in curve:
        parts.append(f"eta={curve['eta']}")
    if "scheme" in curve:
        parts.append(curve["scheme"]["type"])
    return " ".join(parts)


def _sweep_row(S, mu, curve, seed, trials):
    model = curve["model"]
    contrast = 1.0
    if model == "kitagawa-exact":
        mom = models.kitagawa_moments(S, float(curve.get("rho", 0.0)), mu)
    elif model == "gaussian":
        mom = models.gaussian_moments(S, mu, float(curve["eps"]))
    elif model == "scattering":
        eta = _parse_eta(curve.get("eta"))
        mom, factors = models.scattering_moments(S, mu, float(curve["eps"]), eta)
        contrast = factors.contrast
    elif model == "mc":
        phi = float(curve["phi"])
        n_mean = mu / (2.0 * phi * phi)
        scheme = _parse_scheme(curve["scheme"], n_mean=n_mean)
        result = mc_moments(S, scheme, phi, McConfig(trials=trials, master_seed=seed))
        mom = result.moments
    else:
        raise ConfigError(f"unknown sweep model {model!r}")
    xi = squeezing_param(mom, S)
    return SqueezingPoint(
        mu=mu,
        xi=xi,
        xi_dB=xi_to_db(xi),
        variance=min_transverse_variance(mom),
        contrast=contrast,
        model_tag=_curve_tag(curve),
    )


def cmd_sweep(config: dict) -> list:
    try:
        S = float(config["S"])
        grid = _mu_grid(config["mu_grid"])
        curves = config["curves"]
    except KeyError as exc:
        raise ConfigError(f"sweep config missing {exc}") from exc
    if not curves:
        raise ConfigError("sweep needs at least one curve")
    seed = int(config.get("seed", 20260809))
    trials = int(config.get("trials", 1000))

    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        for curve in curves:
            # a curve may restrict its grid, e.g. to stay inside the
            # leading-order validity r = mu/(4 eta) of the scattering model
            curve_grid = _mu_grid(curve["mu_grid"]) if "mu_grid" in curve else grid
            for mu in curve_grid:
                rows.append(_sweep_row(S, mu, curve, seed, int(curve.get("trials", trials))))
    return rows


# ---------------------------------------------------------------------------
# optimize
# ---------------------------------------------------------------------------

def cmd_optimize(config: dict) -> dict:
    try:
        S = float(config["S"])
        eps = float(config["eps"])
    except KeyError as exc:
        raise ConfigError(f"optimize config missing {exc}") from exc
    eta = _parse_eta(config.get("eta", "inf"))
    window = config.get("mu_window")
    if window is not None:
        window = (float(window[0]), float(window[1]))
        if not (0 < window[0] < window[1]):
            raise ConfigError(f"bad mu window {window!r}")
    mu_opt, xi_opt = models.optimal_squeezing(S, eps, eta, mu_window=window)
    mu_ast, xi_ast = models.leading_order_optimum(S, eps, eta)
    return {
        "mu_opt": mu_opt,
        "xi_opt": xi_opt,
        "xi_opt_dB": xi_to_db(xi_opt),
        "asymptotic_mu": mu_ast,
        "asymptotic_xi": xi_ast,
    }


# ---------------------------------------------------------------------------
# scheme-eval
# ---------------------------------------------------------------------------

def cmd_scheme_eval(config: dict) -> dict:
    try:
        scheme = _parse_scheme(config["scheme"])
    except KeyError as exc:
        raise ConfigError(f"scheme-eval config missing {exc}") from exc
    out = {"nu": schemes.shot_noise_fraction(scheme)}

    s_opt = None
    if isinstance(scheme, schemes.SqueezedInput):
        s_best, nu_min = schemes.optimal_squeezing_s(2.0 * scheme.n_mean_per_pulse)
        s_opt = {"s_opt": s_best, "nu_min": nu_min}
    out["s_opt"] = s_opt

    comparison = None
    if "comparison" in config:
        node = config["comparison"]
        try:
            comparison = schemes.measurement_comparison(
                float(node["S"]), float(node["mu"]), float(node["quantum_efficiency"]))
        except KeyError as exc:
            raise ConfigError(f"comparison config missing {exc}") from exc
    out["comparison_table"] = comparison
    return out


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------

def _check(name, model_value, mc_value, std_error, tolerance):
    return {
        "name": name,
        "model_value": model_value,
        "mc_value": mc_value,
        "std_error": std_error,
        "tolerance": tolerance,
        "pass": bool(abs(mc_value - model_value) <= tolerance),
    }


def _validate_gaussian_suite(seed, trials, tol_factor, defaults):
    S = defaults.get("S", 500)
    n_mean = defaults.get("n_mean_per_pulse", 1.0e6)
    mu = defaults.get("mu", 8.0e-3)
    phi = math.sqrt(mu / (2.0 * n_mean))
    scheme = schemes.IndependentCoherent(n_mean_per_pulse=n_mean)
    result = mc_moments(S, scheme, phi, McConfig(trials=trials, master_seed=seed))
    model = models.gaussian_moments(S, mu, eps=1.0)

    checks = []
    for name in ("sx", "sy2", "syz"):
        model_v = getattr(model, name)
        mc_v = getattr(result.moments, name)
        err = getattr(result.std_errors, name)
        tol = max(0.02 * abs(model_v), 3.0 * err) * tol_factor
        checks.append(_check(f"gaussian.{name}", model_v, mc_v, err, tol))
    return checks


def _validate_trajectory_suite(seed, trials, tol_factor, defaults, threads):
    n_atoms = defaults.get("n_atoms", 10)
    mu = defaults.get("mu", 0.05)
    eta = defaults.get("eta", 0.5)
    steps = defaults.get("steps", 64)
    result = trajectory_scattering_sim(
        n_atoms, mu, eta, McConfig(trials=trials, master_seed=seed, steps=steps),
        threads=threads)
    S = 0.5 * n_atoms
    r = result.r
    contrast = math.exp(-2.0 * r)
    vprime = mu * mu * (1.0 - 2.0 * r / 3.0) * 0.5 * S
    scale = S * math.exp(-0.5 * vprime)
    finite_size = 2.0 / n_atoms

    checks = []
    err = result.std_errors.sx / scale
    checks.append(_check("trajectory.contrast", contrast, result.moments.sx / scale, err,
                         max(3.0 * err, finite_size * contrast) * tol_factor))
    err = result.std_errors.sz2
    checks.append(_check("trajectory.sz2", 0.25 * n_atoms, result.moments.sz2, err,
                         max(3.0 * err, finite_size * 0.25 * n_atoms) * tol_factor))
    syz_scale = S * S * mu * contrast * math.exp(-0.5 * vprime)
    err = result.std_errors.syz / syz_scale
    checks.append(_check("trajectory.syz_factor", 1.0 - r, result.moments.syz / syz_scale, err,
                         max(3.0 * err, finite_size * (1.0 - r)) * tol_factor))
    return checks


def cmd_validate(config: dict, threads=None) -> dict:
    suites = config.get("suites", ["gaussian-vs-mc", "scattering-vs-trajectory"])
    if isinstance(suites, str):
        suites = [suites]
    seed = int(config.get("seed", 20260809))
    tol_factor = float(config.get("tolerance_factor", 1.0))
    trials = config.get("trials", {})
    if not isinstance(trials, dict):
        trials = {"gaussian": int(trials), "trajectory": int(trials)}

    checks = []
    for suite in suites:
        if suite == "gaussian-vs-mc":
            checks += _validate_gaussian_suite(
                seed, int(trials.get("gaussian", 10000)), tol_factor,
                config.get("gaussian_defaults", {}))
        elif suite == "scattering-vs-trajectory":
            checks += _validate_trajectory_suite(
                seed, int(trials.get("trajectory", 20000)), tol_factor,
                config.get("trajectory_defaults", {}), threads)
        else:
            raise ConfigError(f"unknown validation suite {suite!r}")
    return {
        "suites": list(suites),
        "seed": seed,
        "tolerance_factor": tol_factor,
        "checks": checks,
        "all_pass": all(c["pass"] for c in checks),
    }


# ---------------------------------------------------------------------------
# fano
# ---------------------------------------------------------------------------

def cmd_fano(config: dict) -> list:
    cavity = _cavity_from_config(config)
    try:
        grid_node = config["sigma_over_kappa"]
        pairs = config["pairs"]
    except KeyError as exc:
        raise ConfigError(f"fano config missing {exc}") from exc
    if not pairs:
        raise ConfigError("fano needs at least one (m, m') pair")
    sigma_grid = _mu_grid(grid_node)
    shape = config.get("shape", "gaussian")
    center = float(config.get("center_detuning", 0.5 * cavity.kappa))

    rows = []
    for sigma_over_kappa in sigma_grid:
        pulse = PulseSpectrum(shape=shape, center_detuning=center,
                              bandwidth=sigma_over_kappa * cavity.kappa)
        for m, m_prime in pairs:
            fid = factorization_fidelity(cavity, pulse, float(m), float(m_prime))
            rows.append({
                "sigma_over_kappa": sigma_over_kappa,
                "m": m,
                "m_prime": m_prime,
                "fidelity": fid,
                "one_minus_F": 1.0 - fid,
            })
    return rows


# ---------------------------------------------------------------------------
# output plumbing
# ---------------------------------------------------------------------------

def _format_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _emit(result, fmt: str, out_path):
    if isinstance(result, list):  # table of rows
        rows = [asdict(r) if is_dataclass(r) else r for r in result]
        if fmt == "json":
            text = json.dumps(rows, indent=2) + "\n"
        else:
            columns = list(rows[0].keys())
            lines = [CSV_SCHEMA, ",".join(columns)]
            lines += [",".join(_format_cell(row[c]) for c in columns) for row in rows]
            text = "\n".join(lines) + "\n"
    else:
        if fmt == "csv":
            raise ConfigError("csv output is only available for table-producing commands")
        text = json.dumps(result, indent=2) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_config(path) -> dict:
    if path is None:
        raise ConfigError("--config is required")
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="squeezelab",
                                     description="cavity spin squeezing toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("sweep", "optimize", "scheme-eval", "validate", "fano"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--seed", type=int, default=None, help="override config seed")
        p.add_argument("--trials", type=int, default=None, help="override config trials")
        p.add_argument("--format", choices=("csv", "json"), default=None)
    return parser


_DEFAULT_FORMAT = {"sweep": "csv", "fano": "csv",
                   "optimize": "json", "scheme-eval": "json", "validate": "json"}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    fmt = args.format or _DEFAULT_FORMAT[args.command]
    try:
        config = _load_config(args.config)
        if args.seed is not None:
            config["seed"] = args.seed
        if args.trials is not None:
            config["trials"] = args.trials
        if args.command == "sweep":
            result = cmd_sweep(config)
        elif args.command == "optimize":
            result = cmd_optimize(config)
        elif args.command == "scheme-eval":
            result = cmd_scheme_eval(config)
        elif args.command == "validate":
            result = cmd_validate(config, threads=resolve_threads(None, 1 << 30))
        else:
            result = cmd_fano(config)
        _emit(result, fmt, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NonUnimodalError as exc:
        print(f"optimization ambiguity: {exc}", file=sys.stderr)
        return EXIT_AMBIGUOUS
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    if args.command == "validate" and not result["all_pass"]:
        return EXIT_FAILURE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
