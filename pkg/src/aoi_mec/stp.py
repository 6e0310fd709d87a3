"""Radio layer: successful-transmission probability (STP) of the uplink.

Two routes are provided. ``stp_closed_form`` evaluates the published
closed form, which for power-control factors below one can exceed 1 at
realistic parameters; the result then carries ``valid=False`` instead of
being clamped. ``stp_monte_carlo`` estimates the same probability by
sampling SIR realisations over a Matern cluster layout and is the
authoritative value whenever the closed form is flagged invalid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .errors import DomainError

__all__ = [
    "RadioConfig",
    "StpResult",
    "McStpConfig",
    "McStpResult",
    "sigma_coefficient",
    "generalized_exp_integral",
    "stp_closed_form",
    "stp_closed_form_incomplete_gamma",
    "sample_sir",
    "stp_monte_carlo",
    "db_to_linear",
]


def db_to_linear(value_db: float) -> float:
    """Convert a dB quantity to its linear ratio."""
    return 10.0 ** (value_db / 10.0)


@dataclass(frozen=True)
class RadioConfig:
    """Uplink radio parameters.

    tau_linear : SIR threshold as a linear ratio (not dB)
    alpha      : pathloss exponent, must exceed 2
    epsilon    : fractional channel-inversion power-control factor in [0, 1]
    lambda_b   : base-station density, BS per square metre
    p_tx       : fixed transmit power in watts; it cancels in the SIR and
                 is kept only so the physical parameter set is complete
    """

    tau_linear: float
    alpha: float
    epsilon: float
    lambda_b: float
    p_tx: float = 1.0

    def __post_init__(self):
        if self.alpha <= 2:
            raise DomainError(f"alpha must exceed 2, got {self.alpha}")
        if not 0.0 <= self.epsilon <= 1.0:
            raise DomainError(f"epsilon must lie in [0, 1], got {self.epsilon}")
        if self.tau_linear <= 0:
            raise DomainError(f"tau_linear must be positive, got {self.tau_linear}")
        if self.lambda_b <= 0:
            raise DomainError(f"lambda_b must be positive, got {self.lambda_b}")


@dataclass(frozen=True)
class StpResult:
    """Closed-form STP evaluation with its validity flag.

    theta is reported even when it falls outside [0, 1] so the
    discrepancy between the printed formula and Monte Carlo can be
    studied; ``valid`` records whether it is a proper probability.
    """

    sigma: float
    theta: float
    branch: str  # "epsilon < 1" or "epsilon = 1"
    valid: bool


@dataclass(frozen=True)
class McStpConfig:
    """Monte Carlo settings for the SIR sampler."""

    iterations: int = 10_000
    window_radius_factor: float = 30.0
    seed: int = 0

    def __post_init__(self):
        if self.iterations < 1:
            raise DomainError("iterations must be at least 1")
        if self.window_radius_factor < 10:
            raise DomainError(
                "window_radius_factor below 10 risks severe edge effects"
            )


@dataclass(frozen=True)
class McStpResult:
    """Empirical STP with a 95% normal-approximation confidence half-width."""

    theta_hat: float
    ci_halfwidth: float
    samples: np.ndarray = field(repr=False)


def sigma_coefficient(cfg: RadioConfig) -> float:
    """Interference coefficient of the closed-form STP.

    sigma = 2 pi tau^(2/alpha) / (alpha (1 + epsilon) sin(2 pi / alpha)).
    """
    if cfg.alpha <= 2:
        raise DomainError("alpha must exceed 2")
    sin_term = math.sin(2.0 * math.pi / cfg.alpha)
    return (
        2.0
        * math.pi
        * cfg.tau_linear ** (2.0 / cfg.alpha)
        / (cfg.alpha * (1.0 + cfg.epsilon) * sin_term)
    )


def generalized_exp_integral(nu: float, x: float) -> float:
    """Generalised exponential integral E_nu(x) = int_1^inf e^(-x t) t^(-nu) dt.

    For nonpositive integer nu the integral has an elementary closed form
    obtained by repeated integration by parts; otherwise it is evaluated
    through the upper incomplete gamma function,
    E_nu(x) = x^(nu-1) Gamma(1-nu, x), valid here because nu < 1.
    """
    if x <= 0:
        raise DomainError(f"generalized_exp_integral requires x > 0, got {x}")
    if nu <= 0 and float(nu).is_integer():
        # int_1^inf t^m e^(-xt) dt = (m! / x^(m+1)) e^(-x) sum_{k<=m} x^k / k!
        m = int(round(-nu))
        acc = sum(x**k / math.factorial(k) for k in range(m + 1))
        return math.factorial(m) / x ** (m + 1) * math.exp(-x) * acc
    if nu >= 1:
        raise DomainError("nu >= 1 not supported (not needed for epsilon in [0,1))")
    a = 1.0 - nu  # > 0
    return x ** (nu - 1.0) * special.gammaincc(a, x) * special.gamma(a)


def stp_closed_form(cfg: RadioConfig) -> StpResult:
    """STP as printed: exp(-sigma) for epsilon = 1, otherwise
    E_{eps/(eps-1)}(sigma) + sigma^(1/(1-eps)) Gamma(1 + 1/(1-eps)).

    The second branch can exceed 1 (see ``valid``); it is reported as-is.
    """
    sigma = sigma_coefficient(cfg)
    if cfg.epsilon == 1.0:
        theta = math.exp(-sigma)
        branch = "epsilon = 1"
    else:
        nu = cfg.epsilon / (cfg.epsilon - 1.0)
        power = 1.0 / (1.0 - cfg.epsilon)
        theta = generalized_exp_integral(nu, sigma) + sigma**power * special.gamma(
            1.0 + power
        )
        branch = "epsilon < 1"
    return StpResult(
        sigma=sigma, theta=theta, branch=branch, valid=0.0 <= theta <= 1.0
    )


def stp_closed_form_incomplete_gamma(cfg: RadioConfig) -> StpResult:
    """Conjectured repair of the epsilon < 1 branch.

    Replaces the complete gamma factor by the lower incomplete gamma
    evaluated at sigma. This is NOT the published expression; it is kept
    only for comparison against the Monte Carlo estimate.
    """
    sigma = sigma_coefficient(cfg)
    if cfg.epsilon == 1.0:
        return stp_closed_form(cfg)
    nu = cfg.epsilon / (cfg.epsilon - 1.0)
    power = 1.0 / (1.0 - cfg.epsilon)
    a = 1.0 + power
    lower_gamma = special.gammainc(a, sigma) * special.gamma(a)
    theta = generalized_exp_integral(nu, sigma) + sigma**power * lower_gamma
    return StpResult(
        sigma=sigma,
        theta=theta,
        branch="epsilon < 1 (incomplete-gamma conjecture)",
        valid=0.0 <= theta <= 1.0,
    )


def _iteration_rng(seed: int, iteration: int) -> np.random.Generator:
    """Counter-derived substream: iteration k is reproducible in isolation."""
    bits = np.random.Philox(key=np.array([seed, iteration], dtype=np.uint64))
    return np.random.Generator(bits)


def sample_sir(
    cfg: RadioConfig, seed: int, iteration: int = 0, window_radius_factor: float = 30.0
) -> float:
    """One uplink SIR realisation at the typical BS (placed at the origin).

    Interfering BSs form a PPP of density lambda_b inside a disc of
    radius window_radius_factor / sqrt(pi lambda_b); each hosts exactly
    one interfering UE uniform in a disc of radius 1/sqrt(pi lambda_b)
    around it (orthogonal in-cell resources). The tagged UE is uniform in
    the same-size disc around the origin. Rayleigh fading, fractional
    channel inversion with exponent epsilon; the fixed power cancels.

    Returns +inf when the window happens to contain no interferer.
    """
    rng = _iteration_rng(seed, iteration)
    cell_radius = 1.0 / math.sqrt(math.pi * cfg.lambda_b)
    window_radius = window_radius_factor * cell_radius

    # tagged UE distance: uniform position in a disc of radius cell_radius
    r0 = cell_radius * math.sqrt(rng.random())
    h0 = rng.exponential()
    numerator = h0 * r0 ** (-cfg.alpha * (1.0 - cfg.epsilon))

    n_interferers = rng.poisson(cfg.lambda_b * math.pi * window_radius**2)
    if n_interferers == 0:
        return math.inf

    # interfering BS positions, uniform in the window disc
    bs_r = window_radius * np.sqrt(rng.random(n_interferers))
    bs_phi = rng.uniform(0.0, 2.0 * math.pi, n_interferers)
    bs_x = bs_r * np.cos(bs_phi)
    bs_y = bs_r * np.sin(bs_phi)

    # one interfering UE per BS, uniform in that BS's disc
    ue_r = cell_radius * np.sqrt(rng.random(n_interferers))
    ue_phi = rng.uniform(0.0, 2.0 * math.pi, n_interferers)
    ue_x = bs_x + ue_r * np.cos(ue_phi)
    ue_y = bs_y + ue_r * np.sin(ue_phi)

    d_i = np.hypot(ue_x, ue_y)  # interferer -> typical BS
    r_i = ue_r  # interferer -> its own BS
    h_i = rng.exponential(size=n_interferers)
    interference = float(np.sum(h_i * d_i ** (-cfg.alpha) * r_i ** (cfg.alpha * cfg.epsilon)))
    if interference == 0.0:
        return math.inf
    return numerator / interference


def stp_monte_carlo(cfg: RadioConfig, mc: McStpConfig) -> McStpResult:
    """Empirical P(SIR > tau) over independent network realisations.

    Deterministic for a fixed seed: iteration k always uses the substream
    keyed by (seed, k), so chunked/parallel evaluation gives the same
    estimate as a serial loop.
    """
    samples = np.empty(mc.iterations)
    for k in range(mc.iterations):
        samples[k] = sample_sir(cfg, mc.seed, k, mc.window_radius_factor)
    successes = samples > cfg.tau_linear
    theta_hat = float(np.mean(successes))
    stderr = math.sqrt(max(theta_hat * (1.0 - theta_hat), 0.0) / mc.iterations)
    return McStpResult(theta_hat=theta_hat, ci_halfwidth=1.96 * stderr, samples=samples)
