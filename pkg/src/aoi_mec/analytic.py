"""Closed-form mean age of information (MAoI) for the three offloading schemes.

The partial-offloading network is one M/M/1 queue (local processor) in
parallel with a transmit -> edge M/M/1 tandem; the age resets when the
slower of the two branches delivers. The five published conditional-
expectation blocks are coded verbatim (``xi1`` .. ``xi5``); two of them
carry transcription defects (their pure-scheme limits disagree with the
corollaries), so the default assembly substitutes the repaired blocks
``xi1_corrected`` / ``xi2_corrected`` and the verbatim rendering stays
available as ``form="reference"``. The simulation module provides the
independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import SingularityError, StabilityError
from .rates import ServiceRates

__all__ = [
    "STABILITY_MARGIN",
    "SINGULAR_GAP",
    "Coefficients",
    "MaoiReport",
    "coefficients",
    "coefficients_from_mus",
    "prob_local_dominates",
    "prob_remote_dominates",
    "xi1",
    "xi2",
    "xi3",
    "xi4",
    "xi5",
    "xi1_corrected",
    "xi2_corrected",
    "maoi_partial",
    "maoi_local",
    "maoi_remote",
    "appendix_oracles",
]

# Loads are capped at 1 - STABILITY_MARGIN so every denominator below
# stays bounded away from zero; equality in the stability constraints
# would make the MAoI infinite.
STABILITY_MARGIN = 1e-6

# Relative gap below which mu_t ~ mu_e is treated as the (removable but
# unpublished) singularity of the tandem convolution.
SINGULAR_GAP = 1e-9


@dataclass(frozen=True)
class Coefficients:
    """Shorthand quantities of the closed-form MAoI.

    chi_* are the per-branch system-time rates (service minus thinned
    arrival rate), omega_* and Omega_* the compound denominators, eta the
    tandem convolution coefficient, rho_l the local utilisation.
    """

    mu_l: float
    mu_t: float
    mu_e: float
    xi: float
    beta: float
    omega_t: float
    omega_e: float
    chi_l: float
    chi_t: float
    chi_e: float
    gamma: float
    omega_lt: float
    omega_le: float
    omega_te: float
    eta: float
    rho_l: float


def _check_stability(mu_l: float, mu_t: float, mu_e: float, xi: float, beta: float):
    cap = 1.0 - STABILITY_MARGIN
    if (1.0 - beta) * xi > cap * mu_l:
        raise StabilityError("C2: (1-beta) xi <= mu_l", (1.0 - beta) * xi / mu_l)
    if beta * xi > cap * mu_t:
        raise StabilityError("C3: beta xi <= mu_t", beta * xi / mu_t)
    if beta * xi > cap * mu_e:
        raise StabilityError("C4: beta xi <= mu_e", beta * xi / mu_e)


def coefficients(rates: ServiceRates, xi: float, beta: float) -> Coefficients:
    """Compute every shorthand quantity, enforcing stability and the
    mu_t != mu_e singular gap."""
    if not 0.0 < beta < 1.0:
        raise StabilityError("C1: 0 < beta < 1 (strictly partial)", beta)
    mu_l, mu_t, mu_e = rates.require_partial()
    return coefficients_from_mus(mu_l, mu_t, mu_e, xi, beta)


def coefficients_from_mus(
    mu_l: float, mu_t: float, mu_e: float, xi: float, beta: float
) -> Coefficients:
    """Same as ``coefficients`` but from bare service rates."""
    _check_stability(mu_l, mu_t, mu_e, xi, beta)
    if abs(mu_t - mu_e) < SINGULAR_GAP * max(mu_t, mu_e):
        raise SingularityError(
            f"mu_t = {mu_t} and mu_e = {mu_e} coincide; the tandem "
            "convolution coefficient diverges (perturb one rate)"
        )
    chi_t = mu_t - beta * xi
    chi_e = mu_e - beta * xi
    return Coefficients(
        mu_l=mu_l,
        mu_t=mu_t,
        mu_e=mu_e,
        xi=xi,
        beta=beta,
        omega_t=mu_l + mu_t - xi,
        omega_e=mu_l + mu_e - xi,
        chi_l=mu_l - (1.0 - beta) * xi,
        chi_t=chi_t,
        chi_e=chi_e,
        gamma=mu_l + mu_t + mu_e - xi,
        omega_lt=mu_l + mu_t - beta * xi,
        omega_le=mu_l + mu_e - beta * xi,
        omega_te=mu_t + mu_e - beta * xi,
        eta=chi_t * chi_e / (mu_e - mu_t),
        rho_l=(1.0 - beta) * xi / mu_l,
    )


def prob_local_dominates(c: Coefficients) -> float:
    """P(local branch finishes last) = chi_t chi_e / (omega_t omega_e)."""
    return c.chi_t * c.chi_e / (c.omega_t * c.omega_e)


def prob_remote_dominates(c: Coefficients) -> float:
    """Complement of ``prob_local_dominates``, in factored form.

    The identity omega_t omega_e - chi_t chi_e =
    chi_l (mu_l + mu_t + mu_e - (1 + beta) xi) is exact, so the two
    probabilities sum to one at machine precision.
    """
    return (
        c.chi_l
        * (c.mu_l + c.mu_t + c.mu_e - (1.0 + c.beta) * c.xi)
        / (c.omega_t * c.omega_e)
    )


def xi1(c: Coefficients) -> float:
    """First conditional-expectation block (local branch dominating)."""
    inner_den = c.omega_le * c.omega_e - c.omega_lt * c.omega_t
    if abs(inner_den) < SINGULAR_GAP * (c.omega_le * c.omega_e + c.omega_lt * c.omega_t):
        raise SingularityError(
            "Omega_le omega_e = Omega_lt omega_t: inner denominator of the "
            "first block vanishes"
        )
    one_minus_b2 = (1.0 - c.beta) ** 2
    term1 = 1.0 / (c.mu_l * c.xi)
    term2 = c.chi_l * (c.omega_lt + c.omega_e) / (c.mu_l * c.xi * c.omega_lt * c.omega_le)
    bracket = (c.omega_lt + c.omega_le - c.mu_l) / inner_den * (
        c.omega_le * c.omega_e / c.omega_t - c.omega_lt * c.omega_t / c.omega_e
    ) + (3.0 * c.mu_t - 2.0 * c.beta * c.xi) / c.chi_l * (
        c.chi_t * c.chi_e / c.mu_l + c.omega_lt + c.omega_le - c.mu_l
    )
    term3 = one_minus_b2 * c.xi / (c.mu_l * c.omega_lt * c.omega_le) * bracket
    term4 = -2.0 * one_minus_b2 / c.mu_l**3
    return term1 + term2 + term3 + term4


def xi2(c: Coefficients) -> float:
    """Second block: transmit-queue part of the remote branch."""
    term1 = 1.0 / (c.mu_t * c.xi)
    term2 = c.chi_t * c.chi_e / (
        c.mu_t * c.xi * c.omega_lt * (c.omega_le + c.omega_t - c.mu_l)
    )
    term3 = (
        c.beta**2
        * c.xi
        / c.mu_t
        * (
            (3.0 * c.mu_t - 2.0 * c.beta * c.xi) / (c.mu_t * c.chi_t)
            + c.chi_e / (c.omega_t * c.omega_e * c.omega_lt)
        )
    )
    term4 = -2.0 * c.beta**2 * c.xi / c.mu_t**3
    return term1 + term2 + term3 + term4


def xi3(c: Coefficients) -> float:
    """Third block: edge service part of the remote branch."""
    return 1.0 / (c.mu_e * c.xi) + c.chi_t / (c.xi * c.omega_le * c.gamma)


def xi4(c: Coefficients) -> float:
    """Fourth block: edge waiting time, transmit-queue-busy case."""
    return (
        c.mu_e
        * c.chi_t
        / (c.mu_t * c.omega_t * c.omega_le)
        * (1.0 / c.chi_e + 1.0 / c.omega_e + 1.0 / c.gamma)
        - 1.0 / (c.mu_t * c.omega_te)
        + c.chi_l
        * c.gamma
        * (c.mu_t + 2.0 * c.mu_e - 2.0 * c.beta * c.xi)
        / (c.mu_t * c.omega_t * c.chi_e * c.omega_te * c.omega_le)
    )


def xi5(c: Coefficients) -> float:
    """Fifth block: edge waiting time, transmit-queue-idle case."""
    a = c.chi_l + c.mu_t
    b = c.chi_l + c.mu_e
    bracket = (
        1.0 / c.chi_e
        - 1.0 / c.omega_te
        + c.mu_t * c.mu_e / (a * b) * (1.0 / c.omega_t + 1.0 / c.gamma)
        + c.chi_l
        * (c.chi_l + c.mu_t + c.mu_e)
        / (a * b)
        * (c.mu_e / (c.gamma * (c.gamma + c.mu_e)) + 1.0 / c.omega_te)
        - c.mu_e
        * c.chi_e
        / (c.gamma * ((c.omega_e + c.mu_e) * c.gamma + c.mu_e * c.chi_e))
    )
    return (c.mu_t + c.mu_e) / (c.mu_t * c.mu_e) * bracket


def xi1_corrected(c: Coefficients) -> float:
    """Repaired first block: E[A T_local | local branch dominates].

    Same busy/idle decomposition as ``xi1`` but with the algebra fixed so
    that the no-offloading limit (beta -> 0 with the remote rates scaled
    as 1/beta) recovers the single-queue MAoI exactly. The pieces are the
    ``appendix_oracles`` scalars assembled without the extra 1/mu_l
    factors and sign slips of the published rendering.
    """
    inner_den = c.omega_le * c.omega_e - c.omega_lt * c.omega_t
    if abs(inner_den) < SINGULAR_GAP * (c.omega_le * c.omega_e + c.omega_lt * c.omega_t):
        raise SingularityError(
            "Omega_le omega_e = Omega_lt omega_t: inner denominator of the "
            "first block vanishes"
        )
    frac = (
        c.omega_le * c.omega_e / c.omega_t - c.omega_lt * c.omega_t / c.omega_e
    ) / inner_den
    p_y_pos = (
        c.mu_l
        * (c.mu_l + c.mu_t + c.mu_e - 2.0 * c.beta * c.xi)
        / (c.omega_lt * c.omega_le)
    )
    e_gap_prev = (c.mu_l + 2.0 * c.chi_l) / (c.mu_l**2 * c.chi_l)
    e_service = 1.0 / c.mu_l + c.chi_l * (c.omega_lt + c.omega_e) / (
        c.mu_l * c.omega_lt * c.omega_le
    )
    return (
        c.rho_l * (p_y_pos * frac + e_gap_prev - 2.0 / c.mu_l**2)
        + e_service / ((1.0 - c.beta) * c.xi)
    )


def xi2_corrected(c: Coefficients) -> float:
    """Repaired second block: E[A T_transmit 1{remote branch dominates}].

    Derived from the transform E[A T e^(-s T)] of the stationary M/M/1
    age/system-time pair (T = S + (T' - A)^+ with independent exponential
    S, T', A), tilted by the local system time to carry the conditioning:
    E[A T 1{T_l > T + T_e}] is subtracted from the unconditional product.
    Unlike the other blocks this one is NOT divided by the conditioning
    probability; the assembly weights it by beta xi directly.
    """
    a = c.beta * c.xi  # transmit arrival rate
    mu, chi, s = c.mu_t, c.chi_t, c.chi_l
    e_at = 1.0 / (a * mu) + a / (mu**2 * chi)
    e_at_tilted = mu / (mu + s) ** 2 * (
        1.0 / a - a / mu**2 + a * chi / ((s + chi) * mu**2)
    ) + mu / (mu + s) * a * chi / ((s + chi) ** 2 * mu**2)
    return e_at - c.chi_e / (c.chi_e + s) * e_at_tilted


@dataclass(frozen=True)
class MaoiReport:
    """MAoI of one scheme with every intermediate exposed."""

    scheme: str  # "local" | "remote" | "partial"
    maoi: float
    p_local_dominates: float
    p_remote_dominates: float
    xi_terms: tuple[float, float, float, float, float] | None = None
    coefficients: Coefficients | None = None


def maoi_partial(
    rates: ServiceRates, xi: float, beta: float, form: str = "corrected"
) -> MaoiReport:
    """Closed-form MAoI of the partial offloading scheme.

    form="corrected" (default) uses the repaired blocks, which reproduce
    the pure-scheme corollaries in both limits and track the simulation;
    form="reference" evaluates the five published blocks and their
    published weights verbatim.
    """
    c = coefficients(rates, xi, beta)
    return maoi_partial_from_coefficients(c, form=form)


def maoi_partial_from_coefficients(c: Coefficients, form: str = "corrected") -> MaoiReport:
    if form not in ("corrected", "reference"):
        raise ValueError(f"form must be 'corrected' or 'reference', got {form!r}")
    terms = (xi1(c), xi2(c), xi3(c), xi4(c), xi5(c))
    if form == "reference":
        remote_block = (
            terms[1]
            + terms[2]
            + c.beta**2 * c.xi / c.omega_te * terms[3]
            + c.beta**2 * c.xi * c.chi_t / (c.mu_e * c.omega_te) * terms[4]
        )
        maoi = (
            c.xi
            / (c.omega_t * c.omega_e)
            * (
                c.chi_t * c.chi_e * terms[0]
                + c.chi_l * (c.gamma + c.beta * c.xi) * remote_block
            )
            + 1.0 / c.xi
        )
    else:
        p_local = prob_local_dominates(c)
        p_remote = 1.0 - p_local
        p_edge_busy = c.beta * c.xi / c.omega_te
        p_edge_idle_wait = c.beta * c.xi * c.chi_t / (c.mu_e * c.omega_te)
        local_part = c.xi * (1.0 - c.beta) * p_local * xi1_corrected(c)
        # xi3 carries an absorbed beta factor in its published form.
        remote_part = c.xi * c.beta * (
            xi2_corrected(c)
            + p_remote
            * (terms[2] / c.beta + p_edge_busy * terms[3] + p_edge_idle_wait * terms[4])
        )
        maoi = local_part + remote_part + 1.0 / c.xi
    return MaoiReport(
        scheme="partial",
        maoi=maoi,
        p_local_dominates=prob_local_dominates(c),
        p_remote_dominates=prob_remote_dominates(c),
        xi_terms=terms,
        coefficients=c,
    )


def maoi_local(mu_l_pure: float, xi: float) -> MaoiReport:
    """MAoI of the pure local scheme (single M/M/1, FCFS)."""
    if xi >= (1.0 - STABILITY_MARGIN) * mu_l_pure:
        raise StabilityError("xi < mu_l", xi / mu_l_pure)
    maoi = (
        xi**2 / (mu_l_pure**2 * (mu_l_pure - xi)) + 1.0 / mu_l_pure + 1.0 / xi
    )
    return MaoiReport(
        scheme="local", maoi=maoi, p_local_dominates=1.0, p_remote_dominates=0.0
    )


def maoi_remote(mu_t_pure: float, mu_e_pure: float, xi: float) -> MaoiReport:
    """MAoI of the pure remote scheme (transmit -> edge tandem, FCFS)."""
    cap = 1.0 - STABILITY_MARGIN
    if xi >= cap * mu_t_pure:
        raise StabilityError("xi < mu_t", xi / mu_t_pure)
    if xi >= cap * mu_e_pure:
        raise StabilityError("xi < mu_e", xi / mu_e_pure)
    mt, me = mu_t_pure, mu_e_pure
    first = (
        xi**2
        * ((mt + me) * (mt + me - xi) - mt * me)
        / (mt * me**2 * (me - xi) * (mt + me - xi))
    )
    maoi = first + xi**2 / (mt**2 * (mt - xi)) + 1.0 / mt + 1.0 / xi + 1.0 / me
    return MaoiReport(
        scheme="remote", maoi=maoi, p_local_dominates=0.0, p_remote_dominates=1.0
    )


def appendix_oracles(
    rates: ServiceRates, xi: float, beta: float
) -> dict[str, float | Callable[[np.ndarray], np.ndarray]]:
    """Intermediate closed forms of the derivation, each testable on its own.

    Scalar entries are probabilities / conditional expectations; the
    ``pdf_*`` entries are vectorised densities over time (or over the
    signed difference variables y and x).
    """
    c = coefficients(rates, xi, beta)

    def pdf_t_local(t):
        t = np.asarray(t, dtype=float)
        return np.where(t >= 0, c.chi_l * np.exp(-c.chi_l * t), 0.0)

    def pdf_t_remote(t):
        t = np.asarray(t, dtype=float)
        return np.where(
            t >= 0, c.eta * (np.exp(-c.chi_t * t) - np.exp(-c.chi_e * t)), 0.0
        )

    def pdf_y(y):
        # y = remote system time minus local service time
        y = np.asarray(y, dtype=float)
        pos = (
            np.exp(-c.chi_t * np.maximum(y, 0.0)) / c.omega_lt
            - np.exp(-c.chi_e * np.maximum(y, 0.0)) / c.omega_le
        )
        neg = (c.mu_e - c.mu_t) / (c.omega_lt * c.omega_le) * np.exp(
            c.mu_l * np.minimum(y, 0.0)
        )
        return c.mu_l * c.eta * np.where(y > 0, pos, neg)

    def pdf_x(x):
        # x = remote system time minus local waiting time
        x = np.asarray(x, dtype=float)
        pos = (
            c.omega_lt / c.omega_t * np.exp(-c.chi_t * np.maximum(x, 0.0))
            - c.omega_le / c.omega_e * np.exp(-c.chi_e * np.maximum(x, 0.0))
        )
        neg = (
            c.chi_l
            * (c.mu_e - c.mu_t)
            / (c.omega_t * c.omega_e)
            * np.exp(c.chi_l * np.minimum(x, 0.0))
        )
        return c.eta * c.rho_l * np.where(x > 0, pos, neg)

    return {
        "p_local_dominates": prob_local_dominates(c),
        "p_remote_dominates": prob_remote_dominates(c),
        "p_prev_system_exceeds_gap": c.rho_l,
        "p_y_positive": c.mu_l
        * (c.mu_l + c.mu_t + c.mu_e - 2.0 * c.beta * c.xi)
        / (c.omega_lt * c.omega_le),
        "e_service_given_local_dominates": 1.0 / c.mu_l
        + c.chi_l * (c.omega_lt + c.omega_e) / (c.mu_l * c.omega_lt * c.omega_le),
        "e_gap_given_busy": 1.0 / c.mu_l,
        "e_gap_given_idle": (c.mu_l + (1.0 - c.beta) * c.xi)
        / (c.mu_l * (1.0 - c.beta) * c.xi),
        "e_gap_times_prev_system_given_busy_ypos": (c.mu_l + 2.0 * c.chi_l)
        / (c.mu_l**2 * c.chi_l)
        + (
            c.omega_le * c.omega_e / c.omega_t - c.omega_lt * c.omega_t / c.omega_e
        )
        / (c.omega_le * c.omega_e - c.omega_lt * c.omega_t),
        "e_gap_times_prev_system_given_busy": (c.mu_l + 2.0 * c.chi_l)
        / (c.mu_l**2 * c.chi_l),
        "pdf_t_local": pdf_t_local,
        "pdf_t_remote": pdf_t_remote,
        "pdf_y": pdf_y,
        "pdf_x": pdf_x,
    }
