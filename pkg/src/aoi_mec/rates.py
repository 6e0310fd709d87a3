"""Physical parameters -> Jackson-network service rates.

Units are fixed project-wide: bits, Hz (= CPU cycles per second),
seconds, tasks per second. Bandwidth and edge CPU are split equally
across the UEs of a base station (round-robin scheduling, one virtual
machine per UE).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = [
    "TaskProfile",
    "PlatformProfile",
    "ServiceRates",
    "local_delay",
    "offload_delay",
    "edge_delay",
    "service_rates",
]


@dataclass(frozen=True)
class TaskProfile:
    """Per-UE task statistics.

    mean_size_bits : mean task size, bits (task sizes are exponential)
    cycles_per_bit : CPU cycles needed per bit
    tgr            : task generation rate, tasks per second
    cor            : computing offloading ratio in [0, 1]
    """

    mean_size_bits: float
    cycles_per_bit: float
    tgr: float
    cor: float

    def __post_init__(self):
        if self.mean_size_bits <= 0 or self.cycles_per_bit <= 0 or self.tgr <= 0:
            raise DomainError("mean_size_bits, cycles_per_bit and tgr must be positive")
        if not 0.0 <= self.cor <= 1.0:
            raise DomainError(f"cor must lie in [0, 1], got {self.cor}")


@dataclass(frozen=True)
class PlatformProfile:
    """Compute and bandwidth resources of a UE/BS pair."""

    ue_cpu_hz: float
    bs_cpu_hz: float
    ues_per_bs: int
    total_bandwidth_hz: float

    def __post_init__(self):
        if (
            self.ue_cpu_hz <= 0
            or self.bs_cpu_hz <= 0
            or self.total_bandwidth_hz <= 0
            or self.ues_per_bs <= 0
        ):
            raise DomainError("all platform fields must be positive")
        if int(self.ues_per_bs) != self.ues_per_bs:
            raise DomainError("ues_per_bs must be an integer")


@dataclass(frozen=True)
class ServiceRates:
    """Delays and the three service rates of the partial-offloading network.

    g_delay, k_delay, h_delay are the mean local / offloading / edge
    delays for a whole task. For a strictly partial split (0 < cor < 1)
    the per-branch rates are mu_l = 1/((1-cor) g), mu_t = 1/(cor k),
    mu_e = 1/(cor h); the pure schemes use 1/g and 1/k, 1/h with the
    unused rates set to None.
    """

    g_delay: float
    k_delay: float
    h_delay: float
    mu_l: float | None
    mu_t: float | None
    mu_e: float | None
    theta_used: float

    def require_partial(self) -> tuple[float, float, float]:
        """Return (mu_l, mu_t, mu_e), failing if any branch is absent."""
        if self.mu_l is None or self.mu_t is None or self.mu_e is None:
            raise DomainError("a strictly partial configuration (0 < cor < 1) is required")
        return self.mu_l, self.mu_t, self.mu_e


def local_delay(task: TaskProfile, plat: PlatformProfile) -> float:
    """Mean local processing delay G = C L / f for a whole task."""
    return task.cycles_per_bit * task.mean_size_bits / plat.ue_cpu_hz


def offload_delay(
    task: TaskProfile, plat: PlatformProfile, tau_linear: float, theta: float
) -> float:
    """Mean uplink delay K = L / (B log2(1+tau) Theta) with B = B_tot / N.

    The caller supplies the success probability ``theta`` so either the
    closed-form or the Monte Carlo STP can drive the downstream figures.
    """
    if theta <= 0 or theta > 1:
        raise DomainError(f"theta must lie in (0, 1], got {theta}")
    spectral = math.log2(1.0 + tau_linear)
    if spectral <= 0:
        raise DomainError("log2(1 + tau) must be positive")
    bandwidth = plat.total_bandwidth_hz / plat.ues_per_bs
    return task.mean_size_bits / (bandwidth * spectral * theta)


def edge_delay(task: TaskProfile, plat: PlatformProfile) -> float:
    """Mean edge processing delay H = C L / g with g = f_B / N (equal split)."""
    g = plat.bs_cpu_hz / plat.ues_per_bs
    return task.cycles_per_bit * task.mean_size_bits / g


def service_rates(
    task: TaskProfile,
    plat: PlatformProfile,
    tau_linear: float,
    theta: float,
) -> ServiceRates:
    """Assemble the three service rates at the profile's offloading ratio.

    cor = 0 yields the pure local scheme (mu_t, mu_e absent); cor = 1 the
    pure remote scheme (mu_l absent).
    """
    g = local_delay(task, plat)
    k = offload_delay(task, plat, tau_linear, theta)
    h = edge_delay(task, plat)
    beta = task.cor
    if beta == 0.0:
        return ServiceRates(g, k, h, mu_l=1.0 / g, mu_t=None, mu_e=None, theta_used=theta)
    if beta == 1.0:
        return ServiceRates(g, k, h, mu_l=None, mu_t=1.0 / k, mu_e=1.0 / h, theta_used=theta)
    return ServiceRates(
        g,
        k,
        h,
        mu_l=1.0 / ((1.0 - beta) * g),
        mu_t=1.0 / (beta * k),
        mu_e=1.0 / (beta * h),
        theta_used=theta,
    )
