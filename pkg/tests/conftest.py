"""Shared fixtures: the baseline operating point used throughout."""

import math

import pytest

from aoi_mec.rates import PlatformProfile, TaskProfile, service_rates

# Transmission success probability of the epsilon = 1 closed form at the
# baseline radio point (tau = 0 dB, alpha = 4): exp(-pi/4).
THETA_EPS1 = math.exp(-math.pi / 4.0)


@pytest.fixture(scope="session")
def plat():
    return PlatformProfile(
        ue_cpu_hz=1e9, bs_cpu_hz=45e9, ues_per_bs=20, total_bandwidth_hz=50e6
    )


@pytest.fixture(scope="session")
def task():
    return TaskProfile(mean_size_bits=2e6, cycles_per_bit=900.0, tgr=0.2, cor=0.4)


@pytest.fixture(scope="session")
def baseline_rates(task, plat):
    return service_rates(task, plat, tau_linear=1.0, theta=THETA_EPS1)
