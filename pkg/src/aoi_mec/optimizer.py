"""Constrained minimisation of the partial-offloading MAoI over (beta, xi).

The objective is the closed-form MAoI with service rates recomputed at
every candidate offloading ratio (the rates scale with beta through the
task split). A coarse feasibility-masked grid locates the basin; per-axis
golden-section then refines, alternating between the two variables until
both moves fall below the tolerance. Everything is deterministic.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .analytic import maoi_local, maoi_partial, maoi_remote
from .errors import DomainError, InfeasibleError, SingularityError, StabilityError
from .rates import PlatformProfile, TaskProfile, service_rates

__all__ = [
    "OptConfig",
    "OptimumReport",
    "feasible",
    "objective",
    "optimize_joint",
    "optimize_beta_given_xi",
    "optimize_xi_given_beta",
]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class OptConfig:
    """Search settings; xi_bounds=None derives the upper bound from the
    stability constraints at each candidate beta."""

    beta_bounds: tuple[float, float] = (0.0, 1.0)
    xi_bounds: tuple[float, float] | None = None
    stability_margin: float = 1e-6
    coarse_grid: int = 64
    tolerance: float = 1e-5
    max_refinements: int = 60

    def __post_init__(self):
        lo, hi = self.beta_bounds
        if not (0.0 <= lo <= hi <= 1.0):
            raise DomainError(f"beta_bounds must be within [0, 1], got {self.beta_bounds}")
        if self.xi_bounds is not None and not (0.0 < self.xi_bounds[0] <= self.xi_bounds[1]):
            raise DomainError(f"xi_bounds must be a positive interval, got {self.xi_bounds}")
        if not 0.0 < self.stability_margin < 1.0:
            raise DomainError("stability_margin must lie in (0, 1)")
        if self.coarse_grid < 8:
            raise DomainError("coarse_grid must be at least 8")


@dataclass(frozen=True)
class OptimumReport:
    beta_star: float
    xi_star: float
    maoi_star: float
    evaluations: int
    feasible_fraction: float
    boundary_flag: bool


def feasible(
    beta: float,
    xi: float,
    task: TaskProfile,
    plat: PlatformProfile,
    tau_linear: float,
    theta: float,
    margin: float = 1e-6,
) -> bool:
    """True iff (beta, xi) satisfies the box and stability constraints
    with the rates recomputed at this beta."""
    if not 0.0 <= beta <= 1.0 or xi <= 0:
        return False
    probe = dataclasses.replace(task, cor=beta, tgr=xi)
    r = service_rates(probe, plat, tau_linear, theta)
    cap = 1.0 - margin
    if beta == 0.0:
        return xi <= cap * r.mu_l
    if beta == 1.0:
        return xi <= cap * min(r.mu_t, r.mu_e)
    return (
        (1.0 - beta) * xi <= cap * r.mu_l
        and beta * xi <= cap * r.mu_t
        and beta * xi <= cap * r.mu_e
    )


def objective(
    beta: float,
    xi: float,
    task: TaskProfile,
    plat: PlatformProfile,
    tau_linear: float,
    theta: float,
) -> float:
    """Closed-form MAoI at (beta, xi); +inf when infeasible.

    The mu_t = mu_e singular line is handled by a symmetric relative
    perturbation of the edge rate (average of the two sides).
    """
    if not 0.0 <= beta <= 1.0 or xi <= 0:
        return math.inf
    probe = dataclasses.replace(task, cor=beta, tgr=xi)
    try:
        r = service_rates(probe, plat, tau_linear, theta)
        if beta == 0.0:
            return maoi_local(r.mu_l, xi).maoi
        if beta == 1.0:
            return maoi_remote(r.mu_t, r.mu_e, xi).maoi
        return maoi_partial(r, xi, beta).maoi
    except StabilityError:
        return math.inf
    except SingularityError:
        vals = []
        for bump in (1.0 - 1e-6, 1.0 + 1e-6):
            rp = dataclasses.replace(r, mu_e=r.mu_e * bump)
            try:
                vals.append(maoi_partial(rp, xi, beta).maoi)
            except (StabilityError, SingularityError):
                pass
        if not vals:
            return math.inf
        return float(np.mean(vals))


class _Counter:
    def __init__(self):
        self.n = 0


def _golden(f, lo: float, hi: float, tol: float, max_iter: int = 200):
    """Golden-section minimisation on [lo, hi]; tolerant of +inf values."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    it = 0
    while (b - a) > tol and it < max_iter:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
        it += 1
    x = c if fc <= fd else d
    return x, min(fc, fd)


def _xi_cap(beta: float, task, plat, tau_linear, theta, margin) -> float:
    """Largest stable xi at this beta (minus the margin)."""
    probe = dataclasses.replace(task, cor=beta, tgr=1.0)
    r = service_rates(probe, plat, tau_linear, theta)
    cap = 1.0 - margin
    if beta == 0.0:
        return cap * r.mu_l
    if beta == 1.0:
        return cap * min(r.mu_t, r.mu_e)
    return cap * min(r.mu_l / (1.0 - beta), r.mu_t / beta, r.mu_e / beta)


def _grid_then_refine(
    task,
    plat,
    tau_linear,
    theta,
    cfg: OptConfig,
    beta_fixed: float | None,
    xi_fixed: float | None,
) -> OptimumReport:
    counter = _Counter()

    def obj(beta, xi):
        counter.n += 1
        return objective(beta, xi, task, plat, tau_linear, theta)

    margin = cfg.stability_margin
    b_lo, b_hi = cfg.beta_bounds
    if beta_fixed is not None:
        b_lo = b_hi = beta_fixed
        betas = np.array([beta_fixed])
    else:
        betas = np.linspace(b_lo, b_hi, cfg.coarse_grid)

    if xi_fixed is not None:
        xi_lo = xi_hi = xi_fixed
    elif cfg.xi_bounds is not None:
        xi_lo, xi_hi = cfg.xi_bounds
    else:
        caps = [_xi_cap(b, task, plat, tau_linear, theta, margin) for b in betas]
        xi_hi = max(caps)
        xi_lo = xi_hi * 1e-3

    best = (math.inf, math.nan, math.nan)
    n_feas = 0
    n_total = 0
    if xi_fixed is not None:
        xis = np.array([xi_fixed])
    else:
        xis = np.linspace(xi_lo, xi_hi, cfg.coarse_grid)
    for b in betas:
        for x in xis:
            n_total += 1
            if not feasible(b, x, task, plat, tau_linear, theta, margin):
                continue
            n_feas += 1
            v = obj(b, x)
            if v < best[0]:
                best = (v, float(b), float(x))
    if n_feas == 0:
        raise InfeasibleError("no feasible point on the coarse grid")

    f_star, b_star, x_star = best
    db = (betas[1] - betas[0]) if betas.size > 1 else 0.0
    dx = (xis[1] - xis[0]) if xis.size > 1 else 0.0

    for _ in range(cfg.max_refinements):
        moved = 0.0
        if beta_fixed is None and db > 0:
            lo = max(b_lo, b_star - db)
            hi = min(b_hi, b_star + db)
            b_new, f_new = _golden(lambda b: obj(b, x_star), lo, hi, cfg.tolerance)
            if f_new < f_star:
                moved = max(moved, abs(b_new - b_star))
                b_star, f_star = b_new, f_new
        if xi_fixed is None and dx > 0:
            lo = max(xi_lo, x_star - dx)
            hi = min(xi_hi, x_star + dx)
            x_new, f_new = _golden(lambda x: obj(b_star, x), lo, hi, cfg.tolerance)
            if f_new < f_star:
                moved = max(moved, abs(x_new - x_star))
                x_star, f_star = x_new, f_new
        if moved < cfg.tolerance:
            break

    edge = 10.0 * cfg.tolerance
    on_box = (
        (beta_fixed is None and (b_star - b_lo < edge or b_hi - b_star < edge))
        or (xi_fixed is None and (x_star - xi_lo < edge or xi_hi - x_star < edge))
    )
    cap_here = _xi_cap(b_star, task, plat, tau_linear, theta, margin)
    on_stability = xi_fixed is None and (cap_here - x_star) < edge * cap_here
    return OptimumReport(
        beta_star=float(b_star),
        xi_star=float(x_star),
        maoi_star=float(f_star),
        evaluations=counter.n,
        feasible_fraction=n_feas / max(n_total, 1),
        boundary_flag=bool(on_box or on_stability),
    )


def optimize_joint(
    task: TaskProfile,
    plat: PlatformProfile,
    tau_linear: float,
    theta: float,
    cfg: OptConfig = OptConfig(),
) -> OptimumReport:
    """Joint minimisation over (beta, xi)."""
    return _grid_then_refine(task, plat, tau_linear, theta, cfg, None, None)


def optimize_beta_given_xi(
    xi: float,
    task: TaskProfile,
    plat: PlatformProfile,
    tau_linear: float,
    theta: float,
    cfg: OptConfig = OptConfig(),
) -> OptimumReport:
    """Minimise over beta at fixed task generation rate."""
    return _grid_then_refine(task, plat, tau_linear, theta, cfg, None, xi)


def optimize_xi_given_beta(
    beta: float,
    task: TaskProfile,
    plat: PlatformProfile,
    tau_linear: float,
    theta: float,
    cfg: OptConfig = OptConfig(),
) -> OptimumReport:
    """Minimise over xi at fixed offloading ratio."""
    return _grid_then_refine(task, plat, tau_linear, theta, cfg, beta, None)
