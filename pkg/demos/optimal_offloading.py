"""Optimal offloading ratio as the network scales.

Sweeps the number of UEs per base station and reports the
age-minimizing offloading ratio at two task generation rates, then the
jointly optimized (ratio, rate) pair.
"""

import dataclasses

from aoi_mec.experiments import default_config, resolve_theta
from aoi_mec.optimizer import optimize_beta_given_xi, optimize_joint

cfg = default_config()
theta, source = resolve_theta(cfg)
print(f"transmission success probability: {theta:.4f} (source: {source})\n")

print("UEs   beta*(xi=0.2)  MAoI*    beta*(xi=0.5)  MAoI*")
for n in (10, 15, 20, 25, 30, 35, 40):
    plat = dataclasses.replace(cfg.plat, ues_per_bs=n)
    cells = [f"{n:<5}"]
    for xi in (0.2, 0.5):
        rep = optimize_beta_given_xi(xi, cfg.task, plat, cfg.radio.tau_linear, theta)
        cells.append(f"{rep.beta_star:10.3f}  {rep.maoi_star:8.3f}")
    print("  ".join(cells))

joint = optimize_joint(cfg.task, cfg.plat, cfg.radio.tau_linear, theta)
print(
    f"\njoint optimum at 20 UEs: beta*={joint.beta_star:.3f}, "
    f"xi*={joint.xi_star:.3f} tasks/s, MAoI*={joint.maoi_star:.3f} s "
    f"({joint.evaluations} objective evaluations)"
)
