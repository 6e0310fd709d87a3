"""Named experiments and the generic sweep behind the command-line tool.

Each experiment produces a list of result rows (ordered dicts of floats
and strings), writes them as comma-separated text with a fixed header,
and drops a JSON run manifest next to the data file. Output is
deterministic for a fixed config and seed (the manifest's wall-time and
timestamp fields excepted).
"""

from __future__ import annotations

import dataclasses
import json
import math
import time
from dataclasses import dataclass, field

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path

import numpy as np

from . import __version__
from .analytic import maoi_local, maoi_partial, maoi_remote
from .errors import ConfigError, DomainError
from .optimizer import OptConfig, optimize_beta_given_xi, optimize_joint, optimize_xi_given_beta
from .rates import PlatformProfile, TaskProfile, service_rates
from .sim import SimConfig, dump_trace, simulate_partial
from .stp import McStpConfig, RadioConfig, db_to_linear, stp_closed_form, stp_monte_carlo

__all__ = [
    "ExperimentConfig",
    "SweepAxis",
    "EXPERIMENTS",
    "load_config",
    "resolve_theta",
    "run_experiment",
]

SWEEPABLE = ("tau_db", "beta", "xi", "n_ues", "f_ue", "task_bits")


@dataclass(frozen=True)
class SweepAxis:
    variable: str
    start: float
    stop: float
    points: int
    scale: str = "linear"  # linear | dB (dB only affects labelling of tau)

    def __post_init__(self):
        if self.variable not in SWEEPABLE:
            raise ConfigError(
                f"sweep variable {self.variable!r} not sweepable; choose from {SWEEPABLE}"
            )
        if self.points < 1:
            raise ConfigError("sweep points must be >= 1")
        if self.scale not in ("linear", "dB"):
            raise ConfigError(f"sweep scale must be 'linear' or 'dB', got {self.scale!r}")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class ExperimentConfig:
    """Full experiment description; defaults reproduce the baseline
    operating point (tau = 0 dB, alpha 4, epsilon 0.5, 20 UEs, 50 MHz,
    2 Mbit tasks, 1 GHz UE / 45 GHz BS CPU, 900 cycles/bit, beta 0.4,
    xi 0.2, BS density 1e-4)."""

    radio: RadioConfig
    task: TaskProfile
    plat: PlatformProfile
    n_tasks: int = 100_000
    warmup_fraction: float = 0.1
    split_mode: str = "replicate"
    opt: OptConfig = field(default_factory=OptConfig)
    stp_source: str = "auto"  # auto | closed_form | monte_carlo
    stp_iterations: int = 20_000
    seed: int = 0
    sweep: SweepAxis | None = None
    out: str = "out"
    tau_db: float = 0.0

    def __post_init__(self):
        if self.stp_source not in ("auto", "closed_form", "monte_carlo"):
            raise ConfigError(
                f"stp_source must be auto, closed_form or monte_carlo, got {self.stp_source!r}"
            )


def default_config() -> ExperimentConfig:
    return ExperimentConfig(
        radio=RadioConfig(tau_linear=1.0, alpha=4.0, epsilon=0.5, lambda_b=1e-4),
        task=TaskProfile(mean_size_bits=2e6, cycles_per_bit=900.0, tgr=0.2, cor=0.4),
        plat=PlatformProfile(
            ue_cpu_hz=1e9, bs_cpu_hz=45e9, ues_per_bs=20, total_bandwidth_hz=50e6
        ),
    )


_SECTION_KEYS = {
    "radio": {"tau_db", "alpha", "epsilon", "lambda_b", "p_tx"},
    "task": {"mean_size_bits", "cycles_per_bit", "tgr", "cor"},
    "platform": {"ue_cpu_hz", "bs_cpu_hz", "ues_per_bs", "total_bandwidth_hz"},
    "sim": {"n_tasks", "warmup_fraction", "split_mode"},
    "opt": {
        "beta_bounds",
        "xi_bounds",
        "stability_margin",
        "coarse_grid",
        "tolerance",
        "max_refinements",
    },
    "sweep": {"variable", "start", "stop", "points", "scale"},
}
_TOP_KEYS = {"stp_source", "stp_iterations", "seed", "out"} | set(_SECTION_KEYS)


def _check_keys(section: str, given: dict, allowed: set):
    unknown = set(given) - allowed
    if unknown:
        raise ConfigError(
            f"unknown key(s) in [{section}]: {', '.join(sorted(unknown))}; "
            f"allowed: {', '.join(sorted(allowed))}"
        )


def load_config(path: str | Path | None) -> ExperimentConfig:
    """Parse a TOML experiment file over the defaults; unknown keys are
    rejected with the offending section and key named."""
    base = default_config()
    if path is None:
        return base
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config parse error in {path}: {exc}")
    _check_keys("top level", doc, _TOP_KEYS)

    tau_db = base.tau_db
    radio = base.radio
    if "radio" in doc:
        _check_keys("radio", doc["radio"], _SECTION_KEYS["radio"])
        r = doc["radio"]
        tau_db = float(r.get("tau_db", tau_db))
        try:
            radio = RadioConfig(
                tau_linear=db_to_linear(tau_db),
                alpha=float(r.get("alpha", radio.alpha)),
                epsilon=float(r.get("epsilon", radio.epsilon)),
                lambda_b=float(r.get("lambda_b", radio.lambda_b)),
                p_tx=float(r.get("p_tx", radio.p_tx)),
            )
        except DomainError as exc:
            raise ConfigError(f"[radio]: {exc}")
    task = base.task
    if "task" in doc:
        _check_keys("task", doc["task"], _SECTION_KEYS["task"])
        t = doc["task"]
        try:
            task = TaskProfile(
                mean_size_bits=float(t.get("mean_size_bits", task.mean_size_bits)),
                cycles_per_bit=float(t.get("cycles_per_bit", task.cycles_per_bit)),
                tgr=float(t.get("tgr", task.tgr)),
                cor=float(t.get("cor", task.cor)),
            )
        except DomainError as exc:
            raise ConfigError(f"[task]: {exc}")
    plat = base.plat
    if "platform" in doc:
        _check_keys("platform", doc["platform"], _SECTION_KEYS["platform"])
        p = doc["platform"]
        try:
            plat = PlatformProfile(
                ue_cpu_hz=float(p.get("ue_cpu_hz", plat.ue_cpu_hz)),
                bs_cpu_hz=float(p.get("bs_cpu_hz", plat.bs_cpu_hz)),
                ues_per_bs=int(p.get("ues_per_bs", plat.ues_per_bs)),
                total_bandwidth_hz=float(
                    p.get("total_bandwidth_hz", plat.total_bandwidth_hz)
                ),
            )
        except DomainError as exc:
            raise ConfigError(f"[platform]: {exc}")
    n_tasks, warmup, split = base.n_tasks, base.warmup_fraction, base.split_mode
    if "sim" in doc:
        _check_keys("sim", doc["sim"], _SECTION_KEYS["sim"])
        s = doc["sim"]
        n_tasks = int(s.get("n_tasks", n_tasks))
        warmup = float(s.get("warmup_fraction", warmup))
        split = str(s.get("split_mode", split))
    opt = base.opt
    if "opt" in doc:
        _check_keys("opt", doc["opt"], _SECTION_KEYS["opt"])
        o = doc["opt"]
        try:
            opt = OptConfig(
                beta_bounds=tuple(o.get("beta_bounds", opt.beta_bounds)),
                xi_bounds=tuple(o["xi_bounds"]) if "xi_bounds" in o else opt.xi_bounds,
                stability_margin=float(o.get("stability_margin", opt.stability_margin)),
                coarse_grid=int(o.get("coarse_grid", opt.coarse_grid)),
                tolerance=float(o.get("tolerance", opt.tolerance)),
                max_refinements=int(o.get("max_refinements", opt.max_refinements)),
            )
        except DomainError as exc:
            raise ConfigError(f"[opt]: {exc}")
    sweep = None
    if "sweep" in doc:
        _check_keys("sweep", doc["sweep"], _SECTION_KEYS["sweep"])
        w = doc["sweep"]
        for k in ("variable", "start", "stop", "points"):
            if k not in w:
                raise ConfigError(f"[sweep] missing required key {k!r}")
        sweep = SweepAxis(
            variable=str(w["variable"]),
            start=float(w["start"]),
            stop=float(w["stop"]),
            points=int(w["points"]),
            scale=str(w.get("scale", "linear")),
        )
    return ExperimentConfig(
        radio=radio,
        task=task,
        plat=plat,
        n_tasks=n_tasks,
        warmup_fraction=warmup,
        split_mode=split,
        opt=opt,
        stp_source=str(doc.get("stp_source", base.stp_source)),
        stp_iterations=int(doc.get("stp_iterations", base.stp_iterations)),
        seed=int(doc.get("seed", base.seed)),
        sweep=sweep,
        out=str(doc.get("out", base.out)),
        tau_db=tau_db,
    )


def resolve_theta(cfg: ExperimentConfig, radio: RadioConfig | None = None) -> tuple[float, str]:
    """Transmission success probability and the source actually used.

    'auto' takes the closed form when it is a valid probability (always
    the case for epsilon = 1) and falls back to Monte Carlo otherwise.
    """
    radio = radio or cfg.radio
    source = cfg.stp_source
    if source in ("auto", "closed_form"):
        res = stp_closed_form(radio)
        if res.valid:
            return res.theta, "closed_form"
        if source == "closed_form":
            raise DomainError(
                f"closed-form STP is not a valid probability here (theta={res.theta:.4g}); "
                "use stp_source = 'monte_carlo'"
            )
    mc = stp_monte_carlo(radio, McStpConfig(iterations=cfg.stp_iterations, seed=cfg.seed))
    return mc.theta_hat, "monte_carlo"


def _fmt(v) -> str:
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def write_rows(rows: list[dict], path: Path) -> None:
    """Comma-separated text, fixed header from the first row, 10
    significant digits, UTF-8, LF line endings."""
    if not rows:
        raise DomainError("no rows to write")
    cols = list(rows[0].keys())
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(cols) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(row.get(c)) for c in cols) + "\n")


def _write_manifest(path: Path, name: str, cfg: ExperimentConfig, theta: float,
                    theta_source: str, outputs: list[str], wall: float) -> None:
    doc = {
        "experiment": name,
        "seed": cfg.seed,
        "code_version": __version__,
        "theta": theta,
        "theta_source": theta_source,
        "wall_time_s": round(wall, 3),
        "outputs": outputs,
        "config": {
            "radio": dataclasses.asdict(cfg.radio),
            "task": dataclasses.asdict(cfg.task),
            "platform": dataclasses.asdict(cfg.plat),
            "sim": {
                "n_tasks": cfg.n_tasks,
                "warmup_fraction": cfg.warmup_fraction,
                "split_mode": cfg.split_mode,
            },
            "opt": dataclasses.asdict(cfg.opt),
            "stp_source": cfg.stp_source,
            "stp_iterations": cfg.stp_iterations,
            "tau_db": cfg.tau_db,
        },
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _scheme_maois(cfg: ExperimentConfig, theta: float, beta: float, xi: float):
    """Analytic MAoI of the three schemes at one operating point; NaN when
    a scheme is unstable there."""
    t = dataclasses.replace(cfg.task, cor=beta, tgr=xi)
    out = {}
    try:
        r0 = service_rates(dataclasses.replace(t, cor=0.0), cfg.plat, cfg.radio.tau_linear, theta)
        out["maoi_local"] = maoi_local(r0.mu_l, xi).maoi
    except Exception:
        out["maoi_local"] = math.nan
    try:
        r1 = service_rates(dataclasses.replace(t, cor=1.0), cfg.plat, cfg.radio.tau_linear, theta)
        out["maoi_remote"] = maoi_remote(r1.mu_t, r1.mu_e, xi).maoi
    except Exception:
        out["maoi_remote"] = math.nan
    try:
        if 0.0 < beta < 1.0:
            rp = service_rates(t, cfg.plat, cfg.radio.tau_linear, theta)
            out["maoi_partial_analytic"] = maoi_partial(rp, xi, beta).maoi
        else:
            out["maoi_partial_analytic"] = (
                out["maoi_local"] if beta == 0.0 else out["maoi_remote"]
            )
    except Exception:
        out["maoi_partial_analytic"] = math.nan
    return out


def _sim_point(cfg: ExperimentConfig, theta: float, beta: float, xi: float,
               seed: int, split_mode: str | None = None):
    t = dataclasses.replace(cfg.task, cor=beta, tgr=xi)
    r = service_rates(t, cfg.plat, cfg.radio.tau_linear, theta)
    sc = SimConfig(
        rates=r,
        xi=xi,
        beta=beta,
        n_tasks=cfg.n_tasks,
        warmup_fraction=cfg.warmup_fraction,
        seed=seed,
        split_mode=split_mode or cfg.split_mode,
    )
    _, stats = simulate_partial(sc)
    return stats


def _apply_sweep_value(cfg: ExperimentConfig, var: str, v: float) -> ExperimentConfig:
    if var == "tau_db":
        radio = dataclasses.replace(cfg.radio, tau_linear=db_to_linear(v))
        return dataclasses.replace(cfg, radio=radio, tau_db=v)
    if var == "beta":
        return dataclasses.replace(cfg, task=dataclasses.replace(cfg.task, cor=v))
    if var == "xi":
        return dataclasses.replace(cfg, task=dataclasses.replace(cfg.task, tgr=v))
    if var == "n_ues":
        return dataclasses.replace(
            cfg, plat=dataclasses.replace(cfg.plat, ues_per_bs=int(round(v)))
        )
    if var == "f_ue":
        return dataclasses.replace(
            cfg, plat=dataclasses.replace(cfg.plat, ue_cpu_hz=v)
        )
    if var == "task_bits":
        return dataclasses.replace(
            cfg, task=dataclasses.replace(cfg.task, mean_size_bits=v)
        )
    raise ConfigError(f"unsupported sweep variable {var!r}")


# ---------------------------------------------------------------------------
# experiments


def _exp_stp(cfg: ExperimentConfig) -> list[dict]:
    """Closed-form vs Monte Carlo STP over an SIR-threshold sweep."""
    axis = cfg.sweep or SweepAxis("tau_db", -5.0, 10.0, 7, scale="dB")
    rows = []
    for k, v in enumerate(axis.values()):
        radio = dataclasses.replace(cfg.radio, tau_linear=db_to_linear(v)) \
            if axis.variable == "tau_db" else cfg.radio
        closed = stp_closed_form(radio)
        mc = stp_monte_carlo(
            radio, McStpConfig(iterations=cfg.stp_iterations, seed=cfg.seed + k)
        )
        rows.append(
            {
                "tau_db": v,
                "sigma": closed.sigma,
                "theta_closed_form": closed.theta,
                "closed_form_valid": int(closed.valid),
                "theta_monte_carlo": mc.theta_hat,
                "mc_ci_halfwidth": mc.ci_halfwidth,
            }
        )
    return rows


def _exp_sim(cfg: ExperimentConfig, out_dir: Path) -> list[dict]:
    """One simulation of the configured point in both split modes, with
    the trace of the configured mode dumped alongside."""
    theta, src = resolve_theta(cfg)
    beta, xi = cfg.task.cor, cfg.task.tgr
    rows = []
    for mode in ("replicate", "thin"):
        t = dataclasses.replace(cfg.task, cor=beta, tgr=xi)
        r = service_rates(t, cfg.plat, cfg.radio.tau_linear, theta)
        sc = SimConfig(
            rates=r, xi=xi, beta=beta, n_tasks=cfg.n_tasks,
            warmup_fraction=cfg.warmup_fraction, seed=cfg.seed, split_mode=mode,
        )
        records, stats = simulate_partial(sc)
        if mode == cfg.split_mode:
            dump_trace(records, out_dir / "trace.csv")
        analytic = maoi_partial(r, xi, beta).maoi if 0 < beta < 1 else math.nan
        rows.append(
            {
                "split_mode": mode,
                "beta": beta,
                "xi": xi,
                "theta": theta,
                "maoi_partial_analytic": analytic,
                "maoi_partial_sim": stats.maoi_hat,
                "sim_stderr": stats.stderr,
                "rel_dev_vs_analytic": abs(stats.maoi_hat - analytic) / analytic
                if analytic == analytic
                else math.nan,
            }
        )
    return rows


def _exp_sweep(cfg: ExperimentConfig) -> list[dict]:
    """Generic sweep: per-scheme analytic MAoI plus a partial-scheme
    simulation at every point."""
    if cfg.sweep is None:
        raise ConfigError("the sweep experiment requires a [sweep] section")
    rows = []
    for k, v in enumerate(cfg.sweep.values()):
        pcfg = _apply_sweep_value(cfg, cfg.sweep.variable, float(v))
        theta, _ = resolve_theta(pcfg)
        beta, xi = pcfg.task.cor, pcfg.task.tgr
        row = {cfg.sweep.variable: float(v), "theta": theta}
        row.update(_scheme_maois(pcfg, theta, beta, xi))
        try:
            stats = _sim_point(pcfg, theta, beta, xi, seed=cfg.seed + k)
            row["maoi_partial_sim"] = stats.maoi_hat
            row["sim_stderr"] = stats.stderr
        except Exception:
            row["maoi_partial_sim"] = math.nan
            row["sim_stderr"] = math.nan
        rows.append(row)
    return rows


def _exp_fig3(cfg: ExperimentConfig) -> list[dict]:
    """MAoI of the three schemes versus the SIR threshold."""
    axis = cfg.sweep or SweepAxis("tau_db", -5.0, 15.0, 9, scale="dB")
    cfg = dataclasses.replace(cfg, sweep=axis)
    return _exp_sweep(cfg)


def _exp_fig4(cfg: ExperimentConfig) -> list[dict]:
    """MAoI versus the offloading ratio at the baseline point."""
    axis = cfg.sweep or SweepAxis("beta", 0.02, 0.98, 25)
    theta, _ = resolve_theta(cfg)
    xi = cfg.task.tgr
    rows = []
    for k, v in enumerate(axis.values()):
        beta = float(v)
        row = {"beta": beta}
        row.update(_scheme_maois(cfg, theta, beta, xi))
        try:
            stats = _sim_point(cfg, theta, beta, xi, seed=cfg.seed + k)
            row["maoi_partial_sim"] = stats.maoi_hat
            row["sim_stderr"] = stats.stderr
        except Exception:
            row["maoi_partial_sim"] = math.nan
            row["sim_stderr"] = math.nan
        rows.append(row)
    return rows


def _exp_fig5(cfg: ExperimentConfig) -> list[dict]:
    """Optimal offloading ratio versus the number of UEs, at two TGRs."""
    ns = [int(v) for v in (cfg.sweep.values() if cfg.sweep else (10, 15, 20, 25, 30, 35, 40))]
    rows = []
    for n in ns:
        row = {"n_ues": float(n)}
        pcfg = _apply_sweep_value(cfg, "n_ues", n)
        theta, _ = resolve_theta(pcfg)
        for xi in (0.2, 0.5):
            try:
                rep = optimize_beta_given_xi(
                    xi, pcfg.task, pcfg.plat, pcfg.radio.tau_linear, theta, cfg.opt
                )
                row[f"beta_star_xi_{xi}"] = rep.beta_star
                row[f"maoi_star_xi_{xi}"] = rep.maoi_star
            except Exception:
                row[f"beta_star_xi_{xi}"] = math.nan
                row[f"maoi_star_xi_{xi}"] = math.nan
        rows.append(row)
    return rows


def _exp_fig6(cfg: ExperimentConfig) -> list[dict]:
    """MAoI versus the task generation rate for fixed and optimal ratios."""
    axis = cfg.sweep or SweepAxis("xi", 0.05, 1.0, 20)
    theta, _ = resolve_theta(cfg)
    rows = []
    for v in axis.values():
        xi = float(v)
        row = {"xi": xi}
        for beta in (0.0, 0.3, 0.7, 1.0):
            vals = _scheme_maois(cfg, theta, beta, xi)
            if beta == 0.0:
                row["maoi_beta_0"] = vals["maoi_local"]
            elif beta == 1.0:
                row["maoi_beta_1"] = vals["maoi_remote"]
            else:
                row[f"maoi_beta_{beta}"] = vals["maoi_partial_analytic"]
        try:
            rep = optimize_beta_given_xi(
                xi, cfg.task, cfg.plat, cfg.radio.tau_linear, theta, cfg.opt
            )
            row["beta_star"] = rep.beta_star
            row["maoi_beta_star"] = rep.maoi_star
        except Exception:
            row["beta_star"] = math.nan
            row["maoi_beta_star"] = math.nan
        rows.append(row)
    return rows


def _exp_fig7(cfg: ExperimentConfig) -> list[dict]:
    """MAoI versus the number of UEs: pure schemes, fixed ratios, the
    per-N optimal ratio, and the jointly optimized point, with the
    reductions of the optimized partial scheme over the pure schemes."""
    ns = [int(v) for v in (cfg.sweep.values() if cfg.sweep else (10, 15, 20, 25, 30, 35, 40))]
    xi = cfg.task.tgr
    rows = []
    for n in ns:
        pcfg = _apply_sweep_value(cfg, "n_ues", n)
        theta, _ = resolve_theta(pcfg)
        row = {"n_ues": float(n), "theta": theta}
        base = _scheme_maois(pcfg, theta, 0.3, xi)
        row["maoi_local"] = base["maoi_local"]
        row["maoi_remote"] = base["maoi_remote"]
        row["maoi_beta_0.3"] = base["maoi_partial_analytic"]
        row["maoi_beta_0.7"] = _scheme_maois(pcfg, theta, 0.7, xi)["maoi_partial_analytic"]
        try:
            rep_b = optimize_beta_given_xi(
                xi, pcfg.task, pcfg.plat, pcfg.radio.tau_linear, theta, cfg.opt
            )
            row["beta_star"] = rep_b.beta_star
            row["maoi_beta_star"] = rep_b.maoi_star
        except Exception:
            row["beta_star"] = math.nan
            row["maoi_beta_star"] = math.nan
        try:
            rep_j = optimize_joint(
                pcfg.task, pcfg.plat, pcfg.radio.tau_linear, theta, cfg.opt
            )
            row["maoi_joint"] = rep_j.maoi_star
            row["beta_joint"] = rep_j.beta_star
            row["xi_joint"] = rep_j.xi_star
        except Exception:
            row["maoi_joint"] = row["beta_joint"] = row["xi_joint"] = math.nan
        if row["maoi_joint"] == row["maoi_joint"]:
            row["reduction_vs_local"] = 1.0 - row["maoi_joint"] / row["maoi_local"]
            row["reduction_vs_remote"] = 1.0 - row["maoi_joint"] / row["maoi_remote"]
        else:
            row["reduction_vs_local"] = row["reduction_vs_remote"] = math.nan
        rows.append(row)
    return rows


def _exp_fig8(cfg: ExperimentConfig) -> list[dict]:
    """MAoI versus the UE computing capability."""
    axis = cfg.sweep or SweepAxis("f_ue", 0.5e9, 3e9, 11)
    theta, _ = resolve_theta(cfg)
    xi = cfg.task.tgr
    rows = []
    for v in axis.values():
        pcfg = _apply_sweep_value(cfg, "f_ue", float(v))
        row = {"f_ue": float(v)}
        row.update(_scheme_maois(pcfg, theta, pcfg.task.cor, xi))
        try:
            rep = optimize_beta_given_xi(
                xi, pcfg.task, pcfg.plat, pcfg.radio.tau_linear, theta, cfg.opt
            )
            row["beta_star"] = rep.beta_star
            row["maoi_beta_star"] = rep.maoi_star
        except Exception:
            row["beta_star"] = math.nan
            row["maoi_beta_star"] = math.nan
        rows.append(row)
    return rows


def _exp_optimize(cfg: ExperimentConfig) -> list[dict]:
    theta, _ = resolve_theta(cfg)
    rep = optimize_joint(cfg.task, cfg.plat, cfg.radio.tau_linear, theta, cfg.opt)
    rep_b = optimize_beta_given_xi(
        cfg.task.tgr, cfg.task, cfg.plat, cfg.radio.tau_linear, theta, cfg.opt
    )
    rep_x = optimize_xi_given_beta(
        cfg.task.cor, cfg.task, cfg.plat, cfg.radio.tau_linear, theta, cfg.opt
    )
    rows = []
    for label, r in (("joint", rep), ("beta_given_xi", rep_b), ("xi_given_beta", rep_x)):
        rows.append(
            {
                "problem": label,
                "beta_star": r.beta_star,
                "xi_star": r.xi_star,
                "maoi_star": r.maoi_star,
                "evaluations": float(r.evaluations),
                "feasible_fraction": r.feasible_fraction,
                "boundary_flag": int(r.boundary_flag),
            }
        )
    return rows


EXPERIMENTS = (
    "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "sweep", "optimize", "stp", "sim",
)


def run_experiment(name: str, cfg: ExperimentConfig, out_dir: str | Path | None = None) -> list[dict]:
    """Run a named experiment, writing `<name>.csv` and `<name>_manifest.json`."""
    if name not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {name!r}; choose from {EXPERIMENTS}")
    out = Path(out_dir if out_dir is not None else cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    start = time.time()
    theta, theta_source = resolve_theta(cfg)
    if name == "stp":
        rows = _exp_stp(cfg)
    elif name == "sim":
        rows = _exp_sim(cfg, out)
    elif name == "sweep":
        rows = _exp_sweep(cfg)
    elif name == "fig3":
        rows = _exp_fig3(cfg)
    elif name == "fig4":
        rows = _exp_fig4(cfg)
    elif name == "fig5":
        rows = _exp_fig5(cfg)
    elif name == "fig6":
        rows = _exp_fig6(cfg)
    elif name == "fig7":
        rows = _exp_fig7(cfg)
    elif name == "fig8":
        rows = _exp_fig8(cfg)
    else:  # optimize
        rows = _exp_optimize(cfg)
    data_path = out / f"{name}.csv"
    write_rows(rows, data_path)
    manifest_path = out / f"{name}_manifest.json"
    _write_manifest(
        manifest_path, name, cfg, theta, theta_source,
        [data_path.name], time.time() - start,
    )
    return rows
