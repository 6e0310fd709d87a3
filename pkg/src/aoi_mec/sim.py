"""Discrete-event simulation of the offloading network with AoI measurement.

Every queue is FCFS with an infinite buffer, so the event calendar
collapses to Lindley recursions: d_n = max(t_n, d_{n-1}) + s_n per
queue, with the transmit queue's departures feeding the edge queue.
The age-of-information sawtooth is integrated exactly from the task
records; a completion only resets the age when it carries a fresher
generation time than everything delivered before it (stale completions
contribute nothing).

Two interpretations of "splitting" are implemented. In replicate mode
every task is placed in the local queue and the transmit queue
simultaneously and completes when the slower branch delivers. In thin
mode each task is routed to exactly one branch (remote with probability
beta) and completes when that branch delivers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError, InsufficientSamplesError, StabilityError
from .rates import ServiceRates

__all__ = [
    "SimConfig",
    "TaskRecord",
    "SawtoothStats",
    "simulate_partial",
    "simulate_mm1",
    "simulate_tandem",
    "sawtooth_maoi",
    "empirical_conditionals",
    "dump_trace",
    "N_BATCHES",
]

# Batch count for the batch-means standard error of the empirical MAoI.
N_BATCHES = 32

# Substream indices so that each random purpose draws from its own
# counter-based stream; chunked or parallel generation of any one
# purpose cannot perturb the others.
_STREAM_ARRIVALS = 0
_STREAM_LOCAL = 1
_STREAM_TRANSMIT = 2
_STREAM_EDGE = 3
_STREAM_ROUTING = 4


@dataclass(frozen=True)
class SimConfig:
    """Settings for one simulation run.

    rates/xi/beta describe the operating point; split_mode selects the
    task-splitting interpretation (see module docstring).
    """

    rates: ServiceRates | None
    xi: float
    beta: float
    n_tasks: int = 100_000
    warmup_fraction: float = 0.1
    seed: int = 0
    split_mode: str = "replicate"

    def __post_init__(self):
        if self.n_tasks < 100:
            raise DomainError(f"n_tasks must be at least 100, got {self.n_tasks}")
        if not 0.0 <= self.warmup_fraction < 0.5:
            raise DomainError(
                f"warmup_fraction must lie in [0, 0.5), got {self.warmup_fraction}"
            )
        if self.split_mode not in ("replicate", "thin"):
            raise DomainError(
                f"split_mode must be 'replicate' or 'thin', got {self.split_mode!r}"
            )
        if self.xi <= 0:
            raise DomainError("xi must be positive")


@dataclass(frozen=True)
class TaskRecord:
    """Per-task timestamps; branch completions are None when the task
    never visited that branch (thin mode)."""

    gen_time: float
    local_done: float | None
    edge_done: float | None
    complete_time: float
    system_time_max: float
    interarrival: float


@dataclass(frozen=True)
class SawtoothStats:
    """Empirical MAoI with its exact sawtooth area and batch-means stderr."""

    maoi_hat: float
    area: float
    duration: float
    stderr: float
    empirical_conditionals: dict[str, float] = field(default_factory=dict)


def _stream(seed: int, stream: int) -> np.random.Generator:
    """Counter-derived substream keyed by (seed, purpose)."""
    return np.random.Generator(
        np.random.Philox(key=np.array([seed, stream], dtype=np.uint64))
    )


def _lindley(arrivals: np.ndarray, services: np.ndarray) -> np.ndarray:
    """FCFS single-server departure times: d_n = max(a_n, d_{n-1}) + s_n.

    Vectorised by unrolling the recursion: with S_n the running sum of
    services, d_n = S_n + max_{k<=n}(a_k - S_{k-1}).
    """
    cum = np.cumsum(services)
    return cum + np.maximum.accumulate(arrivals - (cum - services))


def _sawtooth_area(
    gen_times: np.ndarray, complete_times: np.ndarray
) -> tuple[float, float]:
    """Exact area under the AoI sawtooth and its observation span.

    The window runs from the first generation instant (age zero there) to
    the last completion. Between completions the age grows at unit rate
    above the freshest delivered generation time; a completion resets the
    baseline only if its generation time is fresher.
    """
    t0 = float(gen_times[0])
    order = np.argsort(complete_times, kind="stable")
    baseline = t0
    last = t0
    area = 0.0
    for k in order:
        c = float(complete_times[k])
        area += 0.5 * ((c - baseline) ** 2 - (last - baseline) ** 2)
        last = c
        g = float(gen_times[k])
        if g > baseline:
            baseline = g
    return area, last - t0


def sawtooth_maoi(records: Sequence[TaskRecord]) -> SawtoothStats:
    """Empirical MAoI of a task trace, with batch-means standard error.

    records must be sorted by gen_time. The standard error is computed
    over N_BATCHES contiguous batches of tasks (0 when there are too few
    tasks to fill the batches meaningfully).
    """
    if not records:
        raise DomainError("sawtooth_maoi requires at least one record")
    gen = np.array([r.gen_time for r in records])
    if np.any(np.diff(gen) < 0):
        raise DomainError("records must be sorted by gen_time")
    comp = np.array([r.complete_time for r in records])
    area, duration = _sawtooth_area(gen, comp)
    if duration <= 0:
        raise DomainError("degenerate observation window (single instant)")
    maoi = area / duration

    stderr = 0.0
    n = len(records)
    if n >= 2 * N_BATCHES:
        bounds = np.linspace(0, n, N_BATCHES + 1).astype(int)
        vals = []
        for lo, hi in zip(bounds[:-1], bounds[1:]):
            a, d = _sawtooth_area(gen[lo:hi], comp[lo:hi])
            if d > 0:
                vals.append(a / d)
        vals = np.asarray(vals)
        if vals.size >= 2:
            stderr = float(np.std(vals, ddof=1) / math.sqrt(vals.size))
    return SawtoothStats(maoi_hat=maoi, area=area, duration=duration, stderr=stderr)


def _records_from_arrays(
    gen: np.ndarray,
    inter: np.ndarray,
    local_done: np.ndarray | None,
    edge_done: np.ndarray | None,
    complete: np.ndarray,
) -> list[TaskRecord]:
    out = []
    for n in range(gen.shape[0]):
        ld = float(local_done[n]) if local_done is not None and not math.isnan(local_done[n]) else None
        ed = float(edge_done[n]) if edge_done is not None and not math.isnan(edge_done[n]) else None
        out.append(
            TaskRecord(
                gen_time=float(gen[n]),
                local_done=ld,
                edge_done=ed,
                complete_time=float(complete[n]),
                system_time_max=float(complete[n] - gen[n]),
                interarrival=float(inter[n]),
            )
        )
    return out


def _finish(records: list[TaskRecord], warmup_fraction: float) -> SawtoothStats:
    skip = int(len(records) * warmup_fraction)
    kept = records[skip:]
    stats = sawtooth_maoi(kept)
    return stats


def simulate_partial(cfg: SimConfig) -> tuple[list[TaskRecord], SawtoothStats]:
    """Simulate the partial-offloading network at cfg's operating point.

    Deterministic given cfg.seed. Returns the full task trace (including
    warmup) and the post-warmup sawtooth statistics.
    """
    if cfg.rates is None:
        raise DomainError("simulate_partial requires rates in the SimConfig")
    mu_l, mu_t, mu_e = cfg.rates.require_partial()
    xi, beta = cfg.xi, cfg.beta
    if (1.0 - beta) * xi >= mu_l:
        raise StabilityError("C2: (1-beta) xi < mu_l", (1.0 - beta) * xi / mu_l)
    if beta * xi >= mu_t:
        raise StabilityError("C3: beta xi < mu_t", beta * xi / mu_t)
    if beta * xi >= mu_e:
        raise StabilityError("C4: beta xi < mu_e", beta * xi / mu_e)

    n = cfg.n_tasks
    inter = _stream(cfg.seed, _STREAM_ARRIVALS).exponential(1.0 / xi, n)
    gen = np.cumsum(inter)
    s_l = _stream(cfg.seed, _STREAM_LOCAL).exponential(1.0 / mu_l, n)
    s_t = _stream(cfg.seed, _STREAM_TRANSMIT).exponential(1.0 / mu_t, n)
    s_e = _stream(cfg.seed, _STREAM_EDGE).exponential(1.0 / mu_e, n)

    if cfg.split_mode == "replicate":
        local_done = _lindley(gen, s_l)
        transmit_done = _lindley(gen, s_t)
        edge_done = _lindley(transmit_done, s_e)
        complete = np.maximum(local_done, edge_done)
    else:
        remote = _stream(cfg.seed, _STREAM_ROUTING).random(n) < beta
        local_done = np.full(n, np.nan)
        edge_done = np.full(n, np.nan)
        loc = ~remote
        if np.any(loc):
            local_done[loc] = _lindley(gen[loc], s_l[loc])
        if np.any(remote):
            transmit_done = _lindley(gen[remote], s_t[remote])
            edge_done[remote] = _lindley(transmit_done, s_e[remote])
        complete = np.where(loc, local_done, edge_done)

    records = _records_from_arrays(gen, inter, local_done, edge_done, complete)
    return records, _finish(records, cfg.warmup_fraction)


def simulate_mm1(mu: float, xi: float, cfg: SimConfig) -> SawtoothStats:
    """Single FCFS M/M/1 queue with AoI sawtooth (the pure local scheme)."""
    if xi >= mu:
        raise StabilityError("xi < mu", xi / mu)
    n = cfg.n_tasks
    inter = _stream(cfg.seed, _STREAM_ARRIVALS).exponential(1.0 / xi, n)
    gen = np.cumsum(inter)
    s = _stream(cfg.seed, _STREAM_LOCAL).exponential(1.0 / mu, n)
    done = _lindley(gen, s)
    records = _records_from_arrays(gen, inter, done, None, done)
    stats = _finish(records, cfg.warmup_fraction)
    skip = int(n * cfg.warmup_fraction)
    # PASTA check hook: fraction of post-warmup arrivals finding the server busy
    busy = done[skip:-1] > gen[skip + 1 :]
    conds = dict(stats.empirical_conditionals)
    conds["p_arrival_finds_busy"] = float(np.mean(busy)) if busy.size else 0.0
    return SawtoothStats(
        maoi_hat=stats.maoi_hat,
        area=stats.area,
        duration=stats.duration,
        stderr=stats.stderr,
        empirical_conditionals=conds,
    )


def simulate_tandem(mu_t: float, mu_e: float, xi: float, cfg: SimConfig) -> SawtoothStats:
    """Transmit -> edge FCFS tandem with sawtooth on the final completion."""
    if xi >= mu_t:
        raise StabilityError("xi < mu_t", xi / mu_t)
    if xi >= mu_e:
        raise StabilityError("xi < mu_e", xi / mu_e)
    n = cfg.n_tasks
    inter = _stream(cfg.seed, _STREAM_ARRIVALS).exponential(1.0 / xi, n)
    gen = np.cumsum(inter)
    s_t = _stream(cfg.seed, _STREAM_TRANSMIT).exponential(1.0 / mu_t, n)
    s_e = _stream(cfg.seed, _STREAM_EDGE).exponential(1.0 / mu_e, n)
    transmit_done = _lindley(gen, s_t)
    edge_done = _lindley(transmit_done, s_e)
    records = _records_from_arrays(gen, inter, None, edge_done, edge_done)
    return _finish(records, cfg.warmup_fraction)


def empirical_conditionals(records: Sequence[TaskRecord]) -> dict[str, float]:
    """Empirical counterparts of the closed-form conditional quantities.

    Requires a replicate-mode partial trace (both branch completions
    present on every task) with at least 10^4 records.
    """
    if len(records) < 10_000:
        raise InsufficientSamplesError(
            f"need at least 10000 records, got {len(records)}"
        )
    if any(r.local_done is None or r.edge_done is None for r in records):
        raise DomainError(
            "empirical_conditionals requires a replicate-mode trace with "
            "both branch completions on every task"
        )
    gen = np.array([r.gen_time for r in records])
    inter = np.array([r.interarrival for r in records])
    local_done = np.array([r.local_done for r in records])
    edge_done = np.array([r.edge_done for r in records])

    t_local = local_done - gen
    t_remote = edge_done - gen
    local_dominates = t_local > t_remote

    # Local service times reconstructed from the FCFS recursion; the
    # previous local system time seen across one interarrival gap drives
    # the busy/idle split of the waiting-time analysis.
    start = np.maximum(gen, np.concatenate(([-np.inf], local_done[:-1])))
    s_local = local_done - start
    prev_t_local = t_local[:-1]
    busy = prev_t_local > inter[1:]
    y = t_remote - s_local  # remote system time minus local service

    a = inter
    out = {
        "p_local_dominates": float(np.mean(local_dominates)),
        "p_remote_dominates": float(np.mean(~local_dominates)),
        "p_prev_system_exceeds_gap": float(np.mean(busy)),
        "p_y_positive": float(np.mean(y > 0)),
        "e_interarrival": float(np.mean(a)),
        "e_interarrival_sq": float(np.mean(a**2)),
        "e_age_delay_local": float(np.mean(a[local_dominates] * t_local[local_dominates]))
        if np.any(local_dominates)
        else math.nan,
        "e_age_delay_remote": float(np.mean(a[~local_dominates] * t_remote[~local_dominates]))
        if np.any(~local_dominates)
        else math.nan,
        "e_service_given_local_dominates": float(np.mean(s_local[local_dominates]))
        if np.any(local_dominates)
        else math.nan,
        "e_gap_given_busy": float(np.mean(inter[1:][busy])) if np.any(busy) else math.nan,
        "e_gap_given_idle": float(np.mean(inter[1:][~busy])) if np.any(~busy) else math.nan,
    }
    return out


def dump_trace(records: Sequence[TaskRecord], path) -> None:
    """Write one line per task: gen_time,local_done,edge_done,complete_time,
    interarrival — seconds with 9 decimals, absent completions empty."""

    def fmt(v: float | None) -> str:
        return "" if v is None else f"{v:.9f}"

    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("gen_time,local_done,edge_done,complete_time,interarrival\n")
        for r in records:
            fh.write(
                f"{r.gen_time:.9f},{fmt(r.local_done)},{fmt(r.edge_done)},"
                f"{r.complete_time:.9f},{r.interarrival:.9f}\n"
            )
