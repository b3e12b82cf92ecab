"""Deterministic Monte Carlo experiment engine.

A scenario is evaluated trial by trial: each trial derives its own seed from
``(base_seed, trial_index)``, samples one :class:`~irsrelay.channel.ChannelSet`,
runs the configured first-slot method plus the second-slot optimizer, and
reports per-slot and end-to-end rates.  Sweeps repeat this over an axis
(SNR, element count, antenna count, or relay position) and aggregate mean
rate and standard error per axis value and method.

Every result is a pure function of the configuration and trial index, so
tables are reproducible bit for bit regardless of worker count.
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .beamforming import (
    PhaseShiftVector,
    ais_max_rp,
    irses_max_rp_mrc,
    irses_partition,
    nsp_max_rp_mrc,
    second_slot_optimize,
    ur_update_ais,
)
from .channel import ChannelSet, Geometry, LinkBudget, sample_channels, stream_seed
from .errors import ConfigError
from .metrics import (
    RateResult,
    noise_variance_for_snr,
    rate_from_power,
    receive_power_ais,
    system_rate,
)

PROPOSED_METHODS = ("ais", "nsp", "irses")

FIXED_PHASE_METHODS = ("ais-fixed-phase", "nsp-fixed-phase", "irses-fixed-phase")

BASELINE_METHODS = (
    "baseline-single-antenna",
    "baseline-irs-only",
    "baseline-relay-only",
)

METHODS = PROPOSED_METHODS + FIXED_PHASE_METHODS + BASELINE_METHODS

SWEEP_AXES = ("snr_db", "n", "m", "distance_d")

#: substream index for the element-partition draw (0..5 are the channel links)
PARTITION_STREAM = 6


@dataclass(frozen=True)
class ScenarioConfig:
    """One complete experiment configuration.

    ``snr_db`` is the ratio of total transmit power to noise variance; the
    noise variance used by every solver is derived from it, see
    :func:`~irsrelay.metrics.noise_variance_for_snr`.
    """

    geometry: Geometry = Geometry()
    budget: LinkBudget = LinkBudget()
    m: int = 16
    n: int = 160
    method: str = "ais"
    snr_db: float = 30.0
    trials: int = 500
    base_seed: int = 0
    epsilon: float = 1e-4
    max_iter: int = 50
    nsp_mode: str = "effective"
    irses_mode: str = "idealized"
    combining: str = "snr-sum"

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ConfigError(f"m must be >= 1, got {self.m}")
        if self.n < 1:
            raise ConfigError(f"n must be >= 1, got {self.n}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.base_seed < 0:
            raise ConfigError(f"base_seed must be >= 0, got {self.base_seed}")
        if self.method not in METHODS:
            raise ConfigError(
                f"unknown method {self.method!r}; choose from {', '.join(METHODS)}"
            )
        if not self.epsilon > 0.0:
            raise ConfigError(f"epsilon must be positive, got {self.epsilon}")
        if self.max_iter < 1:
            raise ConfigError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.nsp_mode not in ("effective", "literal"):
            raise ConfigError(f"unknown nsp_mode {self.nsp_mode!r}")
        if self.irses_mode not in ("idealized", "full"):
            raise ConfigError(f"unknown irses_mode {self.irses_mode!r}")
        if self.combining not in ("snr-sum", "printed"):
            raise ConfigError(f"unknown combining {self.combining!r}")
        if self.method.startswith("nsp") and self.m < 2:
            raise ConfigError("nsp methods need m >= 2")
        if self.method.startswith("irses") and self.n % self.m != 0:
            raise ConfigError(
                f"irses methods need m to divide n, got m={self.m}, n={self.n}"
            )

    @property
    def noise_variance_watt(self) -> float:
        return noise_variance_for_snr(
            self.snr_db, self.budget.p_s_watt, self.budget.p_r_watt
        )


@dataclass(frozen=True)
class TrialRecord:
    """Outcome of one Monte Carlo trial, reproducible from (config, index)."""

    trial_index: int
    seed: int
    result: RateResult
    iterations: tuple[int, int]


def trial_seed(base_seed: int, trial_index: int) -> int:
    """Per-trial channel seed derived from the experiment base seed."""
    return stream_seed(base_seed, trial_index)


def _fixed_second_slot_rate(
    channels: ChannelSet, p_r_watt: float, noise_variance_watt: float
) -> float:
    # identity reflection phases; the transmit beamformer is still matched
    combined = channels.h_rd + channels.H_ri @ channels.h_id
    power = p_r_watt * float(np.linalg.norm(combined)) ** 2
    return rate_from_power(power, noise_variance_watt)


def _run_proposed(config: ScenarioConfig, trial_index: int) -> TrialRecord:
    seed = trial_seed(config.base_seed, trial_index)
    channels = sample_channels(config.geometry, config.budget, config.m, config.n, seed)
    noise = config.noise_variance_watt
    p_s = config.budget.p_s_watt
    p_r = config.budget.p_r_watt
    fixed = config.method.endswith("-fixed-phase")
    base = config.method.removesuffix("-fixed-phase")
    identity_phases = PhaseShiftVector(np.zeros(config.n))

    if base == "ais":
        if fixed:
            u_r = ur_update_ais(channels, identity_phases)
            power = receive_power_ais(
                channels, identity_phases.angles, u_r.weights, p_s
            )
            rate_r = rate_from_power(power, noise)
            iterations_1 = 1
        else:
            first = ais_max_rp(channels, p_s, noise, config.epsilon, config.max_iter)
            rate_r = first.rate_r
            iterations_1 = first.iterations
    elif base == "nsp":
        first = nsp_max_rp_mrc(
            channels,
            p_s,
            noise,
            config.epsilon,
            config.max_iter,
            mode=config.nsp_mode,
            combining=config.combining,
            phases=identity_phases if fixed else None,
        )
        rate_r = first.rate_r
        iterations_1 = first.iterations
    elif base == "irses":
        partition = irses_partition(
            config.n, config.m, stream_seed(seed, PARTITION_STREAM)
        )
        first = irses_max_rp_mrc(
            channels,
            p_s,
            noise,
            partition,
            interference_mode=config.irses_mode,
            combining=config.combining,
            phases=identity_phases if fixed else None,
        )
        rate_r = first.rate_r
        iterations_1 = first.iterations
    else:  # pragma: no cover - guarded by ScenarioConfig validation
        raise ConfigError(f"unknown method {config.method!r}")

    if fixed:
        rate_d = _fixed_second_slot_rate(channels, p_r, noise)
        iterations_2 = 1
    else:
        second = second_slot_optimize(
            channels, p_r, noise, config.epsilon, config.max_iter
        )
        rate_d = second.rate_d
        iterations_2 = second.iterations

    result = RateResult(
        method=config.method,
        rate_r=rate_r,
        rate_d=rate_d,
        rate_s=system_rate(rate_r, rate_d),
        iterations=(iterations_1, iterations_2),
    )
    return TrialRecord(trial_index, seed, result, (iterations_1, iterations_2))


def run_baseline_single_antenna(
    config: ScenarioConfig, trial_index: int
) -> TrialRecord:
    """Single-antenna relay reference: the full pipeline with m forced to 1."""
    reduced = dataclasses.replace(config, m=1, method="ais")
    record = _run_proposed(reduced, trial_index)
    result = dataclasses.replace(record.result, method=config.method)
    return dataclasses.replace(record, result=result)


def run_baseline_irs_only(config: ScenarioConfig, trial_index: int) -> TrialRecord:
    """Surface-only reference: one hop S -> IRS -> D, element-wise alignment.

    Single-hop transmission, so the reported system rate carries no 1/2
    pre-log factor and the per-hop fields all equal the single-hop rate.
    """
    seed = trial_seed(config.base_seed, trial_index)
    channels = sample_channels(config.geometry, config.budget, config.m, config.n, seed)
    amplitude = float(np.sum(np.abs(channels.h_id) * np.abs(channels.h_si)))
    rate = rate_from_power(
        config.budget.p_s_watt * amplitude**2, config.noise_variance_watt
    )
    result = RateResult(config.method, rate, rate, rate, (1, 1))
    return TrialRecord(trial_index, seed, result, (1, 1))


def run_baseline_relay_only(config: ScenarioConfig, trial_index: int) -> TrialRecord:
    """Relay-only reference: two-hop decode-and-forward without the surface."""
    seed = trial_seed(config.base_seed, trial_index)
    channels = sample_channels(config.geometry, config.budget, config.m, config.n, seed)
    noise = config.noise_variance_watt
    rate_r = rate_from_power(
        config.budget.p_s_watt * float(np.linalg.norm(channels.h_sr)) ** 2, noise
    )
    rate_d = rate_from_power(
        config.budget.p_r_watt * float(np.linalg.norm(channels.h_rd)) ** 2, noise
    )
    result = RateResult(
        config.method, rate_r, rate_d, system_rate(rate_r, rate_d), (1, 1)
    )
    return TrialRecord(trial_index, seed, result, (1, 1))


def run_trial(config: ScenarioConfig, trial_index: int) -> TrialRecord:
    """Evaluate one Monte Carlo trial of the configured method."""
    if trial_index < 0:
        raise ConfigError(f"trial_index must be >= 0, got {trial_index}")
    if config.method == "baseline-single-antenna":
        return run_baseline_single_antenna(config, trial_index)
    if config.method == "baseline-irs-only":
        return run_baseline_irs_only(config, trial_index)
    if config.method == "baseline-relay-only":
        return run_baseline_relay_only(config, trial_index)
    return _run_proposed(config, trial_index)


def collect_trials(
    config: ScenarioConfig, workers: int | None = None
) -> list[TrialRecord]:
    """Run all trials of a configuration, optionally in parallel.

    Results are ordered by trial index whatever the worker count, so every
    downstream aggregate is independent of scheduling.
    """
    indices = range(config.trials)
    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda i: run_trial(config, i), indices))
    return [run_trial(config, i) for i in indices]


@dataclass(frozen=True)
class SweepSpec:
    """A one-axis parameter sweep evaluated for one or more methods."""

    config: ScenarioConfig
    axis: str
    values: tuple[float, ...]
    methods: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.axis not in SWEEP_AXES:
            raise ConfigError(
                f"unknown axis {self.axis!r}; choose from {', '.join(SWEEP_AXES)}"
            )
        values = tuple(float(v) for v in self.values)
        if not values:
            raise ConfigError("sweep values must be non-empty")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ConfigError("sweep values must be strictly increasing")
        object.__setattr__(self, "values", values)
        methods = tuple(self.methods) or (self.config.method,)
        for method in methods:
            if method not in METHODS:
                raise ConfigError(f"unknown method {method!r}")
        object.__setattr__(self, "methods", methods)
        if self.axis in ("n", "m"):
            for v in values:
                if v != int(v) or v < 1:
                    raise ConfigError(
                        f"axis {self.axis!r} needs positive integers, got {v}"
                    )
        if self.axis == "distance_d":
            span = math.dist(self.config.geometry.pos_s, self.config.geometry.pos_d)
            for v in values:
                if not 0.0 < v < span:
                    raise ConfigError(
                        f"relay distance must lie strictly between 0 and {span}, "
                        f"got {v}"
                    )


def point_config(spec: SweepSpec, value: float, method: str) -> ScenarioConfig:
    """Materialize the configuration for one (axis value, method) grid point."""
    base = dataclasses.replace(spec.config, method=method)
    if spec.axis == "snr_db":
        return dataclasses.replace(base, snr_db=float(value))
    if spec.axis == "n":
        return dataclasses.replace(base, n=int(value))
    if spec.axis == "m":
        return dataclasses.replace(base, m=int(value))
    # distance axis: relay and surface move together parallel to the S-D
    # line, each keeping its own lateral offset
    g = spec.config.geometry
    moved = Geometry(
        pos_s=g.pos_s,
        pos_rs=(g.pos_s[0] + float(value), g.pos_rs[1]),
        pos_irs=(g.pos_s[0] + float(value), g.pos_irs[1]),
        pos_d=g.pos_d,
    )
    return dataclasses.replace(base, geometry=moved)


@dataclass(frozen=True)
class SweepPoint:
    """Aggregated rates for one (axis value, method) grid point."""

    axis_value: float
    method: str
    mean_rate_r: float
    mean_rate_d: float
    mean_rate_s: float
    stderr_rate_s: float
    trials: int


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    points: tuple[SweepPoint, ...]

    def point(self, axis_value: float, method: str) -> SweepPoint:
        for p in self.points:
            if p.axis_value == axis_value and p.method == method:
                return p
        raise KeyError((axis_value, method))


def summarize_records(records: list[TrialRecord]) -> tuple[float, float, float, float]:
    """Mean per-slot/system rates and the standard error of the system rate."""
    rates_r = np.array([r.result.rate_r for r in records])
    rates_d = np.array([r.result.rate_d for r in records])
    rates_s = np.array([r.result.rate_s for r in records])
    if rates_s.size > 1:
        stderr = float(np.std(rates_s, ddof=1) / math.sqrt(rates_s.size))
    else:
        stderr = 0.0
    return (
        float(np.mean(rates_r)),
        float(np.mean(rates_d)),
        float(np.mean(rates_s)),
        stderr,
    )


def sweep(spec: SweepSpec, workers: int | None = None) -> SweepResult:
    """Evaluate the whole sweep grid; deterministic for any worker count."""
    grid = [
        (value, method, point_config(spec, value, method))
        for value in spec.values
        for method in spec.methods
    ]
    points = []
    for value, method, cfg in grid:
        records = collect_trials(cfg, workers=workers)
        mean_r, mean_d, mean_s, stderr = summarize_records(records)
        points.append(
            SweepPoint(value, method, mean_r, mean_d, mean_s, stderr, cfg.trials)
        )
    return SweepResult(spec=spec, points=tuple(points))
