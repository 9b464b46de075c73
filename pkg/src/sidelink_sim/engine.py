"""Drop pipeline and sweep orchestration.

One drop: place vehicles, attach cells, size the offered traffic, pick
the MCS, allocate slots, then walk every transmitter computing link
budgets and its packet reception ratio against its in-range receivers.
A sweep runs the Cartesian product of inter-vehicle distances and
packet frequencies, each cell over all seeds, with per-cell random
streams derived counter-style from the master seed so that adding
sweep points never perturbs existing ones.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .channel import ChannelParams, DropChannel
from .errors import CapacityExceededError, ConfigError, SimulationError
from .geometry import ScenarioConfig, build_scenario
from .linkbudget import (RadioParams, dbm_to_mw, noise_power, received_power,
                         sinr_db_array)
from .mac import (MacConfig, McsEntry, McsTable, TrafficModel,
                  allocate_resources, bler, data_volume, default_mcs_table,
                  load_mcs_table, num_slots_per_period, required_se,
                  select_mcs)
from .metrics import (AggregateResult, MetricsConfig, PrrSample,
                      WarningCounters, aggregate)

THREADS_ENV_VAR = "SIDELINK_SIM_THREADS"


@dataclass(frozen=True)
class SimConfig:
    """Complete input of one simulation experiment."""

    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    channel: ChannelParams = field(default_factory=ChannelParams)
    radio: RadioParams = field(default_factory=RadioParams)
    traffic: TrafficModel = field(default_factory=TrafficModel)
    mac: MacConfig = field(default_factory=MacConfig)
    metrics: MetricsConfig = field(default_factory=MetricsConfig)
    master_seed: int = 0
    periods_per_drop: int = 10

    def __post_init__(self):
        if self.master_seed < 0:
            raise ConfigError("master_seed", "must be non-negative")
        if self.periods_per_drop < 1:
            raise ConfigError("periods_per_drop", "must be at least 1")

    @property
    def seeds(self) -> tuple:
        """Seed indices of the experiment, one drop per index per cell."""
        return tuple(range(self.metrics.num_seeds))


@dataclass(frozen=True)
class SweepSpec:
    """Cartesian sweep axes; rows are emitted ivd-major in given order."""

    ivd_values: tuple = (5.0, 10.0, 20.0, 40.0, 50.0, 80.0, 100.0)
    tx_frequency_values: tuple = (1.0, 2.0, 5.0, 10.0)

    def __post_init__(self):
        if len(self.ivd_values) == 0:
            raise ConfigError("ivd", "sweep needs at least one IVD value")
        if len(self.tx_frequency_values) == 0:
            raise ConfigError("tf", "sweep needs at least one frequency")


@dataclass(frozen=True)
class DropResult:
    """Everything produced by one seeded drop."""

    samples: tuple
    num_ues: int
    data_volume_bps: float
    required_se: float
    mcs: McsEntry
    num_slots: int
    warnings: WarningCounters


@dataclass(frozen=True)
class SweepResult:
    """One sweep cell: derived traffic columns plus aggregated PRR."""

    ivd_m: float
    tx_frequency_hz: float
    num_ues: Optional[int] = None
    data_volume_bps: Optional[float] = None
    mcs: Optional[McsEntry] = None
    prr: Optional[AggregateResult] = None
    error: Optional[str] = None

    @property
    def data_volume_mbps(self) -> Optional[float]:
        if self.data_volume_bps is None:
            return None
        return self.data_volume_bps / 1e6

    @property
    def mcs_se(self) -> Optional[float]:
        return None if self.mcs is None else self.mcs.spectral_efficiency


def mcs_table_for(config: SimConfig) -> McsTable:
    """The MCS table the config asks for: a CSV file verbatim, or the
    default CQI table calibrated with the configured margin and slope."""
    if config.mac.mcs_table_file:
        return load_mcs_table(config.mac.mcs_table_file)
    return default_mcs_table(config.mac.bler_margin_db,
                             config.mac.bler_slope_db)


def derive_seed(master_seed: int, ivd_index: int, tf_index: int,
                seed_index: int) -> np.random.SeedSequence:
    """Independent per-drop stream for one sweep cell and seed index."""
    return np.random.SeedSequence(
        entropy=master_seed, spawn_key=(ivd_index, tf_index, seed_index))


def run_drop(config: SimConfig, seed, mcs_table: Optional[McsTable] = None
             ) -> DropResult:
    """Simulate one static drop end to end.

    ``seed`` is anything numpy's default_rng accepts.  The random
    stream is consumed in a fixed order (lane offsets, slot draws if
    random allocation, shadowing field, bernoulli draws), so identical
    (config, seed) pairs give bit-identical results.
    """
    rng = np.random.default_rng(seed)
    table = mcs_table if mcs_table is not None else mcs_table_for(config)

    scenario = build_scenario(config.scenario, rng)
    vehicles = scenario.vehicles
    n = len(vehicles)

    volume = data_volume(config.traffic.packet_size_bytes, n,
                         config.traffic.tx_frequency_hz)
    se_req = required_se(volume, config.radio.bandwidth_hz)
    try:
        mcs = select_mcs(se_req, table)
        grid = allocate_resources(vehicles, mcs, config.traffic,
                                  config.radio.bandwidth_hz,
                                  config.mac.allocation_policy, rng)
    except CapacityExceededError as exc:
        raise CapacityExceededError(
            f"ivd={config.scenario.ivd_m:g} m, "
            f"tf={config.traffic.tx_frequency_hz:g} Hz: {exc}") from None
    chan = DropChannel(vehicles, config.scenario.ue_height_m,
                       config.channel, rng)
    noise_dbm = noise_power(config.radio.thermal_noise_dbm_hz,
                            config.radio.noise_figure_db,
                            config.radio.bandwidth_hz)

    slot_of = np.array([grid.assignment[v.id] for v in vehicles])
    members_by_slot = {}
    for i, s in enumerate(slot_of):
        members_by_slot.setdefault(int(s), []).append(i)

    bernoulli = config.metrics.prr_mode == "bernoulli"
    periods = config.periods_per_drop if bernoulli else 1
    threshold = config.metrics.bler_success_threshold
    count_hd = config.radio.prr_counts_halfduplex_as_loss
    warnings = WarningCounters()
    radio = config.radio

    samples = []
    for i, v in enumerate(vehicles):
        drow = chan.distance[i]
        in_range = drow <= config.scenario.comm_range_m
        in_range[i] = False
        rx_idx = np.nonzero(in_range)[0]

        cochannel = [j for j in members_by_slot[int(slot_of[i])] if j != i]
        if cochannel:
            hd_mask = np.isin(rx_idx, cochannel)
            num_skipped = int(np.count_nonzero(hd_mask))
            active = rx_idx[~hd_mask]
        else:
            num_skipped = 0
            active = rx_idx
        warnings.half_duplex_skips += num_skipped

        denom = len(active) + (num_skipped if count_hd else 0)
        if denom == 0:
            samples.append(PrrSample(tx_id=v.id, num_in_range=0,
                                     num_success=0, prr=None))
            continue

        successes = 0
        if len(active):
            rx_dbm = received_power(radio.tx_power_dbm, radio.tx_gain_dbi,
                                    radio.rx_gain_dbi,
                                    chan.attenuation_to(i, active))
            interference_mw = np.zeros(len(active))
            for j in cochannel:
                interference_mw += dbm_to_mw(received_power(
                    radio.tx_power_dbm, radio.tx_gain_dbi, radio.rx_gain_dbi,
                    chan.attenuation_to(j, active)))
            sinr = sinr_db_array(rx_dbm, interference_mw, noise_dbm)
            b = bler(sinr, mcs)
            if bernoulli:
                successes = int(rng.binomial(periods, 1.0 - b).sum())
            else:
                successes = int(np.count_nonzero(b < threshold))

        opportunities = denom * periods
        samples.append(PrrSample(tx_id=v.id, num_in_range=opportunities,
                                 num_success=successes,
                                 prr=successes / opportunities))
    warnings.clamped_distances += chan.num_clamped

    return DropResult(samples=tuple(samples), num_ues=n,
                      data_volume_bps=volume, required_se=se_req, mcs=mcs,
                      num_slots=grid.num_slots, warnings=warnings)


def _cell_config(config: SimConfig, ivd_m: float,
                 tx_frequency_hz: float) -> SimConfig:
    return replace(
        config,
        scenario=replace(config.scenario, ivd_m=ivd_m),
        traffic=replace(config.traffic, tx_frequency_hz=tx_frequency_hz))


def _cell_header(config: SimConfig, table: McsTable):
    """Seed-independent row fields (vehicle counts are offset-invariant).

    Returns (num_ues, data_volume_bps, mcs); raises CapacityExceededError
    when no MCS or slot grid can carry the offered load.
    """
    n = config.scenario.vehicles_per_lane * config.scenario.num_lanes
    volume = data_volume(config.traffic.packet_size_bytes, n,
                         config.traffic.tx_frequency_hz)
    mcs = select_mcs(required_se(volume, config.radio.bandwidth_hz), table)
    if num_slots_per_period(config.radio.bandwidth_hz,
                            config.traffic.period_s,
                            mcs.spectral_efficiency,
                            config.traffic.packet_bits) < 1:
        raise CapacityExceededError("no slot fits a packet in one period")
    return n, volume, mcs


def _drop_task(args) -> tuple:
    """Worker for one (cell, seed) task; module-level for pickling.

    Simulation errors are returned, not raised, so one bad cell cannot
    abort a whole sweep."""
    config, ivd_i, tf_i, seed_i, ivd, tf = args
    cell = _cell_config(config, ivd, tf)
    try:
        result = run_drop(cell, derive_seed(config.master_seed, ivd_i, tf_i,
                                            seed_i))
    except SimulationError as exc:
        return (ivd_i, tf_i, seed_i), exc
    return (ivd_i, tf_i, seed_i), result


def resolve_workers(max_workers: Optional[int] = None) -> int:
    """Worker process count: explicit argument, else the
    SIDELINK_SIM_THREADS environment variable (0 = one per CPU),
    else serial."""
    if max_workers is not None:
        if max_workers < 0:
            raise ConfigError("max_workers", "must be non-negative")
        return max_workers if max_workers > 0 else (os.cpu_count() or 1)
    env = os.environ.get(THREADS_ENV_VAR)
    if env is None or not env.strip():
        return 1
    try:
        value = int(env)
    except ValueError:
        raise ConfigError(THREADS_ENV_VAR,
                          f"must be an integer, got {env!r}") from None
    if value < 0:
        raise ConfigError(THREADS_ENV_VAR, "must be non-negative")
    return value if value > 0 else (os.cpu_count() or 1)


def run_sweep(config: SimConfig, sweep: Optional[SweepSpec] = None,
              max_workers: Optional[int] = None,
              progress=None) -> list:
    """Run every sweep cell over all seeds and aggregate.

    Cells that cannot carry their load are reported in-row (error
    ``capacity_exceeded``) and the sweep continues.  Drops may execute
    in parallel; results are merged by (ivd, tf, seed) key, so the
    output is identical for any worker count.
    """
    sweep = sweep if sweep is not None else SweepSpec()
    table = mcs_table_for(config)
    seeds = config.seeds

    cells = {}
    tasks = []
    for ivd_i, ivd in enumerate(sweep.ivd_values):
        for tf_i, tf in enumerate(sweep.tx_frequency_values):
            try:
                cell_cfg = _cell_config(config, ivd, tf)
                header = _cell_header(cell_cfg, table)
            except CapacityExceededError:
                cells[(ivd_i, tf_i)] = SweepResult(
                    ivd_m=ivd, tx_frequency_hz=tf, error="capacity_exceeded")
                continue
            except ConfigError as exc:
                cells[(ivd_i, tf_i)] = SweepResult(
                    ivd_m=ivd, tx_frequency_hz=tf, error=f"config: {exc}")
                continue
            cells[(ivd_i, tf_i)] = header
            for seed_i in range(len(seeds)):
                tasks.append((config, ivd_i, tf_i, seed_i, ivd, tf))

    drop_results = {}
    workers = resolve_workers(max_workers)
    done = 0
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for key, result in pool.map(_drop_task, tasks):
                drop_results[key] = result
                done += 1
                if progress:
                    progress(done, len(tasks))
    else:
        for task in tasks:
            key, result = _drop_task(task)
            drop_results[key] = result
            done += 1
            if progress:
                progress(done, len(tasks))

    rows = []
    for ivd_i, ivd in enumerate(sweep.ivd_values):
        for tf_i, tf in enumerate(sweep.tx_frequency_values):
            cell = cells[(ivd_i, tf_i)]
            if isinstance(cell, SweepResult):
                rows.append(cell)
                continue
            num_ues, volume, mcs = cell
            warnings = WarningCounters()
            per_seed = []
            failure = None
            for seed_i in range(len(seeds)):
                drop = drop_results[(ivd_i, tf_i, seed_i)]
                if isinstance(drop, SimulationError):
                    failure = failure or drop
                    continue
                per_seed.append(drop.samples)
                warnings.merge(drop.warnings)
            if failure is not None:
                rows.append(SweepResult(ivd_m=ivd, tx_frequency_hz=tf,
                                        error=str(failure)))
                continue
            rows.append(SweepResult(
                ivd_m=ivd, tx_frequency_hz=tf, num_ues=num_ues,
                data_volume_bps=volume, mcs=mcs,
                prr=aggregate(per_seed, warnings)))
    return rows
