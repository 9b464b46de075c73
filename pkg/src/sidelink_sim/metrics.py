"""Packet reception ratio and its aggregation across seeds.

A broadcast packet counts as received when its block error rate at the
receiver's SINR clears the success threshold (deterministic mode) or
when a Bernoulli draw with success probability 1 - BLER comes up good
(bernoulli mode).  The per-transmitter ratio averages over its in-range,
non-skipped receivers; drops average over transmitters; the experiment
averages over seeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigError, MetricsError
from .mac import McsEntry, bler

PRR_MODES = ("deterministic", "bernoulli")


@dataclass(frozen=True)
class MetricsConfig:
    """Success criterion and experiment size."""

    bler_success_threshold: float = 0.01
    prr_mode: str = "deterministic"
    num_seeds: int = 20

    def __post_init__(self):
        if not 0.0 < self.bler_success_threshold < 1.0:
            raise ConfigError("bler_success_threshold",
                              "must lie strictly between 0 and 1")
        if self.prr_mode not in PRR_MODES:
            raise ConfigError("prr_mode",
                              f"must be one of {', '.join(PRR_MODES)}")
        if self.num_seeds < 1:
            raise ConfigError("num_seeds", "need at least one seed")


@dataclass
class WarningCounters:
    """Diagnostics accumulated over a run."""

    clamped_distances: int = 0
    half_duplex_skips: int = 0

    def merge(self, other: "WarningCounters") -> None:
        self.clamped_distances += other.clamped_distances
        self.half_duplex_skips += other.half_duplex_skips

    def as_dict(self) -> dict:
        return {"clamped_distances": self.clamped_distances,
                "half_duplex_skips": self.half_duplex_skips}


@dataclass(frozen=True)
class PrrSample:
    """Reception outcome of one transmitter in one drop.

    ``num_in_range`` counts success opportunities (receivers, times
    periods in bernoulli mode); ``prr`` is None when there were none.
    """

    tx_id: int
    num_in_range: int
    num_success: int
    prr: Optional[float]


@dataclass(frozen=True)
class AggregateResult:
    """Cross-seed summary of one sweep cell."""

    mean_prr: float
    stderr_prr: float
    per_seed_prr: tuple
    warnings: WarningCounters

    @property
    def num_seeds(self) -> int:
        return len(self.per_seed_prr)


def prr_for_tx(budgets: Sequence, mcs: McsEntry,
               bler_threshold: float = 0.01, mode: str = "deterministic",
               rng=None, count_half_duplex_as_loss: bool = False) -> PrrSample:
    """Packet reception ratio for one transmitter from its link budgets.

    Half-duplex-skipped receivers are dropped from the denominator
    unless ``count_half_duplex_as_loss`` is set, in which case they
    count as failures.
    """
    if mode not in PRR_MODES:
        raise MetricsError(f"unknown PRR mode {mode!r}")
    if not budgets:
        return PrrSample(tx_id=-1, num_in_range=0, num_success=0, prr=None)
    tx_id = budgets[0].tx_id

    active = [b for b in budgets if not b.half_duplex_skipped]
    num_skipped = len(budgets) - len(active)
    denom = len(active) + (num_skipped if count_half_duplex_as_loss else 0)
    if denom == 0:
        return PrrSample(tx_id=tx_id, num_in_range=0, num_success=0, prr=None)

    successes = 0
    if active:
        sinr = np.array([b.sinr_db for b in active])
        b_arr = bler(sinr, mcs)
        if mode == "deterministic":
            successes = int(np.count_nonzero(b_arr < bler_threshold))
        else:
            if rng is None:
                raise MetricsError("bernoulli PRR mode needs an rng")
            successes = int(np.count_nonzero(rng.random(len(active))
                                             < 1.0 - b_arr))
    return PrrSample(tx_id=tx_id, num_in_range=denom,
                     num_success=successes, prr=successes / denom)


def aggregate(per_seed_samples: Sequence[Sequence[PrrSample]],
              warnings: Optional[WarningCounters] = None) -> AggregateResult:
    """Mean PRR over transmitters within each seed, then over seeds.

    Transmitters with no defined PRR (no eligible receivers) are
    excluded; a seed with no defined transmitter at all contributes no
    per-seed value.  The stderr is the sample standard deviation across
    seeds over sqrt(num_seeds), zero for a single seed.
    """
    per_seed = []
    for samples in per_seed_samples:
        defined = [s.prr for s in samples if s.prr is not None]
        if defined:
            per_seed.append(float(np.mean(defined)))
    if not per_seed:
        raise MetricsError("no transmitter had any eligible receiver")
    mean = float(np.mean(per_seed))
    if len(per_seed) > 1:
        stderr = float(np.std(per_seed, ddof=1) / math.sqrt(len(per_seed)))
    else:
        stderr = 0.0
    return AggregateResult(mean_prr=mean, stderr_prr=stderr,
                           per_seed_prr=tuple(per_seed),
                           warnings=warnings or WarningCounters())
