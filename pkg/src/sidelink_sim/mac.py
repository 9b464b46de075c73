"""Traffic-driven MCS selection and per-period resource allocation.

Broadcast traffic is periodic: every vehicle sends one fixed-size
packet per period.  The aggregate offered rate across all vehicles,
normalized by the channel bandwidth, yields the spectral efficiency
the network must sustain; the scheduler picks the least aggressive MCS
that sustains it.  The chosen MCS fixes how many single-packet slots
fit into one period; cells assign their transmitters to slots
independently (full frequency reuse), so transmitters sharing a slot
index interfere.

Link-to-system abstraction: each MCS carries a logistic SINR-to-BLER
curve pinned at BLER = 0.5 on its threshold and BLER = 0.01 one slope
width above it.  Default thresholds come from inverting the Shannon
rate for the MCS efficiency plus a fixed implementation margin.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .errors import CapacityExceededError, ConfigError

# spectral efficiencies (bit/s/Hz) of the 15 LTE CQI entries
CQI_SPECTRAL_EFFICIENCY = (
    0.1523, 0.2344, 0.3770, 0.6016, 0.8770,
    1.1758, 1.4766, 1.9141, 2.4063, 2.7305,
    3.3223, 3.9023, 4.5234, 5.1152, 5.5547,
)

_LN99 = math.log(99.0)

ALLOCATION_POLICIES = ("round-robin", "random")


@dataclass(frozen=True)
class MacConfig:
    """Scheduler and link-abstraction settings."""

    allocation_policy: str = "round-robin"
    bler_margin_db: float = 2.0
    bler_slope_db: float = 2.0
    mcs_table_file: Optional[str] = None

    def __post_init__(self):
        if self.allocation_policy not in ALLOCATION_POLICIES:
            raise ConfigError(
                "allocation_policy",
                f"must be one of {', '.join(ALLOCATION_POLICIES)}")
        if not math.isfinite(self.bler_margin_db):
            raise ConfigError("bler_margin_db", "must be finite")
        if not self.bler_slope_db > 0:
            raise ConfigError("bler_slope_db", "must be positive")


@dataclass(frozen=True)
class TrafficModel:
    """Periodic broadcast traffic: one packet per vehicle per period."""

    packet_size_bytes: int = 256
    tx_frequency_hz: float = 10.0

    def __post_init__(self):
        if self.packet_size_bytes < 1:
            raise ConfigError("packet_size_bytes", "must be at least 1")
        if not self.tx_frequency_hz > 0:
            raise ConfigError("tx_frequency_hz", "must be positive")

    @property
    def packet_bits(self) -> int:
        return self.packet_size_bytes * 8

    @property
    def period_s(self) -> float:
        return 1.0 / self.tx_frequency_hz


@dataclass(frozen=True)
class McsEntry:
    index: int
    spectral_efficiency: float
    bler_threshold_db: float
    bler_slope_db: float

    def __post_init__(self):
        if not self.spectral_efficiency > 0:
            raise ConfigError("se", "spectral efficiency must be positive")
        if not self.bler_slope_db > 0:
            raise ConfigError("slope_db", "BLER slope must be positive")


@dataclass(frozen=True)
class McsTable:
    entries: tuple

    def __post_init__(self):
        if len(self.entries) == 0:
            raise ConfigError("mcs_table_file", "MCS table is empty")
        ses = [e.spectral_efficiency for e in self.entries]
        if any(b <= a for a, b in zip(ses, ses[1:])):
            raise ConfigError(
                "mcs_table_file",
                "entries must be strictly increasing in spectral efficiency")

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    @property
    def max_spectral_efficiency(self) -> float:
        return self.entries[-1].spectral_efficiency


def shannon_threshold_db(spectral_efficiency: float,
                         margin_db: float = 0.0) -> float:
    """SINR (dB) at which Shannon capacity meets the given efficiency,
    plus an implementation margin."""
    return 10.0 * math.log10(2.0 ** spectral_efficiency - 1.0) + margin_db


def calibrate_default_curves(table: McsTable, margin_db: float = 2.0,
                             slope_db: float = 2.0) -> McsTable:
    """Re-anchor every BLER curve at the Shannon-inverse SINR plus margin."""
    return McsTable(tuple(
        replace(e,
                bler_threshold_db=shannon_threshold_db(
                    e.spectral_efficiency, margin_db),
                bler_slope_db=slope_db)
        for e in table.entries))


def default_mcs_table(margin_db: float = 2.0,
                      slope_db: float = 2.0) -> McsTable:
    """The 15-entry CQI table with Shannon-plus-margin BLER anchors."""
    base = McsTable(tuple(
        McsEntry(index=i + 1, spectral_efficiency=se,
                 bler_threshold_db=0.0, bler_slope_db=1.0)
        for i, se in enumerate(CQI_SPECTRAL_EFFICIENCY)))
    return calibrate_default_curves(base, margin_db, slope_db)


def load_mcs_table(path: str) -> McsTable:
    """Load an MCS table from CSV with header index,se,threshold_db,slope_db."""
    required = ["index", "se", "threshold_db", "slope_db"]
    try:
        with open(path, newline="") as f:
            reader = csv.DictReader(f)
            header = reader.fieldnames
            if header is None or [h.strip() for h in header] != required:
                raise ConfigError(
                    "mcs_table_file",
                    f"expected header {','.join(required)}, got {header}")
            entries = []
            for row in reader:
                try:
                    entries.append(McsEntry(
                        index=int(row["index"]),
                        spectral_efficiency=float(row["se"]),
                        bler_threshold_db=float(row["threshold_db"]),
                        bler_slope_db=float(row["slope_db"])))
                except (TypeError, ValueError) as exc:
                    raise ConfigError(
                        "mcs_table_file", f"bad row {row}: {exc}") from exc
    except OSError as exc:
        raise ConfigError("mcs_table_file", str(exc)) from exc
    return McsTable(tuple(entries))


def data_volume(packet_size_bytes: int, num_ues: int,
                tx_frequency_hz: float) -> float:
    """Aggregate offered traffic in bit/s across all vehicles."""
    if num_ues < 0:
        raise ConfigError("num_ues", "must be non-negative")
    return packet_size_bytes * 8.0 * num_ues * tx_frequency_hz


def required_se(data_volume_bps: float, bandwidth_hz: float) -> float:
    """Spectral efficiency (bit/s/Hz) needed to fit the offered traffic."""
    if not bandwidth_hz > 0:
        raise ConfigError("bandwidth_hz", "must be positive")
    return data_volume_bps / bandwidth_hz


def select_mcs(required_se_value: float, table: McsTable) -> McsEntry:
    """Least spectral efficiency in the table that covers the requirement.

    The boundary is inclusive: a requirement exactly equal to an entry
    selects that entry.  Raises CapacityExceededError when even the top
    entry falls short.
    """
    for entry in table.entries:
        if entry.spectral_efficiency >= required_se_value:
            return entry
    raise CapacityExceededError(
        f"required spectral efficiency {required_se_value:.4f} exceeds the "
        f"table maximum {table.max_spectral_efficiency:.4f}")


def bler(sinr_db, mcs: McsEntry):
    """Block error rate of one transport block at the given SINR (dB).

    Logistic in SINR: 0.5 on the curve threshold, 0.01 one slope width
    above, saturating to 1 and 0 far below and above.  Lower-index
    (lower-SE) curves sit at or below higher ones everywhere.
    """
    arg = _LN99 * (np.asarray(sinr_db, dtype=float)
                   - mcs.bler_threshold_db) / mcs.bler_slope_db
    out = 1.0 / (1.0 + np.exp(np.clip(arg, -500.0, 500.0)))
    if np.ndim(sinr_db) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class ResourceGrid:
    """One period's slot assignment: vehicle id -> slot in [0, num_slots)."""

    num_slots: int
    assignment: dict

    def slot_of(self, tx_id: int) -> int:
        return self.assignment[tx_id]

    def interferers_of(self, tx_id: int) -> list:
        """Ids of all other transmitters sharing this one's slot."""
        slot = self.assignment[tx_id]
        return [v for v, s in self.assignment.items()
                if s == slot and v != tx_id]


def num_slots_per_period(bandwidth_hz: float, period_s: float,
                         spectral_efficiency: float,
                         packet_bits: int) -> int:
    """Single-packet slots that fit into one traffic period."""
    return math.floor(bandwidth_hz * period_s * spectral_efficiency
                      / packet_bits)


def allocate_resources(vehicles: Sequence, mcs: McsEntry,
                       traffic: TrafficModel, bandwidth_hz: float,
                       policy: str = "round-robin",
                       rng=None) -> ResourceGrid:
    """Assign each vehicle a slot for its once-per-period transmission.

    Every cell allocates independently over the same slot grid (full
    frequency reuse).  Round-robin walks each cell's vehicles in id
    order, wrapping modulo the slot count, so a cell with at most
    ``num_slots`` transmitters is internally orthogonal.  The random
    policy draws slots uniformly and needs ``rng``.
    """
    k = num_slots_per_period(bandwidth_hz, traffic.period_s,
                             mcs.spectral_efficiency, traffic.packet_bits)
    if k < 1:
        raise CapacityExceededError(
            "no slot fits a packet in one period at this MCS")
    if policy not in ALLOCATION_POLICIES:
        raise ConfigError(
            "allocation_policy",
            f"must be one of {', '.join(ALLOCATION_POLICIES)}")

    cells = {}
    for v in vehicles:
        if v.attached_cell is None:
            raise ValueError(f"vehicle {v.id} is not attached to a cell")
        cells.setdefault(v.attached_cell, []).append(v.id)

    assignment = {}
    for cell in sorted(cells):
        members = sorted(cells[cell])
        if policy == "round-robin":
            for pos, vid in enumerate(members):
                assignment[vid] = pos % k
        else:
            if rng is None:
                raise ValueError("random allocation needs an rng")
            slots = rng.integers(0, k, size=len(members))
            for vid, slot in zip(members, slots):
                assignment[vid] = int(slot)
    return ResourceGrid(num_slots=k, assignment=assignment)
