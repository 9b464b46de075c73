"""Link budget: received power, thermal noise, and SINR.

All combining happens in the linear milliwatt domain; dB values are
only a presentation of the underlying linear quantities.  Interference
is the linear sum of the received powers of all co-channel
transmitters.  A link with no interferers carries the -inf dBm marker
and its SINR equals its SNR exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigError

THERMAL_NOISE_DBM_HZ = -174.0


@dataclass(frozen=True)
class RadioParams:
    """Transceiver parameters shared by every vehicle."""

    tx_power_dbm: float = 24.0
    tx_gain_dbi: float = 0.0
    rx_gain_dbi: float = 3.0
    noise_figure_db: float = 9.0
    bandwidth_hz: float = 10e6
    thermal_noise_dbm_hz: float = THERMAL_NOISE_DBM_HZ
    prr_counts_halfduplex_as_loss: bool = False

    def __post_init__(self):
        for key in ("tx_power_dbm", "tx_gain_dbi", "rx_gain_dbi",
                    "noise_figure_db", "thermal_noise_dbm_hz"):
            if not math.isfinite(getattr(self, key)):
                raise ConfigError(key, "must be finite")
        if not self.bandwidth_hz > 0:
            raise ConfigError("bandwidth_hz", "must be positive")
        if not self.thermal_noise_dbm_hz < 0:
            raise ConfigError("thermal_noise_dbm_hz",
                              "must be negative (a power density in dBm/Hz)")


@dataclass(frozen=True)
class LinkBudgetRecord:
    """One directed transmitter-to-receiver link in one slot.

    ``pathloss_db`` is the effective attenuation including shadowing.
    ``interference_dbm`` aggregates all co-channel transmitters and is
    -inf when there are none.  A receiver that transmits in the same
    slot cannot listen; it is flagged ``half_duplex_skipped`` and its
    radio fields are NaN.
    """

    tx_id: int
    rx_id: int
    distance_m: float
    pathloss_db: float
    rx_power_dbm: float
    interference_dbm: float
    noise_dbm: float
    sinr_db: float
    half_duplex_skipped: bool = False


def dbm_to_mw(dbm):
    """dBm to milliwatts; works on scalars and arrays.  -inf maps to 0."""
    return 10.0 ** (dbm / 10.0)


def mw_to_dbm(mw):
    return 10.0 * np.log10(mw)


def received_power(tx_power_dbm: float, tx_gain_dbi: float,
                   rx_gain_dbi: float, pathloss_db):
    """Received power in dBm; ``pathloss_db`` may be a scalar or array."""
    return tx_power_dbm + tx_gain_dbi + rx_gain_dbi - pathloss_db


def noise_power(thermal_noise_dbm_hz: float, noise_figure_db: float,
                bandwidth_hz: float) -> float:
    """Receiver noise floor in dBm over the given bandwidth."""
    if bandwidth_hz <= 0:
        raise ConfigError("bandwidth_hz", "must be positive")
    return thermal_noise_dbm_hz + noise_figure_db \
        + 10.0 * math.log10(bandwidth_hz)


def sinr(rx_power_dbm: float, interferer_powers_dbm: Sequence[float],
         noise_power_dbm: float) -> float:
    """SINR in dB with linear-domain interference aggregation.

    With no interferers (empty list, or only -inf entries) this reduces
    to rx_power - noise exactly, with no round trip through the linear
    domain.
    """
    total_i_mw = 0.0
    for p in interferer_powers_dbm:
        total_i_mw += dbm_to_mw(p)
    if total_i_mw == 0.0:
        return rx_power_dbm - noise_power_dbm
    denom_mw = total_i_mw + dbm_to_mw(noise_power_dbm)
    return 10.0 * math.log10(dbm_to_mw(rx_power_dbm) / denom_mw)


def sinr_db_array(rx_power_dbm: np.ndarray, interference_mw: np.ndarray,
                  noise_power_dbm: float) -> np.ndarray:
    """Vectorized SINR for one transmitter's receiver set.

    ``interference_mw`` holds the already-summed linear interference per
    receiver (zeros where there are no interferers, reproducing the
    exact SNR fallback of :func:`sinr`).
    """
    noise_mw = dbm_to_mw(noise_power_dbm)
    full = 10.0 * np.log10(
        dbm_to_mw(rx_power_dbm) / (interference_mw + noise_mw))
    return np.where(interference_mw == 0.0,
                    rx_power_dbm - noise_power_dbm, full)


def build_link_budgets(tx, receivers: Sequence, interferers: Sequence,
                       channel, radio: RadioParams) -> list:
    """Link budget records from one transmitter to each given receiver.

    ``channel`` is the drop's frozen channel realization
    (:class:`~sidelink_sim.channel.DropChannel`); ``interferers`` are
    the vehicles transmitting in the same slot.  Receivers that appear
    in the interferer set are half-duplex-skipped.
    """
    interferer_ids = {v.id for v in interferers}
    records = []
    for rx in receivers:
        d = math.hypot(rx.x - tx.x, rx.y - tx.y)
        if rx.id in interferer_ids:
            records.append(LinkBudgetRecord(
                tx_id=tx.id, rx_id=rx.id, distance_m=d,
                pathloss_db=math.nan, rx_power_dbm=math.nan,
                interference_dbm=math.nan, noise_dbm=math.nan,
                sinr_db=math.nan, half_duplex_skipped=True))
            continue
        pl = channel.link_pathloss(tx, rx).total_db
        p_rx = received_power(radio.tx_power_dbm, radio.tx_gain_dbi,
                              radio.rx_gain_dbi, pl)
        i_powers = []
        for itx in interferers:
            ipl = channel.link_pathloss(itx, rx).total_db
            i_powers.append(received_power(
                radio.tx_power_dbm, radio.tx_gain_dbi, radio.rx_gain_dbi,
                ipl))
        total_i_mw = sum(dbm_to_mw(p) for p in i_powers)
        i_dbm = mw_to_dbm(total_i_mw) if total_i_mw > 0 else -math.inf
        n_dbm = noise_power(radio.thermal_noise_dbm_hz,
                            radio.noise_figure_db, radio.bandwidth_hz)
        records.append(LinkBudgetRecord(
            tx_id=tx.id, rx_id=rx.id, distance_m=d, pathloss_db=pl,
            rx_power_dbm=p_rx, interference_dbm=i_dbm, noise_dbm=n_dbm,
            sinr_db=sinr(p_rx, i_powers, n_dbm)))
    return records
