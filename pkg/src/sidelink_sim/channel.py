"""WINNER II urban propagation for vehicle links at 5.9 GHz.

Line-of-sight pathloss is piecewise in distance around the breakpoint
d_BP = 4 h_tx h_rx f_c / c: a 21.5 log10(d) slope below it, a steeper
40 log10(d) branch with antenna-height corrections beyond it.  Note the
two branches do not meet at d_BP for low antennas; the model is applied
exactly as written, discontinuity included.  A separate NLOS expression
covers elevated-site geometries and requires an antenna above 25 m.
Log-normal shadowing is layered on top with a per-regime sigma, drawn
once per link per drop and shared between the two directions of a link.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ChannelModelError, ConfigError

SPEED_OF_LIGHT_M_S = 299_792_458.0

# pathloss regimes
LOS_NEAR = "los-near"
LOS_FAR = "los-far"
NLOS = "nlos"

# line-of-sight handling modes
MODE_ALWAYS_LOS = "always-los"
MODE_ALWAYS_NLOS = "always-nlos"
MODE_PROBABILISTIC = "probabilistic"
LOS_MODES = (MODE_ALWAYS_LOS, MODE_ALWAYS_NLOS, MODE_PROBABILISTIC)

# validity limits of the fitted pathloss expressions
LOS_MIN_DISTANCE_M = 10.0
LOS_MAX_DISTANCE_M = 10_000.0
NLOS_MIN_DISTANCE_M = 50.0
NLOS_MAX_DISTANCE_M = 5_000.0
NLOS_MIN_SITE_HEIGHT_M = 25.0


@dataclass(frozen=True)
class ChannelParams:
    """Propagation settings; sigmas are the shadowing std-dev per regime."""

    carrier_freq_hz: float = 5.9e9
    los_mode: str = MODE_ALWAYS_LOS
    nlos_probability: float = 0.0
    shadowing_enabled: bool = True
    los_near_sigma_db: float = 4.0
    los_far_sigma_db: float = 6.0
    nlos_sigma_db: float = 8.0

    def __post_init__(self):
        if not self.carrier_freq_hz > 0:
            raise ConfigError("carrier_freq_hz", "must be positive")
        if self.los_mode not in LOS_MODES:
            raise ConfigError(
                "los_mode", f"must be one of {', '.join(LOS_MODES)}")
        if not 0.0 <= self.nlos_probability <= 1.0:
            raise ConfigError("nlos_probability", "must lie in [0, 1]")
        for key in ("los_near_sigma_db", "los_far_sigma_db", "nlos_sigma_db"):
            if getattr(self, key) < 0:
                raise ConfigError(key, "must be non-negative")


@dataclass(frozen=True)
class PathlossResult:
    """One link's channel realization.

    ``pathloss_db`` is the deterministic distance-dependent part;
    ``shadowing_db`` is the signed log-normal draw for this link and
    drop.  The effective attenuation is their sum (``total_db``).
    """

    pathloss_db: float
    shadowing_db: float
    regime: str
    breakpoint_m: float

    @property
    def total_db(self) -> float:
        return self.pathloss_db + self.shadowing_db


def breakpoint_distance(h_tx_m: float, h_rx_m: float, f_c_hz: float) -> float:
    """Breakpoint distance 4 h_tx h_rx f_c / c in meters."""
    if h_tx_m <= 0 or h_rx_m <= 0:
        raise ChannelModelError("antenna heights must be positive")
    if f_c_hz <= 0:
        raise ChannelModelError("carrier frequency must be positive")
    return 4.0 * h_tx_m * h_rx_m * f_c_hz / SPEED_OF_LIGHT_M_S


def pathloss_los(d_m, h_tx_m: float, h_rx_m: float, f_c_hz: float):
    """Line-of-sight pathloss in dB; returns (pathloss, regime).

    Accepts a scalar or array distance.  Below the breakpoint the
    near branch 21.5 log10(d) + 20 log10(f/5 GHz) applies, at and above
    it the far branch 40 log10(d) + 10.5 - 18.5 log10(h_tx)
    - 18.5 log10(h_rx) + 1.5 log10(f/5 GHz).  Distances under 10 m are
    evaluated at 10 m (callers that care count these clamps); distances
    beyond 10 km are outside the model's fitted range and raise.
    """
    d = np.asarray(d_m, dtype=float)
    if np.any(d > LOS_MAX_DISTANCE_M):
        raise ChannelModelError(
            f"LOS pathloss queried beyond {LOS_MAX_DISTANCE_M:.0f} m")
    d_eval = np.maximum(d, LOS_MIN_DISTANCE_M)
    d_bp = breakpoint_distance(h_tx_m, h_rx_m, f_c_hz)
    f_term = math.log10(f_c_hz / 1e9 / 5.0)
    near = 21.5 * np.log10(d_eval) + 20.0 * f_term
    far = (40.0 * np.log10(d_eval) + 10.5
           - 18.5 * math.log10(h_tx_m) - 18.5 * math.log10(h_rx_m)
           + 1.5 * f_term)
    near_mask = d_eval < d_bp
    pl = np.where(near_mask, near, far)
    regime = np.where(near_mask, LOS_NEAR, LOS_FAR)
    if np.ndim(d_m) == 0:
        return float(pl), str(regime)
    return pl, regime


def pathloss_nlos(d_m, h_bs_m: float, h_ms_m: float, f_c_hz: float):
    """Non-line-of-sight pathloss in dB for an elevated site.

    Requires the site antenna above 25 m, otherwise the height term
    log10(h_bs - 25) is undefined and this raises rather than produce
    NaN.  Valid from 50 m to 5 km; shorter distances evaluate at 50 m.
    """
    if h_bs_m <= NLOS_MIN_SITE_HEIGHT_M:
        raise ChannelModelError(
            f"NLOS pathloss needs a site antenna above "
            f"{NLOS_MIN_SITE_HEIGHT_M:.0f} m, got {h_bs_m} m")
    d = np.asarray(d_m, dtype=float)
    if np.any(d > NLOS_MAX_DISTANCE_M):
        raise ChannelModelError(
            f"NLOS pathloss queried beyond {NLOS_MAX_DISTANCE_M:.0f} m")
    d_eval = np.maximum(d, NLOS_MIN_DISTANCE_M)
    f_term = math.log10(f_c_hz / 1e9 / 5.0)
    pl = (25.1 * np.log10(d_eval) + 55.4
          - 0.13 * math.log10(h_bs_m - NLOS_MIN_SITE_HEIGHT_M)
          * np.log10(d_eval / 100.0)
          - 0.9 * (h_ms_m - 1.5)
          + 21.3 * f_term)
    if np.ndim(d_m) == 0:
        return float(pl)
    return pl


def sigma_for_regime(regime: str, params: ChannelParams) -> float:
    """Shadowing standard deviation (dB) for a pathloss regime."""
    if not params.shadowing_enabled:
        return 0.0
    if regime == LOS_NEAR:
        return params.los_near_sigma_db
    if regime == LOS_FAR:
        return params.los_far_sigma_db
    if regime == NLOS:
        return params.nlos_sigma_db
    raise ChannelModelError(f"unknown pathloss regime {regime!r}")


def sample_shadowing(regime: str, params: ChannelParams, rng) -> float:
    """One log-normal shadowing draw in dB, N(0, sigma(regime))."""
    sigma = sigma_for_regime(regime, params)
    if sigma == 0.0:
        return 0.0
    return sigma * float(rng.standard_normal())


class DropChannel:
    """Frozen channel realization over one drop's vehicle set.

    All pairwise shadowing (and, in probabilistic mode, LOS/NLOS)
    draws are made up front, symmetric per unordered pair, so any link
    re-queried during the drop returns the identical result and both
    directions of a link share one draw.  Clamped short-distance
    evaluations are counted in ``num_clamped``.
    """

    def __init__(self, vehicles: Sequence, antenna_height_m: float,
                 params: ChannelParams, rng):
        self.params = params
        self.antenna_height_m = antenna_height_m
        self.breakpoint_m = breakpoint_distance(
            antenna_height_m, antenna_height_m, params.carrier_freq_hz)
        self.num_clamped = 0

        self._index_of = {v.id: i for i, v in enumerate(vehicles)}
        x = np.array([v.x for v in vehicles])
        y = np.array([v.y for v in vehicles])
        self.distance = np.hypot(x[:, None] - x[None, :],
                                 y[:, None] - y[None, :])
        n = len(vehicles)

        if params.shadowing_enabled:
            upper = np.triu(rng.standard_normal((n, n)), k=1)
            self._z = upper + upper.T
        else:
            self._z = None

        if params.los_mode == MODE_PROBABILISTIC:
            upper = np.triu(rng.random((n, n)), k=1)
            self._los = (upper + upper.T) >= params.nlos_probability
        else:
            self._los = None

    def _is_los(self, i: int, j) -> np.ndarray:
        if self.params.los_mode == MODE_ALWAYS_LOS:
            return np.ones(np.shape(j), dtype=bool)
        if self.params.los_mode == MODE_ALWAYS_NLOS:
            return np.zeros(np.shape(j), dtype=bool)
        return self._los[i, j]

    def attenuation_to(self, tx_index: int, rx_indices) -> np.ndarray:
        """Total attenuation (pathloss + shadowing, dB) from one vehicle
        to several others, vectorized over ``rx_indices``."""
        idx = np.asarray(rx_indices, dtype=int)
        d = self.distance[tx_index, idx]
        los = self._is_los(tx_index, idx)
        h = self.antenna_height_m
        fc = self.params.carrier_freq_hz

        pl = np.empty(idx.shape)
        sigma = np.empty(idx.shape)
        if np.any(los):
            self.num_clamped += int(np.count_nonzero(
                d[los] < LOS_MIN_DISTANCE_M))
            pl_los, regime = pathloss_los(d[los], h, h, fc)
            pl[los] = pl_los
            sigma[los] = np.where(regime == LOS_NEAR,
                                  self.params.los_near_sigma_db,
                                  self.params.los_far_sigma_db)
        if np.any(~los):
            self.num_clamped += int(np.count_nonzero(
                d[~los] < NLOS_MIN_DISTANCE_M))
            pl[~los] = pathloss_nlos(d[~los], h, h, fc)
            sigma[~los] = self.params.nlos_sigma_db

        if self._z is None:
            return pl
        return pl + sigma * self._z[tx_index, idx]

    def link_pathloss(self, tx, rx) -> PathlossResult:
        """Channel realization for one vehicle pair.

        Symmetric and stable for the lifetime of this drop: querying
        (a, b) and (b, a) returns the same result, as does re-querying.
        """
        i = self._index_of[tx.id]
        j = self._index_of[rx.id]
        if i == j:
            raise ChannelModelError("no pathloss from a vehicle to itself")
        d = self.distance[i, j]
        h = self.antenna_height_m
        fc = self.params.carrier_freq_hz
        if bool(self._is_los(i, np.asarray(j))):
            if d < LOS_MIN_DISTANCE_M:
                self.num_clamped += 1
            pl, regime = pathloss_los(float(d), h, h, fc)
        else:
            if d < NLOS_MIN_DISTANCE_M:
                self.num_clamped += 1
            pl = pathloss_nlos(float(d), h, h, fc)
            regime = NLOS
        sigma = sigma_for_regime(regime, self.params)
        shadow = sigma * float(self._z[i, j]) if self._z is not None else 0.0
        return PathlossResult(pathloss_db=pl, shadowing_db=shadow,
                              regime=regime, breakpoint_m=self.breakpoint_m)
