"""Highway deployment geometry.

Vehicles are dropped on a straight multi-lane highway at a fixed
inter-vehicle distance (IVD) per lane, with an independent random start
offset per lane.  Statistics are collected only inside a centered
evaluation region so that vehicles near the highway ends, which see a
truncated neighborhood, do not bias reception statistics.  Base stations
run along the road at a fixed inter-site distance and every vehicle is
attached to its nearest site.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class ScenarioConfig:
    """Deployment parameters (distances in meters, heights in meters)."""

    highway_length_m: float = 3000.0
    evaluation_length_m: float = 1600.0
    num_lanes: int = 6
    lane_width_m: float = 4.0
    ivd_m: float = 100.0
    comm_range_m: float = 400.0
    bs_isd_m: float = 1732.0
    bs_height_m: float = 35.0
    ue_height_m: float = 1.5
    aligned_lanes: bool = False
    bs_setback_m: float = 10.0

    def __post_init__(self):
        if not self.highway_length_m > 0:
            raise ConfigError("highway_length_m", "must be positive")
        if not 0 < self.evaluation_length_m <= self.highway_length_m:
            raise ConfigError(
                "evaluation_length_m",
                f"must lie in (0, highway_length_m={self.highway_length_m}]",
            )
        if self.num_lanes < 1:
            raise ConfigError("num_lanes", "need at least one lane")
        if not self.lane_width_m > 0:
            raise ConfigError("lane_width_m", "must be positive")
        if not 0 < self.ivd_m <= self.evaluation_length_m:
            # an IVD beyond the evaluation region would produce an empty drop
            raise ConfigError(
                "ivd_m",
                f"must lie in (0, evaluation_length_m={self.evaluation_length_m}]",
            )
        if not self.comm_range_m > 0:
            raise ConfigError("comm_range_m", "must be positive")
        if not self.bs_isd_m > 0:
            raise ConfigError("bs_isd_m", "must be positive")
        if not self.bs_height_m > 0:
            raise ConfigError("bs_height_m", "must be positive")
        if not self.ue_height_m > 0:
            raise ConfigError("ue_height_m", "must be positive")
        if self.bs_setback_m < 0:
            raise ConfigError("bs_setback_m", "must be non-negative")

    @property
    def evaluation_start_m(self) -> float:
        """Left edge of the centered evaluation region."""
        return 0.5 * (self.highway_length_m - self.evaluation_length_m)

    @property
    def vehicles_per_lane(self) -> int:
        return math.floor(self.evaluation_length_m / self.ivd_m)


@dataclass(frozen=True)
class Vehicle:
    id: int
    x: float
    y: float
    lane_index: int
    attached_cell: Optional[int] = None

    @property
    def position(self) -> tuple:
        return (self.x, self.y)


@dataclass(frozen=True)
class BaseStation:
    id: int
    x: float
    y: float
    antenna_height_m: float

    @property
    def position(self) -> tuple:
        return (self.x, self.y)


@dataclass(frozen=True)
class HighwayScenario:
    """Immutable deployment: one vehicle drop plus the serving sites."""

    config: ScenarioConfig
    vehicles: tuple = field(default_factory=tuple)
    base_stations: tuple = field(default_factory=tuple)

    @property
    def num_vehicles(self) -> int:
        return len(self.vehicles)


def build_scenario(config: ScenarioConfig, seed) -> HighwayScenario:
    """Generate one random drop and attach every vehicle to a cell.

    ``seed`` may be anything ``numpy.random.default_rng`` accepts,
    including an existing Generator (which is then advanced).  Identical
    (config, seed) pairs produce bit-identical drops.

    Each lane holds floor(evaluation_length / ivd) vehicles spaced
    exactly ``ivd_m`` apart, shifted by a per-lane offset drawn uniformly
    from [0, ivd) (zero when ``aligned_lanes`` is set).  Lane centerlines
    sit at (lane_index + 0.5) * lane_width.  Vehicle ids are assigned
    lane-major in driving direction.
    """
    rng = np.random.default_rng(seed)
    per_lane = config.vehicles_per_lane
    x0 = config.evaluation_start_m

    if config.aligned_lanes:
        offsets = np.zeros(config.num_lanes)
    else:
        offsets = rng.uniform(0.0, config.ivd_m, size=config.num_lanes)

    vehicles = []
    vid = 0
    for lane in range(config.num_lanes):
        y = (lane + 0.5) * config.lane_width_m
        for k in range(per_lane):
            x = x0 + offsets[lane] + k * config.ivd_m
            vehicles.append(Vehicle(id=vid, x=x, y=y, lane_index=lane))
            vid += 1

    road_width = config.num_lanes * config.lane_width_m
    bs_y = road_width + config.bs_setback_m
    num_bs = math.floor(config.highway_length_m / config.bs_isd_m) + 1
    base_stations = tuple(
        BaseStation(id=i, x=i * config.bs_isd_m, y=bs_y,
                    antenna_height_m=config.bs_height_m)
        for i in range(num_bs)
    )

    vehicles = attach_cells(vehicles, base_stations)
    return HighwayScenario(config=config, vehicles=tuple(vehicles),
                           base_stations=base_stations)


def attach_cells(vehicles: Sequence[Vehicle],
                 base_stations: Sequence[BaseStation]) -> list:
    """Attach each vehicle to the nearest base station (2-D distance).

    Ties go to the lower station id.  Returns a new vehicle list; the
    inputs are not modified.
    """
    if len(base_stations) == 0:
        raise ConfigError("bs_isd_m", "no base stations to attach to")
    vx = np.array([v.x for v in vehicles])
    vy = np.array([v.y for v in vehicles])
    bx = np.array([b.x for b in base_stations])
    by = np.array([b.y for b in base_stations])
    # squared distances keep exact-tie comparisons exact; argmin takes the
    # first (= lowest id) minimum
    d2 = (vx[:, None] - bx[None, :]) ** 2 + (vy[:, None] - by[None, :]) ** 2
    nearest = np.argmin(d2, axis=1)
    return [replace(v, attached_cell=int(c)) for v, c in zip(vehicles, nearest)]


def receivers_in_range(tx: Vehicle, vehicles: Sequence[Vehicle],
                       comm_range_m: float) -> list:
    """All other vehicles within ``comm_range_m`` of ``tx`` (inclusive).

    Sorted by ascending distance, ties broken by lower vehicle id.
    Membership is symmetric: if a is in range of b, b is in range of a.
    """
    out = []
    for v in vehicles:
        if v.id == tx.id:
            continue
        d = math.hypot(v.x - tx.x, v.y - tx.y)
        if d <= comm_range_m:
            out.append((d, v.id, v))
    out.sort(key=lambda t: (t[0], t[1]))
    return [v for _, _, v in out]


def positions_array(vehicles: Sequence[Vehicle]) -> np.ndarray:
    """(n, 2) array of vehicle positions in id order of the given list."""
    return np.array([[v.x, v.y] for v in vehicles], dtype=float)
