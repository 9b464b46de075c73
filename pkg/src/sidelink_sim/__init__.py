"""System-level simulator of LTE-V2X sidelink broadcast on a highway.

Vehicles on a multi-lane highway periodically broadcast fixed-size
packets over the direct (PC5) link; the network scales the modulation
and coding scheme with the offered load, cells reuse the whole band,
and reception is judged per link from a WINNER II pathloss budget with
log-normal shadowing and co-channel interference.  The headline metric
is the packet reception ratio over all in-range receivers.
"""

__version__ = "0.1.0"

from .channel import (ChannelParams, DropChannel, PathlossResult,
                      breakpoint_distance, pathloss_los, pathloss_nlos,
                      sample_shadowing, sigma_for_regime)
from .config import (config_from_dict, config_to_dict, default_config,
                     load_config, parse_config)
from .engine import (DropResult, SimConfig, SweepResult, SweepSpec,
                     derive_seed, mcs_table_for, run_drop, run_sweep)
from .errors import (CapacityExceededError, ChannelModelError, ConfigError,
                     MetricsError, SimulationError)
from .geometry import (BaseStation, HighwayScenario, ScenarioConfig, Vehicle,
                       attach_cells, build_scenario, positions_array,
                       receivers_in_range)
from .linkbudget import (LinkBudgetRecord, RadioParams, build_link_budgets,
                         dbm_to_mw, mw_to_dbm, noise_power, received_power,
                         sinr, sinr_db_array)
from .mac import (CQI_SPECTRAL_EFFICIENCY, MacConfig, McsEntry, McsTable,
                  ResourceGrid, TrafficModel, allocate_resources, bler,
                  calibrate_default_curves, data_volume, default_mcs_table,
                  load_mcs_table, num_slots_per_period, required_se,
                  select_mcs, shannon_threshold_db)
from .metrics import (AggregateResult, MetricsConfig, PrrSample,
                      WarningCounters, aggregate, prr_for_tx)

__all__ = [
    "__version__",
    # geometry
    "ScenarioConfig", "Vehicle", "BaseStation", "HighwayScenario",
    "build_scenario", "attach_cells", "receivers_in_range",
    "positions_array",
    # channel
    "ChannelParams", "PathlossResult", "DropChannel",
    "breakpoint_distance", "pathloss_los", "pathloss_nlos",
    "sample_shadowing", "sigma_for_regime",
    # link budget
    "RadioParams", "LinkBudgetRecord", "received_power", "noise_power",
    "sinr", "sinr_db_array", "build_link_budgets", "dbm_to_mw",
    "mw_to_dbm",
    # mac
    "CQI_SPECTRAL_EFFICIENCY", "TrafficModel", "MacConfig", "McsEntry",
    "McsTable", "ResourceGrid", "data_volume", "required_se", "select_mcs",
    "bler", "shannon_threshold_db", "calibrate_default_curves",
    "default_mcs_table", "load_mcs_table", "allocate_resources",
    "num_slots_per_period",
    # metrics
    "MetricsConfig", "PrrSample", "AggregateResult", "WarningCounters",
    "prr_for_tx", "aggregate",
    # engine
    "SimConfig", "SweepSpec", "SweepResult", "DropResult", "run_drop",
    "run_sweep", "derive_seed", "mcs_table_for",
    # config files
    "load_config", "parse_config", "default_config", "config_to_dict",
    "config_from_dict",
    # errors
    "SimulationError", "ConfigError", "ChannelModelError",
    "CapacityExceededError", "MetricsError",
]
