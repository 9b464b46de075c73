"""Configuration file handling.

Configs are flat sectioned key-value files (INI syntax).  Every key is
optional and falls back to the default highway deployment; unknown
sections or keys are rejected so typos fail loudly with the offending
key named.  A run manifest (JSON) embeds the same sections under
"config" and can be loaded in place of an INI file to reproduce a run.
"""

from __future__ import annotations

import configparser
import json
import os
from typing import Optional

from .channel import ChannelParams
from .engine import SimConfig
from .errors import ConfigError
from .geometry import ScenarioConfig
from .linkbudget import RadioParams
from .mac import MacConfig, TrafficModel
from .metrics import MetricsConfig

# section -> key -> type tag ("float" | "int" | "bool" | "str")
SCHEMA = {
    "scenario": {
        "highway_length_m": "float",
        "evaluation_length_m": "float",
        "num_lanes": "int",
        "lane_width_m": "float",
        "ivd_m": "float",
        "comm_range_m": "float",
        "bs_isd_m": "float",
        "bs_height_m": "float",
        "ue_height_m": "float",
        "aligned_lanes": "bool",
        "bs_setback_m": "float",
    },
    "channel": {
        "carrier_freq_hz": "float",
        "los_mode": "str",
        "nlos_probability": "float",
        "shadowing_enabled": "bool",
        "los_near_sigma_db": "float",
        "los_far_sigma_db": "float",
        "nlos_sigma_db": "float",
    },
    "radio": {
        "tx_power_dbm": "float",
        "tx_gain_dbi": "float",
        "rx_gain_dbi": "float",
        "noise_figure_db": "float",
        "bandwidth_hz": "float",
        "thermal_noise_dbm_hz": "float",
        "prr_counts_halfduplex_as_loss": "bool",
    },
    "mac": {
        "packet_size_bytes": "int",
        "tx_frequency_hz": "float",
        "allocation_policy": "str",
        "bler_margin_db": "float",
        "bler_slope_db": "float",
        "mcs_table_file": "str",
    },
    "metrics": {
        "bler_success_threshold": "float",
        "prr_mode": "str",
        "num_seeds": "int",
    },
    "run": {
        "master_seed": "int",
        "periods_per_drop": "int",
    },
}

_TRUE = {"true", "yes", "on", "1"}
_FALSE = {"false", "no", "off", "0"}


def _coerce(section: str, key: str, raw, kind: str):
    name = f"{section}.{key}"
    if kind == "bool":
        if isinstance(raw, bool):
            return raw
        if isinstance(raw, str):
            low = raw.strip().lower()
            if low in _TRUE:
                return True
            if low in _FALSE:
                return False
        raise ConfigError(name, f"expected a boolean, got {raw!r}")
    if kind == "int":
        if isinstance(raw, bool):
            raise ConfigError(name, f"expected an integer, got {raw!r}")
        try:
            if isinstance(raw, float) and raw != int(raw):
                raise ValueError
            return int(raw)
        except (TypeError, ValueError):
            raise ConfigError(name, f"expected an integer, got {raw!r}") \
                from None
    if kind == "float":
        if isinstance(raw, bool):
            raise ConfigError(name, f"expected a number, got {raw!r}")
        try:
            return float(raw)
        except (TypeError, ValueError):
            raise ConfigError(name, f"expected a number, got {raw!r}") \
                from None
    return str(raw)


def config_from_dict(sections: dict) -> SimConfig:
    """Build a validated SimConfig from a nested section/key mapping."""
    values = {}
    for section, keys in sections.items():
        if section not in SCHEMA:
            raise ConfigError(section, "unknown config section")
        if not isinstance(keys, dict):
            raise ConfigError(section, "section must hold key-value pairs")
        for key, raw in keys.items():
            if key not in SCHEMA[section]:
                raise ConfigError(f"{section}.{key}", "unknown config key")
            values[(section, key)] = _coerce(section, key, raw,
                                             SCHEMA[section][key])

    def take(section, *keys):
        return {k: values[(section, k)] for k in keys
                if (section, k) in values}

    mac_kwargs = take("mac", "allocation_policy", "bler_margin_db",
                      "bler_slope_db", "mcs_table_file")
    if mac_kwargs.get("mcs_table_file", None) == "":
        mac_kwargs["mcs_table_file"] = None

    return SimConfig(
        scenario=ScenarioConfig(**take("scenario", *SCHEMA["scenario"])),
        channel=ChannelParams(**take("channel", *SCHEMA["channel"])),
        radio=RadioParams(**take("radio", *SCHEMA["radio"])),
        traffic=TrafficModel(**take("mac", "packet_size_bytes",
                                    "tx_frequency_hz")),
        mac=MacConfig(**mac_kwargs),
        metrics=MetricsConfig(**take("metrics", *SCHEMA["metrics"])),
        **take("run", "master_seed", "periods_per_drop"),
    )


def config_to_dict(config: SimConfig) -> dict:
    """Schema-shaped mapping of a SimConfig, ready for JSON echo."""
    return {
        "scenario": {k: getattr(config.scenario, k)
                     for k in SCHEMA["scenario"]},
        "channel": {k: getattr(config.channel, k) for k in SCHEMA["channel"]},
        "radio": {k: getattr(config.radio, k) for k in SCHEMA["radio"]},
        "mac": {
            "packet_size_bytes": config.traffic.packet_size_bytes,
            "tx_frequency_hz": config.traffic.tx_frequency_hz,
            "allocation_policy": config.mac.allocation_policy,
            "bler_margin_db": config.mac.bler_margin_db,
            "bler_slope_db": config.mac.bler_slope_db,
            "mcs_table_file": config.mac.mcs_table_file or "",
        },
        "metrics": {k: getattr(config.metrics, k)
                    for k in SCHEMA["metrics"]},
        "run": {
            "master_seed": config.master_seed,
            "periods_per_drop": config.periods_per_drop,
        },
    }


def default_config() -> SimConfig:
    """The built-in highway deployment (all schema defaults)."""
    return SimConfig()


def parse_config(text: str) -> SimConfig:
    """Parse INI-format config text."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError("config", f"cannot parse: {exc}") from exc
    sections = {s: dict(parser.items(s)) for s in parser.sections()}
    return config_from_dict(sections)


def load_config(path: Optional[str]) -> SimConfig:
    """Load a config from an INI file or a run manifest (*.json).

    ``None`` returns the built-in defaults.
    """
    if path is None:
        return default_config()
    if not os.path.exists(path):
        raise ConfigError("config", f"no such file: {path}")
    if path.endswith(".json"):
        try:
            with open(path) as f:
                payload = json.load(f)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError("config", f"cannot read {path}: {exc}") from exc
        if not isinstance(payload, dict):
            raise ConfigError("config", f"{path} holds no config mapping")
        sections = payload.get("config", payload)
        if not isinstance(sections, dict):
            raise ConfigError("config", f"{path} holds no config mapping")
        return config_from_dict(sections)
    try:
        with open(path) as f:
            text = f.read()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}") from exc
    return parse_config(text)
