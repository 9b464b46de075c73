"""Config files: INI parsing, schema validation, manifest round trip."""

import json
from pathlib import Path

import pytest

from sidelink_sim import (ConfigError, SimConfig, config_from_dict,
                          config_to_dict, default_config, load_config,
                          parse_config)

MINIMAL_INI = """\
[scenario]
ivd_m = 50
aligned_lanes = yes

[mac]
tx_frequency_hz = 2
packet_size_bytes = 212

[run]
master_seed = 9
"""


class TestParseConfig:
    def test_empty_text_gives_defaults(self):
        assert parse_config("") == SimConfig()

    def test_partial_overrides_keep_other_defaults(self):
        config = parse_config(MINIMAL_INI)
        assert config.scenario.ivd_m == 50.0
        assert config.scenario.aligned_lanes is True
        assert config.scenario.num_lanes == 6
        assert config.traffic.tx_frequency_hz == 2.0
        assert config.traffic.packet_size_bytes == 212
        assert config.master_seed == 9
        assert config.metrics.num_seeds == 20

    def test_unknown_key_is_named(self):
        with pytest.raises(ConfigError) as exc:
            parse_config("[scenario]\nlane_count = 4\n")
        assert "scenario.lane_count" in str(exc.value)

    def test_unknown_section_is_named(self):
        with pytest.raises(ConfigError) as exc:
            parse_config("[engine]\nthreads = 2\n")
        assert "engine" in str(exc.value)

    def test_type_errors_name_section_and_key(self):
        with pytest.raises(ConfigError) as exc:
            parse_config("[scenario]\nnum_lanes = 2.5\n")
        assert "scenario.num_lanes" in str(exc.value)
        with pytest.raises(ConfigError) as exc:
            parse_config("[radio]\ntx_power_dbm = strong\n")
        assert "radio.tx_power_dbm" in str(exc.value)
        with pytest.raises(ConfigError) as exc:
            parse_config("[scenario]\naligned_lanes = maybe\n")
        assert "scenario.aligned_lanes" in str(exc.value)

    def test_domain_validation_still_applies(self):
        with pytest.raises(ConfigError) as exc:
            parse_config("[scenario]\nivd_m = 0\n")
        assert "ivd_m" in str(exc.value)

    def test_bool_spellings(self):
        for raw, value in [("true", True), ("off", False), ("1", True),
                           ("No", False)]:
            config = parse_config(f"[scenario]\naligned_lanes = {raw}\n")
            assert config.scenario.aligned_lanes is value

    def test_blank_mcs_table_file_means_default_table(self):
        config = parse_config("[mac]\nmcs_table_file =\n")
        assert config.mac.mcs_table_file is None

    def test_garbage_ini_rejected(self):
        with pytest.raises(ConfigError):
            parse_config("scenario]\nivd_m = 5\n")


class TestDictRoundTrip:
    def test_to_dict_from_dict_is_identity(self):
        config = parse_config(MINIMAL_INI)
        assert config_from_dict(config_to_dict(config)) == config

    def test_defaults_round_trip(self):
        assert config_from_dict(config_to_dict(SimConfig())) == SimConfig()

    def test_sections_must_be_mappings(self):
        with pytest.raises(ConfigError):
            config_from_dict({"scenario": [1, 2]})


class TestLoadConfig:
    def test_none_gives_defaults(self):
        assert load_config(None) == default_config()

    def test_ini_file(self, tmp_path):
        path = tmp_path / "run.ini"
        path.write_text(MINIMAL_INI)
        assert load_config(str(path)) == parse_config(MINIMAL_INI)

    def test_shipped_reference_config_matches_defaults(self):
        path = Path(__file__).resolve().parents[1] / "configs" \
            / "highway_table1"
        assert load_config(str(path)) == SimConfig()

    def test_manifest_json_with_embedded_config(self, tmp_path):
        original = parse_config(MINIMAL_INI)
        path = tmp_path / "run_manifest.json"
        path.write_text(json.dumps({"code_version": "x",
                                    "config": config_to_dict(original)}))
        assert load_config(str(path)) == original

    def test_bare_json_config_mapping(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"scenario": {"ivd_m": 80}}))
        assert load_config(str(path)).scenario.ivd_m == 80.0

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(str(tmp_path / "nope.ini"))

    def test_unreadable_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError):
            load_config(str(path))

    def test_json_without_mapping(self, tmp_path):
        path = tmp_path / "list.json"
        path.write_text("[1, 2, 3]")
        with pytest.raises(ConfigError):
            load_config(str(path))
