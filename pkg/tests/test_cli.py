"""Command-line interface: subcommands, exit codes, output files."""

import csv
import json
from pathlib import Path

import pytest

from sidelink_sim import SweepSpec, parse_config, run_sweep
from sidelink_sim.cli import (CSV_HEADER, csv_rows, emit_results, json_rows,
                              main)

SMALL_INI = """\
[scenario]
highway_length_m = 1000
evaluation_length_m = 600
num_lanes = 3
ivd_m = 60
bs_isd_m = 600

[metrics]
num_seeds = 2
"""


@pytest.fixture
def small_config_file(tmp_path):
    path = tmp_path / "small.ini"
    path.write_text(SMALL_INI)
    return str(path)


def read(path):
    return Path(path).read_text()


class TestCsvFormatting:
    def run_rows(self, config_text=SMALL_INI, ivd=(60.0,), tf=(10.0,)):
        config = parse_config(config_text)
        return run_sweep(config, SweepSpec(ivd_values=ivd,
                                           tx_frequency_values=tf))

    def test_header_is_the_published_contract(self):
        assert CSV_HEADER == ("ivd_m,tx_freq_hz,num_ues,data_volume_mbps,"
                              "mcs_se,prr_mean,prr_stderr,num_seeds,error")

    def test_success_row_shape(self):
        lines = csv_rows(self.run_rows())
        assert lines[0] == CSV_HEADER
        fields = lines[1].split(",")
        assert len(fields) == 9
        assert fields[0] == "60"
        assert fields[1] == "10"
        assert fields[2] == "30"
        assert fields[3] == "0.6144"  # 30 * 2048 * 10 bit/s in Mbps
        assert fields[4] == "0.1523"
        assert fields[7] == "2"
        assert fields[8] == ""

    def test_error_row_blanks_numeric_fields(self):
        lines = csv_rows(self.run_rows(ivd=(5.0,), tf=(80.0,)))
        assert lines[1] == "5,80,,,,,,,capacity_exceeded"

    def test_csv_round_trips_at_printed_precision(self):
        rows = self.run_rows(ivd=(60.0, 100.0))
        reader = csv.DictReader(csv_rows(rows))
        for row, parsed in zip(rows, reader):
            assert float(parsed["ivd_m"]) == row.ivd_m
            assert int(parsed["num_ues"]) == row.num_ues
            assert abs(float(parsed["data_volume_mbps"])
                       - row.data_volume_mbps) <= 5e-5
            assert float(parsed["mcs_se"]) == row.mcs_se
            assert abs(float(parsed["prr_mean"]) - row.prr.mean_prr) <= 5e-5
            assert int(parsed["num_seeds"]) == row.prr.num_seeds

    def test_json_rows_mirror_csv_values(self):
        rows = self.run_rows()
        (entry,) = json_rows(rows)
        assert entry["ivd_m"] == 60.0
        assert entry["num_ues"] == 30
        assert entry["prr_mean"] == rows[0].prr.mean_prr
        assert entry["per_seed_prr"] == list(rows[0].prr.per_seed_prr)
        assert entry["error"] is None


class TestEmitResults:
    def test_writes_all_three_files(self, tmp_path):
        config = parse_config(SMALL_INI)
        sweep = SweepSpec(ivd_values=(60.0,), tx_frequency_values=(10.0,))
        rows = run_sweep(config, sweep)
        paths = emit_results(rows, config, sweep, str(tmp_path / "out"),
                             fmt="both")
        assert set(paths) == {"csv", "json", "manifest"}
        assert read(paths["csv"]).splitlines()[0] == CSV_HEADER
        payload = json.loads(read(paths["json"]))
        assert payload["rows"] == json_rows(rows)

    def test_manifest_contents(self, tmp_path):
        config = parse_config(SMALL_INI)
        sweep = SweepSpec(ivd_values=(60.0,), tx_frequency_values=(10.0,))
        rows = run_sweep(config, sweep)
        paths = emit_results(rows, config, sweep, str(tmp_path), fmt="csv")
        manifest = json.loads(read(paths["manifest"]))
        assert manifest["master_seed"] == 0
        assert manifest["num_seeds"] == 2
        assert manifest["sweep"] == {"ivd_values": [60.0],
                                     "tx_frequency_values": [10.0]}
        assert manifest["config"]["scenario"]["ivd_m"] == 60.0
        assert set(manifest["warnings"]) == {"clamped_distances",
                                             "half_duplex_skips"}

    def test_csv_only_format_skips_json(self, tmp_path):
        config = parse_config(SMALL_INI)
        sweep = SweepSpec(ivd_values=(60.0,), tx_frequency_values=(10.0,))
        rows = run_sweep(config, sweep)
        paths = emit_results(rows, config, sweep, str(tmp_path), fmt="csv")
        assert "json" not in paths
        assert not (tmp_path / "results.json").exists()


class TestSweepCommand:
    def test_successful_sweep(self, small_config_file, tmp_path, capsys):
        out = tmp_path / "results"
        code = main(["sweep", "--config", small_config_file,
                     "--ivd", "60,100", "--tf", "10",
                     "--out", str(out), "--format", "both", "--quiet"])
        assert code == 0
        lines = read(out / "results.csv").splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) == 3
        assert (out / "run_manifest.json").exists()

    def test_rerun_is_byte_identical(self, small_config_file, tmp_path):
        args = ["sweep", "--config", small_config_file, "--ivd", "60",
                "--tf", "10,2", "--format", "both", "--quiet"]
        main(args + ["--out", str(tmp_path / "a")])
        main(args + ["--out", str(tmp_path / "b")])
        for name in ("results.csv", "results.json", "run_manifest.json"):
            assert read(tmp_path / "a" / name) == read(tmp_path / "b" / name)

    def test_manifest_reproduces_the_run(self, small_config_file,
                                         tmp_path):
        first = tmp_path / "first"
        main(["sweep", "--config", small_config_file, "--ivd", "60",
              "--tf", "10", "--out", str(first), "--quiet"])
        second = tmp_path / "second"
        main(["sweep", "--config", str(first / "run_manifest.json"),
              "--ivd", "60", "--tf", "10", "--out", str(second),
              "--quiet"])
        assert read(first / "results.csv") == read(second / "results.csv")

    def test_seed_and_seeds_overrides_change_the_outcome(
            self, small_config_file, tmp_path, capsys):
        base = ["sweep", "--config", small_config_file, "--ivd", "60",
                "--tf", "10", "--quiet"]
        main(base + ["--out", str(tmp_path / "s0")])
        main(base + ["--seed", "1", "--out", str(tmp_path / "s1")])
        main(base + ["--seeds", "3", "--out", str(tmp_path / "n3")])
        csv0 = read(tmp_path / "s0" / "results.csv")
        assert csv0 != read(tmp_path / "s1" / "results.csv")
        row = read(tmp_path / "n3" / "results.csv").splitlines()[1]
        assert row.split(",")[7] == "3"

    def test_all_cells_over_capacity_exits_2(self, small_config_file,
                                             tmp_path, capsys):
        code = main(["sweep", "--config", small_config_file,
                     "--ivd", "5", "--tf", "80",
                     "--out", str(tmp_path / "o"), "--quiet"])
        assert code == 2
        assert "capacity" in capsys.readouterr().err

    def test_partial_capacity_failure_exits_0(self, small_config_file,
                                              tmp_path, capsys):
        code = main(["sweep", "--config", small_config_file,
                     "--ivd", "5,60", "--tf", "80",
                     "--out", str(tmp_path / "o"), "--quiet"])
        assert code == 0
        lines = read(tmp_path / "o" / "results.csv").splitlines()
        assert lines[1].endswith("capacity_exceeded")
        assert lines[2].endswith(",")

    def test_unquiet_sweep_prints_rows(self, small_config_file, tmp_path,
                                       capsys):
        main(["sweep", "--config", small_config_file, "--ivd", "60",
              "--tf", "10", "--out", str(tmp_path / "o")])
        captured = capsys.readouterr()
        assert CSV_HEADER in captured.out
        assert "drops:" in captured.err

    def test_bad_axis_list_exits_1(self, small_config_file, tmp_path,
                                   capsys):
        code = main(["sweep", "--config", small_config_file,
                     "--ivd", "sixty", "--tf", "10",
                     "--out", str(tmp_path / "o"), "--quiet"])
        assert code == 1
        assert "ivd" in capsys.readouterr().err


class TestRunCommand:
    def test_prints_drop_summary(self, capsys):
        code = main(["run"])
        assert code == 0
        out = capsys.readouterr().out
        assert "vehicles:         96" in out
        assert "data volume:      1.9661 Mbit/s" in out
        assert "selected MCS:     index 2, SE 0.2344 bit/s/Hz" in out
        assert "slots per period: 114" in out
        assert "mean PRR:" in out

    def test_detail_lists_every_transmitter(self, small_config_file,
                                            capsys):
        code = main(["run", "--config", small_config_file, "--detail"])
        assert code == 0
        out = capsys.readouterr().out
        assert "tx_id,num_in_range,num_success,prr" in out
        assert len([l for l in out.splitlines()
                    if l and l[0].isdigit()]) == 30

    def test_capacity_exceeded_exits_2(self, tmp_path, capsys):
        path = tmp_path / "over.ini"
        path.write_text("[scenario]\nivd_m = 5\n\n[mac]\n"
                        "tx_frequency_hz = 15\n")
        assert main(["run", "--config", str(path)]) == 2
        assert "error" in capsys.readouterr().err

    def test_missing_config_exits_1(self, capsys):
        assert main(["run", "--config", "/nonexistent.ini"]) == 1
        assert "config error" in capsys.readouterr().err


class TestPathlossCommand:
    def test_los_single_distance(self, capsys):
        code = main(["pathloss", "--model", "los", "--fc", "5.9e9",
                     "--d", "100"])
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "d_m,model,regime,pathloss_db"
        assert lines[1] == "100,los,los-near,44.438"

    def test_nlos_single_distance(self, capsys):
        main(["pathloss", "--model", "nlos", "--d", "100"])
        assert capsys.readouterr().out.splitlines()[1] \
            == "100,nlos,nlos,107.131"

    def test_both_models_over_a_grid(self, capsys):
        main(["pathloss", "--model", "both", "--d", "100:300:100"])
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 1 + 3 * 2
        assert lines[1].startswith("100,los,")
        assert lines[2].startswith("100,nlos,")

    def test_comma_list(self, capsys):
        main(["pathloss", "--d", "50,1000"])
        lines = capsys.readouterr().out.splitlines()
        assert lines[1].split(",")[2] == "los-near"
        assert lines[2].split(",")[2] == "los-far"

    def test_bad_grid_exits_1(self, capsys):
        assert main(["pathloss", "--d", "10:5:1"]) == 1
        assert main(["pathloss", "--d", "1:2:3:4"]) == 1

    def test_out_of_range_distance_exits_1(self, capsys):
        assert main(["pathloss", "--model", "los", "--d", "20000"]) == 1


class TestValidateConfigCommand:
    def test_valid_config(self, small_config_file, capsys):
        assert main(["validate-config", "--config",
                     small_config_file]) == 0
        assert "config OK (30 vehicles, 2 seeds)" \
            in capsys.readouterr().out

    def test_invalid_value_names_the_key(self, tmp_path, capsys):
        path = tmp_path / "bad.ini"
        path.write_text("[scenario]\nivd_m = 0\n")
        assert main(["validate-config", "--config", str(path)]) == 1
        assert "ivd_m" in capsys.readouterr().err

    def test_unknown_key_names_the_key(self, tmp_path, capsys):
        path = tmp_path / "bad.ini"
        path.write_text("[scenario]\nivd = 10\n")
        assert main(["validate-config", "--config", str(path)]) == 1
        assert "scenario.ivd" in capsys.readouterr().err

    def test_defaults_validate(self, capsys):
        assert main(["validate-config"]) == 0
        assert "96 vehicles" in capsys.readouterr().out


class TestVersionFlag:
    def test_version_prints_and_exits_zero(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        from sidelink_sim import __version__
        assert __version__ in capsys.readouterr().out
