"""Command-line front end.

Subcommands: ``run`` (one drop), ``sweep`` (IVD x packet-frequency
grid with CSV/JSON outputs and a reproducibility manifest),
``pathloss`` (tabulate the propagation curves), ``validate-config``.
Exit codes: 0 on success, 1 on configuration errors (the offending key
is named on stderr), 2 when capacity is exceeded (in every sweep cell,
or in a single run).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from typing import Optional, Sequence

from . import __version__
from .channel import NLOS, pathloss_los, pathloss_nlos
from .config import config_to_dict, load_config
from .engine import SweepSpec, run_drop, run_sweep
from .errors import CapacityExceededError, ConfigError, SimulationError
from .metrics import WarningCounters, aggregate

CSV_HEADER = ("ivd_m,tx_freq_hz,num_ues,data_volume_mbps,mcs_se,"
              "prr_mean,prr_stderr,num_seeds,error")


def _num(x: float) -> str:
    """Compact axis-value formatting: 100 -> "100", 0.5 -> "0.5"."""
    return f"{x:g}"


def _f4(x: Optional[float]) -> str:
    return "" if x is None else f"{x:.4f}"


def csv_rows(rows) -> list:
    """CSV lines (no trailing newline) for a list of SweepResults."""
    lines = [CSV_HEADER]
    for r in rows:
        if r.error is not None:
            lines.append(f"{_num(r.ivd_m)},{_num(r.tx_frequency_hz)}"
                         f",,,,,,,{r.error}")
            continue
        lines.append(",".join([
            _num(r.ivd_m), _num(r.tx_frequency_hz), str(r.num_ues),
            _f4(r.data_volume_mbps), _f4(r.mcs_se), _f4(r.prr.mean_prr),
            _f4(r.prr.stderr_prr), str(r.prr.num_seeds), ""]))
    return lines


def json_rows(rows) -> list:
    out = []
    for r in rows:
        if r.error is not None:
            out.append({"ivd_m": r.ivd_m, "tx_freq_hz": r.tx_frequency_hz,
                        "num_ues": None, "data_volume_mbps": None,
                        "mcs_se": None, "prr_mean": None, "prr_stderr": None,
                        "num_seeds": None, "per_seed_prr": None,
                        "error": r.error})
            continue
        out.append({"ivd_m": r.ivd_m, "tx_freq_hz": r.tx_frequency_hz,
                    "num_ues": r.num_ues,
                    "data_volume_mbps": r.data_volume_mbps,
                    "mcs_se": r.mcs_se, "prr_mean": r.prr.mean_prr,
                    "prr_stderr": r.prr.stderr_prr,
                    "num_seeds": r.prr.num_seeds,
                    "per_seed_prr": list(r.prr.per_seed_prr),
                    "error": None})
    return out


def emit_results(rows, config, sweep: SweepSpec, out_dir: str,
                 fmt: str = "csv") -> dict:
    """Write results and the run manifest; returns {kind: path}.

    Outputs are a pure function of (config, sweep): no timestamps or
    environment details, so a rerun is byte-identical.
    """
    os.makedirs(out_dir, exist_ok=True)
    paths = {}

    if fmt in ("csv", "both"):
        path = os.path.join(out_dir, "results.csv")
        with open(path, "w") as f:
            f.write("\n".join(csv_rows(rows)) + "\n")
        paths["csv"] = path
    if fmt in ("json", "both"):
        path = os.path.join(out_dir, "results.json")
        with open(path, "w") as f:
            json.dump({"rows": json_rows(rows)}, f, indent=2)
            f.write("\n")
        paths["json"] = path

    warnings = WarningCounters()
    for r in rows:
        if r.prr is not None:
            warnings.merge(r.prr.warnings)
    manifest = {
        "code_version": __version__,
        "master_seed": config.master_seed,
        "num_seeds": config.metrics.num_seeds,
        "sweep": {
            "ivd_values": list(sweep.ivd_values),
            "tx_frequency_values": list(sweep.tx_frequency_values),
        },
        "format": fmt,
        "warnings": warnings.as_dict(),
        "config": config_to_dict(config),
    }
    path = os.path.join(out_dir, "run_manifest.json")
    with open(path, "w") as f:
        json.dump(manifest, f, indent=2)
        f.write("\n")
    paths["manifest"] = path
    return paths


def _parse_list(text: str, flag: str) -> tuple:
    try:
        values = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise ConfigError(flag, f"expected comma-separated numbers, "
                                f"got {text!r}") from None
    if not values:
        raise ConfigError(flag, "needs at least one value")
    return values


def _parse_grid(text: str) -> list:
    """Distance grid: a value, a comma list, or start:stop:step."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError("d", f"grid must be start:stop:step, "
                                   f"got {text!r}")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError:
            raise ConfigError("d", f"bad grid {text!r}") from None
        if step <= 0 or stop < start:
            raise ConfigError("d", f"bad grid {text!r}")
        out = []
        d = start
        while d <= stop + 1e-9:
            out.append(round(d, 9))
            d += step
        return out
    return list(_parse_list(text, "d"))


def _apply_overrides(config, args):
    if getattr(args, "seed", None) is not None:
        config = replace(config, master_seed=args.seed)
    if getattr(args, "seeds", None) is not None:
        config = replace(config, metrics=replace(config.metrics,
                                                 num_seeds=args.seeds))
    return config


def cmd_run(args) -> int:
    config = _apply_overrides(load_config(args.config), args)
    result = run_drop(config, config.master_seed)
    agg = aggregate([result.samples], result.warnings)
    print(f"vehicles:         {result.num_ues}")
    print(f"data volume:      {result.data_volume_bps / 1e6:.4f} Mbit/s")
    print(f"required SE:      {result.required_se:.4f} bit/s/Hz")
    print(f"selected MCS:     index {result.mcs.index}, "
          f"SE {result.mcs.spectral_efficiency:.4f} bit/s/Hz")
    print(f"slots per period: {result.num_slots}")
    print(f"mean PRR:         {agg.mean_prr:.4f}")
    print(f"warnings:         {result.warnings.as_dict()}")
    if args.detail:
        print("tx_id,num_in_range,num_success,prr")
        for s in result.samples:
            prr = "" if s.prr is None else f"{s.prr:.4f}"
            print(f"{s.tx_id},{s.num_in_range},{s.num_success},{prr}")
    return 0


def cmd_sweep(args) -> int:
    config = _apply_overrides(load_config(args.config), args)
    sweep = SweepSpec(
        ivd_values=_parse_list(args.ivd, "ivd"),
        tx_frequency_values=_parse_list(args.tf, "tf"))

    progress = None
    if not args.quiet:
        def progress(done, total):
            print(f"\rdrops: {done}/{total}", end="", file=sys.stderr)
            if done == total:
                print(file=sys.stderr)

    rows = run_sweep(config, sweep, progress=progress)
    paths = emit_results(rows, config, sweep, args.out, args.format)
    if not args.quiet:
        for line in csv_rows(rows):
            print(line)
        for kind, path in sorted(paths.items()):
            print(f"wrote {kind}: {path}", file=sys.stderr)
    if rows and all(r.error == "capacity_exceeded" for r in rows):
        print("error: capacity exceeded in every sweep cell",
              file=sys.stderr)
        return 2
    return 0


def cmd_pathloss(args) -> int:
    distances = _parse_grid(args.d)
    models = ["los", "nlos"] if args.model == "both" else [args.model]
    print("d_m,model,regime,pathloss_db")
    for d in distances:
        for model in models:
            if model == "los":
                pl, regime = pathloss_los(d, args.h_tx, args.h_rx, args.fc)
            else:
                pl = pathloss_nlos(d, args.h_bs, args.h_ms, args.fc)
                regime = NLOS
            print(f"{_num(d)},{model},{regime},{pl:.3f}")
    return 0


def cmd_validate_config(args) -> int:
    config = load_config(args.config)
    # a loadable config is a valid one; echo the resolved deployment size
    n = config.scenario.vehicles_per_lane * config.scenario.num_lanes
    print(f"config OK ({n} vehicles, "
          f"{config.metrics.num_seeds} seeds)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sidelink-sim",
        description="Highway sidelink broadcast simulator")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config(p):
        p.add_argument("--config", default=None,
                       help="INI config or run manifest JSON "
                            "(default: built-in highway deployment)")

    p_run = sub.add_parser("run", help="simulate one drop")
    add_config(p_run)
    p_run.add_argument("--seed", type=int, default=None,
                       help="master seed override")
    p_run.add_argument("--detail", action="store_true",
                       help="print one line per transmitter")
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep",
                             help="sweep IVD x packet frequency")
    add_config(p_sweep)
    p_sweep.add_argument("--seed", type=int, default=None,
                         help="master seed override")
    p_sweep.add_argument("--seeds", type=int, default=None,
                         help="number of seeds per cell")
    p_sweep.add_argument("--ivd", default="5,10,20,40,50,80,100",
                         help="comma-separated IVD values in meters")
    p_sweep.add_argument("--tf", default="10",
                         help="comma-separated packet frequencies in Hz")
    p_sweep.add_argument("--out", default="results",
                         help="output directory")
    p_sweep.add_argument("--format", choices=("csv", "json", "both"),
                         default="both")
    p_sweep.add_argument("--quiet", action="store_true")
    p_sweep.set_defaults(func=cmd_sweep)

    p_pl = sub.add_parser("pathloss", help="tabulate pathloss curves")
    p_pl.add_argument("--model", choices=("los", "nlos", "both"),
                      default="los")
    p_pl.add_argument("--fc", type=float, default=5.9e9,
                      help="carrier frequency in Hz")
    p_pl.add_argument("--d", default="10:1000:10",
                      help="distance(s) in meters: value, list, or "
                           "start:stop:step")
    p_pl.add_argument("--h-tx", type=float, default=1.5)
    p_pl.add_argument("--h-rx", type=float, default=1.5)
    p_pl.add_argument("--h-bs", type=float, default=35.0)
    p_pl.add_argument("--h-ms", type=float, default=1.5)
    p_pl.set_defaults(func=cmd_pathloss)

    p_val = sub.add_parser("validate-config", help="check a config file")
    add_config(p_val)
    p_val.set_defaults(func=cmd_validate_config)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except CapacityExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SimulationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
