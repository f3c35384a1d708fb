"""Command-line front end: experiment presets, flag/config parsing, CSV output.

Exit codes: 0 success, 2 usage/configuration error, 3 runtime or I/O error.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone

from . import __version__
from .engine import BerEstimate, ExperimentConfig, run_intercept_sweep, run_sweep
from .errors import ConfigurationError
from .security import InterceptEstimate
from .selection import Scheme, Thresholds
from .topology import CaseId, case_variances

CSV_HEADER = "scheme,case,modulation,devices,x_kind,x_db,y_kind,y,trials,errors,outage_fraction,seed"

_SCHEMES = {s.value: s for s in Scheme}
_MODS = {"bpsk": 2, "qpsk": 4, "8psk": 8, "16psk": 16}
_CASES = {"1": CaseId.CASE_I, "2": CaseId.CASE_II, "3": CaseId.CASE_III}
# per-case default output threshold (Case II uses the higher combiner gate)
_CASE_OUT_THRESH = {CaseId.CASE_I: 5.0, CaseId.CASE_II: 10.0, CaseId.CASE_III: 5.0}

PRESETS = ("fig2", "fig3", "fig4", "fig5", "fig6", "fig7")


@dataclass
class RunManifest:
    """Reproducibility metadata written into every CSV as comment lines."""

    description: str
    master_seed: int
    extra: list[str] = field(default_factory=list)

    def lines(self) -> list[str]:
        stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
        return [
            f"# sidelink-sim {__version__}",
            f"# run: {self.description}",
            f"# seed: {self.master_seed}",
            *[f"# {line}" for line in self.extra],
            f"# timestamp: {stamp}",
        ]


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def ber_row(cfg: ExperimentConfig, est: BerEstimate) -> dict:
    return {
        "scheme": cfg.scheme.value,
        "case": str(cfg.case.case_id.value),
        "modulation": str(cfg.modulation),
        "devices": str(cfg.n_devices),
        "x_kind": "snr",
        "x_db": _fmt(est.snr_db),
        "y_kind": "ber",
        "y": _fmt(est.ber),
        "trials": str(est.bits),
        "errors": str(est.bit_errors),
        "outage_fraction": _fmt(est.outage_fraction),
        "seed": str(est.seed),
    }


def intercept_row(cfg: ExperimentConfig, est: InterceptEstimate, seed: int) -> dict:
    return {
        "scheme": cfg.scheme.value,
        "case": str(cfg.case.case_id.value),
        "modulation": str(cfg.modulation),
        "devices": str(cfg.n_devices),
        "x_kind": "main_to_eaves_db",
        "x_db": _fmt(est.x_value),
        "y_kind": "intercept",
        "y": _fmt(est.estimate),
        "trials": str(est.trials),
        "errors": str(round(est.estimate * est.trials)),
        "outage_fraction": _fmt(0.0),
        "seed": str(seed),
    }


def write_csv(rows: list[dict], path: str, manifest: RunManifest | None = None,
              manifest_lines: list[str] | None = None) -> None:
    """Write result rows with the fixed schema; manifest lines go first as # comments."""
    columns = CSV_HEADER.split(",")
    for row in rows:
        if set(row) != set(columns):
            raise ConfigurationError(f"row does not match the CSV schema: {sorted(row)}")
    lines = list(manifest_lines if manifest_lines is not None
                 else manifest.lines() if manifest is not None else [])
    lines.append(CSV_HEADER)
    lines.extend(",".join(row[c] for c in columns) for row in rows)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_csv(path: str) -> tuple[list[str], list[dict]]:
    """Read a results CSV back into (manifest comment lines, row dicts)."""
    with open(path, encoding="utf-8") as fh:
        raw = [line.rstrip("\n") for line in fh]
    manifest_lines = [line for line in raw if line.startswith("#")]
    data = [line for line in raw if line and not line.startswith("#")]
    if not data or data[0] != CSV_HEADER:
        raise ConfigurationError(f"{path}: missing or unexpected header row")
    columns = CSV_HEADER.split(",")
    rows = []
    for line in data[1:]:
        parts = line.split(",")
        if len(parts) != len(columns):
            raise ConfigurationError(f"{path}: malformed row {line!r}")
        rows.append(dict(zip(columns, parts)))
    return manifest_lines, rows


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sidelink-sim",
        description="BER and intercept-probability simulator for threshold-based AF device selection",
    )
    parser.add_argument("--preset", choices=PRESETS, help="run a canned experiment and write its CSV")
    parser.add_argument("--config", help="flat key=value config file; flags override file values")
    parser.add_argument("--scheme", choices=sorted(_SCHEMES), help="selection scheme (default pods-p)")
    parser.add_argument("--case", choices=sorted(_CASES), help="distance case (default 1)")
    parser.add_argument("--devices", type=int, help="number of relay devices (default 5)")
    parser.add_argument("--mod", choices=sorted(_MODS), help="modulation (default bpsk)")
    parser.add_argument("--snr-start", type=float, help="sweep start in dB (default 0)")
    parser.add_argument("--snr-stop", type=float, help="sweep stop in dB, inclusive (default 40)")
    parser.add_argument("--snr-step", type=float, help="sweep step in dB (default 2)")
    parser.add_argument("--bits", type=int, help="bits per SNR point (default 100000)")
    parser.add_argument("--seed", type=int, help="master seed (falls back to $SIDELINK_SIM_SEED, then 2024)")
    parser.add_argument("--in-thresh-db", type=float, help="device admission threshold in dB (default 5)")
    parser.add_argument("--out-thresh-db", type=float, help="combiner threshold in dB (default per case)")
    parser.add_argument("--combine", choices=["all", "best"], help="combine all admitted devices or only the best")
    parser.add_argument("--out", default=".", help="output directory for CSV files")
    return parser


def _read_config_file(path: str) -> dict:
    known = {"scheme", "case", "devices", "mod", "snr_start", "snr_stop", "snr_step",
             "bits", "seed", "in_thresh_db", "out_thresh_db", "combine"}
    values: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigurationError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in known:
                raise ConfigurationError(f"{path}:{lineno}: unknown config key {key!r}")
            values[key] = value
    return values


def _snr_grid(start: float, stop: float, step: float) -> tuple:
    if step <= 0 or stop < start:
        raise ConfigurationError(f"bad SNR grid: start={start} stop={stop} step={step}")
    n = int(round((stop - start) / step)) + 1
    return tuple(start + i * step for i in range(n))


def parse_config(args: argparse.Namespace) -> ExperimentConfig:
    """Merge config-file values and flags (flags win) into a validated config."""
    values = _read_config_file(args.config) if args.config else {}

    def pick(flag_value, key, default, convert):
        if flag_value is not None:
            return flag_value
        if key in values:
            try:
                return convert(values[key])
            except (KeyError, ValueError) as exc:
                raise ConfigurationError(f"bad config value for {key}: {values[key]!r}") from exc
        return default

    scheme_name = pick(args.scheme, "scheme", "pods-p", str)
    if scheme_name not in _SCHEMES:
        raise ConfigurationError(f"unknown scheme {scheme_name!r}")
    case_name = pick(args.case, "case", "1", str)
    if case_name not in _CASES:
        raise ConfigurationError(f"unknown case {case_name!r}")
    mod_name = pick(args.mod, "mod", "bpsk", str)
    if mod_name not in _MODS:
        raise ConfigurationError(f"unknown modulation {mod_name!r}")

    case_id = _CASES[case_name]
    seed = pick(args.seed, "seed", None, int)
    if seed is None:
        env = os.environ.get("SIDELINK_SIM_SEED")
        seed = int(env) if env else 2024

    grid = _snr_grid(
        pick(args.snr_start, "snr_start", 0.0, float),
        pick(args.snr_stop, "snr_stop", 40.0, float),
        pick(args.snr_step, "snr_step", 2.0, float),
    )
    thresholds = Thresholds(
        input_db=pick(args.in_thresh_db, "in_thresh_db", 5.0, float),
        output_db=pick(args.out_thresh_db, "out_thresh_db", _CASE_OUT_THRESH[case_id], float),
    )
    return ExperimentConfig(
        scheme=_SCHEMES[scheme_name],
        case=case_variances(case_id),
        n_devices=pick(args.devices, "devices", 5, int),
        modulation=_MODS[mod_name],
        thresholds=thresholds,
        snr_grid_db=grid,
        n_bits=pick(args.bits, "bits", 100_000, int),
        master_seed=seed,
        combine_all_passing=pick(args.combine, "combine", "all", str) == "all",
    )


def _check_out_dir(out_dir: str) -> None:
    if not os.path.isdir(out_dir):
        raise OSError(f"output directory does not exist: {out_dir}")
    if not os.access(out_dir, os.W_OK):
        raise OSError(f"output directory is not writable: {out_dir}")


def run_preset(name: str, seed: int, out_dir: str, n_bits: int | None = None) -> str:
    """Run one canned figure experiment and write its CSV; returns the file path."""
    _check_out_dir(out_dir)
    bits = n_bits if n_bits is not None else 100_000
    base = ExperimentConfig(master_seed=seed, n_bits=bits)
    rows: list[dict] = []

    def ber_curves(configs):
        for cfg in configs:
            for est in run_sweep(cfg):
                rows.append(ber_row(cfg, est))

    from dataclasses import replace

    if name in ("fig2", "fig3", "fig4"):
        case_id = {"fig2": CaseId.CASE_I, "fig3": CaseId.CASE_II, "fig4": CaseId.CASE_III}[name]
        thr = Thresholds(5.0, _CASE_OUT_THRESH[case_id])
        common = replace(base, case=case_variances(case_id), thresholds=thr)
        ber_curves(replace(common, scheme=s) for s in
                   (Scheme.DIRECT_ONLY, Scheme.ODS_NO_THRESHOLD, Scheme.PODS_A, Scheme.PODS_P))
        desc = f"preset {name}: BER vs SNR, case {case_id.value}, 4 schemes"
    elif name == "fig5":
        # round the bit budget down to a multiple of bits-per-symbol
        ber_curves(replace(base, scheme=s, modulation=m,
                           n_bits=bits - bits % {8: 3, 16: 4}[m])
                   for s in (Scheme.ODS_NO_THRESHOLD, Scheme.PODS_A, Scheme.PODS_P)
                   for m in (8, 16))
        desc = "preset fig5: BER vs SNR, case 1, 8-PSK and 16-PSK"
    elif name == "fig6":
        ber_curves(replace(base, scheme=s, n_devices=n)
                   for s in (Scheme.ODS_NO_THRESHOLD, Scheme.PODS_A, Scheme.PODS_P)
                   for n in (5, 10))
        desc = "preset fig6: BER vs SNR, case 1, 5 vs 10 devices"
    elif name == "fig7":
        lam_grid = tuple(range(-5, 17, 2))
        trials = max(bits, 10_000)
        for s in (Scheme.DIRECT_ONLY, Scheme.PODS_A, Scheme.PODS_P):
            cfg = replace(base, scheme=s)
            for est in run_intercept_sweep(cfg, lam_grid, trials):
                rows.append(intercept_row(cfg, est, seed))
        desc = "preset fig7: intercept probability vs main-to-eavesdropper ratio, case 1"
    else:
        raise ConfigurationError(f"unknown preset {name!r}")

    path = os.path.join(out_dir, f"{name}.csv")
    write_csv(rows, path, manifest=RunManifest(description=desc, master_seed=seed))
    return path


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.preset:
            seed = args.seed
            if seed is None:
                env = os.environ.get("SIDELINK_SIM_SEED")
                seed = int(env) if env else 2024
            path = run_preset(args.preset, seed, args.out, n_bits=args.bits)
            print(f"wrote {path}")
            return 0

        cfg = parse_config(args)
        _check_out_dir(args.out)
        rows = [ber_row(cfg, est) for est in run_sweep(cfg)]
        path = os.path.join(args.out, f"ber_{cfg.scheme.value}_case{cfg.case.case_id.value}.csv")
        manifest = RunManifest(
            description=f"{cfg.scheme.value} case {cfg.case.case_id.value} "
                        f"{cfg.modulation}-psk devices={cfg.n_devices}",
            master_seed=cfg.master_seed,
        )
        write_csv(rows, path, manifest=manifest)
        print(f"wrote {path}")
        return 0
    except (ConfigurationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
