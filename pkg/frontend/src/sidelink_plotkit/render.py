"""Load result CSVs written by the simulator and render grouped line plots.

The input contract is the simulator's CSV schema: optional '#' manifest
comment lines, a fixed header row, then one data row per sweep point. Nothing
here imports the simulator; the file format is the only coupling.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")  # headless batch tool

import matplotlib.pyplot as plt

CSV_HEADER = "scheme,case,modulation,devices,x_kind,x_db,y_kind,y,trials,errors,outage_fraction,seed"

_Y_LABELS = {"ber": "bit error rate", "intercept": "intercept probability"}
_X_LABELS = {"snr": "SNR (dB)", "main_to_eaves_db": "main-to-eavesdropper gain ratio (dB)"}


class CsvFormatError(ValueError):
    """The CSV does not follow the simulator's result schema."""


def load_rows(path: str) -> list[dict]:
    """Parse a results CSV; raises CsvFormatError on any schema violation."""
    with open(path, encoding="utf-8") as fh:
        lines = [line.rstrip("\n") for line in fh]
    data = [line for line in lines if line and not line.startswith("#")]
    if not data or data[0] != CSV_HEADER:
        raise CsvFormatError(f"{path}: missing or unexpected header row")
    columns = CSV_HEADER.split(",")
    rows = []
    for lineno, line in enumerate(data[1:], 2):
        parts = line.split(",")
        if len(parts) != len(columns):
            raise CsvFormatError(f"{path}: row {lineno} has {len(parts)} fields, expected {len(columns)}")
        row = dict(zip(columns, parts))
        try:
            row["x_db"] = float(row["x_db"])
            row["y"] = float(row["y"])
        except ValueError as exc:
            raise CsvFormatError(f"{path}: row {lineno} has non-numeric x/y values") from exc
        rows.append(row)
    if not rows:
        raise CsvFormatError(f"{path}: no data rows")
    return rows


def _group_key(row: dict, group_by: list[str]) -> tuple:
    return tuple(row[col] for col in group_by)


def render(csv_path: str, out_path: str, logy: bool = False,
           group_by: list[str] | None = None) -> int:
    """Render one line per group to out_path; returns the number of curves drawn."""
    rows = load_rows(csv_path)
    group_by = group_by or ["scheme", "modulation", "devices"]
    unknown = [col for col in group_by if col not in CSV_HEADER.split(",")]
    if unknown:
        raise CsvFormatError(f"unknown group column(s): {', '.join(unknown)}")

    # drop group columns that never vary so legends stay short
    varying = [col for col in group_by if len({row[col] for row in rows}) > 1]
    group_by = varying or [group_by[0]]

    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        groups.setdefault(_group_key(row, group_by), []).append(row)

    y_kinds = {row["y_kind"] for row in rows}
    x_kinds = {row["x_kind"] for row in rows}

    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    for key in sorted(groups):
        pts = sorted(groups[key], key=lambda r: r["x_db"])
        label = ", ".join(f"{col}={val}" for col, val in zip(group_by, key))
        ax.plot([p["x_db"] for p in pts], [p["y"] for p in pts], marker="o", label=label)
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(_X_LABELS.get(x_kinds.pop() if len(x_kinds) == 1 else "", "x (dB)"))
    ax.set_ylabel(_Y_LABELS.get(y_kinds.pop() if len(y_kinds) == 1 else "", "y"))
    ax.grid(True, which="both", alpha=0.4)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return len(groups)
