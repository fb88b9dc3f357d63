"""Writers and parsers for the delimited tables a run leaves on disk.

Floats are written with ``repr`` so a parsed table is bit-identical to
the values that produced it; rerunning the same seed rewrites the same
bytes.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

DISTRIBUTION_FILE = "distribution.csv"
TRIALS_FILE = "trials.csv"
METRICS_FILE = "metrics.json"
CONVERGENCE_FILE = "convergence.csv"
HISTOGRAM_FILE = "histogram.csv"
COMPARE_FILE = "compare.csv"
MEAN_BY_SPEED_FILE = "mean_loss_by_speed.csv"
PHASE_REPORT_FILE = "phase_report.csv"
SCENARIO_DUMP_FILE = "scenarios.jsonl"


def _write_rows(path: Path, header: list[str], rows: list[list]) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow(["" if v is None else repr(v) if isinstance(v, float) else v for v in row])


def _read_rows(path: Path, header: list[str]) -> list[list[str]]:
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        got = next(reader)
        if got != header:
            raise ValueError(f"{path.name}: expected header {header}, got {got}")
        return [row for row in reader]


def write_distribution(path: Path, points: list[tuple[float, float, float]]) -> None:
    _write_rows(
        path,
        ["wind_speed_m_s", "mean_loss_mwh", "weight"],
        [[s, l, w] for s, l, w in points],
    )


def read_distribution(path: Path) -> list[tuple[float, float, float]]:
    rows = _read_rows(path, ["wind_speed_m_s", "mean_loss_mwh", "weight"])
    return [(float(a), float(b), float(c)) for a, b, c in rows]


def write_trials(path: Path, rows: list[tuple[float, int, float]]) -> None:
    _write_rows(
        path,
        ["wind_speed_m_s", "trial", "loss_mwh"],
        [[s, t, l] for s, t, l in rows],
    )


def read_trials(path: Path) -> list[tuple[float, int, float]]:
    rows = _read_rows(path, ["wind_speed_m_s", "trial", "loss_mwh"])
    return [(float(a), int(b), float(c)) for a, b, c in rows]


def write_metrics(path: Path, metrics: dict) -> None:
    path.write_text(json.dumps(metrics, indent=2, sort_keys=True) + "\n")


def read_metrics(path: Path) -> dict:
    return json.loads(path.read_text())


def write_convergence(path: Path, rows: list[tuple[float, int | None, int, float]]) -> None:
    _write_rows(
        path,
        ["wind_speed_m_s", "converged_at", "n_trials", "final_mean_mwh"],
        [[s, c, n, m] for s, c, n, m in rows],
    )


def read_convergence(path: Path) -> list[tuple[float, int | None, int, float]]:
    rows = _read_rows(path, ["wind_speed_m_s", "converged_at", "n_trials", "final_mean_mwh"])
    return [
        (float(a), int(b) if b else None, int(c), float(d)) for a, b, c, d in rows
    ]


def write_histogram(path: Path, bins: list[tuple[float, float, float]]) -> None:
    _write_rows(
        path,
        ["bin_left_mwh", "bin_right_mwh", "weight"],
        [[a, b, w] for a, b, w in bins],
    )


def read_histogram(path: Path) -> list[tuple[float, float, float]]:
    rows = _read_rows(path, ["bin_left_mwh", "bin_right_mwh", "weight"])
    return [(float(a), float(b), float(c)) for a, b, c in rows]


def write_compare(path: Path, rows: list[tuple[str, float, float, bool]]) -> None:
    _write_rows(
        path,
        ["config_label", "var_mwh", "cvar_mwh", "improved_over_base"],
        [[label, v, c, str(imp).lower()] for label, v, c, imp in rows],
    )


def read_compare(path: Path) -> list[tuple[str, float, float, bool]]:
    rows = _read_rows(path, ["config_label", "var_mwh", "cvar_mwh", "improved_over_base"])
    return [(a, float(b), float(c), d == "true") for a, b, c, d in rows]


def write_mean_by_speed(
    path: Path, speeds: list[float], by_config: dict[str, list[float]]
) -> None:
    labels = sorted(by_config)
    header = ["wind_speed_m_s"] + [f"{label}_mwh" for label in labels]
    rows = []
    for i, s in enumerate(speeds):
        rows.append([s] + [by_config[label][i] for label in labels])
    _write_rows(path, header, rows)


def read_mean_by_speed(path: Path) -> tuple[list[float], dict[str, list[float]]]:
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header[0] != "wind_speed_m_s" or not all(h.endswith("_mwh") for h in header[1:]):
            raise ValueError(f"{path.name}: unexpected header {header}")
        labels = [h[: -len("_mwh")] for h in header[1:]]
        speeds = []
        by_config: dict[str, list[float]] = {label: [] for label in labels}
        for row in reader:
            speeds.append(float(row[0]))
            for label, val in zip(labels, row[1:]):
                by_config[label].append(float(val))
    return speeds, by_config


def write_phase_report(path: Path, stats) -> None:
    _write_rows(
        path,
        [
            "omega_m_s",
            "n_trials",
            "config_label",
            "mean_initial_loss_kw",
            "mean_assessment_h",
            "mean_restored_kw",
        ],
        [
            [
                stats.omega_m_s,
                stats.n_trials,
                stats.config_label,
                stats.mean_initial_loss_kw,
                stats.mean_assessment_h,
                stats.mean_restored_kw,
            ]
        ],
    )


def read_phase_report(path: Path) -> dict:
    rows = _read_rows(
        path,
        [
            "omega_m_s",
            "n_trials",
            "config_label",
            "mean_initial_loss_kw",
            "mean_assessment_h",
            "mean_restored_kw",
        ],
    )
    (row,) = rows
    return {
        "omega_m_s": float(row[0]),
        "n_trials": int(row[1]),
        "config_label": row[2],
        "mean_initial_loss_kw": float(row[3]),
        "mean_assessment_h": float(row[4]),
        "mean_restored_kw": float(row[5]),
    }


def write_scenario_dump(path: Path, records: list[dict]) -> None:
    with path.open("w") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def read_scenario_dump(path: Path) -> list[dict]:
    return [json.loads(line) for line in path.read_text().splitlines() if line.strip()]
