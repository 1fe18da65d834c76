"""Render response-curve CSV files as comparison plots.

Input is the CSV the simulator emits: a ``frequency_hz`` column followed by
one column per labeled curve. Plots are log-frequency / linear-response with
a legend naming each curve. All numbers come from the CSV; nothing is
computed here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


class MissingColumnError(KeyError):
    """A requested curve label has no column in the CSV."""


@dataclass(frozen=True)
class FigureSpec:
    """One rendered figure: which CSVs, which curves, where to write."""

    csv_paths: tuple[str, ...]
    output_path: str
    labels: tuple[str, ...] | None = None  # None: every curve in the CSVs
    title: str = ""
    x_range: tuple[float, float] | None = None
    y_range: tuple[float, float] | None = None
    y_label: str = "response (normalized)"

    def __post_init__(self):
        if not self.csv_paths:
            raise ValueError("figure needs at least one input CSV")


@dataclass
class CurveTable:
    frequencies_hz: np.ndarray
    columns: dict = field(default_factory=dict)


def read_curves(csv_path) -> CurveTable:
    """Parse a simulator CSV into frequency grid + named columns."""
    path = Path(csv_path)
    lines = [
        line
        for line in path.read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    header = lines[0].split(",")
    if header[0] != "frequency_hz":
        raise ValueError(f"{path}: first column must be frequency_hz")
    rows = np.array(
        [[float(cell) for cell in line.split(",")] for line in lines[1:]]
    )
    if rows.size == 0:
        return CurveTable(np.empty(0), {label: np.empty(0) for label in header[1:]})
    table = CurveTable(rows[:, 0])
    for j, label in enumerate(header[1:], start=1):
        table.columns[label] = rows[:, j]
    return table


def render(spec: FigureSpec) -> tuple[Path, list[str]]:
    """Draw the figure; returns the output path and the plotted labels."""
    tables = [read_curves(p) for p in spec.csv_paths]
    available: dict = {}
    freq_of: dict = {}
    for table in tables:
        for label, values in table.columns.items():
            available[label] = values
            freq_of[label] = table.frequencies_hz
    wanted = list(spec.labels) if spec.labels is not None else list(available)
    for label in wanted:
        if label not in available:
            raise MissingColumnError(
                f"column {label!r} not found in {', '.join(map(str, spec.csv_paths))}"
            )

    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    for label in wanted:
        ax.semilogx(freq_of[label], available[label], label=label)
    ax.set_xlabel("GW frequency (Hz)")
    ax.set_ylabel(spec.y_label)
    if spec.title:
        ax.set_title(spec.title)
    if spec.x_range:
        ax.set_xlim(*spec.x_range)
    if spec.y_range:
        ax.set_ylim(*spec.y_range)
    ax.grid(True, which="both", alpha=0.3)
    if wanted:
        ax.legend()
    out = Path(spec.output_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out, wanted
