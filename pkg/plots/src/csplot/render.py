"""Render experiment-sweep CSV files into figures, headlessly.

Parses strictly by column name so schema extensions don't break anything.
One curve per (input file, group value, y column); Wilson error bars appear
whenever the rows carry a trial count alongside a rate column. Output bytes
are deterministic: fixed style, no timestamps.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


class MissingColumnError(KeyError):
    def __init__(self, column: str, path: str):
        super().__init__(f"column {column!r} not found in {path}")
        self.column = column


class NoDataError(ValueError):
    pass


@dataclass(frozen=True)
class PlotSpec:
    inputs: tuple[str, ...]
    x: str
    ys: tuple[str, ...]
    groups: tuple[str, ...] = ()
    out: str = "plot.png"
    title: str | None = None
    dpi: int = 120


# rate column -> its success-count column in the sweep schema
_COUNT_FOR = {"sat_rate": "sat_count", "success_rate": "success_count"}
_Z95 = 1.959963984540054


def wilson_interval(successes: float, trials: float) -> tuple[float, float]:
    p = successes / trials
    z2 = _Z95 * _Z95
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2 * trials)) / denom
    half = (_Z95 / denom) * math.sqrt(p * (1 - p) / trials + z2 / (4 * trials * trials))
    return center - half, center + half


def _read_rows(path: str) -> list[dict]:
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def _series_for(rows: list[dict], spec: PlotSpec, y: str, path: str):
    """(label_suffix, xs, ys, yerr_low, yerr_high) per group value combo."""
    grouped: dict[tuple, list[dict]] = {}
    for row in rows:
        key = tuple(row[g] for g in spec.groups)
        grouped.setdefault(key, []).append(row)
    out = []
    for key in sorted(grouped):
        pts = []
        for row in grouped[key]:
            if row[y] in ("", None):
                continue
            x_val, y_val = float(row[spec.x]), float(row[y])
            lo = hi = None
            count_col = _COUNT_FOR.get(y)
            if count_col and row.get(count_col) not in ("", None) and row.get("trials"):
                lo, hi = wilson_interval(float(row[count_col]), float(row["trials"]))
            pts.append((x_val, y_val, lo, hi))
        if not pts:
            continue
        pts.sort()
        label = ", ".join(f"{g}={v}" for g, v in zip(spec.groups, key))
        label = f"{y} ({label})" if label else y
        out.append((label, pts))
    return out


def render(spec: PlotSpec) -> str:
    """Draw every series in one figure and write it to spec.out."""
    all_series = []
    for path in spec.inputs:
        rows = _read_rows(path)
        if not rows:
            raise NoDataError(f"no data rows in {path}")
        header = rows[0].keys()
        for col in (spec.x, *spec.ys, *spec.groups):
            if col not in header:
                raise MissingColumnError(col, path)
        for y in spec.ys:
            for label, pts in _series_for(rows, spec, y, path):
                if len(spec.inputs) > 1:
                    label = f"{path}: {label}"
                all_series.append((label, pts))
    if not all_series:
        raise NoDataError("no non-empty series after grouping")

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for label, pts in all_series:
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        if all(p[2] is not None for p in pts):
            err_lo = [y - p[2] for y, p in zip(ys, pts)]
            err_hi = [p[3] - y for y, p in zip(ys, pts)]
            ax.errorbar(xs, ys, yerr=[err_lo, err_hi], marker="o",
                        capsize=3, label=label)
        else:
            ax.plot(xs, ys, marker="o", label=label)
    ax.set_xlabel(spec.x)
    ax.set_ylabel(", ".join(spec.ys))
    if spec.title:
        ax.set_title(spec.title)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(spec.out, dpi=spec.dpi, metadata={"Software": "csplab-plots"})
    plt.close(fig)
    return spec.out
