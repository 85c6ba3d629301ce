"""Flat key=value reports, CSV tables, and figure rendering.

Reports are one `key=value` line per entry, in insertion order, so runs can
be compared with plain diff; a JSON rendering of the same mapping is
available for structured consumers.  Keys beginning with "timing_" carry
wall-clock measurements and are the only values expected to vary between
identical runs.  Figures are rendered with the Agg backend into files;
nothing here ever opens a window.
"""

from __future__ import annotations

import csv
import json
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

from .core import ValidationError
from .imageio import RasterImage

TIMING_PREFIX = "timing_"


def format_value(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return f"{value:.6f}"
    if isinstance(value, (int, str, Fraction)):
        return str(value)
    if isinstance(value, (tuple, list)):
        return ",".join(format_value(v) for v in value)
    raise ValidationError(f"cannot format report value {value!r}")


def format_report(items: Mapping[str, object]) -> str:
    lines = []
    for key, value in items.items():
        if not key or "=" in key or any(c.isspace() for c in key):
            raise ValidationError(f"bad report key {key!r}")
        lines.append(f"{key}={format_value(value)}")
    return "\n".join(lines) + "\n"


def write_report(path, items: Mapping[str, object]) -> None:
    Path(path).write_text(format_report(items), encoding="utf-8")


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (tuple, list)):
        return [_jsonable(v) for v in value]
    return value


def report_as_json(items: Mapping[str, object]) -> str:
    return json.dumps({k: _jsonable(v) for k, v in items.items()}, indent=2) + "\n"


def write_csv(path, fieldnames: Sequence[str], rows: Sequence[Mapping[str, object]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=list(fieldnames))
        writer.writeheader()
        for row in rows:
            writer.writerow({k: format_value(row[k]) for k in fieldnames})


def strip_timings(report_text: str) -> str:
    """Report text without timing lines; what determinism tests compare."""
    kept = [
        line
        for line in report_text.splitlines()
        if not line.startswith(TIMING_PREFIX)
    ]
    return "\n".join(kept) + "\n"


def _pyplot():
    import matplotlib

    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt

    return plt


def _middle_slice(image: RasterImage):
    import numpy as np

    data = np.asarray(image.samples, dtype=np.int64).reshape(
        image.depth, image.height, image.width
    )
    return data[image.depth // 2]


def render_segmentation_figure(
    image: RasterImage, label_image: RasterImage, path
) -> None:
    """Input and labels side by side (middle slice for volumes)."""
    plt = _pyplot()
    fig, axes = plt.subplots(1, 2, figsize=(8, 4))
    for ax, img, title in (
        (axes[0], image, "input"),
        (axes[1], label_image, "labels"),
    ):
        ax.imshow(
            _middle_slice(img),
            cmap="gray",
            vmin=0,
            vmax=img.max_value,
            interpolation="nearest",
        )
        ax.set_title(title)
        ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_bench_figure(rows: Sequence[Mapping[str, object]], path) -> None:
    """Total runtime against pixel count, one line per level count."""
    plt = _pyplot()
    by_k: dict[int, list[tuple[int, float]]] = {}
    for row in rows:
        by_k.setdefault(int(row["k"]), []).append(
            (int(row["pixels"]), float(row["total_seconds"]))
        )
    fig, ax = plt.subplots(figsize=(6, 4))
    for k in sorted(by_k):
        points = sorted(by_k[k])
        ax.plot(
            [p for p, _ in points],
            [t for _, t in points],
            marker="o",
            label=f"k={k}",
        )
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("pixels")
    ax.set_ylabel("total seconds")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
