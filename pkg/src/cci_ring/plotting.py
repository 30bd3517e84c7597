"""Figure output: gnuplot scripts over the CSV files and matplotlib PNGs."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .output import read_orbital  # noqa: E402


@dataclass(frozen=True)
class Series:
    csv_name: str
    label: str
    style: str = "-"


@dataclass(frozen=True)
class Panel:
    title: str
    series: tuple


def write_gnuplot(path, panels, png_name: str) -> Path:
    """Script plotting ``density`` vs ``phi`` for every series, one panel each."""
    path = Path(path)
    lines = [
        "set datafile separator ','",
        f"set terminal pngcairo size {500 * len(panels)},400",
        f"set output '{Path(png_name).with_suffix('').name}_gnuplot.png'",
        "set xlabel 'phi'",
        "set ylabel '|phi|^2'",
        "set xrange [-pi:pi]",
        f"set multiplot layout 1,{len(panels)}",
    ]
    for panel in panels:
        lines.append(f"set title '{panel.title}'")
        parts = [f"'{s.csv_name}' using 1:4 skip 1 with lines "
                 f"{'dashtype 2 ' if s.style != '-' else ''}title '{s.label}'"
                 for s in panel.series]
        lines.append("plot " + ", \\\n     ".join(parts))
    lines += ["unset multiplot", ""]
    path.write_text("\n".join(lines))
    return path


def render_png(path, panels, directory) -> Path:
    """Render the same panels with matplotlib (metadata stripped for determinism)."""
    path, directory = Path(path), Path(directory)
    fig, axes = plt.subplots(1, len(panels), figsize=(5 * len(panels), 4), squeeze=False)
    for ax, panel in zip(axes[0], panels):
        for s in panel.series:
            data = read_orbital(directory / s.csv_name)
            ax.plot(data["phi"], data["density"], s.style, label=s.label)
        ax.set_title(panel.title)
        ax.set_xlabel(r"$\phi$")
        ax.set_ylabel(r"$|\phi|^2$")
        ax.set_xlim(-3.1416, 3.1416)
        ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)
    return path
