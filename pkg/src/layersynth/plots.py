"""Figures written next to the text reports."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .labels import DISPLAY_COLORS, FOREGROUND, ClassLabel  # noqa: E402

plt.rcParams.update({
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 120,
})


def _rgb(label: ClassLabel):
    r, g, b = DISPLAY_COLORS[label]
    return (r / 255, g / 255, b / 255)


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_inspect_summary(summary: dict, out_dir) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []

    counts = summary["image_count_histogram"]
    fig, ax = plt.subplots(figsize=(4, 2.6))
    ax.bar([int(k) for k in counts], list(counts.values()), color="0.35")
    ax.set_xlabel("images per page")
    ax.set_ylabel("pages")
    paths.append(_save(fig, out_dir / "image_counts.png"))

    scales = summary["scale_histogram"]
    fig, ax = plt.subplots(figsize=(4, 2.6))
    ax.bar(range(len(scales)), list(scales.values()), color="0.35")
    ax.set_xticks(range(len(scales)))
    ax.set_xticklabels(list(scales), rotation=60, fontsize=7)
    ax.set_xlabel("scale")
    ax.set_ylabel("placements")
    paths.append(_save(fig, out_dir / "scales.png"))

    shares = summary["class_pixel_share"]
    labels = [ClassLabel.BACKGROUND, *FOREGROUND]
    fig, ax = plt.subplots(figsize=(4, 2.6))
    ax.bar([c.label_name for c in labels], [shares[c.label_name] for c in labels],
           color=[_rgb(c) for c in labels], edgecolor="0.2")
    ax.set_ylabel("pixel share")
    ax.set_ylim(0, 1)
    paths.append(_save(fig, out_dir / "class_share.png"))
    return paths


def plot_scores(per_class: dict, accuracy: float, path) -> Path:
    """Grouped P/R/F1 bars per foreground class."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(4.5, 2.8))
    width = 0.25
    for k, metric in enumerate(("precision", "recall", "f1")):
        xs = [i + (k - 1) * width for i in range(len(FOREGROUND))]
        ax.bar(xs, [getattr(per_class[c.label_name], metric) for c in FOREGROUND],
               width, label=metric, color=str(0.2 + 0.25 * k))
    ax.set_xticks(range(len(FOREGROUND)))
    ax.set_xticklabels([c.label_name for c in FOREGROUND])
    ax.set_ylim(0, 1.05)
    ax.set_title(f"pixel accuracy {accuracy:.3f}")
    ax.legend(frameon=False, fontsize=7, ncol=3, loc="lower center")
    return _save(fig, path)
