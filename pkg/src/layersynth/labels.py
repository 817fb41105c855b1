"""Class codes and the fixed color key used for mask visualization."""
from __future__ import annotations

import enum

import numpy as np


class ClassLabel(enum.IntEnum):
    BACKGROUND = 0
    TEXT = 1
    FIGURE = 2
    TABLE = 3

    @property
    def color(self) -> tuple[int, int, int]:
        return DISPLAY_COLORS[self]

    @property
    def label_name(self) -> str:
        return self.name.lower()

    @classmethod
    def from_name(cls, name: str) -> "ClassLabel":
        try:
            return cls[name.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown class label {name!r}") from None


DISPLAY_COLORS = {
    ClassLabel.BACKGROUND: (0, 0, 0),
    ClassLabel.TEXT: (0, 255, 0),
    ClassLabel.FIGURE: (255, 0, 0),
    ClassLabel.TABLE: (0, 0, 255),
}

FOREGROUND = (ClassLabel.TEXT, ClassLabel.FIGURE, ClassLabel.TABLE)
IMAGE_CLASSES = (ClassLabel.FIGURE, ClassLabel.TABLE)
ANNOTATION_LABELS = frozenset(c.label_name for c in FOREGROUND)
NUM_CLASSES = 4

# row index == class code
PALETTE = np.array([DISPLAY_COLORS[ClassLabel(i)] for i in range(NUM_CLASSES)], dtype=np.uint8)


def colorize(mask: np.ndarray) -> np.ndarray:
    """Map a class-code mask to an RGB visualization."""
    return PALETTE[mask]
