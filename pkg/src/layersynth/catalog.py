"""Class-labeled source crops used as paste material.

A catalog is described by a small CSV manifest with one ``path,class`` row per
asset; paths are relative to the catalog root. Each asset's gray-level
histogram is computed once at load time and cached on the asset.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import CatalogLoadError, CatalogSchemaError, CatalogValidationError
from .labels import ClassLabel, IMAGE_CLASSES

MANIFEST_NAME = "catalog.csv"
HIST_BINS = 256


def to_gray(raster: np.ndarray) -> np.ndarray:
    """BT.601 luma, rounded half-up, as uint8.

    Done in integer arithmetic so the rounding is exact: 0.299/0.587/0.114
    become 299/587/114 thousandths.
    """
    rgb = np.asarray(raster)
    if rgb.ndim != 3 or rgb.shape[2] != 3:
        raise ValueError(f"expected an H x W x 3 raster, got shape {rgb.shape}")
    r = rgb[..., 0].astype(np.int64)
    g = rgb[..., 1].astype(np.int64)
    b = rgb[..., 2].astype(np.int64)
    gray = (299 * r + 587 * g + 114 * b + 500) // 1000
    return np.clip(gray, 0, 255).astype(np.uint8)


def gray_histogram(raster: np.ndarray) -> np.ndarray:
    """Fraction of pixels at each of the 256 gray levels."""
    rgb = np.asarray(raster)
    if rgb.size == 0 or rgb.ndim != 3 or rgb.shape[0] == 0 or rgb.shape[1] == 0:
        raise ValueError("gray_histogram needs a non-empty raster")
    gray = to_gray(rgb)
    counts = np.bincount(gray.ravel(), minlength=HIST_BINS)
    return counts.astype(np.float64) / float(gray.size)


@dataclass(frozen=True, eq=False)
class Asset:
    id: str
    label: ClassLabel
    raster: np.ndarray = field(repr=False)
    gray_hist: np.ndarray = field(repr=False)

    @classmethod
    def from_raster(cls, asset_id: str, label: ClassLabel, raster: np.ndarray) -> "Asset":
        raster = np.ascontiguousarray(raster, dtype=np.uint8)
        if raster.ndim != 3 or raster.shape[2] != 3 or raster.shape[0] < 1 or raster.shape[1] < 1:
            raise CatalogValidationError(f"asset {asset_id!r}: raster must be non-empty RGB, got {raster.shape}")
        if label == ClassLabel.BACKGROUND:
            raise CatalogValidationError(f"asset {asset_id!r}: background is not an asset class")
        raster.setflags(write=False)
        hist = gray_histogram(raster)
        hist.setflags(write=False)
        return cls(asset_id, ClassLabel(label), raster, hist)

    @property
    def width(self) -> int:
        return self.raster.shape[1]

    @property
    def height(self) -> int:
        return self.raster.shape[0]


class Catalog:
    """Ordered, immutable collection of assets indexable by id."""

    def __init__(self, assets: Iterable[Asset]):
        self._assets: tuple[Asset, ...] = tuple(assets)
        self._by_id: dict[str, Asset] = {}
        for asset in self._assets:
            if asset.id in self._by_id:
                raise CatalogValidationError(f"duplicate asset id {asset.id!r}")
            self._by_id[asset.id] = asset

    def __len__(self) -> int:
        return len(self._assets)

    def __iter__(self) -> Iterator[Asset]:
        return iter(self._assets)

    def __getitem__(self, asset_id: str) -> Asset:
        return self._by_id[asset_id]

    def __contains__(self, asset_id: object) -> bool:
        return asset_id in self._by_id

    @property
    def ids(self) -> list[str]:
        return [a.id for a in self._assets]

    def by_class(self, *labels: ClassLabel) -> list[Asset]:
        return [a for a in self._assets if a.label in labels]

    def counts(self) -> dict[str, int]:
        return {
            label.label_name: sum(1 for a in self._assets if a.label == label)
            for label in (ClassLabel.TEXT, ClassLabel.FIGURE, ClassLabel.TABLE)
        }

    def text_assets(self) -> list[Asset]:
        return self.by_class(ClassLabel.TEXT)

    def image_assets(self) -> list[Asset]:
        return self.by_class(*IMAGE_CLASSES)

    def check_plannable(self) -> None:
        if not self.text_assets():
            raise CatalogValidationError("catalog has no text assets")
        if not self.image_assets():
            raise CatalogValidationError("catalog has no figure/table assets")


def read_manifest(manifest: Path) -> list[tuple[str, ClassLabel]]:
    entries = []
    with open(manifest, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    if rows and [c.strip().lower() for c in rows[0]] == ["path", "class"]:
        rows = rows[1:]
    for lineno, row in enumerate(rows, start=1):
        if len(row) != 2:
            raise CatalogSchemaError(f"{manifest}: record {lineno} must have 2 fields (path, class), got {row!r}")
        rel, cls_name = row[0].strip(), row[1].strip()
        try:
            label = ClassLabel.from_name(cls_name)
        except ValueError:
            raise CatalogSchemaError(f"{manifest}: record {lineno}: unknown class {cls_name!r}") from None
        if label == ClassLabel.BACKGROUND:
            raise CatalogSchemaError(f"{manifest}: record {lineno}: background is not an asset class")
        entries.append((rel, label))
    return entries


def write_manifest(manifest: Path, entries: Sequence[tuple[str, ClassLabel]]) -> None:
    with open(manifest, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["path", "class"])
        for rel, label in entries:
            writer.writerow([rel, ClassLabel(label).label_name])


def load_image(path: Path) -> np.ndarray:
    try:
        with Image.open(path) as im:
            return np.asarray(im.convert("RGB"), dtype=np.uint8)
    except FileNotFoundError:
        raise CatalogLoadError(f"asset file not found: {path}") from None
    except (UnidentifiedImageError, OSError) as exc:
        raise CatalogLoadError(f"cannot decode asset image {path}: {exc}") from None


def load_catalog(root_path, manifest=None) -> Catalog:
    """Load every asset listed in ``manifest`` (default ``root/catalog.csv``)."""
    root = Path(root_path)
    manifest = Path(manifest) if manifest is not None else root / MANIFEST_NAME
    if not manifest.is_file():
        raise CatalogLoadError(f"catalog manifest not found: {manifest}")
    entries = read_manifest(manifest)
    if not entries:
        raise CatalogValidationError(f"{manifest}: manifest lists no assets")
    assets = [Asset.from_raster(rel, label, load_image(root / rel)) for rel, label in entries]
    return Catalog(assets)


def resolve_catalog(path) -> Catalog:
    """Accept either a catalog directory or a manifest file path."""
    path = Path(path)
    if path.is_dir():
        return load_catalog(path)
    return load_catalog(path.parent, path)
