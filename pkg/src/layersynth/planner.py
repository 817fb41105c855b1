"""Per-page placement plans.

A page is planned in two passes. Text blocks are flowed into 1-3 columns
first; images are then sampled, similarity-gated against each other and
dropped at uniformly random fully contained positions on top, free to
overlap. Everything is drawn from one generator seeded by the page seed, in
this order:

1. column count, then one text-asset draw per text block;
2. the image count;
3. image selection draws (one per attempt);
4. for each selected image: scale draws (rejection until it fits), then x, y.
"""
from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .catalog import Asset, Catalog
from .errors import CatalogValidationError, ConfigError, PlanningError
from .labels import ClassLabel
from .rng import MASK64, page_rng, page_seed
from .similarity import similarity


def round_half_up(v: float) -> int:
    return int(math.floor(v + 0.5))


@dataclass(frozen=True)
class SynthConfig:
    page_width: int = 600
    page_height: int = 800
    scale_min: float = 0.6
    scale_max: float = 1.0
    count_min: int = 1
    count_max: int = 8
    similarity_threshold: float = 0.5
    max_attempts: int = 50
    aesthetic_guidance: bool = True
    text_columns_range: tuple[int, int] = (1, 3)
    column_gutter: int = 16
    # per-axis scale interval used when aesthetic guidance is off
    ablation_scale_range: tuple[float, float] = (0.3, 1.2)
    master_seed: int = 0

    def __post_init__(self):
        # JSON hands back lists
        object.__setattr__(self, "text_columns_range", tuple(self.text_columns_range))
        object.__setattr__(self, "ablation_scale_range", tuple(self.ablation_scale_range))
        self.validate()

    def validate(self) -> None:
        def bad(msg):
            raise ConfigError(msg)

        if self.page_width < 1 or self.page_height < 1:
            bad(f"page size must be positive, got {self.page_width}x{self.page_height}")
        if self.aesthetic_guidance and not (0 < self.scale_min <= self.scale_max <= 1):
            bad(f"need 0 < scale_min <= scale_max <= 1, got [{self.scale_min}, {self.scale_max}]")
        if not 1 <= self.count_min <= self.count_max:
            bad(f"need 1 <= count_min <= count_max, got [{self.count_min}, {self.count_max}]")
        if not 0 <= self.similarity_threshold <= 1:
            bad(f"similarity_threshold must lie in [0, 1], got {self.similarity_threshold}")
        if self.max_attempts < 1:
            bad("max_attempts must be >= 1")
        lo, hi = self.text_columns_range
        if not 1 <= lo <= hi:
            bad(f"bad text_columns_range {self.text_columns_range}")
        if self.column_gutter < 0:
            bad("column_gutter must be >= 0")
        a_lo, a_hi = self.ablation_scale_range
        if not 0 < a_lo <= a_hi:
            bad(f"bad ablation_scale_range {self.ablation_scale_range}")
        if not 0 <= self.master_seed <= MASK64:
            bad("master_seed must be an unsigned 64-bit integer")

    def to_dict(self) -> dict[str, Any]:
        d = dataclasses.asdict(self)
        d["text_columns_range"] = list(self.text_columns_range)
        d["ablation_scale_range"] = list(self.ablation_scale_range)
        return d

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "SynthConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config fields: {', '.join(unknown)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def from_file(cls, path) -> "SynthConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: top level must be an object")
        return cls.from_dict(data)

    def replace(self, **changes) -> "SynthConfig":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class Placement:
    asset_id: str
    label: ClassLabel
    x: int
    y: int
    scale: float
    scale_y: float
    target_w: int
    target_h: int
    z: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "asset_id": self.asset_id,
            "class": self.label.label_name,
            "x": self.x,
            "y": self.y,
            "scale": self.scale,
            "scale_y": self.scale_y,
            "w": self.target_w,
            "h": self.target_h,
            "z": self.z,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Placement":
        return cls(d["asset_id"], ClassLabel.from_name(d["class"]), d["x"], d["y"],
                   d["scale"], d["scale_y"], d["w"], d["h"], d["z"])


@dataclass(frozen=True)
class PageSpec:
    page_id: str
    width: int
    height: int
    seed: int
    placements: tuple[Placement, ...]
    config: SynthConfig
    relaxed: int = 0
    similarity_evals: int = 0

    @property
    def image_placements(self) -> list[Placement]:
        return [p for p in self.placements if p.label != ClassLabel.TEXT]

    @property
    def text_placements(self) -> list[Placement]:
        return [p for p in self.placements if p.label == ClassLabel.TEXT]

    def to_dict(self) -> dict[str, Any]:
        return {
            "page_id": self.page_id,
            "width": self.width,
            "height": self.height,
            "seed": self.seed,
            "relaxed": self.relaxed,
            "similarity_evals": self.similarity_evals,
            "placements": [p.to_dict() for p in self.placements],
            "config": self.config.to_dict(),
        }


@dataclass
class Selection:
    assets: list[Asset] = field(default_factory=list)
    relaxed: int = 0
    evaluations: int = 0


def sample_scale(u: float, config: SynthConfig = SynthConfig()) -> float:
    if not 0 <= u < 1:
        raise ValueError(f"u must lie in [0, 1), got {u}")
    return config.scale_min + (config.scale_max - config.scale_min) * u


def sample_image_count(u: float, config: SynthConfig = SynthConfig()) -> int:
    if not 0 <= u < 1:
        raise ValueError(f"u must lie in [0, 1), got {u}")
    span = config.count_max - config.count_min + 1
    return min(int(math.floor(u * span)), span - 1) + config.count_min


def select_images(
    catalog: Catalog | Sequence[Asset],
    k: int,
    rng: np.random.Generator,
    threshold: float,
    max_attempts: int = 50,
    gated: bool = True,
) -> Selection:
    """Draw ``k`` figure/table assets (with replacement), gated on similarity.

    Each new asset must reach ``threshold`` similarity against every asset
    already accepted for the page. A slot that cannot be filled within
    ``max_attempts`` draws takes the best candidate seen and counts as relaxed.
    """
    pool = catalog.image_assets() if isinstance(catalog, Catalog) else list(catalog)
    if not pool:
        raise PlanningError("no figure/table assets to select from")
    if k < 1:
        raise ValueError("k must be >= 1")

    sel = Selection()
    for slot in range(k):
        if slot == 0 or not gated:
            sel.assets.append(pool[int(rng.integers(len(pool)))])
            continue
        best, best_score = None, -1.0
        for _ in range(max_attempts):
            cand = pool[int(rng.integers(len(pool)))]
            score = 1.0
            for prev in sel.assets:
                score = min(score, similarity(cand.gray_hist, prev.gray_hist))
                sel.evaluations += 1
            if score >= threshold:
                sel.assets.append(cand)
                break
            if score > best_score:
                best, best_score = cand, score
        else:
            sel.assets.append(best)
            sel.relaxed += 1
    return sel


def _layout_text(catalog: Catalog, config: SynthConfig, rng: np.random.Generator) -> list[Placement]:
    texts = catalog.text_assets()
    W, H, gutter = config.page_width, config.page_height, config.column_gutter
    lo, hi = config.text_columns_range
    ncols = int(rng.integers(lo, hi + 1))
    col_w = (W - (ncols + 1) * gutter) // ncols
    if col_w < 1:
        raise PlanningError(f"page {W}x{H} too narrow for {ncols} text columns")

    out = []
    for c in range(ncols):
        x = gutter + c * (col_w + gutter)
        y = gutter
        while True:
            asset = texts[int(rng.integers(len(texts)))]
            scale = col_w / asset.width
            th = max(1, round_half_up(asset.height * scale))
            if y + th > H - gutter:
                break
            out.append(Placement(asset.id, ClassLabel.TEXT, x, y, scale, scale, col_w, th, len(out)))
            y += th + gutter
    return out


def _fits(asset: Asset, sx: float, sy: float, W: int, H: int) -> bool:
    return (max(1, round_half_up(sx * asset.width)) <= W
            and max(1, round_half_up(sy * asset.height)) <= H)


def plan_page(catalog: Catalog, config: SynthConfig, page_index: int) -> PageSpec:
    try:
        catalog.check_plannable()
    except CatalogValidationError as exc:
        raise PlanningError(str(exc)) from None

    W, H = config.page_width, config.page_height
    seed = page_seed(config.master_seed, page_index)
    rng = page_rng(seed)
    guided = config.aesthetic_guidance
    smin, smax = (config.scale_min, config.scale_max) if guided else config.ablation_scale_range

    placements = _layout_text(catalog, config, rng)

    pool = [a for a in catalog.image_assets() if _fits(a, smin, smin, W, H)]
    if not pool:
        raise PlanningError(f"page {W}x{H} too small to fit any figure/table asset at scale {smin}")

    k = sample_image_count(float(rng.random()), config)
    sel = select_images(pool, k, rng, config.similarity_threshold, config.max_attempts, gated=guided)

    for asset in sel.assets:
        sx = sy = smin
        for _ in range(config.max_attempts):
            if guided:
                cx = cy = sample_scale(float(rng.random()), config)
            else:
                cx = smin + (smax - smin) * float(rng.random())
                cy = smin + (smax - smin) * float(rng.random())
            if _fits(asset, cx, cy, W, H):
                sx, sy = cx, cy
                break
        tw = max(1, round_half_up(sx * asset.width))
        th = max(1, round_half_up(sy * asset.height))
        x = int(rng.integers(0, W - tw + 1))
        y = int(rng.integers(0, H - th + 1))
        placements.append(Placement(asset.id, asset.label, x, y, sx, sy, tw, th, len(placements)))

    return PageSpec(
        page_id=f"page_{page_index:06d}",
        width=W,
        height=H,
        seed=seed,
        placements=tuple(placements),
        config=config,
        relaxed=sel.relaxed,
        similarity_evals=sel.evaluations,
    )
