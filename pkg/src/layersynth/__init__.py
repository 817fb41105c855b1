"""Layered copy-paste synthesis of non-Manhattan document pages."""

__version__ = "0.1.0"

from .catalog import Asset, Catalog, gray_histogram, load_catalog
from .compositor import Page, region_components, render
from .evaluation import confusion, metrics
from .labels import ClassLabel
from .planner import PageSpec, Placement, SynthConfig, plan_page, sample_image_count, sample_scale, select_images
from .similarity import similarity

__all__ = [
    "Asset",
    "Catalog",
    "ClassLabel",
    "Page",
    "PageSpec",
    "Placement",
    "SynthConfig",
    "confusion",
    "gray_histogram",
    "load_catalog",
    "metrics",
    "plan_page",
    "region_components",
    "render",
    "sample_image_count",
    "sample_scale",
    "select_images",
    "similarity",
]
