import numpy as np
import pytest

from layersynth.catalog import Asset, Catalog, resolve_catalog
from layersynth.demo import make_demo_catalog
from layersynth.labels import ClassLabel


@pytest.fixture(scope="session")
def demo_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("catalog")
    make_demo_catalog(root, seed=0)
    return root


@pytest.fixture(scope="session")
def demo_catalog(demo_dir):
    return resolve_catalog(demo_dir)


def solid(w, h, value=(255, 255, 255)):
    return np.broadcast_to(np.array(value, dtype=np.uint8), (h, w, 3)).copy()


def gray_strip(levels):
    """1 x N raster whose pixels have exactly the given gray levels."""
    v = np.asarray(levels, dtype=np.uint8)
    return np.repeat(v[None, :, None], 3, axis=2)


def make_catalog(*items):
    """items: (id, ClassLabel, raster)"""
    return Catalog(Asset.from_raster(i, label, r) for i, label, r in items)


@pytest.fixture
def tiny_catalog():
    return make_catalog(
        ("text", ClassLabel.TEXT, solid(4, 4, (0, 0, 0))),
        ("fig", ClassLabel.FIGURE, solid(3, 3, (200, 10, 10))),
        ("tab", ClassLabel.TABLE, solid(2, 2, (10, 10, 200))),
    )
