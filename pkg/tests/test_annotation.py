import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays
from scipy import ndimage

from layersynth.annotation import (
    AnnotationDoc,
    ImageAnnotation,
    Shape,
    UnknownImageError,
    douglas_peucker,
    fill_polygon,
    mask_to_polygons,
    polygonize,
    rasterize,
    rasterize_shapes,
    read_cvat_xml,
    simplify_ring,
    trace_outline,
    write_cvat_xml,
)
from layersynth.annotation.polygons import EIGHT_CONNECTED
from layersynth.errors import AnnotationParseError, AnnotationValidationError, UnsupportedVersionError

from oracles import point_in_polygon


# -- tracing ------------------------------------------------------------------


def test_full_page_rectangle():
    shapes = mask_to_polygons(np.full((30, 40), 2, dtype=np.uint8))
    assert len(shapes) == 1
    assert shapes[0].label == "figure" and shapes[0].kind == "polygon"
    assert sorted(shapes[0].vertices) == [(0, 0), (0, 30), (40, 0), (40, 30)]


def test_all_background():
    assert mask_to_polygons(np.zeros((5, 5), dtype=np.uint8)) == []


L_MASK = np.array(
    [
        [2, 2, 2, 0],
        [2, 3, 3, 0],
        [2, 3, 3, 0],
        [0, 0, 0, 0],
    ],
    dtype=np.uint8,
)


def test_l_shape_outline():
    # hand-enumerated corner path, counter-clockwise on screen from the top-left corner
    assert trace_outline(L_MASK == 2) == [(0, 0), (0, 3), (1, 3), (1, 1), (3, 1), (3, 0)]
    shapes = {s.label: s for s in mask_to_polygons(L_MASK, simplify_eps=0)}
    assert len(shapes["figure"].vertices) == 6
    assert shapes["table"].vertices == [(1, 1), (1, 3), (3, 3), (3, 1)]


def test_outline_counter_clockwise_on_screen():
    verts = trace_outline(L_MASK == 2)
    # shoelace in y-down coordinates is negative for screen-CCW
    area = sum(x1 * y2 - x2 * y1 for (x1, y1), (x2, y2) in zip(verts, verts[1:] + verts[:1])) / 2
    assert area == -5


def test_pinch_vertex_keeps_diagonal_pixels_apart():
    # 4-connected ring closing through a diagonal pinch; the pinch opens the hole to the outside
    region = np.array(
        [
            [1, 1, 1, 0],
            [1, 0, 1, 0],
            [1, 1, 0, 1],
            [0, 0, 1, 1],
        ],
        dtype=bool,
    )
    # only the 4-connected part containing the top-left pixel
    lab, _ = ndimage.label(region, structure=ndimage.generate_binary_structure(2, 1))
    comp = lab == lab[0, 0]
    verts = trace_outline(comp)
    filled = fill_polygon(verts, 4, 4)
    assert np.array_equal(filled, ndimage.binary_fill_holes(comp, structure=EIGHT_CONNECTED))


def test_hole_gets_own_polygon_above_container():
    m = np.full((7, 7), 2, dtype=np.uint8)
    m[2:5, 2:5] = 3
    shapes, dropped = polygonize(m, simplify_eps=0)
    assert dropped == 0
    z = {s.label: s.z_order for s in shapes}
    assert z["figure"] == 0 and z["table"] == 1
    assert np.array_equal(rasterize_shapes(shapes, 7, 7), m)


def test_nested_depth():
    m = np.full((9, 9), 1, dtype=np.uint8)
    m[1:8, 1:8] = 2
    m[3:6, 3:6] = 3
    shapes = mask_to_polygons(m, simplify_eps=0)
    assert [s.z_order for s in shapes] == [0, 1, 2]
    assert np.array_equal(rasterize_shapes(shapes, 9, 9), m)


def test_single_pixel_dropped_when_simplified():
    m = np.zeros((5, 5), dtype=np.uint8)
    m[2, 2] = 1
    shapes, dropped = polygonize(m, simplify_eps=1.5)
    assert shapes == [] and dropped == 1
    assert len(polygonize(m, simplify_eps=0)[0]) == 1


masks = arrays(np.uint8, st.tuples(st.integers(1, 10), st.integers(1, 10)), elements=st.integers(0, 3))


@settings(max_examples=300, deadline=None)
@given(masks)
def test_exact_outline_equals_filled_component(m):
    lab4 = ndimage.generate_binary_structure(2, 1)
    for cls in (1, 2, 3):
        lab, n = ndimage.label(m == cls, structure=lab4)
        for i in range(1, n + 1):
            comp = lab == i
            verts = trace_outline(comp)
            assert all(0 <= x <= m.shape[1] and 0 <= y <= m.shape[0] for x, y in verts)
            got = fill_polygon(verts, m.shape[1], m.shape[0])
            assert np.array_equal(got, ndimage.binary_fill_holes(comp, structure=EIGHT_CONNECTED))


@settings(max_examples=200, deadline=None)
@given(masks)
def test_exact_roundtrip_without_enclosed_background(m):
    shapes = mask_to_polygons(m, simplify_eps=0)
    back = rasterize_shapes(shapes, m.shape[1], m.shape[0])
    # only background pockets enclosed by a single region may differ
    diff = back != m
    assert (m[diff] == 0).all()
    if not diff.any():
        return
    for cls in (1, 2, 3):
        filled = ndimage.binary_fill_holes(m == cls, structure=EIGHT_CONNECTED)
        diff &= ~filled
    assert not diff.any()


# -- simplification -----------------------------------------------------------


def _dist_to_polyline(p, pts, closed=True):
    best = math.inf
    n = len(pts)
    segs = n if closed else n - 1
    for i in range(segs):
        a, b = pts[i], pts[(i + 1) % n]
        dx, dy = b[0] - a[0], b[1] - a[1]
        L2 = dx * dx + dy * dy
        t = 0 if L2 == 0 else max(0, min(1, ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / L2))
        best = min(best, math.hypot(p[0] - a[0] - t * dx, p[1] - a[1] - t * dy))
    return best


def _densify(pts, step=0.25):
    out = []
    n = len(pts)
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        k = max(1, int(math.hypot(b[0] - a[0], b[1] - a[1]) / step))
        out += [(a[0] + (b[0] - a[0]) * j / k, a[1] + (b[1] - a[1]) * j / k) for j in range(k)]
    return out


def test_douglas_peucker_line():
    pts = [(0, 0), (1, 0.1), (2, -0.1), (3, 5), (4, 6), (5, 7)]
    assert douglas_peucker(pts, 0.5) == [(0, 0), (2, -0.1), (3, 5), (5, 7)]
    assert douglas_peucker(pts, 0) == pts


@settings(max_examples=60, deadline=None)
@given(masks, st.sampled_from([0.5, 1.0, 1.5, 3.0]))
def test_hausdorff_within_eps(m, eps):
    lab4 = ndimage.generate_binary_structure(2, 1)
    lab, n = ndimage.label(m > 0, structure=lab4)
    for i in range(1, n + 1):
        ring = trace_outline(lab == i)
        simp = simplify_ring(ring, eps)
        assert set(simp) <= set(ring)
        if len(simp) < 3:
            continue
        h1 = max(_dist_to_polyline(p, simp) for p in _densify(ring))
        h2 = max(_dist_to_polyline(p, ring) for p in _densify(simp))
        assert max(h1, h2) <= eps + 1e-9


# -- fill rule ----------------------------------------------------------------


def test_fill_full_rectangle():
    assert fill_polygon([(0, 0), (5, 0), (5, 3), (0, 3)], 5, 3).all()


def test_fill_matches_crossing_oracle():
    rng = np.random.default_rng(8)
    for _ in range(40):
        n = int(rng.integers(3, 9))
        verts = [(float(x), float(y)) for x, y in rng.uniform(-1, 13, size=(n, 2)).round(2)]
        got = fill_polygon(verts, 12, 10)
        expect = np.array([[point_in_polygon(i + 0.5, j + 0.5, verts) for i in range(12)] for j in range(10)])
        assert np.array_equal(got, expect)


def test_points_mark_single_pixels():
    shapes = [Shape("points", "text", [(0.2, 0.9), (4.0, 3.0), (5.0, 4.0)])]
    m = rasterize_shapes(shapes, 5, 4)
    assert m[0, 0] == 1 and m[3, 4] == 1
    assert m.sum() == 2


def test_rasterize_z_order_and_document_order():
    a = Shape("polygon", "figure", [(0, 0), (4, 0), (4, 4), (0, 4)], z_order=1)
    b = Shape("polygon", "table", [(0, 0), (4, 0), (4, 4), (0, 4)], z_order=0)
    c = Shape("polygon", "text", [(0, 0), (2, 0), (2, 2), (0, 2)], z_order=1)
    m = rasterize_shapes([a, b, c], 4, 4)
    assert m[3, 3] == 2  # figure above table
    assert m[0, 0] == 1  # equal z: later in document wins


def test_rasterize_doc():
    rect = Shape("polygon", "table", [(0, 0), (6, 0), (6, 4), (0, 4)])
    doc = AnnotationDoc([ImageAnnotation(3, "x.png", 6, 4, [rect]), ImageAnnotation(4, "y.png", 2, 2)])
    assert (rasterize(doc, 3) == 3).all()
    assert (rasterize(doc, 4) == 0).all()
    with pytest.raises(UnknownImageError):
        rasterize(doc, 99)


# -- XML ----------------------------------------------------------------------


def test_write_empty():
    out = write_cvat_xml(AnnotationDoc())
    assert b"".join(out.split()).endswith(b"<annotations><version>1.1</version></annotations>")


def test_write_triangle():
    tri = Shape("polygon", "figure", [(0, 0), (4, 0), (0, 4)])
    doc = AnnotationDoc([ImageAnnotation(0, "page.png", 10, 10, [tri])])
    out = write_cvat_xml(doc).decode()
    assert 'points="0.00,0.00;4.00,0.00;0.00,4.00"' in out
    assert '<image id="0" name="page.png" width="10" height="10">' in out
    assert '<polygon label="figure" occluded="0" points="0.00,0.00;4.00,0.00;0.00,4.00" z_order="0" />' in out


def test_write_orders_images_and_shapes():
    s1 = Shape("polygon", "text", [(0, 0), (1, 0), (0, 1)], z_order=2)
    s2 = Shape("points", "table", [(1, 1)], z_order=0)
    s3 = Shape("polygon", "figure", [(0, 0), (2, 0), (0, 2)], z_order=0)
    doc = AnnotationDoc([ImageAnnotation(5, "b", 3, 3, [s1, s2, s3]), ImageAnnotation(1, "a", 3, 3)])
    back = read_cvat_xml(write_cvat_xml(doc))
    assert [im.id for im in back.images] == [1, 5]
    assert [s.label for s in back.images[1].shapes] == ["table", "figure", "text"]
    assert back.images[1].shapes[0].kind == "points"


def test_read_version_error():
    with pytest.raises(UnsupportedVersionError):
        read_cvat_xml(b"<annotations><version>1.0</version></annotations>")


def test_read_out_of_bounds():
    xml = b"""<annotations><version>1.1</version>
    <image id="0" name="p" width="10" height="10">
      <polygon label="text" occluded="0" points="-1.00,5.00;4.00,0.00;0.00,4.00" z_order="0"/>
    </image></annotations>"""
    with pytest.raises(AnnotationValidationError, match=r"image 0 \(p\) shape 0"):
        read_cvat_xml(xml)


def test_read_bad_labels_listed():
    xml = b"""<annotations><version>1.1</version>
    <image id="0" name="p" width="10" height="10">
      <polygon label="chart" points="1,1;2,2;1,2" z_order="0"/>
      <polygon label="logo" points="1,1;2,2;1,2" z_order="0"/>
    </image></annotations>"""
    with pytest.raises(AnnotationValidationError, match="'chart', 'logo'"):
        read_cvat_xml(xml)


def test_read_malformed_position():
    with pytest.raises(AnnotationParseError) as info:
        read_cvat_xml(b"<annotations>\n<version>1.1</version>\n<image id='0'>\n</annotations>")
    assert info.value.line == 4


def test_read_real_cvat_export():
    xml = b"""<?xml version="1.0" encoding="utf-8"?>
<annotations>
  <version>1.1</version>
  <meta><task><id>7</id><name>fpd</name></task></meta>
  <image id="0" name="mag_01.jpg" subset="default" task_id="7" width="20" height="10">
    <polygon label="figure" source="manual" occluded="0" points="1.50,1.00;9.00,1.00;9.00,8.25" z_order="0">
    </polygon>
    <points label="text" source="manual" occluded="1" points="12.00,3.00;13.00,4.00" z_order="1">
      <attribute name="x">y</attribute>
    </points>
    <box label="table" occluded="0" xtl="1" ytl="1" xbr="2" ybr="2" z_order="0"/>
  </image>
</annotations>"""
    doc = read_cvat_xml(xml)
    im = doc.images[0]
    assert (im.name, im.width, im.height) == ("mag_01.jpg", 20, 10)
    assert [s.kind for s in im.shapes] == ["polygon", "points"]
    assert im.shapes[0].vertices == [(1.5, 1.0), (9.0, 1.0), (9.0, 8.25)]
    assert im.shapes[1].occluded is True
    # subset, task_id, 2x source, attribute child, box element
    assert doc.warnings == 6


coord = st.integers(0, 4000).map(lambda k: k / 100)


@st.composite
def docs(draw):
    images = []
    ids = draw(st.lists(st.integers(0, 10_000), unique=True, max_size=4))
    for i in sorted(ids):
        w, h = draw(st.integers(40, 60)), draw(st.integers(40, 60))
        shapes = []
        for _ in range(draw(st.integers(0, 5))):
            kind = draw(st.sampled_from(["polygon", "points"]))
            n = draw(st.integers(3 if kind == "polygon" else 1, 7))
            verts = [(draw(coord), draw(coord)) for _ in range(n)]
            shapes.append(Shape(kind, draw(st.sampled_from(["text", "figure", "table"])), verts,
                                draw(st.integers(0, 3)), draw(st.booleans())))
        shapes.sort(key=lambda s: s.z_order)
        name = draw(st.text(st.characters(codec="utf-8", exclude_categories=("Cs", "Cc")), max_size=12))
        images.append(ImageAnnotation(i, name, w, h, shapes))
    return AnnotationDoc(images)


@settings(max_examples=150, deadline=None)
@given(docs())
def test_xml_roundtrip(doc):
    assert read_cvat_xml(write_cvat_xml(doc)) == doc
