"""Reader and writer for the "CVAT for images 1.1" XML format.

Only the subset needed for segmentation ground truth is modeled: image
elements carrying ``polygon`` and ``points`` shapes. Everything else in a
CVAT export (``meta``, boxes, attributes, tracks) is skipped and counted in
``AnnotationDoc.warnings``.
"""
from __future__ import annotations

import logging
import xml.etree.ElementTree as ET

from ..errors import AnnotationParseError, AnnotationValidationError, UnsupportedVersionError
from ..labels import ANNOTATION_LABELS
from .model import CVAT_VERSION, AnnotationDoc, ImageAnnotation, Shape

log = logging.getLogger(__name__)

SHAPE_ATTRS = ("label", "occluded", "points", "z_order")
IMAGE_ATTRS = ("id", "name", "width", "height")
# present in every real CVAT export, never carries shape data
SILENT_ELEMENTS = ("meta",)


def format_points(vertices) -> str:
    return ";".join(f"{x:.2f},{y:.2f}" for x, y in vertices)


def parse_points(text: str) -> list[tuple[float, float]]:
    out = []
    for pair in text.strip().split(";"):
        if not pair.strip():
            continue
        x, y = pair.split(",")
        out.append((float(x), float(y)))
    return out


def write_cvat_xml(doc: AnnotationDoc) -> bytes:
    root = ET.Element("annotations")
    ET.SubElement(root, "version").text = doc.version
    for im in sorted(doc.images, key=lambda im: im.id):
        el = ET.SubElement(root, "image", {
            "id": str(im.id),
            "name": im.name,
            "width": str(im.width),
            "height": str(im.height),
        })
        for shape in sorted(im.shapes, key=lambda s: s.z_order):
            ET.SubElement(el, shape.kind, {
                "label": shape.label,
                "occluded": "1" if shape.occluded else "0",
                "points": format_points(shape.vertices),
                "z_order": str(shape.z_order),
            })
    ET.indent(root, space="  ")
    return ET.tostring(root, encoding="utf-8", xml_declaration=True) + b"\n"


def _int_attr(el, name, where):
    try:
        return int(el.attrib[name])
    except KeyError:
        raise AnnotationValidationError(f"{where}: missing attribute {name!r}") from None
    except ValueError:
        raise AnnotationValidationError(f"{where}: attribute {name!r} is not an integer") from None


def read_cvat_xml(data: bytes | str) -> AnnotationDoc:
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        line, col = exc.position
        raise AnnotationParseError(f"malformed XML: {exc.msg if hasattr(exc, 'msg') else exc}", line, col) from None
    if root.tag != "annotations":
        raise AnnotationParseError(f"root element must be <annotations>, got <{root.tag}>")

    version_el = root.find("version")
    version = version_el.text.strip() if version_el is not None and version_el.text else None
    if version != CVAT_VERSION:
        raise UnsupportedVersionError(f"unsupported CVAT version {version!r}; only {CVAT_VERSION} is supported")

    doc = AnnotationDoc(version=version)
    bad_labels: set[str] = set()
    warnings = 0
    for el in root:
        if el.tag == "version":
            continue
        if el.tag in SILENT_ELEMENTS:
            continue
        if el.tag != "image":
            warnings += 1
            continue
        where = f"image {el.attrib.get('id', '?')} ({el.attrib.get('name', '?')})"
        warnings += sum(1 for a in el.attrib if a not in IMAGE_ATTRS)
        im = ImageAnnotation(
            id=_int_attr(el, "id", where),
            name=el.attrib.get("name", ""),
            width=_int_attr(el, "width", where),
            height=_int_attr(el, "height", where),
        )
        for k, sel in enumerate(el):
            if sel.tag not in ("polygon", "points"):
                warnings += 1
                continue
            swhere = f"{where} shape {k}"
            warnings += sum(1 for a in sel.attrib if a not in SHAPE_ATTRS)
            warnings += len(sel)  # nested <attribute> elements
            label = sel.attrib.get("label", "")
            if label not in ANNOTATION_LABELS:
                bad_labels.add(label)
                continue
            try:
                verts = parse_points(sel.attrib["points"])
            except KeyError:
                raise AnnotationValidationError(f"{swhere}: missing points attribute") from None
            except ValueError:
                raise AnnotationParseError(f"{swhere}: malformed points {sel.attrib['points']!r}") from None
            shape = Shape(
                kind=sel.tag,
                label=label,
                vertices=verts,
                z_order=int(sel.attrib.get("z_order", "0")),
                occluded=sel.attrib.get("occluded", "0") == "1",
            )
            shape.validate(im.width, im.height, where=f"{swhere}: ")
            im.shapes.append(shape)
        doc.images.append(im)

    if bad_labels:
        raise AnnotationValidationError(
            "labels outside {figure, table, text}: " + ", ".join(sorted(repr(b) for b in bad_labels))
        )
    ids = [im.id for im in doc.images]
    if len(set(ids)) != len(ids) or any(i < 0 for i in ids):
        raise AnnotationValidationError("image ids must be unique and non-negative")
    doc.warnings = warnings
    if warnings:
        log.warning("skipped %d unsupported CVAT elements/attributes", warnings)
    return doc
