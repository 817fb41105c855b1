from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import AnnotationValidationError
from ..labels import ANNOTATION_LABELS

CVAT_VERSION = "1.1"
SHAPE_KINDS = ("polygon", "points")


@dataclass
class Shape:
    kind: str
    label: str
    vertices: list[tuple[float, float]]
    z_order: int = 0
    occluded: bool = False

    def validate(self, width: int, height: int, where: str = "") -> None:
        if self.kind not in SHAPE_KINDS:
            raise AnnotationValidationError(f"{where}unsupported shape kind {self.kind!r}")
        if self.label not in ANNOTATION_LABELS:
            raise AnnotationValidationError(f"{where}unknown label {self.label!r}")
        need = 3 if self.kind == "polygon" else 1
        if len(self.vertices) < need:
            raise AnnotationValidationError(
                f"{where}{self.kind} needs at least {need} vertices, has {len(self.vertices)}"
            )
        for x, y in self.vertices:
            if not (0 <= x <= width and 0 <= y <= height):
                raise AnnotationValidationError(
                    f"{where}vertex ({x}, {y}) outside image bounds {width}x{height}"
                )


@dataclass
class ImageAnnotation:
    id: int
    name: str
    width: int
    height: int
    shapes: list[Shape] = field(default_factory=list)


@dataclass
class AnnotationDoc:
    images: list[ImageAnnotation] = field(default_factory=list)
    version: str = CVAT_VERSION
    # unknown elements/attributes skipped while parsing
    warnings: int = field(default=0, compare=False, repr=False)

    def image(self, image_id: int) -> ImageAnnotation:
        for im in self.images:
            if im.id == image_id:
                return im
        raise UnknownImageError(f"no image with id {image_id}")

    def image_by_name(self, name: str) -> ImageAnnotation:
        for im in self.images:
            if im.name == name:
                return im
        raise UnknownImageError(f"no image named {name!r}")

    def validate(self) -> None:
        if self.version != CVAT_VERSION:
            raise AnnotationValidationError(f"version must be {CVAT_VERSION}, got {self.version!r}")
        seen = set()
        for im in self.images:
            if im.id < 0 or im.id in seen:
                raise AnnotationValidationError(f"image id {im.id} is negative or duplicated")
            seen.add(im.id)
            for k, shape in enumerate(im.shapes):
                shape.validate(im.width, im.height, where=f"image {im.id} ({im.name}) shape {k}: ")


class UnknownImageError(AnnotationValidationError, KeyError):
    def __str__(self):
        return self.args[0] if self.args else ""
