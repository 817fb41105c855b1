from .cvat import read_cvat_xml, write_cvat_xml
from .model import AnnotationDoc, ImageAnnotation, Shape, UnknownImageError
from .polygons import douglas_peucker, mask_to_polygons, polygonize, simplify_ring, trace_outline
from .raster import fill_polygon, rasterize, rasterize_shapes

__all__ = [
    "AnnotationDoc",
    "ImageAnnotation",
    "Shape",
    "UnknownImageError",
    "douglas_peucker",
    "fill_polygon",
    "mask_to_polygons",
    "polygonize",
    "rasterize",
    "rasterize_shapes",
    "read_cvat_xml",
    "simplify_ring",
    "trace_outline",
    "write_cvat_xml",
]
