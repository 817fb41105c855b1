"""Exception hierarchy shared by every stage of the pipeline."""


class LayerSynthError(Exception):
    """Base class for all errors raised by this package."""


class CatalogError(LayerSynthError):
    pass


class CatalogLoadError(CatalogError):
    """A referenced asset file is missing or cannot be decoded."""


class CatalogSchemaError(CatalogError):
    """A manifest record is malformed (bad column, unknown class)."""


class CatalogValidationError(CatalogError):
    """The manifest parsed but violates a catalog invariant."""


class ConfigError(LayerSynthError):
    pass


class PlanningError(LayerSynthError):
    pass


class RenderError(LayerSynthError):
    pass


class AnnotationError(LayerSynthError):
    pass


class AnnotationParseError(AnnotationError):
    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class UnsupportedVersionError(AnnotationError):
    pass


class AnnotationValidationError(AnnotationError):
    pass


class EvaluationError(LayerSynthError):
    pass


class ShapeMismatchError(EvaluationError):
    pass
