"""Exception types shared across the package."""


class PdebinError(Exception):
    """Base class for all pdebin-specific failures."""


class FormatError(PdebinError):
    """Unsupported or malformed image file."""


class DimensionError(PdebinError):
    """Grid shapes do not match or are degenerate."""


class ParameterError(PdebinError, ValueError):
    """A parameter is outside its documented range."""


class StateError(PdebinError):
    """An operation was called on an object in an unusable state."""


class DegenerateGroundTruthError(PdebinError):
    """Ground truth has no non-uniform blocks although pixels disagree."""


class EmptyInputError(PdebinError):
    """A batch operation received no usable inputs."""
