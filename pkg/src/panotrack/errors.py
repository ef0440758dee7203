"""Exception types shared across the package."""


class PanotrackError(Exception):
    """Base class for all panotrack errors."""


class BehindCamera(PanotrackError):
    """A point projected through a view lies at or behind its optical center."""


class InsufficientKeypoints(PanotrackError):
    """Not enough visible keypoints to apply any estimation rule."""


class NonPositiveHeight(PanotrackError):
    """Keypoint geometry produced a non-positive pixel height."""


class DegenerateHeight(PanotrackError):
    """Localization was asked to invert a non-positive pixel height."""


class DimensionMismatch(PanotrackError):
    """Embeddings of different dimensions were compared."""


class ZeroNormEmbedding(PanotrackError):
    """An embedding with zero Euclidean norm cannot be cosine-compared."""


class NonFiniteCost(PanotrackError):
    """The assignment solver received NaN or infinite costs."""


class NonMonotoneFrame(PanotrackError):
    """The tracker stepped with a frame index not greater than the previous one."""


class EmptyGroundTruth(PanotrackError):
    """Evaluation has no ground-truth records left after filtering."""


class ConfigInvalid(PanotrackError):
    """A configuration value is out of its valid range."""


class SchemaError(PanotrackError):
    """An input file does not conform to its wire schema."""
