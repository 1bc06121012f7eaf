"""Exception types shared across the package."""


class NewsattnError(Exception):
    """Base class for every error this package raises on purpose."""


class SetupError(NewsattnError):
    """A required resource (encoder weights, a dependency) is unavailable."""


class DataError(NewsattnError):
    """Input file, record, or argument fails validation."""


class DimensionError(NewsattnError):
    """Tensor shape does not match what a model expects."""


class TrainingError(NewsattnError):
    """Optimization diverged; message carries the step and settings."""
