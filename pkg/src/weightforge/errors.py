"""Exception types shared across the package."""


class WeightForgeError(Exception):
    """Base class for all package errors."""


class StructuralError(WeightForgeError):
    """Shapes, lengths or layouts do not line up."""


class ParameterRangeError(WeightForgeError):
    """A scalar argument or field is outside its allowed range."""


class DatasetSizeError(WeightForgeError):
    """Not enough data to run the requested operation."""


class DegenerateEmbeddingError(WeightForgeError):
    """An embedding collapsed to zero norm; cosine similarity is undefined."""


class TrainingFailureError(WeightForgeError):
    """Training finished above its convergence threshold (or diverged).

    Carries the recorded loss curve so callers can log or inspect it.
    """

    def __init__(self, message, loss_curve=None):
        super().__init__(message)
        self.loss_curve = list(loss_curve) if loss_curve is not None else []


class PipelineError(WeightForgeError):
    """Too many identities failed while building the checkpoint dataset."""


class ConfigError(WeightForgeError):
    """A run configuration failed validation."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class MissingDependencyError(WeightForgeError):
    """A stage was invoked before its upstream artifacts exist."""


class IntegrityError(WeightForgeError):
    """A persisted weight file failed its checksum or length checks."""
