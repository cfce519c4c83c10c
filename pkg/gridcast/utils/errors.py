# gridcast/utils/errors.py
"""Exception hierarchy shared by the library and the CLI"""

from typing import Optional

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2


class GridcastError(Exception):
    """Base class for every error raised by gridcast"""

    exit_code = EXIT_USAGE


class DataError(GridcastError):
    """Ingestion, missing columns, too few values, bad splits or windows"""


class ConfigError(GridcastError):
    """Invalid run configuration"""


class ShapeError(GridcastError):
    """Array shapes do not match the model configuration"""


class CheckpointError(GridcastError):
    """Unreadable or incompatible model file"""


class NumericalError(GridcastError):
    """A computation could not produce a finite, well-defined result"""

    exit_code = EXIT_NUMERICAL


class DegenerateRangeError(NumericalError):
    """Scaler fitted on a constant series"""


class ZeroVarianceError(NumericalError):
    """Correlation or correlogram of a constant series"""


class EstimationError(NumericalError):
    """Model estimation failed (invalid orders, singular system, recursion breakdown)"""


class MetricError(NumericalError):
    """Error metric undefined for the given vectors"""

    def __init__(self, message: str, index: Optional[int] = None):
        super().__init__(message)
        self.index = index


class TrainingDivergenceError(NumericalError):
    """Loss became non-finite during training"""

    def __init__(self, epoch: int, batch: int, loss: float):
        super().__init__(
            f"Training diverged at epoch {epoch}, batch {batch}: loss={loss}"
        )
        self.epoch = epoch
        self.batch = batch
        self.loss = loss
