"""
Exception hierarchy for PatchLearn

All errors raised by the library derive from PatchLearnError so callers
(and the CLI) can catch them in one place.
"""

from typing import Optional, Sequence, Tuple


class PatchLearnError(Exception):
    """Base class for all PatchLearn errors"""


class ContractViolation(PatchLearnError, ValueError):
    """A caller broke a documented precondition (shape, index range, length)"""


class ConfigError(PatchLearnError, ValueError):
    """Invalid configuration value or override file"""


class EmptyDataError(PatchLearnError, ValueError):
    """Training data has no examples"""


class DegenerateRangeError(PatchLearnError, ValueError):
    """An input column has zero width, so no membership functions can be laid out"""

    def __init__(self, dim: int, value: float):
        self.dim = dim
        self.value = value
        super().__init__(
            f"Input dimension {dim} has a degenerate range (constant value {value!r})"
        )


class UncoveredInputError(PatchLearnError):
    """No rule of a fuzzy system fires for an input"""

    def __init__(self, x: Sequence[float], index: Optional[int] = None):
        self.x = tuple(float(v) for v in x)
        self.index = index
        where = f" (example {index})" if index is not None else ""
        super().__init__(f"Uncovered input {self.x}{where}: every rule fires with 0")


class UncoveredRangeError(PatchLearnError):
    """Membership functions leave part of an input range uncovered"""

    def __init__(self, gap: Tuple[float, float]):
        self.gap = gap
        super().__init__(f"Membership functions do not cover [{gap[0]!r}, {gap[1]!r}]")


class LearnerNotTrainable(PatchLearnError):
    """A learner refused to fit (too few examples, rank-deficient design, ...)"""


class ModelFileError(PatchLearnError):
    """A model document could not be parsed or validated"""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class ModelVersionError(ModelFileError):
    """A model document has an unsupported format version"""
