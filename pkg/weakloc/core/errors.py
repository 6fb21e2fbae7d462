"""Error definitions for weakloc."""

from typing import List, Optional, Sequence


class WeaklocError(Exception):
    """Base class for all errors raised by weakloc."""


class ConfigError(WeaklocError):
    """Invalid configuration (bad value, unknown key, unparsable file)."""


class GeometryError(WeaklocError):
    """Coordinates outside the valid domain, mismatched spaces, empty grids."""


class CoverError(GeometryError):
    """Invalid cover radius or cell index."""


class FrameError(WeaklocError):
    """Wrong space for a family, or a realization that fails consistency."""


class DegenerateFrameError(FrameError):
    """The discrete frame operator vanishes (upper bound C = 0)."""


class IllConditionedFrameError(FrameError):
    """
    The discrete frame operator is too badly conditioned to invert.

    Carries the computed bounds so callers can report them.
    """

    def __init__(self, lower: float, upper: float, floor: float):
        self.lower = float(lower)
        self.upper = float(upper)
        self.ratio = self.lower / self.upper if self.upper > 0 else 0.0
        self.floor = float(floor)
        super().__init__(
            f"frame operator ill-conditioned: c={self.lower:.3e}, C={self.upper:.3e}, "
            f"c/C={self.ratio:.3e} below floor {self.floor:.1e}"
        )


class LocalizationError(WeaklocError):
    """Invalid localization query (eps <= 0, unsorted radii, domain mismatch)."""


class OperatorError(WeaklocError):
    """Dimension mismatch or other misuse of a localized operator."""


class ContextMismatchError(OperatorError):
    """Operators built over different frame contexts were combined."""


class NotLocalizedError(OperatorError):
    """The operator's frame kernel failed the weak-localization check."""

    def __init__(self, reasons: Sequence[str]):
        self.reasons: List[str] = list(reasons)
        super().__init__(
            "operator is not verified weakly localized: " + "; ".join(self.reasons)
        )


class BundleError(WeaklocError):
    """Malformed operator bundle (magic, shape, dtype or checksum)."""


class ExperimentError(WeaklocError):
    """An experiment stage failed."""

    def __init__(self, message: str, stage: Optional[str] = None):
        self.stage = stage
        super().__init__(message)
