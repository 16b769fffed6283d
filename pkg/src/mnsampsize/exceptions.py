"""Exceptions for mnsampsize."""


class MnSampSizeError(Exception):
    """Base exception for all mnsampsize errors."""

    pass


class DomainError(MnSampSizeError, ValueError):
    """Exception raised when an argument lies outside its mathematical domain."""

    pass


class DegenerateCategoryError(DomainError):
    """Exception raised when an outcome category is empty where a log is taken."""

    pass


class InconsistentRSquaredError(DomainError):
    """Exception raised when an R² exceeds its maximum or two routes disagree."""

    pass


class InfeasibleTargetError(MnSampSizeError):
    """Exception raised when a shrinkage or precision target cannot be met."""

    def __init__(self, message: str, pair: tuple[int, int] | None = None) -> None:
        """Initialize the error.

        Args:
            message (str): Human readable description
            pair (tuple[int, int] | None): Outcome pair (k, r) the target belongs to
        """
        if pair is not None:
            message = f"pair {{{pair[0]},{pair[1]}}}: {message}"
        super().__init__(message)
        self.pair = pair


class IncompleteSpecificationError(MnSampSizeError):
    """Exception raised when required pairs or counts are missing or duplicated."""

    pass


class FitError(MnSampSizeError):
    """Base exception for maximum likelihood fitting failures."""

    pass


class NonConvergenceError(FitError):
    """Exception raised when Newton-Raphson exhausts its iteration budget."""

    pass


class SeparationError(FitError):
    """Exception raised when coefficients diverge because of (quasi-)separation."""

    pass


class SingularHessianError(FitError):
    """Exception raised when the information matrix cannot be factorized."""

    pass


class DegeneratePredictorError(FitError):
    """Exception raised when a linear predictor has no variance."""

    pass


class ModelOrderingError(MnSampSizeError):
    """Exception raised when a model log-likelihood falls below the null model."""

    pass


class UndefinedCStatisticError(MnSampSizeError):
    """Exception raised when a C-statistic has no case or no control."""

    pass


class CStatConvergenceError(MnSampSizeError):
    """Exception raised when the C-statistic calibration search fails."""

    def __init__(self, message: str, diagnostics: dict[str, float] | None = None):
        """Initialize the error.

        Args:
            message (str): Human readable description
            diagnostics (dict[str, float] | None): Search state at failure
        """
        if diagnostics:
            details = ", ".join(f"{k}={v:.6g}" for k, v in diagnostics.items())
            message = f"{message} ({details})"
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class EmptySummaryError(MnSampSizeError):
    """Exception raised when no converged replicate is left to summarize."""

    pass


class ConfigError(MnSampSizeError):
    """Exception raised when a configuration field is invalid."""

    def __init__(self, message: str, field: str | None = None) -> None:
        """Initialize the error.

        Args:
            message (str): Human readable description
            field (str | None): Offending configuration key
        """
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)
        self.field = field


class UnknownScenarioError(ConfigError):
    """Exception raised when a scenario id is not in the catalog."""

    pass


class StudyIOError(MnSampSizeError):
    """Exception raised when simulation results cannot be written or read."""

    def __init__(self, message: str, path: str | None = None) -> None:
        """Initialize the error.

        Args:
            message (str): Human readable description
            path (str | None): File or directory involved
        """
        if path is not None:
            message = f"{message}: {path}"
        super().__init__(message)
        self.path = path
