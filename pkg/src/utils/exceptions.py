"""Custom exception hierarchy for relative pose estimation."""


class RelPoseError(Exception):
    """Base exception for all relative pose errors."""

    pass


class ValidationError(RelPoseError):
    """Raised when input validation fails."""

    pass


class UnknownCameraError(ValidationError):
    """Raised when a correspondence references a camera id missing from the rig."""

    pass


class FileFormatError(RelPoseError):
    """Raised when a problem, solution, pose or config file is malformed."""

    pass


class ConfigurationError(RelPoseError):
    """Raised when configuration is invalid or missing."""

    pass


class SolverError(RelPoseError):
    """Raised when the polynomial eigenvalue solver fails."""

    pass


class IllConditionedError(SolverError):
    """Raised when the constant pencil coefficient B0 cannot be inverted reliably."""

    pass


class StructuralError(SolverError):
    """Raised when polynomial degrees or companion sizes do not match the expected structure."""

    pass


class DegenerateTranslationError(SolverError):
    """Raised when the translation cannot be recovered with metric scale."""

    pass


class FrustumExhaustedError(RelPoseError):
    """Raised when synthetic generation cannot place a point inside both views."""

    pass
