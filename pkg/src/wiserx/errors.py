"""Exception hierarchy shared across the simulator."""


class WiserxError(Exception):
    """Base class for all simulator errors."""


class MalformedMap(WiserxError):
    """Map text could not be parsed (bad character or ragged rows)."""


class UnboundedMap(WiserxError):
    """Map border is not fully occupied."""


class InvalidStartPose(WiserxError):
    """A configured start pose does not lie on a free cell."""


class ThresholdOrder(WiserxError):
    """soft_threshold exceeds hard_threshold."""


class BadNoise(WiserxError):
    """Negative noise standard deviation."""


class PoseInOccupied(WiserxError):
    """Lidar scan requested from inside an occupied cell."""


class FrameMismatch(WiserxError):
    """Scan and map disagree on resolution or shape."""


class SingularInnovation(WiserxError):
    """EKF innovation covariance is not invertible."""


class InactiveTrack(WiserxError):
    """Update attempted on a deactivated (tau=0) track."""


class ShapeMismatch(WiserxError):
    """Maps with different shapes passed to a merge."""


class EmptyInput(WiserxError):
    """Summary requested over an empty result list."""
