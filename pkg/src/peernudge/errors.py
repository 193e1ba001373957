"""Exception types shared across the package."""


class PeernudgeError(Exception):
    """Base class for all package-specific errors."""


class EmptyDatasetError(PeernudgeError):
    """Training was requested on an empty dataset."""


class NonFiniteLossError(PeernudgeError):
    """A training loss became NaN or infinite (diverged)."""


class DimensionMismatchError(PeernudgeError):
    """Input dimensions do not match the trained parameters."""


class InvalidDistributionError(PeernudgeError):
    """A probability vector is negative or does not sum to one."""


class InputTooShortError(PeernudgeError):
    """A convolution input is shorter than the kernel."""


class CorpusTooSmallError(PeernudgeError):
    """The evaluation corpus has too few examples to split."""


class TooFewDistinctValuesError(PeernudgeError):
    """Clustering was requested with more clusters than distinct values."""


class SingleClusterError(PeernudgeError):
    """A silhouette score needs at least two clusters."""


class MissingFeatureError(PeernudgeError):
    """A user is missing one or more per-feature cluster assignments."""


class SingleGroupError(PeernudgeError):
    """Group-tree construction needs at least two groups."""


class EmptyBinError(PeernudgeError):
    """A representative was requested from an empty bin."""


class InvalidStateError(PeernudgeError):
    """An operation was applied to a pending intervention in the wrong state."""


class UnknownPendingError(PeernudgeError):
    """No pending intervention exists with the given id."""


class ModelNotLoadedError(PeernudgeError):
    """Classification was requested before a model was loaded."""


class SourceUnavailableError(PeernudgeError):
    """The tweet source could not be reached; retried on the next tick."""


class SinkFailureError(PeernudgeError):
    """The delivery sink rejected or failed a post attempt."""


class CheckpointError(PeernudgeError):
    """A model checkpoint is malformed or incompatible."""
