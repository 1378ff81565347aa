"""Exception hierarchy shared by the library and the command-line front end.

Input problems (bad lengths, non-finite samples, malformed files) raise
:class:`SignalFormatError`; failures of the numerical procedures raise
:class:`AlgorithmError` or one of its subclasses.  The CLI maps the two
families onto distinct exit codes.
"""


class SignalFormatError(ValueError):
    """Invalid signal data or file contents."""


class AlgorithmError(RuntimeError):
    """A numerical procedure could not produce a result."""


class ZeroSignalError(AlgorithmError):
    """Raised when a phase is requested for an identically zero signal."""


class SeedNotInModeError(AlgorithmError):
    """The seed band of a search already has mixed-sign frequency.

    Attributes
    ----------
    track : PhaseTrack
        The offending phase track, kept for inspection and plotting.
    """

    def __init__(self, message, track=None):
        super().__init__(message)
        self.track = track


class TrendFitError(AlgorithmError):
    """Trend extraction is impossible or numerically unsafe."""
