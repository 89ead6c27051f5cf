"""Exception types shared across the package."""


class AlsimError(Exception):
    """Base class for all workbench errors."""


class InvalidTopologyError(AlsimError):
    """Graph construction rejected: not simple / not connected / degenerate."""


class InvalidIdsError(AlsimError):
    """Identifier list rejected: duplicates or out of declared range."""


class ParameterError(AlsimError):
    """A numeric parameter is outside its legal range."""


class SizeLimitError(AlsimError):
    """A brute-force guard refused to run: the state space is too large."""

    def __init__(self, message, would_be_count=None):
        super().__init__(message)
        self.would_be_count = would_be_count


class ContractError(AlsimError):
    """A caller violated an operation precondition."""


class UnsolvableInstanceError(AlsimError):
    """The task admits no valid total labeling on the given graph."""


class UsageError(AlsimError):
    """Invalid configuration or flag combination."""
