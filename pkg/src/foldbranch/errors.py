"""Exception hierarchy shared by the library and the command line."""


class FoldBranchError(Exception):
    """Base class for all errors raised by foldbranch."""


class InvalidInput(FoldBranchError, ValueError):
    """Bad arguments: unsupported type or pair, non-dominant weight, wrong order."""


class ResourceGuardExceeded(FoldBranchError, RuntimeError):
    """A computation grew beyond its configured size limit."""
