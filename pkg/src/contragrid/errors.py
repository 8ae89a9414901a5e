"""Exception types shared across the package."""


class ContragridError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(ContragridError):
    """A configuration file or value is malformed; message names the field."""


class PremiseError(ContragridError):
    """An operation's stated precondition failed on concrete data.

    Carries the offending object (e.g. a pair of grid indices with no
    contracting direction) in ``detail``.
    """

    def __init__(self, message: str, detail=None):
        super().__init__(message)
        self.detail = detail


class NonConvergenceError(ContragridError):
    """An iteration exhausted its step budget.

    ``best`` is the best iterate seen and ``residual`` its residual, so a
    caller can inspect how close the run got.
    """

    def __init__(self, message: str, best=None, residual: float | None = None):
        super().__init__(message)
        self.best = best
        self.residual = residual


class CommutativityError(ContragridError):
    """Two operators failed the commutation check beyond tolerance."""


class VerificationError(ContragridError):
    """An internally re-checked certificate failed its own verification."""


class BoxTooSmallError(ContragridError):
    """A window/box is below the minimum side required by the procedure."""

    def __init__(self, message: str, minimum_side: int):
        super().__init__(message)
        self.minimum_side = minimum_side
