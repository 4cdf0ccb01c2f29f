"""Exception hierarchy."""


class ScreenTrexError(Exception):
    """Base class for all errors raised by this package."""


class DataFormatError(ScreenTrexError):
    """Malformed or inconsistent input data (bad CSV cell, dimension mismatch, ...)."""


class ConstantColumnError(ScreenTrexError):
    """A predictor column has zero variance and cannot be standardized."""

    def __init__(self, column, label=None):
        self.column = column
        self.label = label
        name = f"'{label}' (index {column})" if label is not None else f"index {column}"
        super().__init__(f"constant column {name}: zero variance, cannot standardize")


class RankDeficiencyError(ScreenTrexError):
    """The active-set Gram matrix became singular during the LARS path."""

    def __init__(self, active_set):
        self.active_set = tuple(active_set)
        super().__init__(
            f"singular equiangular system for active set {self.active_set}"
        )


class ContractError(ScreenTrexError):
    """A caller violated an operation's precondition (e.g. non-standardized input)."""


class EmptyDummyPoolError(ScreenTrexError):
    """No nonzero dummy coefficients are available; use the ordinary method instead."""
