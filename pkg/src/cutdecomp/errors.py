"""Exception types shared across the package."""


class CutDecompError(Exception):
    """Base class for all package errors."""


class InputError(CutDecompError):
    """Invalid argument: bad dimensions, indices out of range, malformed files."""


class BudgetError(CutDecompError):
    """A configured resource budget (walk memory, enumeration size) was exceeded."""


class SketchTooWeakError(CutDecompError):
    """An uncertified sketch produced a verdict that failed its recheck.

    Raised when a witness rectangle falls short of the guaranteed discrepancy
    floor, or when the oracle check contradicts an uncertified regularity
    verdict. Rerun with a larger sketch degree or the certified sketch.
    """


class PartialDecompositionError(CutDecompError):
    """The iteration cap was reached before the residual tested regular.

    Carries the decomposition built so far in ``decomposition``; all recorded
    terms satisfy the per-step invariants, only the terminal regularity
    certificate is missing.
    """

    def __init__(self, message, decomposition):
        super().__init__(message)
        self.decomposition = decomposition
