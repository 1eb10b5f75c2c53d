"""Exception hierarchy.

Every error carries a short machine-readable ``category`` used by the CLI
when it reports failures as JSON.
"""


class DetflowError(Exception):
    category = "error"


class NotPrimePowerError(DetflowError, ValueError):
    category = "not-prime-power"


class FieldOverflowError(DetflowError, OverflowError):
    category = "field-overflow"


class FieldDivisionByZero(DetflowError, ZeroDivisionError):
    category = "division-by-zero"


class SingularMatrixError(DetflowError, ValueError):
    category = "singular-matrix"


class BaseNotFullRankError(SingularMatrixError):
    category = "base-not-full-rank"


class NotFullRankError(SingularMatrixError):
    category = "not-full-rank"


class LayerMismatchError(DetflowError, ValueError):
    category = "layer-mismatch"


class GainExceedsWordLengthError(DetflowError, ValueError):
    category = "gain-exceeds-word-length"


class InvalidParamsError(DetflowError, ValueError):
    category = "invalid-params"


class InvalidNetworkError(DetflowError, ValueError):
    category = "invalid-network"

    def __init__(self, violations):
        self.violations = list(violations)
        summary = "; ".join(str(v) for v in self.violations[:5])
        super().__init__(f"network failed validation: {summary}")


class InvalidPartitionError(DetflowError, ValueError):
    category = "invalid-partition"


class TooLargeError(DetflowError, ValueError):
    category = "too-large"


class RankViolationError(DetflowError, AssertionError):
    """A wiring that should be full rank is not; always a bug signal."""

    category = "rank-violation"


class SearchBudgetExceeded(DetflowError, RuntimeError):
    category = "search-budget-exceeded"


class DimensionMismatchError(DetflowError, ValueError):
    category = "dimension-mismatch"


class ParseError(DetflowError, ValueError):
    category = "parse-error"
