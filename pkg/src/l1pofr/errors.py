"""Exception types shared across the package."""


class DataError(ValueError):
    """Malformed, missing or inconsistent input data."""


class ModelFileError(ValueError):
    """A model file could not be read or has an unsupported layout."""


class LeverageSaturationError(ArithmeticError):
    """A leave-one-out weight denominator fell to the numerical floor."""

    def __init__(self, k, denominator):
        self.k = int(k)
        self.denominator = float(denominator)
        super().__init__(f"leverage saturation at sample {self.k} (denominator {self.denominator:.3g})")


class SingularLooError(ArithmeticError):
    """The k-deleted normal matrix is singular."""

    def __init__(self, k):
        self.k = int(k)
        super().__init__(f"k-deleted normal matrix is singular for sample {self.k}")
