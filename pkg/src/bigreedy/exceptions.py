"""Exception types raised across the package."""


class DimensionError(ValueError):
    """A point or matrix does not match the objective's dimension."""


class DomainError(ValueError):
    """A point lies outside the unit hypercube."""


class NotPositiveDefiniteError(ValueError):
    """The softmax matrix diag(x)(L - I) + I has non-positive determinant."""


class NonFiniteValueError(ValueError):
    """A sampled curve produced a NaN or infinite value."""

    def __init__(self, z, value):
        super().__init__(f"non-finite curve value {value!r} at z={z!r}")
        self.z = z
        self.value = value


class SingleCrossingError(RuntimeError):
    """No envelope edge straddles the diagonal line.

    This cannot happen for curves generated by weak DR-submodular objectives,
    so it signals an objective that violates its declared structure.
    """


class BudgetExceededError(RuntimeError):
    """An exhaustive search would exceed its evaluation budget."""


class ValidationFailure(RuntimeError):
    """A generated instance failed its submodularity validator."""

    def __init__(self, message, seed=None):
        super().__init__(message)
        self.seed = seed
