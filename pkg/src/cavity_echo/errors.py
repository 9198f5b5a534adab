"""Exception types shared across the package."""


class ConfigError(ValueError):
    """One or more configuration invariants are violated.

    ``errors`` holds every violation found, each prefixed with the field
    path it refers to (``cavity.gamma1 > 0 ...``).
    """

    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class NumericalError(ArithmeticError):
    """Base class for failures of a numerical routine."""


class QuadratureError(NumericalError):
    def __init__(self, message, value=float("nan"), error_estimate=float("inf")):
        self.value = value
        self.error_estimate = error_estimate
        super().__init__(f"{message} (value={value:.6g}, error estimate={error_estimate:.3g})")


class SingularEvaluationError(NumericalError):
    pass


class StepSizeError(NumericalError):
    pass


class OracleError(NumericalError):
    pass
